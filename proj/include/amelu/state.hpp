#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "amelu/core.hpp"
#include "amelu/oa.hpp"

namespace amelu {

/// Tolerance on sum |amplitude|^2 = 1 enforced at construction.
inline constexpr double kNormTolerance = 1e-12;

enum class NormPolicy { require_unit, allow_any };

/// A pure N-party state of local dimension d stored as its nonzero
/// computational-basis amplitudes. Immutable after construction.
class SparseState {
 public:
  using Amplitudes = std::map<Tuple, cdouble>;

  SparseState(int num_parties, int local_dim, Amplitudes amplitudes,
              NormPolicy policy = NormPolicy::require_unit);

  /// Drops exact zeros of a row-major dense vector (party 1 most significant).
  template <typename Derived>
  static SparseState from_dense(int num_parties, int local_dim, const Eigen::MatrixBase<Derived>& dense,
                                NormPolicy policy = NormPolicy::require_unit);

  int num_parties() const { return num_parties_; }
  int local_dim() const { return local_dim_; }
  const Amplitudes& amplitudes() const { return amplitudes_; }
  std::size_t support_size() const { return amplitudes_.size(); }

  /// Amplitude at `t`, zero when outside the support.
  cdouble amplitude(const Tuple& t) const;

  double norm() const;
  SparseState normalized() const;

  /// d^N, saturating.
  std::uint64_t dense_size() const;
  /// Row-major flat index of a basis tuple.
  std::uint64_t flat_index(const Tuple& t) const;

  VectorXc to_dense(std::uint64_t cap = kDefaultDenseStateCap) const;

 private:
  int num_parties_;
  int local_dim_;
  Amplitudes amplitudes_;
};

/// Phase angles (radians) keyed by OA row; absent rows carry phase 0.
using PhaseAssignment = std::map<Tuple, double>;

/// (1/sqrt r) sum_j exp(i theta_{s_j}) |s_j> over the OA rows.
SparseState from_iroa(const OrthogonalArray& oa, const PhaseAssignment& phases = {});

/// (|0...0> + ... + |d-1 ... d-1>)/sqrt d on N parties.
SparseState ghz_state(int num_parties, int local_dim);

/// Named parameter families: psi3d, psi5d, ame43, ame52, ghz.
SparseState catalog_state(std::string_view name, int local_dim, double theta);

/// Names accepted by catalog_state.
std::vector<std::string_view> catalog_names();

/// The two five-qubit perfect-code basis states, unit norm, signs as published.
SparseState ame52_code_word(int which);

/// Pairs party i of s1 with party i of s2; composite symbol i*d2 + j.
SparseState compose(const SparseState& s1, const SparseState& s2);

/// Haar-distributed d x d unitary: QR of a complex Ginibre matrix with the
/// phases of diag(R) absorbed into Q.
template <typename Scalar, typename Rng>
CMatrix<Scalar> random_unitary(int dim, Rng& rng) {
  std::normal_distribution<Scalar> gauss(0, 1);
  CMatrix<Scalar> z(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) z(r, c) = Complex<Scalar>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMatrix<Scalar>> qr(z);
  CMatrix<Scalar> q = qr.householderQ();
  const CMatrix<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const Scalar mag = std::abs(r(i, i));
    if (mag > 0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

/// (u_1 (x) ... (x) u_N) applied to a row-major dense state.
template <typename Scalar>
CVector<Scalar> apply_local_unitaries(const CVector<Scalar>& psi, int local_dim,
                                      const std::vector<CMatrix<Scalar>>& unitaries) {
  CVector<Scalar> cur = psi;
  const auto d = static_cast<Eigen::Index>(local_dim);
  Eigen::Index stride = cur.size();
  for (const auto& u : unitaries) {
    // Party j's digit has stride d^(N-j-1); view the state as outer x d x inner.
    stride /= d;
    const Eigen::Index inner = stride;
    const Eigen::Index outer = cur.size() / (inner * d);
    CVector<Scalar> next = CVector<Scalar>::Zero(cur.size());
    for (Eigen::Index o = 0; o < outer; ++o) {
      for (Eigen::Index in = 0; in < inner; ++in) {
        const Eigen::Index base = o * d * inner + in;
        for (Eigen::Index a = 0; a < d; ++a) {
          Complex<Scalar> acc(0);
          for (Eigen::Index b = 0; b < d; ++b) acc += u(a, b) * cur(base + b * inner);
          next(base + a * inner) = acc;
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

/// Seeded random local unitaries applied to `s`, returned densely.
VectorXc random_local_unitary_apply(const SparseState& s, std::uint64_t seed,
                                    std::uint64_t cap = kDefaultDenseStateCap);

template <typename Derived>
SparseState SparseState::from_dense(int num_parties, int local_dim,
                                    const Eigen::MatrixBase<Derived>& dense, NormPolicy policy) {
  if (num_parties < 1 || local_dim < 1) throw ArgumentError("need N >= 1 and d >= 1");
  const std::uint64_t expected =
      saturating_pow(static_cast<std::uint64_t>(local_dim), static_cast<std::uint64_t>(num_parties));
  if (static_cast<std::uint64_t>(dense.size()) != expected) {
    throw ArgumentError("dense vector length does not equal d^N");
  }
  Amplitudes amps;
  Tuple t(static_cast<std::size_t>(num_parties), 0);
  for (Eigen::Index i = 0; i < dense.size(); ++i) {
    const cdouble a = static_cast<cdouble>(dense(i));
    if (a != cdouble(0)) amps.emplace(t, a);
    for (int j = num_parties - 1; j >= 0; --j) {
      if (++t[j] < local_dim) break;
      t[j] = 0;
    }
  }
  return SparseState(num_parties, local_dim, std::move(amps), policy);
}

}  // namespace amelu
