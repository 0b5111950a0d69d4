#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amelu/core.hpp"
#include "amelu/state.hpp"

namespace amelu {

/// Default ceiling on d^(N n) index assignments for the dense engine.
inline constexpr std::uint64_t kDefaultDenseTermCap = 100'000'000;
/// Default ceiling on r^n support assignments for the sparse engine in auto mode.
inline constexpr std::uint64_t kDefaultSparseAssignmentCap = 10'000'000'000ULL;

/// N permutations of n copies in one-line notation: perm(j)[l-1] = sigma_j(l).
class PermutationSet {
 public:
  explicit PermutationSet(std::vector<std::vector<int>> perms);

  static PermutationSet identity(int copies, int num_parties);

  int copies() const { return copies_; }
  int num_parties() const { return static_cast<int>(perms_.size()); }
  const std::vector<int>& perm(int party) const { return perms_[party]; }
  const std::vector<std::vector<int>>& perms() const { return perms_; }

  /// sigma_party(copy) with 0-based party, copy and result.
  int image(int party, int copy) const { return perms_[party][copy] - 1; }

  /// Every sigma_j replaced by its inverse.
  PermutationSet inverse() const;
  /// Every sigma_j replaced by tau o sigma_j o tau^-1 (tau one-line, 1-based).
  PermutationSet conjugated(std::span<const int> tau) const;

  bool operator==(const PermutationSet&) const = default;

 private:
  int copies_ = 0;
  std::vector<std::vector<int>> perms_;
};

/// Reads "n N" followed by N lines of n entries in 1..n.
PermutationSet parse_permutations(std::istream& in);
PermutationSet parse_permutations_text(std::string_view text);
std::string format_permutations(const PermutationSet& p);

enum class Engine { dense, sparse };
std::string_view to_string(Engine e);

struct InvariantValue {
  cdouble value;
  std::uint64_t term_count = 0;  // nonzero summands encountered
  Engine engine = Engine::sparse;
};

struct EngineOptions {
  std::uint64_t dense_cap = kDefaultDenseTermCap;
  std::uint64_t sparse_cap = kDefaultSparseAssignmentCap;
  unsigned jobs = 1;
};

/// Exhaustive sum over all d^(N n) index assignments of
///   prod_l Psi[i_l] conj(Psi[i^(1)_{sigma_1(l)}, ..., i^(N)_{sigma_N(l)}]).
/// `psi` is row-major with party 1 most significant.
InvariantValue invariant_dense(const VectorXc& psi, int num_parties, int local_dim,
                               const PermutationSet& p, std::uint64_t cap = kDefaultDenseTermCap);

template <typename Derived>
InvariantValue invariant_dense(const Eigen::MatrixBase<Derived>& psi, int num_parties, int local_dim,
                               const PermutationSet& p, std::uint64_t cap = kDefaultDenseTermCap) {
  return invariant_dense(VectorXc(psi), num_parties, local_dim, p, cap);
}

/// Depth-first assignment of support tuples to copies. Bra tuples are checked
/// against the support as soon as any of their source copies is assigned, so
/// only assignments whose every ket and bra lies in the support are expanded.
InvariantValue invariant_sparse(const SparseState& s, const PermutationSet& p, unsigned jobs = 1);

/// Sparse when r^n < d^(N n), dense otherwise, falling back to the other
/// engine when the preferred one exceeds its cap.
InvariantValue invariant(const SparseState& s, const PermutationSet& p, const EngineOptions& opts = {});

/// n = 2 pattern whose invariant equals Tr rho_S^2: swap on parties in S.
PermutationSet purity_perms(std::span<const int> subset, int num_parties);

struct FactorizationReport {
  cdouble composite;  // invariant of compose(s1, s2)
  cdouble product;    // invariant(s1) * invariant(s2)
  double difference = 0;
  bool pass = false;
};

inline constexpr double kFactorizationTol = 1e-10;

FactorizationReport factorization_check(const SparseState& s1, const SparseState& s2,
                                        const PermutationSet& p, const EngineOptions& opts = {});

}  // namespace amelu
