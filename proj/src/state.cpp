#include "amelu/state.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace amelu {

SparseState::SparseState(int num_parties, int local_dim, Amplitudes amplitudes, NormPolicy policy)
    : num_parties_(num_parties), local_dim_(local_dim), amplitudes_(std::move(amplitudes)) {
  if (num_parties_ < 1) throw ArgumentError("state needs at least one party");
  if (local_dim_ < 1) throw ArgumentError("local dimension must be >= 1");
  for (const auto& [t, a] : amplitudes_) {
    if (static_cast<int>(t.size()) != num_parties_) {
      throw ArgumentError("basis tuple " + to_string(t) + " does not have " +
                          std::to_string(num_parties_) + " entries");
    }
    for (int s : t) {
      if (s < 0 || s >= local_dim_) {
        throw SymbolRangeError("basis tuple " + to_string(t) + " has a symbol outside {0.." +
                               std::to_string(local_dim_ - 1) + "}");
      }
    }
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw ArgumentError("non-finite amplitude at " + to_string(t));
    }
  }
  if (policy == NormPolicy::require_unit) {
    double sq = 0;
    for (const auto& kv : amplitudes_) sq += std::norm(kv.second);
    if (std::abs(sq - 1.0) > kNormTolerance) {
      throw ArgumentError("state is not unit norm (sum |a|^2 = " + std::to_string(sq) + ")");
    }
  }
}

cdouble SparseState::amplitude(const Tuple& t) const {
  auto it = amplitudes_.find(t);
  return it == amplitudes_.end() ? cdouble(0) : it->second;
}

double SparseState::norm() const {
  double sq = 0;
  for (const auto& kv : amplitudes_) sq += std::norm(kv.second);
  return std::sqrt(sq);
}

SparseState SparseState::normalized() const {
  const double n = norm();
  if (n == 0) throw ArgumentError("cannot normalize the zero vector");
  Amplitudes scaled;
  for (const auto& [t, a] : amplitudes_) scaled.emplace(t, a / n);
  return SparseState(num_parties_, local_dim_, std::move(scaled), NormPolicy::allow_any);
}

std::uint64_t SparseState::dense_size() const {
  return saturating_pow(static_cast<std::uint64_t>(local_dim_),
                        static_cast<std::uint64_t>(num_parties_));
}

std::uint64_t SparseState::flat_index(const Tuple& t) const {
  std::uint64_t idx = 0;
  for (int s : t) idx = idx * static_cast<std::uint64_t>(local_dim_) + static_cast<std::uint64_t>(s);
  return idx;
}

VectorXc SparseState::to_dense(std::uint64_t cap) const {
  const std::uint64_t size = dense_size();
  if (size > cap) {
    throw CapacityError("dense state of " + std::to_string(size) + " entries exceeds cap " +
                        std::to_string(cap));
  }
  VectorXc dense = VectorXc::Zero(static_cast<Eigen::Index>(size));
  for (const auto& [t, a] : amplitudes_) dense(static_cast<Eigen::Index>(flat_index(t))) = a;
  return dense;
}

SparseState from_iroa(const OrthogonalArray& oa, const PhaseAssignment& phases) {
  if (!oa.rows_distinct()) throw DuplicateRowError("orthogonal array has repeated full rows");
  std::set<Tuple> rows(oa.rows().begin(), oa.rows().end());
  for (const auto& kv : phases) {
    if (!rows.count(kv.first)) throw KeyError("phase key " + to_string(kv.first) + " is not a row");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(oa.num_rows()));
  SparseState::Amplitudes amps;
  for (const auto& row : oa.rows()) {
    auto it = phases.find(row);
    const double theta = it == phases.end() ? 0.0 : it->second;
    amps.emplace(row, std::polar(scale, theta));
  }
  return SparseState(oa.num_parties(), oa.local_dim(), std::move(amps));
}

SparseState ghz_state(int num_parties, int local_dim) {
  if (num_parties < 1 || local_dim < 1) throw ArgumentError("ghz needs N >= 1 and d >= 1");
  SparseState::Amplitudes amps;
  const double a = 1.0 / std::sqrt(static_cast<double>(local_dim));
  for (int s = 0; s < local_dim; ++s) amps.emplace(Tuple(num_parties, s), a);
  return SparseState(num_parties, local_dim, std::move(amps));
}

namespace {

Tuple bits(const char* s) {
  Tuple t;
  for (; *s; ++s) t.push_back(*s - '0');
  return t;
}

SparseState psi3d(int d, double theta) {
  SparseState::Amplitudes amps;
  const double scale = 1.0 / d;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      amps.emplace(Tuple{j, k, (j + k) % d}, std::polar(scale, j == 0 && k == 0 ? theta : 0.0));
  return SparseState(3, d, std::move(amps));
}

SparseState psi5d(int d, double theta) {
  SparseState::Amplitudes amps;
  const double scale = std::pow(static_cast<double>(d), -1.5);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const double phase = j == 0 && k == 0 ? theta : 0.0;
      for (int l = 0; l < d; ++l) {
        const double fourier = 2 * std::numbers::pi * j * l / d;
        amps.emplace(Tuple{j, k, (j + k) % d, (l + k) % d, l}, std::polar(scale, phase + fourier));
      }
    }
  }
  return SparseState(5, d, std::move(amps));
}

SparseState ame43() {
  static const char* kets[] = {"0000", "0111", "0222", "1012", "1120",
                               "1201", "2021", "2102", "2210"};
  SparseState::Amplitudes amps;
  for (const char* k : kets) amps.emplace(bits(k), 1.0 / 3.0);
  return SparseState(4, 3, std::move(amps));
}

void require_dim(std::string_view name, int d, int required) {
  if (d != required) {
    throw ArgumentError(std::string(name) + " requires d=" + std::to_string(required) + ", got " +
                        std::to_string(d));
  }
}

}  // namespace

SparseState ame52_code_word(int which) {
  struct Ket {
    const char* label;
    int sign;
  };
  static const Ket zero[] = {{"00000", 1},  {"00111", 1},  {"01010", -1}, {"01101", 1},
                             {"10001", -1}, {"10110", -1}, {"11011", -1}, {"11100", 1}};
  static const Ket one[] = {{"00011", 1}, {"00100", 1}, {"01001", -1}, {"01110", 1},
                            {"10010", 1}, {"10101", 1}, {"11000", 1},  {"11111", -1}};
  if (which != 0 && which != 1) throw ArgumentError("code word index must be 0 or 1");
  const double scale = 1.0 / std::sqrt(8.0);
  SparseState::Amplitudes amps;
  for (const Ket& k : which == 0 ? zero : one) amps.emplace(bits(k.label), k.sign * scale);
  return SparseState(5, 2, std::move(amps));
}

std::vector<std::string_view> catalog_names() { return {"psi3d", "psi5d", "ame43", "ame52", "ghz"}; }

SparseState catalog_state(std::string_view name, int local_dim, double theta) {
  if (name == "psi3d" || name == "psi5d") {
    if (local_dim < 2) throw ArgumentError(std::string(name) + " requires d >= 2");
    return name == "psi3d" ? psi3d(local_dim, theta) : psi5d(local_dim, theta);
  }
  if (name == "ame43") {
    require_dim(name, local_dim, 3);
    return ame43();
  }
  if (name == "ghz") {
    require_dim(name, local_dim, 2);
    return ghz_state(3, 2);
  }
  if (name == "ame52") {
    require_dim(name, local_dim, 2);
    // Unit-norm cos(theta)|0~> + sin(theta)|1~>; the code words are orthonormal.
    const SparseState zero = ame52_code_word(0);
    const SparseState one = ame52_code_word(1);
    SparseState::Amplitudes amps;
    for (const auto& [t, a] : zero.amplitudes()) amps[t] += std::cos(theta) * a;
    for (const auto& [t, a] : one.amplitudes()) amps[t] += std::sin(theta) * a;
    std::erase_if(amps, [](const auto& kv) { return kv.second == cdouble(0); });
    return SparseState(5, 2, std::move(amps));
  }
  throw CatalogError("unknown catalog state '" + std::string(name) + "'");
}

SparseState compose(const SparseState& s1, const SparseState& s2) {
  if (s1.num_parties() != s2.num_parties()) {
    throw ArgumentError("compose needs equal party counts (" + std::to_string(s1.num_parties()) +
                        " vs " + std::to_string(s2.num_parties()) + ")");
  }
  const int n = s1.num_parties();
  const int d2 = s2.local_dim();
  SparseState::Amplitudes amps;
  Tuple t(static_cast<std::size_t>(n));
  for (const auto& [t1, a1] : s1.amplitudes()) {
    for (const auto& [t2, a2] : s2.amplitudes()) {
      for (int j = 0; j < n; ++j) t[j] = t1[j] * d2 + t2[j];
      amps.emplace(t, a1 * a2);
    }
  }
  return SparseState(n, s1.local_dim() * d2, std::move(amps), NormPolicy::allow_any);
}

VectorXc random_local_unitary_apply(const SparseState& s, std::uint64_t seed, std::uint64_t cap) {
  const VectorXc psi = s.to_dense(cap);
  std::mt19937_64 rng(seed);
  std::vector<MatrixXc> us;
  us.reserve(static_cast<std::size_t>(s.num_parties()));
  for (int j = 0; j < s.num_parties(); ++j) us.push_back(random_unitary<double>(s.local_dim(), rng));
  return apply_local_unitaries<double>(psi, s.local_dim(), us);
}

}  // namespace amelu
