#include "amelu/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace amelu {

namespace {

void require_permutation(std::span<const int> sigma, int n) {
  if (static_cast<int>(sigma.size()) != n) {
    throw ArgumentError("party permutation has " + std::to_string(sigma.size()) +
                        " entries, expected " + std::to_string(n));
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int p : sigma) {
    if (p < 1 || p > n || seen[p - 1]) throw ArgumentError("invalid party permutation");
    seen[p - 1] = true;
  }
}

// Validates a 1-based proper subset and returns it completed to a
// permutation: subset first, the rest ascending.
std::vector<int> complete_subset(std::span<const int> subset, int n) {
  if (subset.empty()) throw ArgumentError("party subset is empty");
  if (static_cast<int>(subset.size()) >= n) throw ArgumentError("party subset must be proper");
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int p : subset) {
    if (p < 1 || p > n) throw ArgumentError("party " + std::to_string(p) + " outside 1.." + std::to_string(n));
    if (in[p - 1]) throw ArgumentError("party " + std::to_string(p) + " repeated in subset");
    in[p - 1] = true;
  }
  std::vector<int> sigma(subset.begin(), subset.end());
  for (int p = 1; p <= n; ++p)
    if (!in[p - 1]) sigma.push_back(p);
  return sigma;
}

std::uint64_t flatten(const Tuple& t, std::span<const int> parties, int d) {
  std::uint64_t idx = 0;
  for (int p : parties) idx = idx * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(t[p - 1]);
  return idx;
}

}  // namespace

Matricization matricize(const SparseState& s, std::span<const int> sigma, int k, std::uint64_t cap) {
  const int n = s.num_parties();
  if (k <= 0 || k >= n) throw ArgumentError("matricization split k must satisfy 0 < k < N");
  require_permutation(sigma, n);
  if (s.dense_size() > cap) throw CapacityError("matricization exceeds dense cap");
  const auto d = static_cast<std::uint64_t>(s.local_dim());
  const auto rows = static_cast<Eigen::Index>(saturating_pow(d, k));
  const auto cols = static_cast<Eigen::Index>(saturating_pow(d, n - k));
  Matricization m{std::vector<int>(sigma.begin(), sigma.end()), k, MatrixXc::Zero(rows, cols)};
  const auto row_parties = sigma.first(k);
  const auto col_parties = sigma.subspan(k);
  for (const auto& [t, a] : s.amplitudes()) {
    m.matrix(static_cast<Eigen::Index>(flatten(t, row_parties, s.local_dim())),
             static_cast<Eigen::Index>(flatten(t, col_parties, s.local_dim()))) = a;
  }
  return m;
}

SparseState unmatricize(const Matricization& m, int local_dim) {
  const int n = static_cast<int>(m.sigma.size());
  SparseState::Amplitudes amps;
  Tuple t(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < m.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.matrix.cols(); ++c) {
      const cdouble a = m.matrix(r, c);
      if (a == cdouble(0)) continue;
      auto rr = static_cast<std::uint64_t>(r);
      for (int i = m.k - 1; i >= 0; --i) {
        t[m.sigma[i] - 1] = static_cast<int>(rr % local_dim);
        rr /= local_dim;
      }
      auto cc = static_cast<std::uint64_t>(c);
      for (int i = n - 1; i >= m.k; --i) {
        t[m.sigma[i] - 1] = static_cast<int>(cc % local_dim);
        cc /= local_dim;
      }
      amps.emplace(t, a);
    }
  }
  return SparseState(n, local_dim, std::move(amps), NormPolicy::allow_any);
}

ReducedDensityMatrix reduced_density(const SparseState& s, std::span<const int> subset) {
  const int n = s.num_parties();
  const std::vector<int> sigma = complete_subset(subset, n);
  const auto k = subset.size();
  const std::span<const int> kept(sigma.data(), k);
  const std::span<const int> traced(sigma.data() + k, sigma.size() - k);

  // Group the support by the traced-out label; each group contributes v v^dagger.
  std::map<std::uint64_t, std::vector<std::pair<Eigen::Index, cdouble>>> groups;
  for (const auto& [t, a] : s.amplitudes()) {
    groups[flatten(t, traced, s.local_dim())].emplace_back(
        static_cast<Eigen::Index>(flatten(t, kept, s.local_dim())), a);
  }
  const auto dim = static_cast<Eigen::Index>(
      saturating_pow(static_cast<std::uint64_t>(s.local_dim()), k));
  MatrixXc rho = MatrixXc::Zero(dim, dim);
  for (const auto& [key, entries] : groups) {
    for (const auto& [i, ai] : entries)
      for (const auto& [j, aj] : entries) rho(i, j) += ai * std::conj(aj);
  }
  return {std::vector<int>(subset.begin(), subset.end()), std::move(rho)};
}

double purity(const SparseState& s, std::span<const int> subset) {
  const MatrixXc rho = reduced_density(s, subset).matrix;
  // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho.
  return rho.cwiseAbs2().sum();
}

double entropy(const SparseState& s, std::span<const int> subset, std::optional<double> base) {
  const double b = base.value_or(static_cast<double>(s.local_dim()));
  if (!(b > 1)) throw ArgumentError("entropy base must exceed 1");
  const MatrixXc rho = reduced_density(s, subset).matrix;
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(rho, Eigen::EigenvaluesOnly);
  double h = 0;
  for (double lambda : solver.eigenvalues()) {
    if (lambda > 0) h -= lambda * std::log(lambda);
  }
  return h / std::log(b);
}

UniformityReport is_k_uniform(const SparseState& s, int k, double tol) {
  const int n = s.num_parties();
  if (k < 1 || k > n / 2) {
    throw ArgumentError("uniformity k=" + std::to_string(k) + " outside 1.." + std::to_string(n / 2));
  }
  const double target = 1.0 / static_cast<double>(
      saturating_pow(static_cast<std::uint64_t>(s.local_dim()), static_cast<std::uint64_t>(k)));
  UniformityReport report{k, true, 0.0, {}};
  bool first = true;
  for_each_combination(n, k, [&](const std::vector<int>& zero_based) {
    std::vector<int> subset(zero_based.size());
    std::transform(zero_based.begin(), zero_based.end(), subset.begin(), [](int p) { return p + 1; });
    MatrixXc rho = reduced_density(s, subset).matrix;
    rho.diagonal().array() -= target;
    const double dev = rho.cwiseAbs().maxCoeff();
    if (first || dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_subset = subset;
      first = false;
    }
  });
  report.pass = report.max_deviation <= tol;
  return report;
}

UniformityReport is_ame(const SparseState& s, double tol) {
  const int k = s.num_parties() / 2;
  // A single party has no bipartition to test.
  if (k == 0) return UniformityReport{0, true, 0.0, {}};
  return is_k_uniform(s, k, tol);
}

}  // namespace amelu
