#pragma once

#include <optional>
#include <span>
#include <vector>

#include "amelu/core.hpp"
#include "amelu/state.hpp"

namespace amelu {

/// Default max-entry deviation accepted by the uniformity checks.
inline constexpr double kDefaultUniformityTol = 1e-10;

/// Party indices are 1-based throughout this module.
struct Matricization {
  std::vector<int> sigma;  // one-line permutation of {1..N}
  int k = 0;
  MatrixXc matrix;  // d^k x d^(N-k)
};

struct ReducedDensityMatrix {
  std::vector<int> subset;  // 1-based, in the order used for the row index
  MatrixXc matrix;
};

struct UniformityReport {
  int k = 0;
  bool pass = false;
  double max_deviation = 0;
  std::vector<int> worst_subset;  // 1-based
};

/// Rows indexed by parties sigma(1..k), columns by sigma(k+1..N), both
/// flattened row-major in the listed order.
Matricization matricize(const SparseState& s, std::span<const int> sigma, int k,
                        std::uint64_t cap = kDefaultDenseStateCap);

/// Inverse of matricize: the amplitude map read back out of the matrix.
SparseState unmatricize(const Matricization& m, int local_dim);

/// rho_S = M M^dagger with S placed first. Accumulated straight from the
/// support, so only the d^|S| x d^|S| result is materialised.
ReducedDensityMatrix reduced_density(const SparseState& s, std::span<const int> subset);

double purity(const SparseState& s, std::span<const int> subset);

/// Von Neumann entropy of rho_S; base defaults to d.
double entropy(const SparseState& s, std::span<const int> subset,
               std::optional<double> base = std::nullopt);

/// Checks the C(N,k) marginals of size exactly k against I/d^k.
UniformityReport is_k_uniform(const SparseState& s, int k, double tol = kDefaultUniformityTol);

/// is_k_uniform with k = floor(N/2).
UniformityReport is_ame(const SparseState& s, double tol = kDefaultUniformityTol);

}  // namespace amelu
