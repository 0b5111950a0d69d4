#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "amelu/core.hpp"
#include "amelu/invariant.hpp"
#include "amelu/oa.hpp"

namespace amelu {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// table[nu][l] = indices of OA rows with symbol l at party nu (0-based).
using SymbolCountTable = std::vector<std::vector<std::vector<int>>>;

SymbolCountTable symbol_count_table(const OrthogonalArray& oa);

/// Integer weight per OA row, not all zero, in the kernel of build_system.
struct KernelVector {
  std::vector<std::int64_t> values;

  bool is_zero() const;
};

/// (N d) x r incidence matrix; row nu*d + l marks the OA rows carrying
/// symbol l at party nu.
IntMatrix build_system(const OrthogonalArray& oa);

/// Rank over the rationals, computed exactly.
int exact_rank(const IntMatrix& mat);

/// Number of independent kernel vectors (columns minus rank).
int kernel_dimension(const IntMatrix& mat);

/// Fraction-free elimination over arbitrary-precision integers. Pivots are
/// taken left to right; basis vector `index` comes from the index-th free
/// column (that variable set, the other free ones zero), then scaled to
/// integers with gcd 1 and first nonzero entry positive. nullopt when the
/// kernel has fewer than index + 1 basis vectors.
std::optional<KernelVector> integral_kernel(const IntMatrix& mat, int index = 0);

/// Row multisets from the positive (X) and negative (Y) parts of K, listed in
/// OA row order with multiplicity |K|.
std::pair<std::vector<Tuple>, std::vector<Tuple>> split_multisets(const KernelVector& k,
                                                                  const OrthogonalArray& oa);

/// sigma_nu pairing the copies of X and Y that share a symbol at party nu, in
/// ascending index order, so that y_l[nu] = x_{sigma_nu(l)}[nu].
PermutationSet build_permutations(const std::vector<Tuple>& x, const std::vector<Tuple>& y);

struct Witness {
  KernelVector kernel;
  std::vector<Tuple> x;
  std::vector<Tuple> y;
  int n = 0;
  PermutationSet perms = PermutationSet::identity(1, 1);
  Tuple marked_row;
};

/// build_system -> integral_kernel -> split_multisets -> build_permutations.
/// The marked row has maximal |K|, ties broken lexicographically.
std::optional<Witness> find_witness(const OrthogonalArray& oa, int kernel_index = 0);

/// Throws WitnessError unless |X| = |Y| = n, X != Y, the symbol counts match
/// per party, and the permutations connect X to Y.
void check_witness_structure(const Witness& w, const OrthogonalArray& oa);

inline constexpr double kCertificationSpread = 1e-6;

struct CertificationReport {
  std::vector<double> thetas;
  std::vector<cdouble> values;
  double spread = 0;  // max pairwise |value_a - value_b|
  bool pass = false;
};

/// Evaluates the witness invariant on from_iroa(oa, theta on the marked row)
/// for each grid point; passes when the values are not all equal.
CertificationReport verify_witness(const OrthogonalArray& oa, const Witness& w,
                                   const std::vector<double>& theta_grid,
                                   const EngineOptions& opts = {});

/// Same certification for an arbitrary one-parameter family.
template <typename Family>
CertificationReport certify_theta_dependence(Family&& family, const PermutationSet& perms,
                                             const std::vector<double>& theta_grid,
                                             const EngineOptions& opts = {});

std::vector<double> default_theta_grid();

template <typename Family>
CertificationReport certify_theta_dependence(Family&& family, const PermutationSet& perms,
                                             const std::vector<double>& theta_grid,
                                             const EngineOptions& opts) {
  CertificationReport report;
  report.thetas = theta_grid;
  for (double theta : theta_grid) report.values.push_back(invariant(family(theta), perms, opts).value);
  for (std::size_t a = 0; a < report.values.size(); ++a)
    for (std::size_t b = a + 1; b < report.values.size(); ++b)
      report.spread = std::max(report.spread, std::abs(report.values[a] - report.values[b]));
  report.pass = report.spread > kCertificationSpread;
  return report;
}

}  // namespace amelu
