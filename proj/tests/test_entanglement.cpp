#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "amelu/entanglement.hpp"
#include "amelu/state.hpp"
#include "oracle.hpp"

using namespace amelu;
using doctest::Approx;

namespace {

SparseState w_state() {
  const double a = 1 / std::sqrt(3.0);
  return SparseState(3, 2, {{{0, 0, 1}, a}, {{0, 1, 0}, a}, {{1, 0, 0}, a}});
}

// Complement of `subset` in {1..n}, ascending.
std::vector<int> complement(const std::vector<int>& subset, int n) {
  std::vector<int> rest;
  for (int p = 1; p <= n; ++p)
    if (std::find(subset.begin(), subset.end(), p) == subset.end()) rest.push_back(p);
  return rest;
}

}  // namespace

TEST_CASE("matricize GHZ") {
  const auto g = catalog_state("ghz", 2, 0);
  const std::vector<int> sigma{1, 2, 3};
  const auto m = matricize(g, sigma, 1);
  CHECK(m.matrix.rows() == 2);
  CHECK(m.matrix.cols() == 4);
  const double a = 1 / std::sqrt(2.0);
  CHECK(std::abs(m.matrix(0, 0) - a) < 1e-15);
  CHECK(std::abs(m.matrix(1, 3) - a) < 1e-15);
  CHECK(m.matrix.cwiseAbs().sum() == Approx(2 * a));
}

TEST_CASE("matricize AME(4,3) across any bipartition is a scaled permutation matrix") {
  const auto s = catalog_state("ame43", 3, 0);
  const std::vector<std::vector<int>> sigmas = {{1, 2, 3, 4}, {1, 3, 2, 4}, {1, 4, 2, 3}, {3, 4, 2, 1}};
  for (const auto& sigma : sigmas) {
    const auto m = matricize(s, sigma, 2);
    REQUIRE(m.matrix.rows() == 9);
    REQUIRE(m.matrix.cols() == 9);
    const MatrixXc scaled = 3.0 * m.matrix;
    for (Eigen::Index i = 0; i < 9; ++i) {
      int ones = 0;
      for (Eigen::Index j = 0; j < 9; ++j) {
        if (std::abs(scaled(i, j) - 1.0) < 1e-14) ++ones;
        else CHECK(std::abs(scaled(i, j)) < 1e-14);
      }
      CHECK(ones == 1);
    }
    CHECK((scaled * scaled.adjoint() - MatrixXc::Identity(9, 9)).norm() < 1e-13);
  }
}

TEST_CASE("matricize validates its arguments") {
  const auto g = catalog_state("ghz", 2, 0);
  const std::vector<int> bad{1, 1, 3};
  const std::vector<int> short_sigma{1, 2};
  const std::vector<int> ok{1, 2, 3};
  CHECK_THROWS_AS(matricize(g, bad, 1), ArgumentError);
  CHECK_THROWS_AS(matricize(g, short_sigma, 1), ArgumentError);
  CHECK_THROWS_AS(matricize(g, ok, 3), ArgumentError);
  CHECK_THROWS_AS(matricize(g, ok, 0), ArgumentError);
  CHECK_THROWS_AS(matricize(g, ok, 1, 4), CapacityError);
}

TEST_CASE("unmatricize inverts matricize") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + trial % 3;
    const int d = 2 + trial % 2;
    const auto s = oracle::random_state(rng, n, d);
    const auto sigma = oracle::random_permutation(rng, n);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
    const auto back = unmatricize(matricize(s, sigma, k), d);
    REQUIRE(back.support_size() == s.support_size());
    for (const auto& [t, a] : s.amplitudes()) CHECK(std::abs(back.amplitude(t) - a) < 1e-15);
  }
}

TEST_CASE("reduced density matrices of simple states") {
  const auto g = catalog_state("ghz", 2, 0);
  const std::vector<int> one{1};
  const auto rho = reduced_density(g, one).matrix;
  CHECK((rho - 0.5 * MatrixXc::Identity(2, 2)).norm() < 1e-15);

  const std::vector<int> pair{1, 2};
  const auto rho12 = reduced_density(g, pair).matrix;
  CHECK(std::abs(rho12(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(rho12(3, 3) - 0.5) < 1e-15);
  CHECK(std::abs(rho12(0, 3)) < 1e-15);

  const auto w = reduced_density(w_state(), one).matrix;
  CHECK(std::abs(w(0, 0) - 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(w(1, 1) - 1.0 / 3.0) < 1e-15);

  const std::vector<int> zero{0};
  CHECK_THROWS_AS(reduced_density(g, zero), ArgumentError);
  const std::vector<int> dup{2, 2};
  CHECK_THROWS_AS(reduced_density(g, dup), ArgumentError);
}

TEST_CASE("reduced density matches M M^dagger for every completion of the subset") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 2;
    const auto s = oracle::random_state(rng, n, 2 + trial % 2);
    auto perm = oracle::random_permutation(rng, n);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
    const std::vector<int> subset(perm.begin(), perm.begin() + k);
    const MatrixXc rho = reduced_density(s, subset).matrix;
    for (int c = 0; c < 3; ++c) {
      std::shuffle(perm.begin() + k, perm.end(), rng);
      const auto m = matricize(s, perm, k);
      CHECK((m.matrix * m.matrix.adjoint() - rho).norm() < 1e-13);
    }
  }
}

TEST_CASE("reduced density is Hermitian, unit trace and positive semidefinite") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::random_state(rng, 4, 2 + trial % 2);
    const auto perm = oracle::random_permutation(rng, 4);
    const int k = 1 + trial % 3;
    const std::vector<int> subset(perm.begin(), perm.begin() + k);
    const MatrixXc rho = reduced_density(s, subset).matrix;
    CHECK((rho - rho.adjoint()).norm() < 1e-14);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-13);
    Eigen::SelfAdjointEigenSolver<MatrixXc> eig(rho);
    CHECK(eig.eigenvalues().minCoeff() > -1e-13);
  }
}

TEST_CASE("complementary marginals share their purity and entropy") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 3;
    const auto s = oracle::random_state(rng, n, 2);
    const auto perm = oracle::random_permutation(rng, n);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
    const std::vector<int> subset(perm.begin(), perm.begin() + k);
    const auto rest = complement(subset, n);
    CHECK(purity(s, subset) == Approx(purity(s, rest)).epsilon(1e-12));
    CHECK(entropy(s, subset) == Approx(entropy(s, rest)).epsilon(1e-9));
  }
}

TEST_CASE("purity and entropy examples") {
  const auto g = catalog_state("ghz", 2, 0);
  const std::vector<int> one{1};
  const std::vector<int> two{1, 2};
  CHECK(purity(g, one) == Approx(0.5).epsilon(1e-15));
  CHECK(entropy(g, one) == Approx(1.0).epsilon(1e-12));
  CHECK(entropy(g, one, std::exp(1.0)) == Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(entropy(g, one, 1.0), ArgumentError);

  const auto a = catalog_state("ame43", 3, 0);
  CHECK(purity(a, one) == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(purity(a, two) == Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(entropy(a, one) == Approx(1.0).epsilon(1e-12));
  CHECK(entropy(a, two) == Approx(2.0).epsilon(1e-12));

  const SparseState product(2, 2, {{{0, 1}, 1.0}});
  CHECK(purity(product, one) == Approx(1.0));
  CHECK(std::abs(entropy(product, one)) < 1e-14);

  // 2/3, 1/3 spectrum.
  const double h = -(2.0 / 3.0) * std::log2(2.0 / 3.0) - (1.0 / 3.0) * std::log2(1.0 / 3.0);
  CHECK(entropy(w_state(), one) == Approx(h).epsilon(1e-12));
  CHECK(purity(w_state(), one) == Approx(5.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("uniformity of catalog and reference states") {
  CHECK(is_ame(catalog_state("ame43", 3, 0)).pass);
  CHECK(is_k_uniform(catalog_state("ame43", 3, 0), 1).pass);
  CHECK(is_ame(from_iroa(oracle::example_oa())).pass);
  CHECK(is_ame(catalog_state("ghz", 2, 0)).pass);
  CHECK(is_ame(catalog_state("ame52", 2, 0.3)).pass);
  CHECK(is_ame(catalog_state("psi5d", 3, 0.8)).pass);

  const auto w = is_ame(w_state());
  CHECK_FALSE(w.pass);
  CHECK(w.k == 1);
  CHECK(w.max_deviation == Approx(1.0 / 6.0).epsilon(1e-12));

  const auto g4 = ghz_state(4, 2);
  CHECK(is_k_uniform(g4, 1).pass);
  const auto r = is_ame(g4);
  CHECK_FALSE(r.pass);
  CHECK(r.k == 2);
  CHECK(r.worst_subset.size() == 2);
  CHECK(r.max_deviation == Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(is_k_uniform(g4, 0), ArgumentError);
  CHECK_THROWS_AS(is_k_uniform(g4, 3), ArgumentError);
  CHECK(is_ame(SparseState(1, 2, {{{0}, 1.0}})).pass);
}

TEST_CASE("IrOA states stay AME for every phase on any row") {
  const auto oa = oracle::example_oa();
  const std::vector<double> grid{0, std::numbers::pi / 3, std::numbers::pi / 2, std::numbers::pi, 4.2};
  for (const auto& row : oa.rows()) {
    for (double theta : grid) CHECK(is_ame(from_iroa(oa, {{row, theta}})).pass);
  }
  const auto ame43_oa = OrthogonalArray(
      {{0, 0, 0, 0}, {0, 1, 1, 1}, {0, 2, 2, 2}, {1, 0, 1, 2}, {1, 1, 2, 0}, {1, 2, 0, 1}, {2, 0, 2, 1}, {2, 1, 0, 2},
       {2, 2, 1, 0}},
      3);
  for (double theta : grid) CHECK(is_ame(from_iroa(ame43_oa, {{{1, 2, 0, 1}, theta}, {{0, 0, 0, 0}, -theta}})).pass);
}

TEST_CASE("uniformity tolerance is honoured") {
  // Slightly unbalanced GHZ.
  const double e = 1e-6;
  const SparseState s(3, 2, {{{0, 0, 0}, std::sqrt(0.5 + e)}, {{1, 1, 1}, std::sqrt(0.5 - e)}});
  CHECK_FALSE(is_ame(s).pass);
  CHECK(is_ame(s, 1e-5).pass);
  CHECK(is_ame(s).max_deviation == Approx(e).epsilon(1e-6));
}
