#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "amelu/witness.hpp"
#include "oracle.hpp"

using namespace amelu;

namespace {

const OrthogonalArray kGhz({{0, 0, 0}, {1, 1, 1}}, 2);

OrthogonalArray ame43_oa() {
  return OrthogonalArray({{0, 0, 0, 0}, {0, 1, 1, 1}, {0, 2, 2, 2}, {1, 0, 1, 2}, {1, 1, 2, 0}, {1, 2, 0, 1},
                          {2, 0, 2, 1}, {2, 1, 0, 2}, {2, 2, 1, 0}},
                         3);
}

bool in_kernel(const IntMatrix& mat, const std::vector<std::int64_t>& v) {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> k(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) k(static_cast<Eigen::Index>(i)) = v[i];
  return (mat * k).isZero();
}

// Hand-built witness for the example array: X = {000,112,221}, Y = {022,101,210}.
Witness reference_witness() {
  Witness w;
  w.kernel.values = {1, 0, -1, -1, 1, 0, 0, -1, 1};
  w.x = {{0, 0, 0}, {1, 1, 2}, {2, 2, 1}};
  w.y = {{0, 2, 2}, {1, 0, 1}, {2, 1, 0}};
  w.n = 3;
  w.perms = PermutationSet({{1, 2, 3}, {3, 1, 2}, {2, 3, 1}});
  w.marked_row = {0, 0, 0};
  return w;
}

}  // namespace

TEST_CASE("symbol-count system") {
  const auto oa = oracle::example_oa();
  const IntMatrix m = build_system(oa);
  CHECK(m.rows() == 9);
  CHECK(m.cols() == 9);
  // Each column marks one symbol per party; each row counts lambda * d^(k-1) = 3 rows.
  CHECK((m.colwise().sum().array() == 3).all());
  CHECK((m.rowwise().sum().array() == 3).all());
  CHECK(exact_rank(m) == 7);
  CHECK(kernel_dimension(m) == 2);

  const auto table = symbol_count_table(oa);
  CHECK(table.size() == 3);
  CHECK(table[1][2] == std::vector<int>{2, 5, 8});

  CHECK(kernel_dimension(build_system(kGhz)) == 0);
  CHECK(kernel_dimension(build_system(ame43_oa())) == 0);
  CHECK_THROWS_AS(build_system(OrthogonalArray({{0, 1}, {0, 1}}, 2)), DuplicateRowError);
}

TEST_CASE("exact rank on hand-built matrices") {
  IntMatrix a(2, 2);
  a << 2, 4, 1, 2;
  CHECK(exact_rank(a) == 1);
  // Large entries whose products overflow 64 bits during elimination.
  IntMatrix b(3, 3);
  const std::int64_t big = 3'000'000'019LL;
  b << big, big - 1, 7, big + 1, big, 11, 2 * big + 1, 2 * big - 1, 18;
  CHECK(exact_rank(b) == 2);
  b(2, 2) = 19;
  CHECK(exact_rank(b) == 3);
  CHECK(exact_rank(IntMatrix::Zero(3, 4)) == 0);
  CHECK(kernel_dimension(IntMatrix::Zero(3, 4)) == 4);
}

TEST_CASE("integral kernel basis") {
  const IntMatrix m = build_system(oracle::example_oa());
  const auto k0 = integral_kernel(m, 0);
  REQUIRE(k0);
  CHECK(k0->values == std::vector<std::int64_t>{0, 1, -1, -1, 0, 1, 1, -1, 0});
  const auto k1 = integral_kernel(m, 1);
  REQUIRE(k1);
  CHECK(in_kernel(m, k1->values));
  CHECK(k1->values != k0->values);
  CHECK_FALSE(integral_kernel(m, 2));
  CHECK_THROWS_AS(integral_kernel(m, -1), ArgumentError);
  CHECK_FALSE(integral_kernel(build_system(kGhz)));

  for (const auto& k : {*k0, *k1}) {
    std::int64_t g = 0;
    for (auto v : k.values) g = std::gcd(g, v);
    CHECK(g == 1);
    CHECK(*std::find_if(k.values.begin(), k.values.end(), [](auto v) { return v != 0; }) > 0);
    CHECK(std::accumulate(k.values.begin(), k.values.end(), std::int64_t{0}) == 0);
  }

  CHECK(in_kernel(m, reference_witness().kernel.values));
}

TEST_CASE("split_multisets") {
  const auto oa = oracle::example_oa();
  const KernelVector k{{0, 1, -1, -1, 0, 1, 1, -1, 0}};
  const auto [x, y] = split_multisets(k, oa);
  CHECK(x == std::vector<Tuple>{{0, 1, 1}, {1, 2, 0}, {2, 0, 2}});
  CHECK(y == std::vector<Tuple>{{0, 2, 2}, {1, 0, 1}, {2, 1, 0}});

  KernelVector neg = k;
  for (auto& v : neg.values) v = -v;
  const auto [nx, ny] = split_multisets(neg, oa);
  CHECK(nx == y);
  CHECK(ny == x);

  KernelVector twice = k;
  for (auto& v : twice.values) v *= 2;
  const auto [tx, ty] = split_multisets(twice, oa);
  CHECK(tx.size() == 6);
  CHECK(ty.size() == 6);
  CHECK(tx[0] == tx[1]);

  CHECK_THROWS_AS(split_multisets(KernelVector{std::vector<std::int64_t>(9, 0)}, oa), ArgumentError);
  CHECK_THROWS_AS(split_multisets(KernelVector{{1, 0, 0, 0, 0, 0, 0, 0, 0}}, oa), ArgumentError);
  CHECK_THROWS_AS(split_multisets(KernelVector{{1, -1}}, oa), ArgumentError);
}

TEST_CASE("build_permutations pairs copies by symbol in ascending order") {
  const std::vector<Tuple> x{{0, 1, 1}, {1, 2, 0}, {2, 0, 2}};
  const std::vector<Tuple> y{{0, 2, 2}, {1, 0, 1}, {2, 1, 0}};
  const auto p = build_permutations(x, y);
  CHECK(p == PermutationSet({{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}));
  for (int nu = 0; nu < 3; ++nu)
    for (int l = 0; l < 3; ++l) CHECK(y[l][nu] == x[p.image(nu, l)][nu]);

  const auto ref = reference_witness();
  CHECK(build_permutations(ref.x, ref.y) == ref.perms);

  // Repeated symbols: the k-th occurrence in Y takes the k-th occurrence in X.
  const auto q = build_permutations({{0, 0}, {0, 1}, {1, 0}}, {{1, 1}, {0, 0}, {0, 0}});
  CHECK(q.perm(0) == std::vector<int>{3, 1, 2});
  CHECK(q.perm(1) == std::vector<int>{2, 1, 3});

  CHECK_THROWS_AS(build_permutations({{0, 0}}, {{0, 1}}), WitnessError);
  CHECK_THROWS_AS(build_permutations({{0, 0}}, {{0, 0}, {1, 1}}), WitnessError);
  CHECK_THROWS_AS(build_permutations({}, {}), WitnessError);
}

TEST_CASE("find_witness on the example array") {
  const auto oa = oracle::example_oa();
  const auto w = find_witness(oa);
  REQUIRE(w);
  CHECK(w->n == 3);
  CHECK(w->marked_row == Tuple{0, 1, 1});
  CHECK(w->perms == PermutationSet({{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}));
  CHECK_NOTHROW(check_witness_structure(*w, oa));

  const auto cert = verify_witness(oa, *w, default_theta_grid());
  CHECK(cert.pass);
  CHECK(cert.spread > kCertificationSpread);
  REQUIRE(cert.values.size() == 4);
  const double expected[] = {1.0 / 9.0, 75.0 / 729.0, 69.0 / 729.0, 57.0 / 729.0};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(cert.values[i] - expected[i]) < 1e-14);

  const auto second = find_witness(oa, 1);
  REQUIRE(second);
  CHECK_NOTHROW(check_witness_structure(*second, oa));
  CHECK_FALSE(find_witness(oa, 2));
}

TEST_CASE("hand-built witness is structurally valid and certifies") {
  const auto oa = oracle::example_oa();
  const auto w = reference_witness();
  CHECK_NOTHROW(check_witness_structure(w, oa));
  CHECK(verify_witness(oa, w, default_theta_grid()).pass);
}

TEST_CASE("arrays with a trivial kernel have no witness") {
  CHECK_FALSE(find_witness(kGhz));
  CHECK_FALSE(find_witness(ame43_oa()));
  CHECK_FALSE(find_witness(oracle::linear_oa(2, 3)));
}

TEST_CASE("certification needs more than one grid point") {
  const auto oa = oracle::example_oa();
  const auto w = find_witness(oa);
  REQUIRE(w);
  const auto single = verify_witness(oa, *w, {0.0});
  CHECK_FALSE(single.pass);
  CHECK(single.spread == 0.0);
  // 0 and 2 pi give the same state.
  CHECK_FALSE(verify_witness(oa, *w, {0.0, 2 * std::numbers::pi}).pass);
}

TEST_CASE("psi3d at d=2 is constant under the cyclic invariant") {
  const PermutationSet p({{1, 2, 3}, {2, 3, 1}, {3, 1, 2}});
  const auto family = [](double theta) { return catalog_state("psi3d", 2, theta); };
  const auto r = certify_theta_dependence(family, p, default_theta_grid());
  CHECK_FALSE(r.pass);
  CHECK(r.spread < 1e-14);
}

TEST_CASE("linear array over Z_5 with five columns certifies") {
  const auto oa = oracle::linear_oa(5, 5);
  CHECK(check_strength(oa, 2).holds);
  CHECK(is_irredundant(oa, 2));
  CHECK(kernel_dimension(build_system(oa)) == 25 - (5 * 4 + 1));
  const auto start = std::chrono::steady_clock::now();
  const auto w = find_witness(oa);
  REQUIRE(w);
  CHECK_NOTHROW(check_witness_structure(*w, oa));
  EngineOptions opts;
  opts.jobs = 2;
  const auto cert = verify_witness(oa, *w, default_theta_grid(), opts);
  CHECK(cert.pass);
  MESSAGE("Z_5 witness n=" << w->n << " in "
                           << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
                           << " s");
}

TEST_CASE("tampered witnesses are rejected") {
  const auto oa = oracle::example_oa();
  const auto good = reference_witness();

  auto w = good;
  w.kernel.values[0] = 2;
  CHECK_THROWS_AS(check_witness_structure(w, oa), WitnessError);

  w = good;
  w.kernel.values.assign(9, 0);
  CHECK_THROWS_AS(check_witness_structure(w, oa), WitnessError);

  w = good;
  w.perms = PermutationSet({{1, 2, 3}, {1, 2, 3}, {2, 3, 1}});
  CHECK_THROWS_AS(check_witness_structure(w, oa), WitnessError);

  w = good;
  w.y = w.x;
  CHECK_THROWS_AS(check_witness_structure(w, oa), WitnessError);

  w = good;
  w.n = 2;
  CHECK_THROWS_AS(check_witness_structure(w, oa), WitnessError);

  w = good;
  w.marked_row = {0, 1, 1};
  CHECK_THROWS_AS(check_witness_structure(w, oa), WitnessError);

  w = good;
  w.marked_row = {0, 0, 1};
  CHECK_THROWS_AS(verify_witness(oa, w, default_theta_grid()), WitnessError);
}
