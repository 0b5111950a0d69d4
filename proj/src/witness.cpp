#include "amelu/witness.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "amelu/state.hpp"

namespace amelu {

namespace mp = boost::multiprecision;

SymbolCountTable symbol_count_table(const OrthogonalArray& oa) {
  SymbolCountTable table(static_cast<std::size_t>(oa.num_parties()),
                         std::vector<std::vector<int>>(static_cast<std::size_t>(oa.local_dim())));
  for (int i = 0; i < oa.num_rows(); ++i)
    for (int nu = 0; nu < oa.num_parties(); ++nu) table[nu][oa.row(i)[nu]].push_back(i);
  return table;
}

bool KernelVector::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](std::int64_t v) { return v == 0; });
}

IntMatrix build_system(const OrthogonalArray& oa) {
  if (!oa.rows_distinct()) throw DuplicateRowError("symbol-count system needs distinct rows");
  const int d = oa.local_dim();
  IntMatrix mat = IntMatrix::Zero(oa.num_parties() * d, oa.num_rows());
  for (int i = 0; i < oa.num_rows(); ++i)
    for (int nu = 0; nu < oa.num_parties(); ++nu) mat(nu * d + oa.row(i)[nu], i) = 1;
  return mat;
}

namespace {

struct Echelon {
  std::vector<std::vector<mp::cpp_int>> rows;
  std::vector<int> pivot_cols;
  std::vector<int> free_cols;
};

// Bareiss fraction-free forward elimination; every division is exact.
Echelon bareiss(const IntMatrix& mat) {
  const auto m = static_cast<std::size_t>(mat.rows());
  const auto c = static_cast<std::size_t>(mat.cols());
  Echelon e;
  e.rows.assign(m, std::vector<mp::cpp_int>(c));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < c; ++j) e.rows[i][j] = mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));

  mp::cpp_int prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < c; ++col) {
    std::size_t p = row;
    while (p < m && e.rows[p][col] == 0) ++p;
    if (p == m) {
      e.free_cols.push_back(static_cast<int>(col));
      continue;
    }
    std::swap(e.rows[p], e.rows[row]);
    const mp::cpp_int& pivot = e.rows[row][col];
    for (std::size_t i = row + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < c; ++j) {
        e.rows[i][j] = (pivot * e.rows[i][j] - e.rows[i][col] * e.rows[row][j]) / prev;
      }
      e.rows[i][col] = 0;
    }
    prev = pivot;
    e.pivot_cols.push_back(static_cast<int>(col));
    ++row;
  }
  return e;
}

}  // namespace

int exact_rank(const IntMatrix& mat) { return static_cast<int>(bareiss(mat).pivot_cols.size()); }

int kernel_dimension(const IntMatrix& mat) { return static_cast<int>(mat.cols()) - exact_rank(mat); }

std::optional<KernelVector> integral_kernel(const IntMatrix& mat, int index) {
  if (index < 0) throw ArgumentError("kernel index must be non-negative");
  const Echelon e = bareiss(mat);
  if (index >= static_cast<int>(e.free_cols.size())) return std::nullopt;

  const auto c = static_cast<std::size_t>(mat.cols());
  std::vector<mp::cpp_rational> x(c, 0);
  x[e.free_cols[index]] = 1;
  for (int r = static_cast<int>(e.pivot_cols.size()) - 1; r >= 0; --r) {
    const auto pc = static_cast<std::size_t>(e.pivot_cols[r]);
    mp::cpp_rational acc = 0;
    for (std::size_t j = pc + 1; j < c; ++j) {
      if (e.rows[r][j] != 0) acc += mp::cpp_rational(e.rows[r][j]) * x[j];
    }
    x[pc] = -acc / mp::cpp_rational(e.rows[r][pc]);
  }

  mp::cpp_int lcm = 1;
  for (const auto& v : x) lcm = mp::lcm(lcm, mp::denominator(v));
  std::vector<mp::cpp_int> ints(c);
  mp::cpp_int g = 0;
  for (std::size_t j = 0; j < c; ++j) {
    ints[j] = mp::numerator(x[j]) * (lcm / mp::denominator(x[j]));
    g = mp::gcd(g, ints[j]);
  }
  const auto first = std::find_if(ints.begin(), ints.end(), [](const auto& v) { return v != 0; });
  const mp::cpp_int scale = *first < 0 ? mp::cpp_int(-g) : g;

  KernelVector k;
  k.values.reserve(c);
  for (auto& v : ints) {
    v /= scale;
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
      throw CapacityError("kernel entry does not fit in 64 bits");
    }
    k.values.push_back(v.convert_to<std::int64_t>());
  }
  return k;
}

std::pair<std::vector<Tuple>, std::vector<Tuple>> split_multisets(const KernelVector& k,
                                                                  const OrthogonalArray& oa) {
  if (static_cast<int>(k.values.size()) != oa.num_rows()) {
    throw ArgumentError("kernel length does not match the row count");
  }
  if (k.is_zero()) throw ArgumentError("cannot split the zero kernel vector");
  if (std::accumulate(k.values.begin(), k.values.end(), std::int64_t{0}) != 0) {
    throw ArgumentError("kernel entries do not sum to zero");
  }
  std::vector<Tuple> x, y;
  for (int i = 0; i < oa.num_rows(); ++i) {
    const std::int64_t v = k.values[i];
    for (std::int64_t m = 0; m < v; ++m) x.push_back(oa.row(i));
    for (std::int64_t m = 0; m < -v; ++m) y.push_back(oa.row(i));
  }
  return {std::move(x), std::move(y)};
}

PermutationSet build_permutations(const std::vector<Tuple>& x, const std::vector<Tuple>& y) {
  if (x.size() != y.size()) throw WitnessError("multisets have different cardinality");
  if (x.empty()) throw WitnessError("multisets are empty");
  const std::size_t parties = x.front().size();
  for (const auto& t : x)
    if (t.size() != parties) throw WitnessError("ragged tuple in X");
  for (const auto& t : y)
    if (t.size() != parties) throw WitnessError("ragged tuple in Y");

  const std::size_t n = x.size();
  std::vector<std::vector<int>> perms(parties, std::vector<int>(n));
  for (std::size_t nu = 0; nu < parties; ++nu) {
    std::map<int, std::vector<std::size_t>> x_by_symbol, y_by_symbol;
    for (std::size_t l = 0; l < n; ++l) {
      x_by_symbol[x[l][nu]].push_back(l);
      y_by_symbol[y[l][nu]].push_back(l);
    }
    if (x_by_symbol.size() != y_by_symbol.size()) {
      throw WitnessError("symbol counts differ at party " + std::to_string(nu + 1));
    }
    for (const auto& [symbol, ys] : y_by_symbol) {
      auto it = x_by_symbol.find(symbol);
      if (it == x_by_symbol.end() || it->second.size() != ys.size()) {
        throw WitnessError("symbol " + std::to_string(symbol) + " count differs at party " +
                           std::to_string(nu + 1));
      }
      for (std::size_t i = 0; i < ys.size(); ++i) perms[nu][ys[i]] = static_cast<int>(it->second[i]) + 1;
    }
  }
  return PermutationSet(std::move(perms));
}

std::optional<Witness> find_witness(const OrthogonalArray& oa, int kernel_index) {
  auto kernel = integral_kernel(build_system(oa), kernel_index);
  if (!kernel) return std::nullopt;

  Witness w;
  w.kernel = std::move(*kernel);
  std::tie(w.x, w.y) = split_multisets(w.kernel, oa);
  w.n = static_cast<int>(w.x.size());
  w.perms = build_permutations(w.x, w.y);

  int marked = -1;
  for (int i = 0; i < oa.num_rows(); ++i) {
    const std::int64_t mag = std::abs(w.kernel.values[i]);
    if (mag == 0) continue;
    if (marked < 0) {
      marked = i;
      continue;
    }
    const std::int64_t best = std::abs(w.kernel.values[marked]);
    if (mag > best || (mag == best && oa.row(i) < oa.row(marked))) marked = i;
  }
  w.marked_row = oa.row(marked);
  return w;
}

void check_witness_structure(const Witness& w, const OrthogonalArray& oa) {
  if (static_cast<int>(w.kernel.values.size()) != oa.num_rows()) throw WitnessError("kernel length mismatch");
  if (w.kernel.is_zero()) throw WitnessError("kernel vector is zero");
  const IntMatrix mat = build_system(oa);
  Eigen::Map<const Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>> k(w.kernel.values.data(),
                                                                      static_cast<Eigen::Index>(w.kernel.values.size()));
  if (!(mat * k).isZero()) throw WitnessError("kernel vector violates the symbol-count equations");
  if (k.sum() != 0) throw WitnessError("kernel vector does not sum to zero");

  if (static_cast<int>(w.x.size()) != w.n || static_cast<int>(w.y.size()) != w.n) {
    throw WitnessError("|X| and |Y| must both equal n");
  }
  auto sorted = [](std::vector<Tuple> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(w.x) == sorted(w.y)) throw WitnessError("X and Y are equal as multisets");
  if (w.perms.copies() != w.n || w.perms.num_parties() != oa.num_parties()) {
    throw WitnessError("permutation set has the wrong shape");
  }
  for (int nu = 0; nu < oa.num_parties(); ++nu) {
    std::map<int, int> balance;
    for (const auto& t : w.x) ++balance[t[nu]];
    for (const auto& t : w.y) --balance[t[nu]];
    for (const auto& kv : balance)
      if (kv.second != 0) throw WitnessError("symbol counts differ at party " + std::to_string(nu + 1));
    for (int l = 0; l < w.n; ++l) {
      if (w.y[l][nu] != w.x[w.perms.image(nu, l)][nu]) {
        throw WitnessError("permutation " + std::to_string(nu + 1) + " does not connect X to Y");
      }
    }
  }
  const auto& rows = oa.rows();
  if (std::find(rows.begin(), rows.end(), w.marked_row) == rows.end()) {
    throw WitnessError("marked row is not a row of the array");
  }
  const auto idx = std::find(rows.begin(), rows.end(), w.marked_row) - rows.begin();
  if (w.kernel.values[static_cast<std::size_t>(idx)] == 0) throw WitnessError("marked row has K = 0");
}

std::vector<double> default_theta_grid() {
  return {0.0, std::numbers::pi / 3, std::numbers::pi / 2, std::numbers::pi};
}

CertificationReport verify_witness(const OrthogonalArray& oa, const Witness& w,
                                   const std::vector<double>& theta_grid, const EngineOptions& opts) {
  check_witness_structure(w, oa);
  auto family = [&](double theta) { return from_iroa(oa, PhaseAssignment{{w.marked_row, theta}}); };
  return certify_theta_dependence(family, w.perms, theta_grid, opts);
}

}  // namespace amelu
