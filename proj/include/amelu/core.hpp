#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace amelu {

/// A computational-basis label |j_1, ..., j_N>, symbols in {0..d-1}.
using Tuple = std::vector<int>;

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using cdouble = std::complex<double>;
using VectorXc = CVector<double>;
using MatrixXc = CMatrix<double>;

/// Default ceiling on dense amplitude vectors (complex entries).
inline constexpr std::uint64_t kDefaultDenseStateCap = 10'000'000;

// Error hierarchy. Every library failure derives from Error so callers can
// catch once at the boundary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : Error {
  using Error::Error;
};
struct SymbolRangeError : Error {
  using Error::Error;
};
struct ArgumentError : Error {
  using Error::Error;
};
struct DuplicateRowError : Error {
  using Error::Error;
};
struct KeyError : Error {
  using Error::Error;
};
struct CatalogError : Error {
  using Error::Error;
};
struct CapacityError : Error {
  using Error::Error;
};
struct WitnessError : Error {
  using Error::Error;
};

/// base^exp, saturating at UINT64_MAX instead of wrapping.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result *= base;
  }
  return result;
}

/// Visits every k-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::string to_string(const Tuple& t);

}  // namespace amelu
