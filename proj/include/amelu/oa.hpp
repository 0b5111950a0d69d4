#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "amelu/core.hpp"

namespace amelu {

/// An r x N table of symbols in {0..d-1}. Rows are validated on
/// construction; the index lambda is derived by check_strength, never stored.
class OrthogonalArray {
 public:
  OrthogonalArray(std::vector<Tuple> rows, int local_dim);

  const std::vector<Tuple>& rows() const { return rows_; }
  const Tuple& row(std::size_t i) const { return rows_[i]; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_parties() const { return num_parties_; }
  int local_dim() const { return local_dim_; }

  /// True when no two rows are equal as full N-tuples.
  bool rows_distinct() const;

 private:
  std::vector<Tuple> rows_;
  int num_parties_ = 0;
  int local_dim_ = 0;
};

struct StrengthReport {
  int k = 0;
  bool holds = false;
  std::uint64_t index_lambda = 0;  // r / d^k when holds, otherwise 0
};

/// Reads whitespace-separated rows. A first line "r N d" is taken as a header
/// when the remaining lines agree with it (r rows of width N). Without a
/// header d is max symbol + 1 unless `local_dim` overrides it. Blank lines and
/// lines starting with '#' are skipped.
OrthogonalArray parse_oa(std::istream& in, std::optional<int> local_dim = std::nullopt);
OrthogonalArray parse_oa_text(std::string_view text, std::optional<int> local_dim = std::nullopt);

StrengthReport check_strength(const OrthogonalArray& oa, int k);

/// Every (N-k)-column projection has pairwise distinct rows. Requires 1 <= k < N.
bool is_irredundant(const OrthogonalArray& oa, int k);

/// r > N d - (N - 1): enough rows for a nontrivial symbol-count kernel.
bool theorem_condition(std::int64_t r, std::int64_t num_parties, std::int64_t local_dim);

/// d^floor(N/2) > N d - (N - 1), i.e. theorem_condition for a minimal-support array.
bool minimal_support_condition(int num_parties, int local_dim);

}  // namespace amelu
