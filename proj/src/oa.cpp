#include "amelu/oa.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>
#include <string>

namespace amelu {

std::string to_string(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(t[i]);
  }
  out += ')';
  return out;
}

OrthogonalArray::OrthogonalArray(std::vector<Tuple> rows, int local_dim)
    : rows_(std::move(rows)), local_dim_(local_dim) {
  if (rows_.empty()) throw ParseError("orthogonal array has no rows");
  if (local_dim_ < 1) throw ArgumentError("local dimension must be >= 1");
  num_parties_ = static_cast<int>(rows_.front().size());
  if (num_parties_ < 1) throw ParseError("orthogonal array has empty rows");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (static_cast<int>(rows_[i].size()) != num_parties_) {
      throw ParseError("ragged row " + std::to_string(i + 1) + ": expected " +
                       std::to_string(num_parties_) + " entries, got " +
                       std::to_string(rows_[i].size()));
    }
    for (int s : rows_[i]) {
      if (s < 0 || s >= local_dim_) {
        throw SymbolRangeError("symbol " + std::to_string(s) + " in row " + std::to_string(i + 1) +
                               " outside {0.." + std::to_string(local_dim_ - 1) + "}");
      }
    }
  }
}

bool OrthogonalArray::rows_distinct() const {
  std::set<Tuple> seen(rows_.begin(), rows_.end());
  return seen.size() == rows_.size();
}

namespace {

std::vector<int> parse_line(const std::string& line, std::size_t line_no) {
  std::istringstream ss(line);
  std::vector<int> values;
  std::string tok;
  while (ss >> tok) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || tok.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": '" + tok + "' is not an integer");
    }
    if (v < 0) throw ParseError("line " + std::to_string(line_no) + ": negative symbol " + tok);
    values.push_back(static_cast<int>(v));
  }
  return values;
}

// Packs a projection of `row` onto `cols` into a single integer key.
std::uint64_t project_key(const Tuple& row, const std::vector<int>& cols, int d) {
  std::uint64_t key = 0;
  for (int c : cols) key = key * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(row[c]);
  return key;
}

}  // namespace

OrthogonalArray parse_oa(std::istream& in, std::optional<int> local_dim) {
  std::vector<std::vector<int>> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(parse_line(line, line_no));
  }
  if (lines.empty()) throw ParseError("empty orthogonal array input");

  std::optional<int> header_dim;
  const auto& head = lines.front();
  if (head.size() == 3 && lines.size() > 1) {
    const auto r = static_cast<std::size_t>(head[0]);
    const auto n = static_cast<std::size_t>(head[1]);
    const bool matches =
        r == lines.size() - 1 &&
        std::all_of(lines.begin() + 1, lines.end(), [n](const auto& l) { return l.size() == n; });
    if (matches) {
      header_dim = head[2];
      lines.erase(lines.begin());
    }
  }

  const std::size_t width = lines.front().size();
  int max_symbol = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].size() != width) {
      throw ParseError("ragged rows: row " + std::to_string(i + 1) + " has " +
                       std::to_string(lines[i].size()) + " entries, expected " +
                       std::to_string(width));
    }
    for (int s : lines[i]) max_symbol = std::max(max_symbol, s);
  }
  const int d = local_dim ? *local_dim : header_dim ? *header_dim : max_symbol + 1;
  return OrthogonalArray(std::move(lines), d);
}

OrthogonalArray parse_oa_text(std::string_view text, std::optional<int> local_dim) {
  std::istringstream ss{std::string(text)};
  return parse_oa(ss, local_dim);
}

StrengthReport check_strength(const OrthogonalArray& oa, int k) {
  const int n_parties = oa.num_parties();
  if (k < 1 || k > n_parties) {
    throw ArgumentError("strength k=" + std::to_string(k) + " outside 1.." +
                        std::to_string(n_parties));
  }
  StrengthReport report{k, false, 0};
  const std::uint64_t cells = saturating_pow(static_cast<std::uint64_t>(oa.local_dim()), k);
  const auto r = static_cast<std::uint64_t>(oa.num_rows());
  if (cells > r || r % cells != 0) return report;
  const std::uint64_t lambda = r / cells;

  bool holds = true;
  std::vector<std::uint64_t> counts(cells);
  for_each_combination(n_parties, k, [&](const std::vector<int>& cols) {
    if (!holds) return;
    std::fill(counts.begin(), counts.end(), 0);
    for (const auto& row : oa.rows()) ++counts[project_key(row, cols, oa.local_dim())];
    holds = std::all_of(counts.begin(), counts.end(), [lambda](auto c) { return c == lambda; });
  });
  report.holds = holds;
  report.index_lambda = holds ? lambda : 0;
  return report;
}

bool is_irredundant(const OrthogonalArray& oa, int k) {
  const int n_parties = oa.num_parties();
  if (k < 1 || k >= n_parties) {
    throw ArgumentError("irredundancy k=" + std::to_string(k) + " outside 1.." +
                        std::to_string(n_parties - 1));
  }
  bool distinct = true;
  for_each_combination(n_parties, n_parties - k, [&](const std::vector<int>& cols) {
    if (!distinct) return;
    std::set<Tuple> seen;
    for (const auto& row : oa.rows()) {
      Tuple proj;
      proj.reserve(cols.size());
      for (int c : cols) proj.push_back(row[c]);
      if (!seen.insert(std::move(proj)).second) {
        distinct = false;
        return;
      }
    }
  });
  return distinct;
}

bool theorem_condition(std::int64_t r, std::int64_t num_parties, std::int64_t local_dim) {
  return r > num_parties * local_dim - (num_parties - 1);
}

bool minimal_support_condition(int num_parties, int local_dim) {
  if (num_parties < 2 || local_dim < 2) {
    throw ArgumentError("minimal support condition needs N >= 2 and d >= 2");
  }
  const std::uint64_t support =
      saturating_pow(static_cast<std::uint64_t>(local_dim), num_parties / 2);
  const std::int64_t bound =
      static_cast<std::int64_t>(num_parties) * local_dim - (num_parties - 1);
  return support > static_cast<std::uint64_t>(bound);
}

}  // namespace amelu
