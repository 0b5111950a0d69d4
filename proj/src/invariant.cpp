#include "amelu/invariant.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace amelu {

PermutationSet::PermutationSet(std::vector<std::vector<int>> perms) : perms_(std::move(perms)) {
  if (perms_.empty()) throw ArgumentError("permutation set needs at least one party");
  copies_ = static_cast<int>(perms_.front().size());
  if (copies_ < 1) throw ArgumentError("permutation set needs at least one copy");
  for (std::size_t j = 0; j < perms_.size(); ++j) {
    const auto& perm = perms_[j];
    if (static_cast<int>(perm.size()) != copies_) {
      throw ArgumentError("permutation " + std::to_string(j + 1) + " has " +
                          std::to_string(perm.size()) + " entries, expected " +
                          std::to_string(copies_));
    }
    std::vector<bool> seen(perm.size(), false);
    for (int v : perm) {
      if (v < 1 || v > copies_ || seen[v - 1]) {
        throw ArgumentError("permutation " + std::to_string(j + 1) + " is not a bijection on 1.." +
                            std::to_string(copies_));
      }
      seen[v - 1] = true;
    }
  }
}

PermutationSet PermutationSet::identity(int copies, int num_parties) {
  if (copies < 1 || num_parties < 1) throw ArgumentError("identity needs n >= 1 and N >= 1");
  std::vector<int> id(static_cast<std::size_t>(copies));
  for (int l = 0; l < copies; ++l) id[l] = l + 1;
  return PermutationSet(std::vector<std::vector<int>>(static_cast<std::size_t>(num_parties), id));
}

PermutationSet PermutationSet::inverse() const {
  auto inv = perms_;
  for (std::size_t j = 0; j < perms_.size(); ++j)
    for (int l = 0; l < copies_; ++l) inv[j][perms_[j][l] - 1] = l + 1;
  return PermutationSet(std::move(inv));
}

PermutationSet PermutationSet::conjugated(std::span<const int> tau) const {
  if (static_cast<int>(tau.size()) != copies_) throw ArgumentError("relabeling has wrong length");
  std::vector<int> tau_inv(tau.size());
  std::vector<bool> seen(tau.size(), false);
  for (std::size_t l = 0; l < tau.size(); ++l) {
    if (tau[l] < 1 || tau[l] > copies_ || seen[tau[l] - 1]) throw ArgumentError("relabeling is not a permutation");
    seen[tau[l] - 1] = true;
    tau_inv[tau[l] - 1] = static_cast<int>(l) + 1;
  }
  auto out = perms_;
  for (std::size_t j = 0; j < perms_.size(); ++j)
    for (int l = 0; l < copies_; ++l) out[j][l] = tau[perms_[j][tau_inv[l] - 1] - 1];
  return PermutationSet(std::move(out));
}

PermutationSet parse_permutations(std::istream& in) {
  long n = 0, parties = 0;
  if (!(in >> n >> parties)) throw ParseError("permutation file must start with 'n N'");
  if (n < 1 || parties < 1) throw ParseError("permutation header needs n >= 1 and N >= 1");
  std::vector<std::vector<int>> perms(static_cast<std::size_t>(parties),
                                      std::vector<int>(static_cast<std::size_t>(n)));
  for (auto& perm : perms) {
    for (auto& v : perm) {
      if (!(in >> v)) throw ParseError("permutation file truncated");
    }
  }
  std::string extra;
  if (in >> extra) throw ParseError("trailing data after permutations: '" + extra + "'");
  try {
    return PermutationSet(std::move(perms));
  } catch (const ArgumentError& e) {
    throw ParseError(e.what());
  }
}

PermutationSet parse_permutations_text(std::string_view text) {
  std::istringstream ss{std::string(text)};
  return parse_permutations(ss);
}

std::string format_permutations(const PermutationSet& p) {
  std::ostringstream out;
  out << p.copies() << ' ' << p.num_parties() << '\n';
  for (const auto& perm : p.perms()) {
    for (std::size_t l = 0; l < perm.size(); ++l) out << (l ? " " : "") << perm[l];
    out << '\n';
  }
  return out.str();
}

std::string_view to_string(Engine e) { return e == Engine::dense ? "dense" : "sparse"; }

namespace {

void require_parties(int state_parties, const PermutationSet& p) {
  if (state_parties != p.num_parties()) {
    throw ArgumentError("state has " + std::to_string(state_parties) + " parties but permutations cover " +
                        std::to_string(p.num_parties()));
  }
}

}  // namespace

InvariantValue invariant_dense(const VectorXc& psi, int num_parties, int local_dim, const PermutationSet& p,
                               std::uint64_t cap) {
  require_parties(num_parties, p);
  const auto d = static_cast<std::uint64_t>(local_dim);
  const std::uint64_t basis = saturating_pow(d, static_cast<std::uint64_t>(num_parties));
  if (static_cast<std::uint64_t>(psi.size()) != basis) throw ArgumentError("dense state length is not d^N");
  const int n = p.copies();
  const std::uint64_t total = saturating_pow(basis, static_cast<std::uint64_t>(n));
  if (total > cap) {
    throw CapacityError("dense invariant needs " + std::to_string(total) + " assignments, cap is " +
                        std::to_string(cap));
  }

  // digits(k, j): symbol of party j in basis index k; stride(j) = d^(N-1-j).
  Eigen::MatrixXi digits(static_cast<Eigen::Index>(basis), num_parties);
  std::vector<std::uint64_t> stride(static_cast<std::size_t>(num_parties));
  for (int j = num_parties - 1, s = 1; j >= 0; --j, s *= local_dim) stride[j] = static_cast<std::uint64_t>(s);
  for (std::uint64_t k = 0; k < basis; ++k)
    for (int j = 0; j < num_parties; ++j)
      digits(static_cast<Eigen::Index>(k), j) = static_cast<int>((k / stride[j]) % d);

  std::vector<std::uint64_t> ket(static_cast<std::size_t>(n), 0);
  cdouble sum(0);
  std::uint64_t nonzero = 0;
  for (std::uint64_t step = 0; step < total; ++step) {
    cdouble term(1);
    for (int l = 0; l < n; ++l) term *= psi(static_cast<Eigen::Index>(ket[l]));
    for (int l = 0; l < n; ++l) {
      std::uint64_t bra = 0;
      for (int j = 0; j < num_parties; ++j)
        bra += static_cast<std::uint64_t>(digits(static_cast<Eigen::Index>(ket[p.image(j, l)]), j)) * stride[j];
      term *= std::conj(psi(static_cast<Eigen::Index>(bra)));
    }
    if (term != cdouble(0)) ++nonzero;
    sum += term;
    for (int l = n - 1; l >= 0; --l) {
      if (++ket[l] < basis) break;
      ket[l] = 0;
    }
  }
  return {sum, nonzero, Engine::dense};
}

namespace {

// Immutable search structure shared by all workers.
struct SparsePlan {
  int parties = 0;
  int copies = 0;
  int local_dim = 0;
  std::vector<Tuple> rows;
  std::vector<cdouble> amps;
  std::unordered_map<std::uint64_t, int> row_of_key;
  // masks[j * d + s]: bitset of rows with symbol s at party j.
  std::vector<std::vector<std::uint64_t>> masks;
  std::size_t words = 0;
  std::vector<int> order;                         // copy assigned at each depth
  std::vector<std::vector<int>> completes;        // bras fully determined at depth
  std::vector<std::vector<int>> partial;          // bras touched but still open at depth
  std::vector<std::vector<std::vector<int>>> known;  // parties of partial[depth][i] already fixed
  const PermutationSet* perms = nullptr;

  std::uint64_t key(const Tuple& t) const {
    std::uint64_t k = 0;
    for (int s : t) k = k * static_cast<std::uint64_t>(local_dim) + static_cast<std::uint64_t>(s);
    return k;
  }
};

SparsePlan make_plan(const SparseState& s, const PermutationSet& p) {
  SparsePlan plan;
  plan.parties = s.num_parties();
  plan.copies = p.copies();
  plan.local_dim = s.local_dim();
  plan.perms = &p;
  if (s.dense_size() == std::numeric_limits<std::uint64_t>::max()) {
    throw CapacityError("basis labels do not fit a 64-bit key");
  }
  for (const auto& [t, a] : s.amplitudes()) {
    plan.row_of_key.emplace(plan.key(t), static_cast<int>(plan.rows.size()));
    plan.rows.push_back(t);
    plan.amps.push_back(a);
  }
  const std::size_t r = plan.rows.size();
  plan.words = (r + 63) / 64;
  plan.masks.assign(static_cast<std::size_t>(plan.parties * plan.local_dim),
                    std::vector<std::uint64_t>(plan.words, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (int j = 0; j < plan.parties; ++j)
      plan.masks[static_cast<std::size_t>(j * plan.local_dim + plan.rows[i][j])][i / 64] |= 1ULL << (i % 64);

  // Greedy copy order: next copy completes the most bras, then touches the
  // most open bras, then lowest index.
  const int n = plan.copies;
  std::vector<bool> assigned(static_cast<std::size_t>(n), false);
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  auto sources_assigned = [&](int bra, int extra) {
    for (int j = 0; j < plan.parties; ++j) {
      const int src = p.image(j, bra);
      if (!assigned[src] && src != extra) return false;
    }
    return true;
  };
  auto touches = [&](int bra, int c) {
    for (int j = 0; j < plan.parties; ++j)
      if (p.image(j, bra) == c) return true;
    return false;
  };
  for (int depth = 0; depth < n; ++depth) {
    int best = -1, best_complete = -1, best_touch = -1;
    for (int c = 0; c < n; ++c) {
      if (assigned[c]) continue;
      int complete = 0, touch = 0;
      for (int b = 0; b < n; ++b) {
        if (done[b]) continue;
        if (sources_assigned(b, c)) ++complete;
        else if (touches(b, c)) ++touch;
      }
      if (complete > best_complete || (complete == best_complete && touch > best_touch)) {
        best = c;
        best_complete = complete;
        best_touch = touch;
      }
    }
    plan.order.push_back(best);
    assigned[best] = true;
    std::vector<int> completes, partial;
    std::vector<std::vector<int>> known;
    for (int b = 0; b < n; ++b) {
      if (done[b]) continue;
      if (sources_assigned(b, -1)) {
        completes.push_back(b);
        done[b] = true;
      } else if (touches(b, best)) {
        std::vector<int> fixed;
        for (int j = 0; j < plan.parties; ++j)
          if (assigned[p.image(j, b)]) fixed.push_back(j);
        partial.push_back(b);
        known.push_back(std::move(fixed));
      }
    }
    plan.completes.push_back(std::move(completes));
    plan.partial.push_back(std::move(partial));
    plan.known.push_back(std::move(known));
  }
  return plan;
}

struct SparseWorker {
  const SparsePlan& plan;
  std::vector<int> row_of_copy;
  std::vector<std::uint64_t> scratch;
  cdouble sum{0};
  std::uint64_t terms = 0;

  explicit SparseWorker(const SparsePlan& pl)
      : plan(pl), row_of_copy(static_cast<std::size_t>(pl.copies), -1), scratch(pl.words) {}

  int symbol(int bra, int party) const {
    return plan.rows[row_of_copy[plan.perms->image(party, bra)]][party];
  }

  // Multiplies in the bras closed at `depth`; false when one leaves the support
  // or an open bra can no longer match any support row.
  bool close_bras(int depth, cdouble& product) {
    for (int b : plan.completes[depth]) {
      std::uint64_t k = 0;
      for (int j = 0; j < plan.parties; ++j)
        k = k * static_cast<std::uint64_t>(plan.local_dim) + static_cast<std::uint64_t>(symbol(b, j));
      auto it = plan.row_of_key.find(k);
      if (it == plan.row_of_key.end()) return false;
      product *= std::conj(plan.amps[it->second]);
    }
    const auto& partial = plan.partial[depth];
    for (std::size_t i = 0; i < partial.size(); ++i) {
      const auto& fixed = plan.known[depth][i];
      std::fill(scratch.begin(), scratch.end(), ~0ULL);
      bool alive = false;
      for (int j : fixed) {
        const auto& m = plan.masks[static_cast<std::size_t>(j * plan.local_dim + symbol(partial[i], j))];
        alive = false;
        for (std::size_t w = 0; w < scratch.size(); ++w) {
          scratch[w] &= m[w];
          alive |= scratch[w] != 0;
        }
        if (!alive) return false;
      }
    }
    return true;
  }

  void descend(int depth, cdouble product) {
    if (depth == plan.copies) {
      sum += product;
      ++terms;
      return;
    }
    const int copy = plan.order[depth];
    for (std::size_t row = 0; row < plan.rows.size(); ++row) {
      row_of_copy[copy] = static_cast<int>(row);
      cdouble next = product * plan.amps[row];
      if (close_bras(depth, next)) descend(depth + 1, next);
    }
    row_of_copy[copy] = -1;
  }

  void run_branch(std::size_t row) {
    const int copy = plan.order[0];
    row_of_copy[copy] = static_cast<int>(row);
    cdouble product = plan.amps[row];
    if (close_bras(0, product)) descend(1, product);
    row_of_copy[copy] = -1;
  }
};

}  // namespace

InvariantValue invariant_sparse(const SparseState& s, const PermutationSet& p, unsigned jobs) {
  require_parties(s.num_parties(), p);
  const SparsePlan plan = make_plan(s, p);
  const std::size_t branches = plan.rows.size();
  std::vector<cdouble> partial_sums(branches, cdouble(0));
  std::vector<std::uint64_t> partial_terms(branches, 0);

  auto work = [&](std::size_t first, std::size_t step) {
    SparseWorker worker(plan);
    for (std::size_t b = first; b < branches; b += step) {
      worker.sum = 0;
      worker.terms = 0;
      worker.run_branch(b);
      partial_sums[b] = worker.sum;
      partial_terms[b] = worker.terms;
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(branches, 1));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  // Reduce in branch order so the result does not depend on `jobs`.
  InvariantValue out{cdouble(0), 0, Engine::sparse};
  for (std::size_t b = 0; b < branches; ++b) {
    out.value += partial_sums[b];
    out.term_count += partial_terms[b];
  }
  return out;
}

InvariantValue invariant(const SparseState& s, const PermutationSet& p, const EngineOptions& opts) {
  require_parties(s.num_parties(), p);
  const auto n = static_cast<std::uint64_t>(p.copies());
  const std::uint64_t sparse_cost = saturating_pow(s.support_size(), n);
  const std::uint64_t dense_cost = saturating_pow(s.dense_size(), n);
  const bool sparse_ok = sparse_cost <= opts.sparse_cap;
  const bool dense_ok = dense_cost <= opts.dense_cap && s.dense_size() <= kDefaultDenseStateCap;
  const bool prefer_sparse = sparse_cost < dense_cost;
  if ((prefer_sparse && sparse_ok) || (!dense_ok && sparse_ok)) return invariant_sparse(s, p, opts.jobs);
  if (dense_ok) return invariant_dense(s.to_dense(), s.num_parties(), s.local_dim(), p, opts.dense_cap);
  throw CapacityError("both engines exceed their caps (sparse " + std::to_string(sparse_cost) +
                      " assignments, dense " + std::to_string(dense_cost) + ")");
}

PermutationSet purity_perms(std::span<const int> subset, int num_parties) {
  if (num_parties < 2) throw ArgumentError("purity pattern needs N >= 2");
  if (subset.empty() || static_cast<int>(subset.size()) >= num_parties) {
    throw ArgumentError("purity subset must be non-empty and proper");
  }
  std::vector<std::vector<int>> perms(static_cast<std::size_t>(num_parties), std::vector<int>{1, 2});
  std::vector<bool> seen(static_cast<std::size_t>(num_parties), false);
  for (int party : subset) {
    if (party < 1 || party > num_parties || seen[party - 1]) throw ArgumentError("invalid purity subset");
    seen[party - 1] = true;
    perms[party - 1] = {2, 1};
  }
  return PermutationSet(std::move(perms));
}

FactorizationReport factorization_check(const SparseState& s1, const SparseState& s2, const PermutationSet& p,
                                        const EngineOptions& opts) {
  if (s1.num_parties() != s2.num_parties()) throw ArgumentError("factorization needs equal party counts");
  FactorizationReport report;
  report.composite = invariant(compose(s1, s2), p, opts).value;
  report.product = invariant(s1, p, opts).value * invariant(s2, p, opts).value;
  report.difference = std::abs(report.composite - report.product);
  report.pass = report.difference <= kFactorizationTol;
  return report;
}

}  // namespace amelu
