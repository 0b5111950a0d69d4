#include "amelu/json_io.hpp"

#include <set>

namespace amelu {

namespace {

// nlohmann throws its own exception types; surface them as ParseError.
template <typename Fn>
auto parsing(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

}  // namespace

json state_to_json(const SparseState& s) {
  json terms = json::array();
  for (const auto& [t, a] : s.amplitudes()) terms.push_back({{"idx", t}, {"re", a.real()}, {"im", a.imag()}});
  return {{"num_parties", s.num_parties()}, {"local_dim", s.local_dim()}, {"terms", std::move(terms)}};
}

SparseState state_from_json(const json& j, bool allow_unnormalized) {
  return parsing("state", [&] {
    const int n = j.at("num_parties").get<int>();
    const int d = j.at("local_dim").get<int>();
    SparseState::Amplitudes amps;
    for (const auto& term : j.at("terms")) {
      Tuple idx = term.at("idx").get<Tuple>();
      const cdouble a(term.at("re").get<double>(), term.at("im").get<double>());
      if (!amps.emplace(idx, a).second) throw ParseError("duplicate state term " + to_string(idx));
    }
    return SparseState(n, d, std::move(amps),
                       allow_unnormalized ? NormPolicy::allow_any : NormPolicy::require_unit);
  });
}

json report_to_json(const UniformityReport& r) {
  return {{"k", r.k}, {"pass", r.pass}, {"max_deviation", r.max_deviation}, {"worst_subset", r.worst_subset}};
}

UniformityReport report_from_json(const json& j) {
  return parsing("report", [&] {
    return UniformityReport{j.at("k").get<int>(), j.at("pass").get<bool>(), j.at("max_deviation").get<double>(),
                            j.at("worst_subset").get<std::vector<int>>()};
  });
}

json invariant_to_json(const InvariantValue& v) {
  return {{"re", v.value.real()},
          {"im", v.value.imag()},
          {"engine", std::string(to_string(v.engine))},
          {"term_count", v.term_count}};
}

json witness_to_json(const WitnessDocument& doc, const OrthogonalArray& oa) {
  const Witness& w = doc.witness;
  json k = json::array();
  for (int i = 0; i < oa.num_rows(); ++i) k.push_back({{"row", oa.row(i)}, {"value", w.kernel.values[i]}});
  json values = json::array();
  for (const auto& v : doc.invariant_values) values.push_back({{"re", v.real()}, {"im", v.imag()}});
  return {{"n", w.n},
          {"K", std::move(k)},
          {"X", w.x},
          {"Y", w.y},
          {"perms", w.perms.perms()},
          {"marked_row", w.marked_row},
          {"certified", doc.certified},
          {"theta_values", doc.theta_values},
          {"invariant_values", std::move(values)}};
}

WitnessDocument witness_from_json(const json& j) {
  return parsing("witness", [&] {
    WitnessDocument doc;
    Witness& w = doc.witness;
    w.n = j.at("n").get<int>();
    for (const auto& entry : j.at("K")) w.kernel.values.push_back(entry.at("value").get<std::int64_t>());
    w.x = j.at("X").get<std::vector<Tuple>>();
    w.y = j.at("Y").get<std::vector<Tuple>>();
    try {
      w.perms = PermutationSet(j.at("perms").get<std::vector<std::vector<int>>>());
    } catch (const ArgumentError& e) {
      throw ParseError(e.what());
    }
    w.marked_row = j.at("marked_row").get<Tuple>();
    doc.certified = j.at("certified").get<bool>();
    doc.theta_values = j.at("theta_values").get<std::vector<double>>();
    for (const auto& v : j.at("invariant_values")) {
      doc.invariant_values.emplace_back(v.at("re").get<double>(), v.at("im").get<double>());
    }
    return doc;
  });
}

}  // namespace amelu
