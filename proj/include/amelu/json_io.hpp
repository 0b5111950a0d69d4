#pragma once

#include <json.hpp>

#include "amelu/entanglement.hpp"
#include "amelu/invariant.hpp"
#include "amelu/state.hpp"
#include "amelu/witness.hpp"

namespace amelu {

using json = nlohmann::json;

// State: {"num_parties", "local_dim", "terms": [{"idx": [...], "re", "im"}]}
json state_to_json(const SparseState& s);
/// Rejects duplicate idx keys; non-unit norm only when allowed.
SparseState state_from_json(const json& j, bool allow_unnormalized = false);

// Report: {"k", "pass", "max_deviation", "worst_subset"}
json report_to_json(const UniformityReport& r);
UniformityReport report_from_json(const json& j);

json invariant_to_json(const InvariantValue& v);

/// A witness plus its certification outcome, as written by `witness find`.
struct WitnessDocument {
  Witness witness;
  bool certified = false;
  std::vector<double> theta_values;
  std::vector<cdouble> invariant_values;
};

// Witness: {"n", "K": [{"row", "value"}], "X", "Y", "perms", "marked_row",
//           "certified", "theta_values", "invariant_values": [{"re", "im"}]}
json witness_to_json(const WitnessDocument& doc, const OrthogonalArray& oa);
WitnessDocument witness_from_json(const json& j);

}  // namespace amelu
