#pragma once
// JSON serialization of solver tree statistics: field names mirror the
// SolveTree members one-to-one.

#include <json.hpp>

#include "multistep/multisolve.hpp"

namespace multistep {

inline nlohmann::json to_json(const SolveTree& t) {
  return nlohmann::json{
      {"q", t.q},
      {"nodes", t.nodes},
      {"internal_nodes", t.internal_nodes},
      {"leaves", t.leaves},
      {"predicted_tame", t.predicted_tame},
      {"predicted_wild", t.predicted_wild},
      {"computed_tame", t.computed_tame},
      {"computed_wild", t.computed_wild},
      {"nodes_at_depth", t.nodes_at_depth},
      {"computed_tame_at_depth", t.computed_tame_at_depth},
      {"computed_wild_at_depth", t.computed_wild_at_depth},
      {"predicted_wild_at_depth", t.predicted_wild_at_depth},
      {"tame_gb_seconds", t.tame_gb_seconds},
      {"wild_gb_seconds", t.wild_gb_seconds},
      {"early_termination", t.early_termination},
  };
}

}  // namespace multistep
