#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "coxfine/belief_structure.hpp"

namespace coxfine {

// Domain files are JSON objects:
//
//   {
//     "worlds":  ["w1", "w2", ...],          ordered; index order is identity
//     "f":       {"w1": "3", "w2": "1/2"},   rational strings, never JSON numbers
//     "fprime":  {...},                      optional, defaults to f
//     "trigger": ["w2"],                     optional, defaults to []
//     "delta":   "auto" | "<rational>"       optional, defaults to "auto"
//   }
//
// "auto" records the minimum gap of the Pr value set; delta is informational,
// the perturbation is whatever fprime says.
BeliefStructure parse_structure(std::string_view text);
std::string serialize_structure(const BeliefStructure& structure);

BeliefStructure load_structure(const std::filesystem::path& path);

}  // namespace coxfine
