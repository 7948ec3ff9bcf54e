#pragma once

#include <string>

#include <json.hpp>

#include "mgids/belief.hpp"
#include "mgids/general_sum.hpp"
#include "mgids/zero_sum.hpp"

namespace mgids {

// JSON codecs for environments and beliefs. Kernels and rewards nest as
// h -> s -> a -> b (-> s'); doubles round-trip bit-exactly through the
// shortest-representation encoder.
nlohmann::json to_json(const ZeroSumGame& env);
ZeroSumGame zero_sum_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GeneralSumGame& env);
GeneralSumGame general_sum_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Belief& belief);
Belief belief_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GsBelief& belief);
GsBelief gs_belief_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace mgids
