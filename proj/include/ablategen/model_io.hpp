#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ablategen/grounded_lm.hpp"

namespace ablategen {

inline constexpr const char* kModelFormat = "ablategen-model";
inline constexpr const char* kModelFormatVersion = "1";

// Self-describing JSON document: format tag and version, vocabulary, order,
// k, lambda, cache mode, and counts as [context-ids, token-id, count]
// triples. Doubles are written in shortest round-trip form so a reloaded
// model scores bit-identically.
nlohmann::json model_to_json(const GroundedLM& model,
                             const nlohmann::json& run_config = nlohmann::json::object());
GroundedLM model_from_json(const nlohmann::json& doc);

void save_model(const std::string& path, const GroundedLM& model,
                const nlohmann::json& run_config = nlohmann::json::object());
GroundedLM load_model(const std::string& path);

}  // namespace ablategen
