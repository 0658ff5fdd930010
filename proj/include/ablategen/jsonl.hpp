#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ablategen/ablation.hpp"
#include "ablategen/datagen.hpp"
#include "ablategen/grounded_lm.hpp"

namespace ablategen {

inline constexpr const char* kFormatVersion = "1";

// Reads one JSON object per non-blank line. Malformed lines raise DataError
// naming the file and line number.
std::vector<nlohmann::json> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& records);
void write_json(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::string& path);

nlohmann::json to_json(const Example& ex);
nlohmann::json to_json(const AblationExample& ex);
nlohmann::json to_json(const RevisionPairRecord& rec);

Example example_from_json(const nlohmann::json& j);
AblationExample ablation_example_from_json(const nlohmann::json& j);
RevisionPairRecord revision_record_from_json(const nlohmann::json& j);

std::vector<Example> load_examples(const std::string& path);
std::vector<AblationExample> load_ablation_examples(const std::string& path);
std::vector<RevisionPairRecord> load_revision_records(const std::string& path);

}  // namespace ablategen
