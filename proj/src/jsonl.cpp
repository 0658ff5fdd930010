#include "ablategen/jsonl.hpp"

#include <fstream>

#include "ablategen/error.hpp"

namespace ablategen {

using nlohmann::json;

namespace {

std::string field(const json& j, const char* name) {
  if (!j.is_object()) throw DataError("record is not a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw DataError(std::string("record is missing \"") + name + "\"");
  if (!it->is_string()) throw DataError(std::string("field \"") + name + "\" is not a string");
  return it->get<std::string>();
}

template <typename T, typename Convert>
std::vector<T> load_all(const std::string& path, Convert convert) {
  std::vector<T> out;
  const auto records = read_jsonl(path);
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      out.push_back(convert(records[i]));
    } catch (const DataError& e) {
      throw DataError(path + ": record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<json> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": invalid JSON: " + e.what());
    }
  }
  return records;
}

void write_jsonl(const std::string& path, const std::vector<json>& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  for (const auto& r : records) out << r.dump() << '\n';
  if (!out) throw DataError("failed writing '" + path + "'");
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("failed writing '" + path + "'");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
}

json to_json(const Example& ex) {
  return {{"grounding", ex.grounding}, {"context", ex.context}, {"target", ex.target}};
}

json to_json(const AblationExample& ex) {
  return {{"grounding", ex.grounding},
          {"grounding_ablated", ex.grounding_ablated},
          {"context", ex.context},
          {"target", ex.target}};
}

json to_json(const RevisionPairRecord& rec) {
  return {{"context", rec.context},
          {"old_target", rec.old_target},
          {"new_target", rec.new_target},
          {"old_grounding", rec.old_grounding},
          {"new_grounding", rec.new_grounding},
          {"source_urls", rec.source_urls}};
}

Example example_from_json(const json& j) {
  Example ex{field(j, "grounding"), field(j, "context"), field(j, "target")};
  if (ex.target.empty()) throw DataError("example target is empty");
  return ex;
}

AblationExample ablation_example_from_json(const json& j) {
  AblationExample ex{field(j, "grounding"), field(j, "grounding_ablated"), field(j, "context"),
                     field(j, "target")};
  if (ex.target.empty()) throw DataError("ablation example target is empty");
  if (ex.grounding == ex.grounding_ablated) {
    throw DataError("ablation example has identical grounding and ablated grounding");
  }
  return ex;
}

RevisionPairRecord revision_record_from_json(const json& j) {
  RevisionPairRecord rec{field(j, "context"),       field(j, "old_target"),
                         field(j, "new_target"),    field(j, "old_grounding"),
                         field(j, "new_grounding"), {}};
  auto urls = j.find("source_urls");
  if (urls == j.end() || !urls->is_array() || urls->size() != 2) {
    throw DataError("\"source_urls\" must be an array of two URLs");
  }
  for (const auto& u : *urls) {
    if (!u.is_string()) throw DataError("\"source_urls\" entries must be strings");
    rec.source_urls.push_back(u.get<std::string>());
  }
  if (rec.old_target == rec.new_target) throw DataError("revision leaves the target unchanged");
  return rec;
}

std::vector<Example> load_examples(const std::string& path) {
  return load_all<Example>(path, example_from_json);
}

std::vector<AblationExample> load_ablation_examples(const std::string& path) {
  return load_all<AblationExample>(path, ablation_example_from_json);
}

std::vector<RevisionPairRecord> load_revision_records(const std::string& path) {
  return load_all<RevisionPairRecord>(path, revision_record_from_json);
}

}  // namespace ablategen
