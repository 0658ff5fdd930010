#include "ablategen/model_io.hpp"

#include <fstream>

#include "ablategen/error.hpp"

namespace ablategen {

using nlohmann::json;

json model_to_json(const GroundedLM& model, const json& run_config) {
  const auto& bg = model.background();
  json counts = json::array();
  for (const auto& e : bg.count_entries()) counts.push_back(json::array({e.context, e.token, e.count}));
  return {
      {"format", kModelFormat},
      {"format_version", kModelFormatVersion},
      {"vocab", bg.vocab().tokens()},
      {"order", bg.order()},
      {"k", bg.k()},
      {"lambda", model.lambda()},
      {"cache_mode", model.cache_mode() == CacheMode::kGrounding ? "grounding" : "none"},
      {"counts", std::move(counts)},
      {"run_config", run_config},
  };
}

GroundedLM model_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw DataError("not an ablategen model file");
    }
    const auto version = doc.at("format_version").get<std::string>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model format version '" + version + "'");
    }
    Vocab vocab(doc.at("vocab").get<std::vector<std::string>>());
    const int order = doc.at("order").get<int>();
    const double k = doc.at("k").get<double>();
    const double lambda = doc.at("lambda").get<double>();
    const auto mode_name = doc.at("cache_mode").get<std::string>();
    CacheMode mode;
    if (mode_name == "grounding") {
      mode = CacheMode::kGrounding;
    } else if (mode_name == "none") {
      mode = CacheMode::kNone;
    } else {
      throw DataError("unknown cache mode '" + mode_name + "'");
    }

    std::vector<NGramModel::CountEntry> entries;
    for (const auto& triple : doc.at("counts")) {
      if (!triple.is_array() || triple.size() != 3) throw DataError("malformed count triple");
      entries.push_back({triple[0].get<std::vector<TokenId>>(), triple[1].get<TokenId>(),
                         triple[2].get<std::uint64_t>()});
    }
    auto bg = std::make_shared<const NGramModel>(
        NGramModel::from_counts(std::move(vocab), order, k, entries));
    return GroundedLM(std::move(bg), lambda, mode);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  } catch (const ValidationError& e) {
    throw DataError(std::string("invalid model parameters: ") + e.what());
  }
}

void save_model(const std::string& path, const GroundedLM& model, const json& run_config) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << model_to_json(model, run_config).dump() << '\n';
  if (!out) throw DataError("failed writing '" + path + "'");
}

GroundedLM load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("model file '" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace ablategen
