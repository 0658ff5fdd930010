#include "ablategen/ablation.hpp"


#include "ablategen/error.hpp"

namespace ablategen {

using nlohmann::json;

std::vector<double> verbose_margin_grid() {
  return {0.0, std::log(10.0), std::log(100.0), std::log(1000.0)};
}

namespace {

double parse_real(const std::string& text, const std::string& original) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw ValidationError("cannot parse margin '" + original + "'");
  }
  return value;
}

}  // namespace

double parse_margin(const std::string& spec) {
  double nats = 0.0;
  if (spec.rfind("ln:", 0) == 0) {
    nats = parse_real(spec.substr(3), spec);
  } else if (spec.rfind("log10:", 0) == 0) {
    nats = parse_real(spec.substr(6), spec) * std::log(10.0);
  } else {
    nats = parse_real(spec, spec);
  }
  if (nats < 0.0) throw ValidationError("margin '" + spec + "' is negative");
  return nats;
}

ScoredPair score_pair(const GroundedLM& grounded, const GroundedLM* ungrounded,
                      const DecodingPolicy& policy, const AblationExample& ex,
                      bool include_eos) {
  const Vocab& vocab = grounded.vocab();
  const TokenSeq g = tokenize(ex.grounding, vocab);
  const TokenSeq g_ablated = tokenize(ex.grounding_ablated, vocab);
  const TokenSeq c = tokenize(ex.context, vocab);
  const TokenSeq y = tokenize(ex.target, vocab);
  if (y.empty()) throw DataError("ablation example has an empty target");
  return {policy_logprob(grounded, ungrounded, policy, g, c, y, include_eos),
          policy_logprob(grounded, ungrounded, policy, g_ablated, c, y, include_eos)};
}

double accuracy(std::span<const ScoredPair> pairs) {
  if (pairs.empty()) throw DataError("accuracy of an empty pair set");
  std::size_t wins = 0;
  for (const auto& p : pairs) {
    if (p.logp_g > p.logp_g_ablated) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(pairs.size());
}

double margin_accuracy(std::span<const ScoredPair> pairs, double margin) {
  if (pairs.empty()) throw DataError("margin accuracy of an empty pair set");
  if (!(margin >= 0.0)) throw ValidationError("margin must be >= 0");
  std::size_t wins = 0;
  for (const auto& p : pairs) {
    if (p.logp_g > margin + p.logp_g_ablated) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(pairs.size());
}

AblationReport evaluate(const GroundedLM& grounded, const GroundedLM* ungrounded,
                        const DecodingPolicy& policy, std::span<const AblationExample> dataset,
                        const EvaluateOptions& options) {
  if (dataset.empty()) throw DataError("ablation dataset is empty");
  for (double m : options.margins) {
    if (!(m >= 0.0)) throw ValidationError("margin must be >= 0");
  }
  std::vector<ScoredPair> pairs;
  pairs.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    try {
      pairs.push_back(score_pair(grounded, ungrounded, policy, dataset[i], options.include_eos));
    } catch (const ValidationError&) {
      throw;
    } catch (const DataError& e) {
      throw DataError("example " + std::to_string(i) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("example " + std::to_string(i) + ": " + e.what());
    }
  }
  AblationReport report;
  report.n = pairs.size();
  report.accuracy = accuracy(pairs);
  for (double m : options.margins) report.margin_acc.push_back({m, margin_accuracy(pairs, m)});
  if (options.keep_pairs) report.pairs = std::move(pairs);
  return report;
}

json report_to_json(const AblationReport& report, bool include_pairs) {
  json margins = json::array();
  for (const auto& m : report.margin_acc) {
    margins.push_back({{"margin_nats", m.margin_nats}, {"value", m.value}});
  }
  json doc = {{"n", report.n}, {"accuracy", report.accuracy}, {"margin_acc", std::move(margins)}};
  if (include_pairs) {
    json pairs = json::array();
    for (const auto& p : report.pairs) {
      pairs.push_back({{"logp_g", p.logp_g}, {"logp_g_ablated", p.logp_g_ablated}});
    }
    doc["pairs"] = std::move(pairs);
  }
  return doc;
}

AblationReport report_from_json(const json& doc) {
  try {
    AblationReport report;
    report.n = doc.at("n").get<std::size_t>();
    report.accuracy = doc.at("accuracy").get<double>();
    for (const auto& m : doc.at("margin_acc")) {
      report.margin_acc.push_back({m.at("margin_nats").get<double>(), m.at("value").get<double>()});
    }
    if (doc.contains("pairs")) {
      for (const auto& p : doc.at("pairs")) {
        report.pairs.push_back({p.at("logp_g").get<double>(), p.at("logp_g_ablated").get<double>()});
      }
    }
    return report;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed ablation report: ") + e.what());
  }
}

}  // namespace ablategen
