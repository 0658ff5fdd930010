#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ablategen/decoding.hpp"
#include "ablategen/grounded_lm.hpp"

namespace ablategen {

// (g, g', c, y): y is entailed by g; g' carries strictly less of the
// information y needs.
struct AblationExample {
  std::string grounding;
  std::string grounding_ablated;
  std::string context;
  std::string target;

  bool operator==(const AblationExample&) const = default;
};

struct ScoredPair {
  double logp_g = 0.0;
  double logp_g_ablated = 0.0;

  double gap() const { return logp_g - logp_g_ablated; }
  bool operator==(const ScoredPair&) const = default;
};

struct MarginAccuracy {
  double margin_nats = 0.0;
  double value = 0.0;

  bool operator==(const MarginAccuracy&) const = default;
};

struct AblationReport {
  std::size_t n = 0;
  double accuracy = 0.0;
  std::vector<MarginAccuracy> margin_acc;
  std::vector<ScoredPair> pairs;

  bool operator==(const AblationReport&) const = default;
};

inline const double kSyntheticMargin = std::log(100.0);
inline const double kNaturalMargin = std::log(1000.0);

// {0, ln 10, ln 100, ln 1000}
std::vector<double> verbose_margin_grid();

// Accepts "ln:<x>" (nats), "log10:<x>" (x decades, i.e. x * ln 10 nats), or
// a plain real in nats. Negative margins are rejected.
double parse_margin(const std::string& spec);

// Scores y under g and under g' with the policy distribution.
ScoredPair score_pair(const GroundedLM& grounded, const GroundedLM* ungrounded,
                      const DecodingPolicy& policy, const AblationExample& ex,
                      bool include_eos = true);

// Fraction of pairs with logp_g > logp_g_ablated. Ties fail.
double accuracy(std::span<const ScoredPair> pairs);

// Fraction of pairs with logp_g > margin + logp_g_ablated.
double margin_accuracy(std::span<const ScoredPair> pairs, double margin);

struct EvaluateOptions {
  std::vector<double> margins{kSyntheticMargin};
  bool include_eos = true;
  bool keep_pairs = true;
};

// Scores every example (failures are rethrown with the example index) and
// aggregates accuracy plus margin-accuracy at each requested margin.
AblationReport evaluate(const GroundedLM& grounded, const GroundedLM* ungrounded,
                        const DecodingPolicy& policy, std::span<const AblationExample> dataset,
                        const EvaluateOptions& options = {});

nlohmann::json report_to_json(const AblationReport& report, bool include_pairs = true);
AblationReport report_from_json(const nlohmann::json& doc);

}  // namespace ablategen
