#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ablategen/grounded_lm.hpp"
#include "ablategen/prob_dist.hpp"

namespace ablategen {

enum class PolicyKind { kBase, kPmiInterp, kPmiAdd };

struct DecodingPolicy {
  PolicyKind kind = PolicyKind::kBase;
  double alpha = 0.0;  // ignored for kBase

  static DecodingPolicy base() { return {}; }
  static DecodingPolicy pmi_interp(double alpha) { return {PolicyKind::kPmiInterp, alpha}; }
  static DecodingPolicy pmi_add(double alpha) { return {PolicyKind::kPmiAdd, alpha}; }

  bool needs_ungrounded() const { return kind != PolicyKind::kBase; }
  void validate() const;
};

std::string to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& name);

enum class StopRule { kSentence, kEosOnly };

struct SamplerConfig {
  double top_p = 0.5;
  int max_tokens = 40;
  std::uint64_t seed = 0;
  StopRule stop = StopRule::kSentence;

  void validate() const;
};

// Floor applied to both distributions before the log ratio.
inline constexpr double kProbFloor = 1e-12;

// Pointwise mutual information of every token with the grounding:
// log(p_grounded / p_ungrounded). Ids in `excluded` (normally BOS and SEP)
// receive -infinity and are dropped by the transforms below.
std::vector<double> pmi_score(const ProbDist& p_grounded, const ProbDist& p_ungrounded,
                              std::span<const TokenId> excluded = {});

// softmax((1 - alpha) log p + alpha s_pmi): a product of experts between the
// grounded model and a softmax over PMI.
ProbDist pmi_interpolate(const ProbDist& p_grounded, std::span<const double> s_pmi,
                         double alpha);

// softmax(log p + alpha s_pmi): rewards tokens that share information with
// the grounding.
ProbDist pmi_add(const ProbDist& p_grounded, std::span<const double> s_pmi, double alpha);

// Nucleus filter. Tokens are ranked by probability (ties by ascending id);
// the shortest prefix reaching top_p survives and is renormalized.
ProbDist top_p_filter(const ProbDist& dist, double top_p);

// Next-token distribution under a decoding policy, bound to one
// (grounding, context) pair. The same distribution drives sampling and the
// scoring of targets under the policy.
class PolicyScorer {
 public:
  // `ungrounded` may be null for the base policy.
  PolicyScorer(const GroundedLM& grounded, const GroundedLM* ungrounded,
               const DecodingPolicy& policy, std::span<const TokenId> grounding,
               std::span<const TokenId> context);

  ProbDist next_token_dist(std::span<const TokenId> prefix) const;

 private:
  DecodingPolicy policy_;
  ConditionedLM grounded_;
  std::optional<ConditionedLM> ungrounded_;
};

ProbDist policy_dist(const GroundedLM& grounded, const GroundedLM& ungrounded,
                     const DecodingPolicy& policy, std::span<const TokenId> grounding,
                     std::span<const TokenId> context, std::span<const TokenId> prefix);

// Total log-probability (nats) of `target` under the policy distribution.
double policy_logprob(const GroundedLM& grounded, const GroundedLM* ungrounded,
                      const DecodingPolicy& policy, std::span<const TokenId> grounding,
                      std::span<const TokenId> context, std::span<const TokenId> target,
                      bool include_eos);

bool is_sentence_end(const Vocab& vocab, TokenId id);

// Samples tokens from top_p_filter(policy distribution) until EOS, a
// sentence-final token (when stop = kSentence), or max_tokens. The
// sentence-final token is kept; EOS is not. The PRNG is std::mt19937_64
// seeded with sampler.seed, and each draw uses the top 53 bits of one
// output as a uniform value in [0, 1).
TokenSeq generate(const GroundedLM& grounded, const GroundedLM* ungrounded,
                  const DecodingPolicy& policy, const SamplerConfig& sampler,
                  std::span<const TokenId> grounding, std::span<const TokenId> context);

}  // namespace ablategen
