#include "ablategen/decoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ablategen/error.hpp"

namespace ablategen {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr TokenId kStructural[] = {Vocab::kBos, Vocab::kSep};

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
}

// Softmax over finite-or-(-inf) logits; -inf entries come out as exact zeros.
ProbDist softmax(std::vector<double> logits) {
  double hi = kNegInf;
  for (double x : logits) hi = std::max(hi, x);
  if (hi == kNegInf) throw DegenerateProbabilityError("every token has zero probability");
  double z = 0.0;
  for (double& x : logits) {
    x = x == kNegInf ? 0.0 : std::exp(x - hi);
    z += x;
  }
  for (double& x : logits) x /= z;
  return ProbDist(std::move(logits));
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

}  // namespace

void DecodingPolicy::validate() const {
  if (kind != PolicyKind::kBase) check_alpha(alpha);
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kBase:
      return "base";
    case PolicyKind::kPmiInterp:
      return "pmi_interp";
    case PolicyKind::kPmiAdd:
      return "pmi_add";
  }
  return "base";
}

PolicyKind parse_policy_kind(const std::string& name) {
  if (name == "base") return PolicyKind::kBase;
  if (name == "pmi_interp") return PolicyKind::kPmiInterp;
  if (name == "pmi_add") return PolicyKind::kPmiAdd;
  throw ValidationError("unknown policy '" + name + "' (expected base, pmi_interp, pmi_add)");
}

void SamplerConfig::validate() const {
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ValidationError("top_p must lie in (0, 1]");
  if (max_tokens < 1) throw ValidationError("max_tokens must be >= 1");
}

std::vector<double> pmi_score(const ProbDist& p_grounded, const ProbDist& p_ungrounded,
                              std::span<const TokenId> excluded) {
  if (p_grounded.size() != p_ungrounded.size()) {
    throw ValidationError("pmi_score: distributions differ in vocabulary size");
  }
  std::vector<double> s(p_grounded.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = std::log(std::max(p_grounded[i], kProbFloor)) -
           std::log(std::max(p_ungrounded[i], kProbFloor));
  }
  for (TokenId id : excluded) {
    if (id >= 0 && static_cast<std::size_t>(id) < s.size()) s[static_cast<std::size_t>(id)] = kNegInf;
  }
  return s;
}

ProbDist pmi_interpolate(const ProbDist& p_grounded, std::span<const double> s_pmi,
                         double alpha) {
  check_alpha(alpha);
  if (s_pmi.size() != p_grounded.size()) throw ValidationError("pmi_interpolate: size mismatch");
  std::vector<double> logits(p_grounded.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (s_pmi[i] == kNegInf) {
      logits[i] = kNegInf;
      continue;
    }
    // Terms with a zero weight are skipped so that 0 * -inf never appears.
    double x = 0.0;
    if (alpha < 1.0) x += (1.0 - alpha) * safe_log(p_grounded[i]);
    if (alpha > 0.0 && x != kNegInf) x += alpha * s_pmi[i];
    logits[i] = x;
  }
  return softmax(std::move(logits));
}

ProbDist pmi_add(const ProbDist& p_grounded, std::span<const double> s_pmi, double alpha) {
  check_alpha(alpha);
  if (s_pmi.size() != p_grounded.size()) throw ValidationError("pmi_add: size mismatch");
  std::vector<double> logits(p_grounded.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (s_pmi[i] == kNegInf) {
      logits[i] = kNegInf;
      continue;
    }
    double x = safe_log(p_grounded[i]);
    if (alpha > 0.0 && x != kNegInf) x += alpha * s_pmi[i];
    logits[i] = x;
  }
  return softmax(std::move(logits));
}

ProbDist top_p_filter(const ProbDist& dist, double top_p) {
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ValidationError("top_p must lie in (0, 1]");
  if (top_p == 1.0) return dist;

  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });

  std::vector<double> out(dist.size(), 0.0);
  double mass = 0.0;
  for (std::size_t idx : order) {
    if (dist[idx] <= 0.0) break;
    out[idx] = dist[idx];
    mass += dist[idx];
    if (mass >= top_p) break;
  }
  if (!(mass > 0.0)) throw DegenerateProbabilityError("top_p_filter: empty distribution");
  for (double& x : out) x /= mass;
  return ProbDist(std::move(out));
}

PolicyScorer::PolicyScorer(const GroundedLM& grounded, const GroundedLM* ungrounded,
                           const DecodingPolicy& policy, std::span<const TokenId> grounding,
                           std::span<const TokenId> context)
    : policy_(policy), grounded_(grounded, grounding, context) {
  policy_.validate();
  if (policy_.needs_ungrounded()) {
    if (ungrounded == nullptr) {
      throw ValidationError("policy '" + to_string(policy_.kind) + "' needs an ungrounded model");
    }
    if (!(ungrounded->vocab() == grounded.vocab())) {
      throw ValidationError("grounded and ungrounded models use different vocabularies");
    }
    ungrounded_.emplace(*ungrounded, grounding, context);
  }
}

ProbDist PolicyScorer::next_token_dist(std::span<const TokenId> prefix) const {
  ProbDist p = grounded_.next_token_dist(prefix);
  if (!ungrounded_) return p;
  const auto s = pmi_score(p, ungrounded_->next_token_dist(prefix), kStructural);
  return policy_.kind == PolicyKind::kPmiInterp ? pmi_interpolate(p, s, policy_.alpha)
                                                : pmi_add(p, s, policy_.alpha);
}

ProbDist policy_dist(const GroundedLM& grounded, const GroundedLM& ungrounded,
                     const DecodingPolicy& policy, std::span<const TokenId> grounding,
                     std::span<const TokenId> context, std::span<const TokenId> prefix) {
  return PolicyScorer(grounded, &ungrounded, policy, grounding, context).next_token_dist(prefix);
}

double policy_logprob(const GroundedLM& grounded, const GroundedLM* ungrounded,
                      const DecodingPolicy& policy, std::span<const TokenId> grounding,
                      std::span<const TokenId> context, std::span<const TokenId> target,
                      bool include_eos) {
  if (target.empty()) throw ValidationError("cannot score an empty target");
  PolicyScorer scorer(grounded, ungrounded, policy, grounding, context);
  double total = 0.0;
  const std::size_t steps = target.size() + (include_eos ? 1 : 0);
  for (std::size_t i = 0; i < steps; ++i) {
    const TokenId next = i < target.size() ? target[i] : Vocab::kEos;
    if (!grounded.vocab().contains(next)) throw ValidationError("target id outside vocabulary");
    const double p = scorer.next_token_dist(target.first(i))[static_cast<std::size_t>(next)];
    if (!(p > 0.0)) {
      throw DegenerateProbabilityError("token '" + grounded.vocab().token(next) +
                                       "' at position " + std::to_string(i) +
                                       " has probability zero under the policy");
    }
    total += std::log(p);
  }
  return total;
}

bool is_sentence_end(const Vocab& vocab, TokenId id) {
  if (!vocab.contains(id)) return false;
  const auto& t = vocab.token(id);
  return t == "." || t == "!" || t == "?";
}

TokenSeq generate(const GroundedLM& grounded, const GroundedLM* ungrounded,
                  const DecodingPolicy& policy, const SamplerConfig& sampler,
                  std::span<const TokenId> grounding, std::span<const TokenId> context) {
  sampler.validate();
  PolicyScorer scorer(grounded, ungrounded, policy, grounding, context);
  std::mt19937_64 rng(sampler.seed);
  TokenSeq out;
  for (int step = 0; step < sampler.max_tokens; ++step) {
    const ProbDist dist = top_p_filter(scorer.next_token_dist(out), sampler.top_p);
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;

    TokenId picked = -1;
    double cum = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i] <= 0.0) continue;
      picked = static_cast<TokenId>(i);
      cum += dist[i];
      if (u < cum) break;
    }
    if (picked < 0 || picked == Vocab::kEos) break;
    out.push_back(picked);
    if (sampler.stop == StopRule::kSentence && is_sentence_end(grounded.vocab(), picked)) break;
  }
  return out;
}

}  // namespace ablategen
