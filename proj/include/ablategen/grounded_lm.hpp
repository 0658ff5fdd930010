#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ablategen/ngram.hpp"
#include "ablategen/prob_dist.hpp"
#include "ablategen/vocab.hpp"

namespace ablategen {

// One content-transfer instance: grounding document, document context, and
// the next sentence to produce.
struct Example {
  std::string grounding;
  std::string context;
  std::string target;

  bool operator==(const Example&) const = default;
};

struct EncodedExample {
  TokenSeq grounding;
  TokenSeq context;
  TokenSeq target;
};

// Grows `vocab` with every token of grounding, context, and target.
void extend_vocab(Vocab& vocab, std::span<const Example> examples);
EncodedExample encode(const Example& example, const Vocab& vocab);
std::vector<EncodedExample> encode_all(std::span<const Example> examples, const Vocab& vocab);

// Background sequence the n-gram model sees for an example: context, SEP,
// target. Grounding is deliberately absent; it only reaches the model
// through the cache.
TokenSeq background_sequence(const EncodedExample& example);

enum class CacheMode { kGrounding, kNone };

struct LmParams {
  int order = 3;
  double k = 0.1;
  double lambda = 0.5;
};

// Cache language model: mixes a background n-gram distribution with the
// relative frequency of event tokens in the grounding.
//
//   P(t | g, c, prefix) = lambda * cache_g(t) + (1 - lambda) * bg(t | c SEP prefix)
//
// With an empty grounding, lambda = 0, or cache disabled, the output is the
// background distribution itself.
class GroundedLM {
 public:
  GroundedLM(std::shared_ptr<const NGramModel> background, double lambda, CacheMode mode);

  const NGramModel& background() const { return *background_; }
  std::shared_ptr<const NGramModel> background_ptr() const { return background_; }
  const Vocab& vocab() const { return background_->vocab(); }
  double lambda() const { return lambda_; }
  CacheMode cache_mode() const { return mode_; }

  // Same background with the cache switched off: the P(y | c) estimator.
  GroundedLM ungrounded() const { return GroundedLM(background_, lambda_, CacheMode::kNone); }

  // Relative frequency of event tokens in `grounding`; empty when the cache
  // does not apply (disabled, lambda = 0, or no event tokens).
  std::vector<double> cache_distribution(std::span<const TokenId> grounding) const;

  ProbDist next_token_dist(std::span<const TokenId> grounding, std::span<const TokenId> context,
                           std::span<const TokenId> prefix) const;

 private:
  std::shared_ptr<const NGramModel> background_;
  double lambda_;
  CacheMode mode_;
};

// A model bound to one (grounding, context) pair. Repeated next-token
// queries reuse the cache and the conditioning history.
class ConditionedLM {
 public:
  ConditionedLM(const GroundedLM& model, std::span<const TokenId> grounding,
                std::span<const TokenId> context);

  ProbDist next_token_dist(std::span<const TokenId> prefix) const;

 private:
  const GroundedLM* model_;
  std::vector<double> cache_;
  TokenSeq history_;
};

// Fits the background on [context, SEP, target] of every example.
GroundedLM fit_grounded_lm(const Vocab& vocab, std::span<const EncodedExample> corpus,
                           const LmParams& params, CacheMode mode = CacheMode::kGrounding);

// Total log-probability (nats) of `target`, accumulated left to right. With
// include_eos the final EOS step is added. Throws DegenerateProbabilityError
// if any scored token has probability zero.
double sequence_logprob(const GroundedLM& model, std::span<const TokenId> grounding,
                        std::span<const TokenId> context, std::span<const TokenId> target,
                        bool include_eos);

}  // namespace ablategen
