#include "ablategen/grounded_lm.hpp"

#include <cmath>
#include <string>

#include "ablategen/error.hpp"

namespace ablategen {

void extend_vocab(Vocab& vocab, std::span<const Example> examples) {
  for (const auto& ex : examples) {
    tokenize(ex.grounding, VocabMode::kBuild, vocab);
    tokenize(ex.context, VocabMode::kBuild, vocab);
    tokenize(ex.target, VocabMode::kBuild, vocab);
  }
}

EncodedExample encode(const Example& example, const Vocab& vocab) {
  return {tokenize(example.grounding, vocab), tokenize(example.context, vocab),
          tokenize(example.target, vocab)};
}

std::vector<EncodedExample> encode_all(std::span<const Example> examples, const Vocab& vocab) {
  std::vector<EncodedExample> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(encode(ex, vocab));
  return out;
}

TokenSeq background_sequence(const EncodedExample& example) {
  TokenSeq seq(example.context);
  seq.push_back(Vocab::kSep);
  seq.insert(seq.end(), example.target.begin(), example.target.end());
  return seq;
}

GroundedLM::GroundedLM(std::shared_ptr<const NGramModel> background, double lambda,
                       CacheMode mode)
    : background_(std::move(background)), lambda_(lambda), mode_(mode) {
  if (!background_) throw ValidationError("grounded model needs a background model");
  if (!(lambda_ >= 0.0 && lambda_ <= 1.0)) throw ValidationError("lambda must lie in [0, 1]");
}

std::vector<double> GroundedLM::cache_distribution(std::span<const TokenId> grounding) const {
  if (mode_ == CacheMode::kNone || lambda_ == 0.0) return {};
  std::vector<double> cache(vocab().size(), 0.0);
  std::size_t n = 0;
  for (TokenId id : grounding) {
    if (!vocab().contains(id) || !Vocab::is_event(id)) continue;
    cache[static_cast<std::size_t>(id)] += 1.0;
    ++n;
  }
  if (n == 0) return {};
  for (double& c : cache) c /= static_cast<double>(n);
  return cache;
}

namespace {

ProbDist mix(const std::vector<double>& cache, double lambda, ProbDist background) {
  if (cache.empty()) return background;
  auto& p = background.mutable_values();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = lambda * cache[i] + (1.0 - lambda) * p[i];
  return background;
}

}  // namespace

ProbDist GroundedLM::next_token_dist(std::span<const TokenId> grounding,
                                     std::span<const TokenId> context,
                                     std::span<const TokenId> prefix) const {
  return ConditionedLM(*this, grounding, context).next_token_dist(prefix);
}

ConditionedLM::ConditionedLM(const GroundedLM& model, std::span<const TokenId> grounding,
                             std::span<const TokenId> context)
    : model_(&model), cache_(model.cache_distribution(grounding)) {
  history_.assign(context.begin(), context.end());
  history_.push_back(Vocab::kSep);
}

ProbDist ConditionedLM::next_token_dist(std::span<const TokenId> prefix) const {
  const auto width = static_cast<std::size_t>(model_->background().order() - 1);
  TokenSeq tail;
  if (prefix.size() >= width) {
    tail.assign(prefix.end() - static_cast<std::ptrdiff_t>(width), prefix.end());
  } else {
    const std::size_t from_history = std::min(width - prefix.size(), history_.size());
    tail.assign(history_.end() - static_cast<std::ptrdiff_t>(from_history), history_.end());
    tail.insert(tail.end(), prefix.begin(), prefix.end());
  }
  return mix(cache_, model_->lambda(), model_->background().next_token_dist(tail));
}

GroundedLM fit_grounded_lm(const Vocab& vocab, std::span<const EncodedExample> corpus,
                           const LmParams& params, CacheMode mode) {
  std::vector<TokenSeq> seqs;
  seqs.reserve(corpus.size());
  for (const auto& ex : corpus) seqs.push_back(background_sequence(ex));
  auto background =
      std::make_shared<const NGramModel>(train_ngram(vocab, seqs, params.order, params.k));
  return GroundedLM(std::move(background), params.lambda, mode);
}

double sequence_logprob(const GroundedLM& model, std::span<const TokenId> grounding,
                        std::span<const TokenId> context, std::span<const TokenId> target,
                        bool include_eos) {
  if (target.empty()) throw ValidationError("cannot score an empty target");
  ConditionedLM conditioned(model, grounding, context);
  double total = 0.0;
  const std::size_t steps = target.size() + (include_eos ? 1 : 0);
  for (std::size_t i = 0; i < steps; ++i) {
    const TokenId next = i < target.size() ? target[i] : Vocab::kEos;
    if (!model.vocab().contains(next)) throw ValidationError("target id outside vocabulary");
    const double p =
        conditioned.next_token_dist(target.first(i))[static_cast<std::size_t>(next)];
    if (!(p > 0.0)) {
      throw DegenerateProbabilityError("token '" + model.vocab().token(next) + "' at position " +
                                       std::to_string(i) + " has probability zero");
    }
    total += std::log(p);
  }
  return total;
}

}  // namespace ablategen
