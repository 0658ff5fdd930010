#include "ablategen/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ablategen/error.hpp"

namespace ablategen {

LossWindow::LossWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ValidationError("loss window capacity must be >= 1");
}

void LossWindow::push(double value) {
  if (values_.size() == capacity_) values_.pop_front();
  values_.push_back(value);
}

double nearest_rank_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw DataError("quantile of an empty window");
  const auto n = values.size();
  // The small slack absorbs products such as 0.8 * 10 landing a hair above 8.
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sorted.end());
  return sorted[rank - 1];
}

double window_threshold(const LossWindow& window, double keep_c) {
  std::vector<double> v(window.values().begin(), window.values().end());
  return nearest_rank_quantile(v, keep_c);
}

void TruncationConfig::validate() const {
  if (!(keep_c > 0.0 && keep_c <= 1.0)) throw ValidationError("keep_c must lie in (0, 1]");
  if (!(keep_c_gnd > 0.0 && keep_c_gnd <= 1.0)) {
    throw ValidationError("keep_c_gnd must lie in (0, 1]");
  }
  if (window_capacity == 0) throw ValidationError("window capacity must be >= 1");
  if (hotstart_passes < 1) throw ValidationError("hotstart passes must be >= 1");
}

double example_loss(const GroundedLM& model, const EncodedExample& ex) {
  const double lp = sequence_logprob(model, ex.grounding, ex.context, ex.target, true);
  return -lp / static_cast<double>(ex.target.size() + 1);
}

double grounding_gap(const GroundedLM& grounded, const GroundedLM& ungrounded,
                     const EncodedExample& ex) {
  return sequence_logprob(grounded, ex.grounding, ex.context, ex.target, true) -
         sequence_logprob(ungrounded, ex.grounding, ex.context, ex.target, true);
}

double TruncationResult::steady_state_kept_fraction() const {
  std::size_t n = 0;
  std::size_t k = 0;
  for (const auto& d : decisions) {
    if (d.warmup) continue;
    ++n;
    if (d.kept) ++k;
  }
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(k) / static_cast<double>(n);
}

TruncationResult train_loss_truncated(const Vocab& vocab,
                                      std::span<const EncodedExample> corpus,
                                      const TruncationConfig& config, const LmParams& params) {
  config.validate();
  if (corpus.empty()) throw DataError("loss truncation needs a non-empty corpus");

  // A counting model reaches the same fit on every pass, so hotstart_passes
  // only matters for the neural original.
  const GroundedLM hotstart = fit_grounded_lm(vocab, corpus, params);
  const GroundedLM hotstart_ungrounded = hotstart.ungrounded();
  const bool grounded = config.mode == TruncationMode::kGrounded;

  LossWindow losses(config.window_capacity);
  LossWindow gaps(config.window_capacity);
  std::vector<TruncationDecision> decisions;
  decisions.reserve(corpus.size());
  std::vector<EncodedExample> kept;

  for (const auto& ex : corpus) {
    TruncationDecision d;
    d.loss = example_loss(hotstart, ex);
    losses.push(d.loss);
    d.loss_threshold = window_threshold(losses, config.keep_c);
    bool keep = d.loss <= d.loss_threshold;
    if (grounded) {
      d.gap = grounding_gap(hotstart, hotstart_ungrounded, ex);
      gaps.push(*d.gap);
      d.gap_threshold = window_threshold(gaps, 1.0 - config.keep_c_gnd);
      keep = keep && *d.gap >= *d.gap_threshold;
    }
    d.warmup = losses.size() < config.warmup;
    d.kept = d.warmup || keep;
    if (d.kept) kept.push_back(ex);
    decisions.push_back(d);
  }

  if (kept.empty()) throw EmptyKeepSetError("loss truncation kept zero examples");
  GroundedLM final_model = fit_grounded_lm(vocab, kept, params);
  TruncationResult result{hotstart, std::move(final_model), std::move(decisions), kept.size(),
                          corpus.size() - kept.size()};
  return result;
}

}  // namespace ablategen
