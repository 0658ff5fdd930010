#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "ablategen/grounded_lm.hpp"

namespace ablategen {

// Ring buffer of the most recent per-example losses.
class LossWindow {
 public:
  explicit LossWindow(std::size_t capacity = 10000);

  void push(double value);
  std::size_t size() const { return values_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return values_.empty(); }
  const std::deque<double>& values() const { return values_; }

 private:
  std::size_t capacity_;
  std::deque<double> values_;
};

// Nearest-rank quantile: the ceil(q * n)-th smallest value (rank clamped to
// [1, n]). Throws DataError on an empty input.
double nearest_rank_quantile(std::span<const double> values, double q);

double window_threshold(const LossWindow& window, double keep_c);

enum class TruncationMode { kBasic, kGrounded };

struct TruncationConfig {
  double keep_c = 0.8;
  double keep_c_gnd = 0.8;
  std::size_t window_capacity = 10000;
  int hotstart_passes = 1;
  // Examples are kept unconditionally until the window holds this many losses.
  std::size_t warmup = 100;
  TruncationMode mode = TruncationMode::kBasic;

  void validate() const;
};

// Mean per-token negative log-likelihood (nats/token) of the target,
// EOS included.
double example_loss(const GroundedLM& model, const EncodedExample& ex);

// log P(y | c, g) - log P(y | c), totals with EOS.
double grounding_gap(const GroundedLM& grounded, const GroundedLM& ungrounded,
                     const EncodedExample& ex);

struct TruncationDecision {
  double loss = 0.0;
  double loss_threshold = 0.0;
  std::optional<double> gap;
  std::optional<double> gap_threshold;
  bool warmup = false;
  bool kept = false;
};

struct TruncationResult {
  GroundedLM hotstart;
  GroundedLM model;
  std::vector<TruncationDecision> decisions;  // one per corpus example, in order
  std::size_t kept = 0;
  std::size_t dropped = 0;

  // Kept fraction over the examples decided after warm-up; NaN if none.
  double steady_state_kept_fraction() const;
};

// Two-phase loss truncation. The hotstart model is fit on the full corpus
// and frozen; the corpus is then streamed in order, each example's loss
// (and in grounded mode its grounding gap) is pushed into a sliding window,
// and the example survives iff its loss is at most the keep_c quantile of
// the window (and its gap is at least the 1 - keep_c_gnd quantile). The
// final model is refit on the survivors. Throws EmptyKeepSetError if
// nothing survives.
TruncationResult train_loss_truncated(const Vocab& vocab,
                                      std::span<const EncodedExample> corpus,
                                      const TruncationConfig& config, const LmParams& params);

}  // namespace ablategen
