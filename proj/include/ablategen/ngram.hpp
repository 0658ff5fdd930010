#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ablategen/prob_dist.hpp"
#include "ablategen/vocab.hpp"

namespace ablategen {

// Add-k smoothed n-gram model over the event tokens of a fixed vocabulary:
//
//   P(t | ctx) = (count(ctx, t) + k) / (total(ctx) + k * |V_event|)
//
// BOS and SEP get exactly zero mass. Immutable once built.
class NGramModel {
 public:
  using Context = std::vector<TokenId>;

  struct CountEntry {
    Context context;
    TokenId token = 0;
    std::uint64_t count = 0;
  };

  // Empty model: every context falls back to the uniform distribution.
  NGramModel(Vocab vocab, int order, double k);

  // Rebuilds a model from stored counts (used by deserialization).
  static NGramModel from_counts(Vocab vocab, int order, double k,
                                std::span<const CountEntry> counts);

  int order() const { return order_; }
  double k() const { return k_; }
  const Vocab& vocab() const { return vocab_; }

  // Distribution of the next token given everything seen so far. Only the
  // last order-1 ids of `history` matter; shorter histories are left-padded
  // with BOS.
  ProbDist next_token_dist(std::span<const TokenId> history) const;

  std::uint64_t count(std::span<const TokenId> context, TokenId token) const;
  std::uint64_t context_total(std::span<const TokenId> context) const;

  // All nonzero counts in (context, token) order.
  std::vector<CountEntry> count_entries() const;

 private:
  friend NGramModel train_ngram(const Vocab&, std::span<const TokenSeq>, int, double);

  struct Row {
    std::map<TokenId, std::uint64_t> counts;
    std::uint64_t total = 0;
  };

  Context context_of(std::span<const TokenId> history) const;
  void increment(const Context& context, TokenId token, std::uint64_t by);

  Vocab vocab_;
  int order_;
  double k_;
  std::map<Context, Row> rows_;
};

// Pads every sequence with order-1 BOS markers and one trailing EOS, then
// counts every (context, next) pair whose next token is an event token.
NGramModel train_ngram(const Vocab& vocab, std::span<const TokenSeq> corpus, int order,
                       double k);

}  // namespace ablategen
