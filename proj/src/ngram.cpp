#include "ablategen/ngram.hpp"

#include <algorithm>
#include <numeric>

#include "ablategen/error.hpp"

namespace ablategen {

double ProbDist::sum() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

NGramModel::NGramModel(Vocab vocab, int order, double k)
    : vocab_(std::move(vocab)), order_(order), k_(k) {
  if (order_ < 1) throw ValidationError("n-gram order must be >= 1");
  if (!(k_ > 0.0)) throw ValidationError("add-k constant must be > 0");
}

NGramModel NGramModel::from_counts(Vocab vocab, int order, double k,
                                   std::span<const CountEntry> counts) {
  NGramModel model(std::move(vocab), order, k);
  for (const auto& e : counts) {
    if (e.context.size() != static_cast<std::size_t>(order - 1)) {
      throw DataError("count context length does not match model order");
    }
    for (TokenId id : e.context) {
      if (!model.vocab_.contains(id)) throw DataError("count context id outside vocabulary");
    }
    if (!model.vocab_.contains(e.token) || !Vocab::is_event(e.token)) {
      throw DataError("count target is not an event token");
    }
    if (e.count == 0) continue;
    model.increment(e.context, e.token, e.count);
  }
  return model;
}

NGramModel::Context NGramModel::context_of(std::span<const TokenId> history) const {
  const auto width = static_cast<std::size_t>(order_ - 1);
  Context ctx(width, Vocab::kBos);
  const std::size_t take = std::min(width, history.size());
  std::copy(history.end() - static_cast<std::ptrdiff_t>(take), history.end(),
            ctx.end() - static_cast<std::ptrdiff_t>(take));
  return ctx;
}

void NGramModel::increment(const Context& context, TokenId token, std::uint64_t by) {
  auto& row = rows_[context];
  row.counts[token] += by;
  row.total += by;
}

ProbDist NGramModel::next_token_dist(std::span<const TokenId> history) const {
  const std::size_t v = vocab_.size();
  const double events = static_cast<double>(vocab_.event_size());
  std::vector<double> probs(v, 0.0);

  auto it = rows_.find(context_of(history));
  const double total = it == rows_.end() ? 0.0 : static_cast<double>(it->second.total);
  const double denom = total + k_ * events;
  const double floor = k_ / denom;
  for (std::size_t i = 0; i < v; ++i) {
    if (Vocab::is_event(static_cast<TokenId>(i))) probs[i] = floor;
  }
  if (it != rows_.end()) {
    for (const auto& [tok, c] : it->second.counts) {
      probs[static_cast<std::size_t>(tok)] = (static_cast<double>(c) + k_) / denom;
    }
  }
  return ProbDist(std::move(probs));
}

std::uint64_t NGramModel::count(std::span<const TokenId> context, TokenId token) const {
  auto it = rows_.find(Context(context.begin(), context.end()));
  if (it == rows_.end()) return 0;
  auto jt = it->second.counts.find(token);
  return jt == it->second.counts.end() ? 0 : jt->second;
}

std::uint64_t NGramModel::context_total(std::span<const TokenId> context) const {
  auto it = rows_.find(Context(context.begin(), context.end()));
  return it == rows_.end() ? 0 : it->second.total;
}

std::vector<NGramModel::CountEntry> NGramModel::count_entries() const {
  std::vector<CountEntry> out;
  for (const auto& [ctx, row] : rows_) {
    for (const auto& [tok, c] : row.counts) out.push_back({ctx, tok, c});
  }
  return out;
}

NGramModel train_ngram(const Vocab& vocab, std::span<const TokenSeq> corpus, int order,
                       double k) {
  NGramModel model(vocab, order, k);
  const auto width = static_cast<std::size_t>(order - 1);
  for (const auto& seq : corpus) {
    TokenSeq padded(width, Vocab::kBos);
    for (TokenId id : seq) {
      if (!vocab.contains(id)) throw DataError("training token id outside vocabulary");
      padded.push_back(id);
    }
    padded.push_back(Vocab::kEos);
    for (std::size_t i = width; i < padded.size(); ++i) {
      if (!Vocab::is_event(padded[i])) continue;
      NGramModel::Context ctx(padded.begin() + static_cast<std::ptrdiff_t>(i - width),
                              padded.begin() + static_cast<std::ptrdiff_t>(i));
      model.increment(ctx, padded[i], 1);
    }
  }
  return model;
}

}  // namespace ablategen
