#include "ablategen/lexical.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "ablategen/error.hpp"

namespace ablategen {

namespace {

using NGram = std::vector<TokenId>;
using NGramCounts = std::map<NGram, std::size_t>;

NGramCounts count_ngrams(const TokenSeq& seq, int n) {
  NGramCounts counts;
  const auto width = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + width <= seq.size(); ++i) {
    ++counts[NGram(seq.begin() + static_cast<std::ptrdiff_t>(i),
                   seq.begin() + static_cast<std::ptrdiff_t>(i + width))];
  }
  return counts;
}

void check_pairs(std::span<const EvalPair> pairs, int max_n) {
  if (pairs.empty()) throw DataError("lexical metrics need at least one pair");
  if (max_n < 1) throw ValidationError("max_n must be >= 1");
  for (const auto& p : pairs) {
    if (p.reference.empty()) throw DataError("lexical metrics need non-empty references");
  }
}

}  // namespace

double bleu(std::span<const EvalPair> pairs, const BleuOptions& options) {
  check_pairs(pairs, options.max_n);
  const auto orders = static_cast<std::size_t>(options.max_n);
  std::vector<double> matched(orders, 0.0);
  std::vector<double> total(orders, 0.0);
  double cand_len = 0.0;
  double ref_len = 0.0;

  for (const auto& p : pairs) {
    cand_len += static_cast<double>(p.candidate.size());
    ref_len += static_cast<double>(p.reference.size());
    for (std::size_t n = 1; n <= orders; ++n) {
      const auto cand = count_ngrams(p.candidate, static_cast<int>(n));
      const auto ref = count_ngrams(p.reference, static_cast<int>(n));
      for (const auto& [gram, c] : cand) {
        total[n - 1] += static_cast<double>(c);
        auto it = ref.find(gram);
        if (it != ref.end()) matched[n - 1] += static_cast<double>(std::min(c, it->second));
      }
    }
  }
  if (cand_len == 0.0) return 0.0;

  double log_sum = 0.0;
  for (std::size_t n = 0; n < orders; ++n) {
    double precision = total[n] > 0.0 ? matched[n] / total[n] : 0.0;
    if (precision == 0.0) {
      if (!options.smooth) return 0.0;
      precision = 1e-9;
    }
    log_sum += std::log(precision);
  }
  const double bp = cand_len < ref_len ? std::exp(1.0 - ref_len / cand_len) : 1.0;
  return bp * std::exp(log_sum / static_cast<double>(orders));
}

double nist(std::span<const EvalPair> pairs, int max_n) {
  check_pairs(pairs, max_n);
  const auto orders = static_cast<std::size_t>(max_n);

  // Reference-side counts for every order up to max_n; order 0 is the
  // total reference length.
  std::vector<NGramCounts> ref_counts(orders + 1);
  double ref_len = 0.0;
  double cand_len = 0.0;
  for (const auto& p : pairs) {
    ref_len += static_cast<double>(p.reference.size());
    cand_len += static_cast<double>(p.candidate.size());
    for (std::size_t n = 1; n <= orders; ++n) {
      for (const auto& [gram, c] : count_ngrams(p.reference, static_cast<int>(n))) {
        ref_counts[n][gram] += c;
      }
    }
  }
  auto info = [&](const NGram& gram) {
    const double full = static_cast<double>(ref_counts[gram.size()].at(gram));
    const double prefix =
        gram.size() == 1
            ? ref_len
            : static_cast<double>(ref_counts[gram.size() - 1].at(NGram(gram.begin(), gram.end() - 1)));
    return std::log2(prefix / full);
  };

  double score = 0.0;
  for (std::size_t n = 1; n <= orders; ++n) {
    double info_sum = 0.0;
    double cand_total = 0.0;
    for (const auto& p : pairs) {
      const auto cand = count_ngrams(p.candidate, static_cast<int>(n));
      const auto ref = count_ngrams(p.reference, static_cast<int>(n));
      for (const auto& [gram, c] : cand) {
        cand_total += static_cast<double>(c);
        auto it = ref.find(gram);
        if (it != ref.end()) info_sum += static_cast<double>(std::min(c, it->second)) * info(gram);
      }
    }
    if (cand_total > 0.0) score += info_sum / cand_total;
  }

  const double beta = std::log(0.5) / std::pow(std::log(2.0 / 3.0), 2);
  const double ratio = std::min(cand_len / ref_len, 1.0);
  const double brevity = ratio > 0.0 ? std::exp(beta * std::pow(std::log(ratio), 2)) : 0.0;
  return score * brevity;
}

}  // namespace ablategen
