#pragma once

#include <span>

#include "ablategen/vocab.hpp"

namespace ablategen {

// One candidate and its single reference.
struct EvalPair {
  TokenSeq candidate;
  TokenSeq reference;
};

struct BleuOptions {
  int max_n = 4;
  // Replace zero pooled precisions by 1e-9 instead of returning 0.
  bool smooth = false;
};

// Corpus BLEU: clipped n-gram precisions pooled over the corpus, geometric
// mean, times exp(1 - r/c) when the candidates are shorter than the
// references.
double bleu(std::span<const EvalPair> pairs, const BleuOptions& options = {});

// Corpus NIST. Information weights come from the reference side:
// info(w1..wn) = log2(count(w1..wn-1) / count(w1..wn)), with the unigram
// numerator equal to the total reference length. Each order contributes
// the info of its clipped matches divided by the candidate n-gram count,
// and the sum is scaled by exp(beta * ln^2(min(c/r, 1))) where beta puts
// the factor at 0.5 for c/r = 2/3.
double nist(std::span<const EvalPair> pairs, int max_n = 5);

}  // namespace ablategen
