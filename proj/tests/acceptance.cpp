// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ablategen/ablation.hpp"
#include "ablategen/datagen.hpp"
#include "ablategen/decoding.hpp"
#include "ablategen/grounded_lm.hpp"
#include "ablategen/jsonl.hpp"
#include "ablategen/lexical.hpp"
#include "ablategen/model_io.hpp"
#include "ablategen/ngram.hpp"
#include "ablategen/truncation.hpp"
#include "test_support.hpp"

using namespace ablategen;
using ablategen::testing::random_dist;
using ablategen::testing::ToyVocab;
using ablategen::testing::uniform_dist;

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kHandTol = 1e-4;
constexpr double kBigramTol = 1e-12;
constexpr double kLexicalTol = 1e-9;
constexpr double kMassTol = 1e-6;
constexpr double kKeptFraction = 0.80;
constexpr double kKeptFractionTol = 0.05;
constexpr double kMinDropRate = 0.70;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double linf(const ProbDist& a, const ProbDist& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(6);
  ss << x;
  return ss.str();
}

Outcome algebraic_identities() {
  Outcome out;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> size(2, 40);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = size(rng);
    const auto p = random_dist(rng, n);
    const auto q = random_dist(rng, n);
    const auto s = pmi_score(p, q);
    for (const auto& d : {pmi_interpolate(p, s, 0.0), pmi_add(p, s, 0.0)}) {
      worst = std::max(worst, linf(d, p));
      out.require(std::abs(d.sum() - 1.0) <= kIdentityTol, "alpha=0 output not normalized");
    }
    const auto su = pmi_score(p, uniform_dist(n));
    for (double alpha : {0.1, 0.3, 0.5}) {
      const auto d = pmi_interpolate(p, su, alpha);
      worst = std::max(worst, linf(d, p));
      out.require(std::abs(d.sum() - 1.0) <= kIdentityTol, "uniform-q output not normalized");
      for (const auto& e : {pmi_interpolate(p, s, alpha), pmi_add(p, s, alpha)}) {
        out.require(std::abs(e.sum() - 1.0) <= kIdentityTol, "output not normalized");
      }
    }
  }
  out.require(worst <= kIdentityTol, "identity L-inf " + fmt(worst));
  if (out.ok) out.detail = "max L-inf " + fmt(worst);
  return out;
}

Outcome metric_identities() {
  Outcome out;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  std::normal_distribution<double> logp(-20.0, 5.0);
  std::normal_distribution<double> gap(0.0, 4.0);
  const auto grid = verbose_margin_grid();
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<ScoredPair> pairs(size(rng));
    for (auto& p : pairs) {
      p.logp_g = logp(rng);
      // Occasional exact ties exercise the strict comparison.
      p.logp_g_ablated = trial % 7 == 0 ? p.logp_g : p.logp_g - gap(rng);
    }
    out.require(margin_accuracy(pairs, 0.0) == accuracy(pairs), "margin 0 differs from accuracy");
    double prev = 2.0;
    for (double m : grid) {
      const double v = margin_accuracy(pairs, m);
      out.require(v <= prev, "margin-accuracy increased over the grid");
      prev = v;
    }
  }
  if (out.ok) out.detail = "1000 sets";
  return out;
}

Outcome hand_oracles() {
  Outcome out;
  const ProbDist p({0.7, 0.3});
  const auto add = pmi_add(p, pmi_score(p, ProbDist({0.5, 0.5})), 1.0);
  out.require(std::abs(add[0] - 0.8448) <= kHandTol && std::abs(add[1] - 0.1552) <= kHandTol,
              "pmi_add " + fmt(add[0]) + "," + fmt(add[1]));
  const auto interp = pmi_interpolate(p, pmi_score(p, ProbDist({0.9, 0.1})), 0.5);
  out.require(std::abs(interp[0] - 0.4375) <= kHandTol && std::abs(interp[1] - 0.5625) <= kHandTol,
              "pmi_interpolate " + fmt(interp[0]) + "," + fmt(interp[1]));

  ToyVocab t;
  const auto bigram = train_ngram(t.vocab, std::vector<TokenSeq>{{t.a, t.b}}, 2, 1.0);
  const double pb = bigram.next_token_dist(TokenSeq{t.a})[static_cast<std::size_t>(t.b)];
  out.require(std::abs(pb - 0.4) <= kBigramTol, "bigram P(b|a) " + fmt(pb));

  Vocab v;
  auto pair_of = [&](const std::string& c, const std::string& r) {
    return EvalPair{tokenize(c, VocabMode::kBuild, v), tokenize(r, VocabMode::kBuild, v)};
  };
  const double b = bleu(std::vector<EvalPair>{pair_of("the the the the", "the cat")}, {1, false});
  out.require(std::abs(b - 0.25) <= kLexicalTol, "bleu " + fmt(b));
  const double n = nist(std::vector<EvalPair>{pair_of("a b", "a b")});
  out.require(std::abs(n - 1.0) <= kLexicalTol, "nist " + fmt(n));
  if (out.ok) out.detail = "5 oracles";
  return out;
}

Outcome brute_force_mass() {
  Outcome out;
  ToyVocab t;
  const std::vector<TokenId> events{Vocab::kUnk, Vocab::kEos, t.a, t.b};
  const std::vector<TokenSeq> corpus{{t.a, t.b}, {t.b, t.b, t.a}, {t.a}, {t.b, Vocab::kUnk}};
  auto trained = std::make_shared<const NGramModel>(train_ngram(t.vocab, corpus, 3, 0.5));
  const TokenSeq g{t.b, t.a, t.b};
  const TokenSeq c{t.a};

  double plain = 0.0;
  for (TokenId x : events) {
    for (TokenId y : events) {
      for (TokenId z : events) {
        TokenSeq hist;
        double lp = 0.0;
        for (TokenId tok : {x, y, z}) {
          lp += std::log(trained->next_token_dist(hist)[static_cast<std::size_t>(tok)]);
          hist.push_back(tok);
        }
        plain += std::exp(lp);
      }
    }
  }
  out.require(std::abs(plain - 1.0) <= kMassTol, "plain n-gram mass " + fmt(plain));
  std::string detail = "plain " + fmt(plain);

  for (double lambda : {0.0, 0.5}) {
    const GroundedLM model(trained, lambda, CacheMode::kGrounding);
    double mass = 0.0;
    for (TokenId x : events) {
      for (TokenId y : events) {
        for (TokenId z : events) mass += std::exp(sequence_logprob(model, g, c, TokenSeq{x, y, z}, false));
      }
    }
    out.require(std::abs(mass - 1.0) <= kMassTol, "cache mass " + fmt(mass));
    detail += ", lambda " + fmt(lambda) + " " + fmt(mass);
  }
  if (out.ok) out.detail = detail;
  return out;
}

double mean_gap(const AblationReport& r) {
  double s = 0.0;
  for (const auto& p : r.pairs) s += p.gap();
  return s / static_cast<double>(r.pairs.size());
}

Outcome desk_protocol() {
  Outcome out;
  const auto corpus = make_desk_corpus(200, 2024);
  Vocab v;
  extend_vocab(v, corpus.train);
  const auto enc = encode_all(corpus.train, v);
  const auto grounded = fit_grounded_lm(v, enc, {});
  const auto ungrounded = fit_grounded_lm(v, enc, {}, CacheMode::kNone);

  EvaluateOptions opts;
  opts.margins = {std::log(2.0), std::log(100.0)};
  const auto base = evaluate(grounded, nullptr, DecodingPolicy::base(), corpus.ablation, opts);
  out.require(base.accuracy == 1.0, "accuracy " + fmt(base.accuracy));
  out.require(base.margin_acc.at(0).value >= 0.95, "margin-acc(ln 2) " + fmt(base.margin_acc[0].value));

  const auto add0 = evaluate(grounded, &ungrounded, DecodingPolicy::pmi_add(0.0), corpus.ablation, opts);
  const auto add5 = evaluate(grounded, &ungrounded, DecodingPolicy::pmi_add(0.5), corpus.ablation, opts);
  const double g0 = mean_gap(add0);
  const double g5 = mean_gap(add5);
  out.require(g5 > g0, "pmi_add gap " + fmt(g5) + " <= " + fmt(g0));
  if (out.ok) {
    out.detail = "accuracy " + fmt(base.accuracy) + ", margin-acc(ln 2) " +
                 fmt(base.margin_acc[0].value) + ", mean gap " + fmt(g0) + " -> " + fmt(g5);
  }
  return out;
}

Outcome truncation_behavior() {
  Outcome out;
  std::mt19937_64 rng(6);
  auto examples = make_desk_corpus(2000, 606).train;
  Vocab v;
  extend_vocab(v, examples);
  std::vector<std::string> words(v.tokens().begin() + Vocab::kNumReserved, v.tokens().end());
  std::uniform_int_distribution<std::size_t> any(0, words.size() - 1);

  auto noisy = examples;
  std::vector<bool> corrupted(noisy.size(), false);
  std::vector<std::size_t> idx(noisy.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (std::size_t j = 0; j < noisy.size() / 10; ++j) {
    std::string y;
    for (int k = 0; k < 6; ++k) y += words[any(rng)] + " ";
    noisy[idx[j]].target = y;
    corrupted[idx[j]] = true;
  }
  const auto enc = encode_all(noisy, v);
  TruncationConfig cfg;
  cfg.keep_c = 0.8;
  cfg.window_capacity = 10000;
  const auto basic = train_loss_truncated(v, enc, cfg, {});
  std::size_t total = 0;
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < enc.size(); ++i) {
    if (!corrupted[i]) continue;
    ++total;
    if (!basic.decisions[i].kept) ++dropped;
  }
  const double steady = basic.steady_state_kept_fraction();
  const double drop_rate = static_cast<double>(dropped) / static_cast<double>(total);
  out.require(std::abs(steady - kKeptFraction) <= kKeptFractionTol, "steady-state kept " + fmt(steady));
  out.require(drop_rate >= kMinDropRate, "corrupted dropped " + fmt(drop_rate));

  // Distractor groundings share no vocabulary with any target.
  auto distracted = examples;
  std::vector<bool> ungrounded_target(distracted.size(), false);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (std::size_t j = 0; j < distracted.size() / 10; ++j) {
    std::string g;
    for (int k = 0; k < 12; ++k) g += "filler" + std::to_string(any(rng) % 40) + " ";
    distracted[idx[j]].grounding = g;
    ungrounded_target[idx[j]] = true;
  }
  Vocab gv;
  extend_vocab(gv, distracted);
  const auto genc = encode_all(distracted, gv);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < genc.size(); ++i) {
    if (!ungrounded_target[i]) continue;
    const std::set<TokenId> gset(genc[i].grounding.begin(), genc[i].grounding.end());
    for (TokenId tok : genc[i].target) checked += gset.count(tok);
  }
  out.require(checked == 0, "distractor grounding overlaps its target");
  cfg.mode = TruncationMode::kGrounded;
  cfg.keep_c_gnd = 0.8;
  const auto grounded = train_loss_truncated(gv, genc, cfg, {});
  std::size_t d_total = 0;
  std::size_t d_dropped = 0;
  for (std::size_t i = 0; i < genc.size(); ++i) {
    if (!ungrounded_target[i]) continue;
    ++d_total;
    if (!grounded.decisions[i].kept) ++d_dropped;
  }
  const double gnd_rate = static_cast<double>(d_dropped) / static_cast<double>(d_total);
  out.require(gnd_rate >= kMinDropRate, "ungrounded targets dropped " + fmt(gnd_rate));
  if (out.ok) {
    out.detail = "steady-state kept " + fmt(steady) + ", corrupted dropped " + fmt(drop_rate) +
                 ", ungrounded dropped " + fmt(gnd_rate);
  }
  return out;
}

Outcome determinism_and_round_trips() {
  Outcome out;
  const auto corpus = make_desk_corpus(100, 77);
  Vocab v;
  extend_vocab(v, corpus.train);
  const auto enc = encode_all(corpus.train, v);
  const auto grounded = fit_grounded_lm(v, enc, {});
  const auto ungrounded = fit_grounded_lm(v, enc, {}, CacheMode::kNone);

  for (const auto& policy : {DecodingPolicy::base(), DecodingPolicy::pmi_add(0.5),
                             DecodingPolicy::pmi_interp(0.3)}) {
    for (std::size_t i = 0; i < 20; ++i) {
      SamplerConfig sc;
      sc.seed = 1000 + i;
      sc.top_p = 0.9;
      const auto a = generate(grounded, &ungrounded, policy, sc, enc[i].grounding, enc[i].context);
      const auto b = generate(grounded, &ungrounded, policy, sc, enc[i].grounding, enc[i].context);
      out.require(detokenize(a, v) == detokenize(b, v), "generation differs for one seed");
    }
  }

  const auto path = (std::filesystem::temp_directory_path() / "ablategen_acceptance_model.json").string();
  save_model(path, grounded);
  const auto reloaded = load_model(path);
  std::filesystem::remove(path);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<TokenId> tok(Vocab::kNumReserved, static_cast<TokenId>(v.size()) - 1);
  std::uniform_int_distribution<int> len(1, 12);
  for (int trial = 0; trial < 100; ++trial) {
    auto draw = [&] {
      TokenSeq s(static_cast<std::size_t>(len(rng)));
      for (auto& x : s) x = tok(rng);
      return s;
    };
    const auto g = draw();
    const auto c = draw();
    const auto y = draw();
    const double before = sequence_logprob(grounded, g, c, y, true);
    const double after = sequence_logprob(reloaded, g, c, y, true);
    out.require(before == after, "reloaded model differs at trial " + std::to_string(trial));
  }

  for (const auto& ex : corpus.ablation) {
    const auto text = to_json(ex).dump();
    out.require(ablation_example_from_json(nlohmann::json::parse(text)) == ex, "dataset round-trip");
  }
  for (const auto& ex : corpus.train) {
    out.require(example_from_json(nlohmann::json::parse(to_json(ex).dump())) == ex, "example round-trip");
  }
  EvaluateOptions opts;
  opts.margins = verbose_margin_grid();
  const auto report = evaluate(grounded, nullptr, DecodingPolicy::base(), corpus.ablation, opts);
  const auto back = report_from_json(nlohmann::json::parse(report_to_json(report).dump()));
  out.require(back == report, "report round-trip");
  if (out.ok) out.detail = "60 generations, 100 reloads, " + std::to_string(corpus.ablation.size()) + " records";
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "algebraic identities", 5.0, algebraic_identities},
      {2, "metric identities", 5.0, metric_identities},
      {3, "hand-computed oracles", 5.0, hand_oracles},
      {4, "brute-force LM mass", 1.0, brute_force_mass},
      {5, "desk-scale ablation protocol", 30.0, desk_protocol},
      {6, "loss truncation", 60.0, truncation_behavior},
      {7, "determinism and round-trips", 30.0, determinism_and_round_trips},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome result;
    try {
      result = c.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (result.ok && secs > c.budget_seconds) {
      result.ok = false;
      result.detail = "over time budget " + fmt(c.budget_seconds) + "s";
    }
    if (!result.ok) ++failures;
    std::printf("criterion %d %-30s %s  %.3fs  %s\n", c.id, c.name, result.ok ? "PASS" : "FAIL", secs,
                result.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
