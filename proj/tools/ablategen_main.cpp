// ablategen: train, decode, and evaluate grounded generation models on
// factual-ablation data.
//
// Exit codes: 0 success, 2 validation error, 3 data error, 4 internal error.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ablategen/ablation.hpp"
#include "ablategen/datagen.hpp"
#include "ablategen/decoding.hpp"
#include "ablategen/error.hpp"
#include "ablategen/jsonl.hpp"
#include "ablategen/lexical.hpp"
#include "ablategen/model_io.hpp"
#include "ablategen/truncation.hpp"

namespace ag = ablategen;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

struct Globals {
  std::uint64_t seed = 0;
  bool verbose = false;
};

bool use_color() {
  return std::getenv("ABLATEGEN_NO_COLOR") == nullptr && ::isatty(STDERR_FILENO) != 0;
}

void status(const std::string& tag, const std::string& message, const char* color) {
  if (use_color()) {
    std::cerr << color << tag << "\033[0m " << message << '\n';
  } else {
    std::cerr << tag << ' ' << message << '\n';
  }
}

void info(const Globals& g, const std::string& message) {
  if (g.verbose) status("[ablategen]", message, "\033[36m");
}

json base_config(const std::string& command, const Globals& g) {
  return {{"command", command}, {"seed", g.seed}, {"verbose", g.verbose}};
}

// Sidecar written next to JSON Lines outputs so every artifact carries its
// resolved configuration without disturbing the one-record-per-line layout.
void write_sidecar(const std::string& output, json meta) {
  ag::write_json(output + ".config.json", meta);
}

void emit_document(const std::optional<std::string>& path, const json& doc) {
  if (path) {
    ag::write_json(*path, doc);
  } else {
    std::cout << doc.dump(2) << '\n';
  }
}

CLI::Validator unit_interval_open_left() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        double v = 0.0;
        try {
          v = std::stod(s);
        } catch (const std::exception&) {
          return "not a number: " + s;
        }
        if (!(v > 0.0 && v <= 1.0)) return "value must lie in (0, 1]: " + s;
        return {};
      },
      "(0,1]");
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string input;
  std::string output;
  std::optional<std::string> report;
  std::string mode = "plain";
  std::string cache = "grounding";
  int order = 3;
  double k = 0.1;
  double lambda = 0.5;
  double keep_c = 0.8;
  double keep_c_gnd = 0.8;
  std::size_t window = 10000;
  std::size_t warmup = 100;
  std::size_t trace_points = 20;
};

int cmd_train(const TrainArgs& a, const Globals& g) {
  json config = base_config("train", g);
  config.update({{"input", a.input},       {"output", a.output},     {"mode", a.mode},
                 {"cache", a.cache},       {"order", a.order},       {"k", a.k},
                 {"lambda", a.lambda},     {"keep_c", a.keep_c},     {"keep_c_gnd", a.keep_c_gnd},
                 {"window", a.window},     {"warmup", a.warmup}});

  const auto examples = ag::load_examples(a.input);
  if (examples.empty()) throw ag::DataError("training file '" + a.input + "' has no examples");
  ag::Vocab vocab;
  ag::extend_vocab(vocab, examples);
  const auto encoded = ag::encode_all(examples, vocab);
  const ag::LmParams params{a.order, a.k, a.lambda};
  const auto cache = a.cache == "none" ? ag::CacheMode::kNone : ag::CacheMode::kGrounding;
  info(g, "loaded " + std::to_string(examples.size()) + " examples, vocab " +
              std::to_string(vocab.size()));

  json report = {{"format_version", ag::kFormatVersion},
                 {"run_config", config},
                 {"n_examples", examples.size()},
                 {"vocab_size", vocab.size()}};

  std::optional<ag::GroundedLM> model;
  if (a.mode == "plain") {
    model.emplace(ag::fit_grounded_lm(vocab, encoded, params, cache));
    report.update({{"kept", examples.size()}, {"dropped", 0}, {"kept_fraction", 1.0}});
  } else {
    ag::TruncationConfig tc;
    tc.keep_c = a.keep_c;
    tc.keep_c_gnd = a.keep_c_gnd;
    tc.window_capacity = a.window;
    tc.warmup = a.warmup;
    tc.mode = a.mode == "lt-gnd" ? ag::TruncationMode::kGrounded : ag::TruncationMode::kBasic;
    auto result = ag::train_loss_truncated(vocab, encoded, tc, params);
    model.emplace(result.model.background_ptr(), a.lambda, cache);

    json trace = json::array();
    const std::size_t n = result.decisions.size();
    const std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(1, a.trace_points));
    for (std::size_t i = 0; i < n; i += stride) {
      const auto& d = result.decisions[i];
      json point = {{"index", i},
                    {"loss", d.loss},
                    {"loss_threshold", d.loss_threshold},
                    {"warmup", d.warmup},
                    {"kept", d.kept}};
      if (d.gap) point.update({{"gap", *d.gap}, {"gap_threshold", *d.gap_threshold}});
      trace.push_back(std::move(point));
    }
    const double steady = result.steady_state_kept_fraction();
    report.update({{"kept", result.kept},
                   {"dropped", result.dropped},
                   {"kept_fraction", static_cast<double>(result.kept) / static_cast<double>(n)},
                   {"steady_state_kept_fraction", std::isnan(steady) ? json(nullptr) : json(steady)},
                   {"threshold_trace", std::move(trace)}});
  }

  ag::save_model(a.output, *model, config);
  emit_document(a.report, report);
  info(g, "wrote model to " + a.output);
  return 0;
}

// ---------------------------------------------------------------- generate

struct PolicyArgs {
  std::string policy = "base";
  double alpha = 0.0;
  std::optional<std::string> ungrounded_model;
};

struct LoadedModels {
  ag::GroundedLM grounded;
  std::optional<ag::GroundedLM> ungrounded;
  ag::DecodingPolicy policy;

  const ag::GroundedLM* ungrounded_ptr() const { return ungrounded ? &*ungrounded : nullptr; }
};

LoadedModels load_models(const std::string& model_path, const PolicyArgs& p) {
  ag::DecodingPolicy policy{ag::parse_policy_kind(p.policy), p.alpha};
  policy.validate();
  if (policy.needs_ungrounded() && !p.ungrounded_model) {
    throw ag::ValidationError("policy '" + p.policy + "' requires --ungrounded-model");
  }
  LoadedModels m{ag::load_model(model_path), std::nullopt, policy};
  if (p.ungrounded_model) {
    // The ungrounded estimator never sees the grounding, whatever its file says.
    m.ungrounded.emplace(ag::load_model(*p.ungrounded_model).ungrounded());
    if (!(m.ungrounded->vocab() == m.grounded.vocab())) {
      throw ag::ValidationError("grounded and ungrounded models use different vocabularies");
    }
  }
  return m;
}

void add_policy_config(json& config, const PolicyArgs& p) {
  config.update({{"policy", p.policy},
                 {"alpha", p.alpha},
                 {"ungrounded_model", p.ungrounded_model ? json(*p.ungrounded_model) : json(nullptr)}});
}

struct GenerateArgs {
  std::string model;
  std::string input;
  std::string output;
  PolicyArgs policy;
  double top_p = 0.5;
  int max_tokens = 40;
  std::string stop = "sentence";
};

int cmd_generate(const GenerateArgs& a, const Globals& g) {
  json config = base_config("generate", g);
  config.update({{"model", a.model},
                 {"input", a.input},
                 {"output", a.output},
                 {"top_p", a.top_p},
                 {"max_tokens", a.max_tokens},
                 {"stop", a.stop}});
  add_policy_config(config, a.policy);

  const auto models = load_models(a.model, a.policy);
  const auto records = ag::read_jsonl(a.input);
  const ag::Vocab& vocab = models.grounded.vocab();

  std::vector<json> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.is_object() || !r.contains("grounding") || !r.contains("context") ||
        !r["grounding"].is_string() || !r["context"].is_string()) {
      throw ag::DataError(a.input + ": record " + std::to_string(i + 1) +
                          " needs string \"grounding\" and \"context\"");
    }
    const auto grounding = r["grounding"].get<std::string>();
    const auto context = r["context"].get<std::string>();
    ag::SamplerConfig sampler{a.top_p, a.max_tokens, g.seed + i,
                              a.stop == "eos" ? ag::StopRule::kEosOnly : ag::StopRule::kSentence};
    const auto ids = ag::generate(models.grounded, models.ungrounded_ptr(), models.policy, sampler,
                                  ag::tokenize(grounding, vocab), ag::tokenize(context, vocab));
    out.push_back({{"context", context},
                   {"grounding", grounding},
                   {"generation", ag::detokenize(ids, vocab)},
                   {"policy", a.policy.policy},
                   {"alpha", a.policy.alpha},
                   {"seed", sampler.seed}});
  }
  ag::write_jsonl(a.output, out);
  write_sidecar(a.output, {{"format_version", ag::kFormatVersion},
                           {"run_config", config},
                           {"records", out.size()},
                           {"prng", "mt19937_64 seeded with seed + record index"}});
  info(g, "wrote " + std::to_string(out.size()) + " generations to " + a.output);
  return 0;
}

// ---------------------------------------------------------------- eval-ablation

struct EvalAblationArgs {
  std::string model;
  std::string data;
  std::optional<std::string> output;
  PolicyArgs policy;
  std::vector<std::string> margins;
  std::string grid = "synthetic";
  bool pairs = false;
  bool no_eos = false;
};

int cmd_eval_ablation(const EvalAblationArgs& a, const Globals& g) {
  std::vector<double> margins;
  for (const auto& m : a.margins) margins.push_back(ag::parse_margin(m));
  if (margins.empty()) {
    margins.push_back(a.grid == "natural" ? ag::kNaturalMargin : ag::kSyntheticMargin);
  }
  if (g.verbose) {
    for (double m : ag::verbose_margin_grid()) {
      if (std::find(margins.begin(), margins.end(), m) == margins.end()) margins.push_back(m);
    }
    std::sort(margins.begin(), margins.end());
  }

  json config = base_config("eval-ablation", g);
  config.update({{"model", a.model},
                 {"data", a.data},
                 {"margins_nats", margins},
                 {"grid", a.grid},
                 {"include_pairs", a.pairs},
                 {"include_eos", !a.no_eos}});
  add_policy_config(config, a.policy);

  const auto models = load_models(a.model, a.policy);
  const auto dataset = ag::load_ablation_examples(a.data);
  if (dataset.empty()) throw ag::DataError("ablation dataset '" + a.data + "' is empty");

  ag::EvaluateOptions opts;
  opts.margins = margins;
  opts.include_eos = !a.no_eos;
  opts.keep_pairs = a.pairs;
  const auto report =
      ag::evaluate(models.grounded, models.ungrounded_ptr(), models.policy, dataset, opts);

  json doc = ag::report_to_json(report, a.pairs);
  doc["format_version"] = ag::kFormatVersion;
  doc["run_config"] = config;
  emit_document(a.output, doc);
  info(g, "accuracy " + std::to_string(report.accuracy) + " over " + std::to_string(report.n));
  return 0;
}

// ---------------------------------------------------------------- eval-lexical

struct EvalLexicalArgs {
  std::string input;
  std::optional<std::string> output;
  int bleu_order = 4;
  int nist_order = 5;
  bool smooth = false;
};

int cmd_eval_lexical(const EvalLexicalArgs& a, const Globals& g) {
  json config = base_config("eval-lexical", g);
  config.update({{"input", a.input},
                 {"bleu_order", a.bleu_order},
                 {"nist_order", a.nist_order},
                 {"smooth", a.smooth}});
  const auto records = ag::read_jsonl(a.input);
  ag::Vocab vocab;
  std::vector<ag::EvalPair> pairs;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.is_object() || !r.contains("candidate") || !r.contains("reference") ||
        !r["candidate"].is_string() || !r["reference"].is_string()) {
      throw ag::DataError(a.input + ": record " + std::to_string(i + 1) +
                          " needs string \"candidate\" and \"reference\"");
    }
    pairs.push_back({ag::tokenize(r["candidate"].get<std::string>(), ag::VocabMode::kBuild, vocab),
                     ag::tokenize(r["reference"].get<std::string>(), ag::VocabMode::kBuild, vocab)});
  }
  json doc = {{"bleu", ag::bleu(pairs, {a.bleu_order, a.smooth})},
              {"nist", ag::nist(pairs, a.nist_order)},
              {"n", pairs.size()},
              {"format_version", ag::kFormatVersion},
              {"run_config", config}};
  emit_document(a.output, doc);
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string input;
  std::string output;
  std::string rule = "numeric";
  std::size_t max_examples = ag::kDefaultSynthCap;
};

int cmd_synth(const SynthArgs& a, const Globals& g) {
  json config = base_config("synth", g);
  config.update({{"input", a.input}, {"output", a.output}, {"rule", a.rule},
                 {"max_examples", a.max_examples}});
  const auto kind = ag::parse_edit_kind(a.rule);
  const auto examples = ag::load_examples(a.input);

  std::vector<json> out;
  std::size_t skipped = 0;
  bool capped = false;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (out.size() + 2 > a.max_examples) {
      capped = true;
      break;
    }
    try {
      const auto r = ag::synth_ablate(examples[i], {kind, g.seed + i});
      out.push_back(ag::to_json(r.forward));
      out.push_back(ag::to_json(r.mirrored));
    } catch (const ag::NoEditableFactError&) {
      ++skipped;
    }
  }
  ag::write_jsonl(a.output, out);
  write_sidecar(a.output,
                {{"format_version", ag::kFormatVersion},
                 {"run_config", config},
                 {"emitted", out.size()},
                 {"skipped_no_editable_fact", skipped},
                 {"capped", capped},
                 {"needs_human_review", true},
                 {"review_note",
                  "check each edit for facts that are common knowledge and for edits that "
                  "break commonsense; neither is machine-checked"}});
  info(g, "emitted " + std::to_string(out.size()) + " examples, skipped " +
              std::to_string(skipped));
  return 0;
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string input;
  std::string output;
  ag::QualityConfig quality;
};

int cmd_extract(const ExtractArgs& a, const Globals& g) {
  json config = base_config("extract", g);
  config.update({{"input", a.input},
                 {"output", a.output},
                 {"min_target_chars", a.quality.min_target_chars},
                 {"max_target_chars", a.quality.max_target_chars},
                 {"max_context_sentences", a.quality.max_context_sentences},
                 {"max_bad_char_fraction", a.quality.max_bad_char_fraction},
                 {"max_line_chars", a.quality.max_line_chars},
                 {"allowed_hosts", a.quality.allowed_hosts}});
  const auto records = ag::load_revision_records(a.input);
  const auto result = ag::extract_natural(records, a.quality);
  std::vector<json> out;
  for (const auto& ex : result.examples) out.push_back(ag::to_json(ex));
  ag::write_jsonl(a.output, out);
  write_sidecar(a.output, {{"format_version", ag::kFormatVersion},
                           {"run_config", config},
                           {"records", records.size()},
                           {"emitted_before_filter", result.emitted_before_filter},
                           {"kept", result.examples.size()},
                           {"rejected", result.rejected},
                           {"entailment_checked", false}});
  info(g, "kept " + std::to_string(result.examples.size()) + " of " +
              std::to_string(result.emitted_before_filter));
  return 0;
}

// ---------------------------------------------------------------- make-desk

struct DeskArgs {
  std::size_t n = 200;
  std::string train_out;
  std::string ablation_out;
};

int cmd_make_desk(const DeskArgs& a, const Globals& g) {
  json config = base_config("make-desk", g);
  config.update({{"n", a.n}, {"train_out", a.train_out}, {"ablation_out", a.ablation_out}});
  const auto corpus = ag::make_desk_corpus(a.n, g.seed);
  std::vector<json> train;
  std::vector<json> ablation;
  for (const auto& ex : corpus.train) train.push_back(ag::to_json(ex));
  for (const auto& ex : corpus.ablation) ablation.push_back(ag::to_json(ex));
  ag::write_jsonl(a.train_out, train);
  ag::write_jsonl(a.ablation_out, ablation);
  const json meta = {{"format_version", ag::kFormatVersion}, {"run_config", config}};
  write_sidecar(a.train_out, meta);
  write_sidecar(a.ablation_out, meta);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ablategen: grounded generation toolkit with factual-ablation evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file supplying option defaults");
  Globals globals;
  app.add_option("--seed", globals.seed, "Base PRNG seed")->capture_default_str();
  app.add_flag("--verbose,-v", globals.verbose, "Progress messages and the extended margin grid");

  const auto positive_k = CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          if (std::stod(s) > 0.0) return {};
        } catch (const std::exception&) {
        }
        return "value must be > 0: " + s;
      },
      ">0");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit a grounded model (plain or loss-truncated)");
  train_cmd->add_option("--input,-i", train.input, "Training examples (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--output,-o", train.output, "Model file to write")->required();
  train_cmd->add_option("--report", train.report, "Training report path (default stdout)");
  train_cmd->add_option("--mode", train.mode, "plain, lt, or lt-gnd")
      ->check(CLI::IsMember({"plain", "lt", "lt-gnd"}))
      ->capture_default_str();
  train_cmd->add_option("--cache", train.cache, "grounding or none")
      ->check(CLI::IsMember({"grounding", "none"}))
      ->capture_default_str();
  train_cmd->add_option("--order", train.order, "n-gram order")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--k", train.k, "Add-k smoothing constant")
      ->check(positive_k)
      ->capture_default_str();
  train_cmd->add_option("--lambda", train.lambda, "Cache mixing weight")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  train_cmd->add_option("--keep-c", train.keep_c, "Fraction kept by loss")
      ->check(unit_interval_open_left())
      ->capture_default_str();
  train_cmd->add_option("--keep-c-gnd", train.keep_c_gnd, "Fraction kept by grounding gap")
      ->check(unit_interval_open_left())
      ->capture_default_str();
  train_cmd->add_option("--window", train.window, "Loss window capacity")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--warmup", train.warmup, "Examples kept before thresholds apply")
      ->capture_default_str();

  GenerateArgs gen;
  auto add_policy_options = [](CLI::App* cmd, PolicyArgs& p) {
    cmd->add_option("--policy", p.policy, "base, pmi_interp, or pmi_add")
        ->check(CLI::IsMember({"base", "pmi_interp", "pmi_add"}))
        ->capture_default_str();
    cmd->add_option("--alpha", p.alpha, "PMI weight")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--ungrounded-model", p.ungrounded_model,
                    "Model estimating P(y|c); required by PMI policies")
        ->check(CLI::ExistingFile);
  };
  auto* gen_cmd = app.add_subcommand("generate", "Sample one sentence per input example");
  gen_cmd->add_option("--model,-m", gen.model, "Grounded model file")
      ->required()
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--input,-i", gen.input, "Examples with grounding and context")
      ->required()
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--output,-o", gen.output, "Generations (JSON Lines)")->required();
  add_policy_options(gen_cmd, gen.policy);
  gen_cmd->add_option("--top-p", gen.top_p, "Nucleus mass")
      ->check(unit_interval_open_left())
      ->capture_default_str();
  gen_cmd->add_option("--max-tokens", gen.max_tokens, "Token budget per generation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--stop", gen.stop, "sentence or eos")
      ->check(CLI::IsMember({"sentence", "eos"}))
      ->capture_default_str();

  EvalAblationArgs ev;
  auto* ev_cmd = app.add_subcommand("eval-ablation", "Factual-ablation accuracy report");
  ev_cmd->add_option("--model,-m", ev.model, "Grounded model file")
      ->required()
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("--data,-d", ev.data, "Ablation examples (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("--output,-o", ev.output, "Report path (default stdout)");
  add_policy_options(ev_cmd, ev.policy);
  ev_cmd->add_option("--margins", ev.margins, "Margins: ln:<x>, log10:<x>, or nats")
      ->delimiter(',');
  ev_cmd->add_option("--grid", ev.grid, "Default margin when --margins is absent")
      ->check(CLI::IsMember({"synthetic", "natural"}))
      ->capture_default_str();
  ev_cmd->add_flag("--pairs", ev.pairs, "Include per-example log-probability pairs");
  ev_cmd->add_flag("--no-eos", ev.no_eos, "Score targets without the final EOS step");

  EvalLexicalArgs lex;
  auto* lex_cmd = app.add_subcommand("eval-lexical", "Corpus BLEU and NIST");
  lex_cmd->add_option("--input,-i", lex.input, "Pairs {candidate, reference} (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  lex_cmd->add_option("--output,-o", lex.output, "Report path (default stdout)");
  lex_cmd->add_option("--bleu-order", lex.bleu_order)->check(CLI::PositiveNumber)->capture_default_str();
  lex_cmd->add_option("--nist-order", lex.nist_order)->check(CLI::PositiveNumber)->capture_default_str();
  lex_cmd->add_flag("--smooth", lex.smooth, "Floor zero BLEU precisions at 1e-9");

  SynthArgs syn;
  auto* syn_cmd = app.add_subcommand("synth", "Rule-based synthetic ablation pairs");
  syn_cmd->add_option("--input,-i", syn.input, "Examples (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  syn_cmd->add_option("--output,-o", syn.output, "Ablation examples (JSON Lines)")->required();
  syn_cmd->add_option("--rule", syn.rule, "numeric or chronological")
      ->check(CLI::IsMember({"numeric", "chronological"}))
      ->capture_default_str();
  syn_cmd->add_option("--max-examples", syn.max_examples, "Cap on emitted examples")
      ->capture_default_str();

  ExtractArgs ext;
  auto* ext_cmd = app.add_subcommand("extract", "Natural ablation pairs from revision records");
  ext_cmd->add_option("--input,-i", ext.input, "Revision-pair records (JSON Lines)")
      ->required()
      ->check(CLI::ExistingFile);
  ext_cmd->add_option("--output,-o", ext.output, "Ablation examples (JSON Lines)")->required();
  ext_cmd->add_option("--allow-host", ext.quality.allowed_hosts, "Accepted source hosts")
      ->delimiter(',');
  ext_cmd->add_option("--min-target-chars", ext.quality.min_target_chars)->capture_default_str();
  ext_cmd->add_option("--max-target-chars", ext.quality.max_target_chars)->capture_default_str();
  ext_cmd->add_option("--max-context-sentences", ext.quality.max_context_sentences)
      ->capture_default_str();

  DeskArgs desk;
  auto* desk_cmd = app.add_subcommand("make-desk", "Write the templated desk-scale corpus");
  desk_cmd->add_option("--n", desk.n, "Number of examples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  desk_cmd->add_option("--train-out", desk.train_out, "Training examples path")->required();
  desk_cmd->add_option("--ablation-out", desk.ablation_out, "Ablation examples path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*train_cmd) return cmd_train(train, globals);
    if (*gen_cmd) return cmd_generate(gen, globals);
    if (*ev_cmd) return cmd_eval_ablation(ev, globals);
    if (*lex_cmd) return cmd_eval_lexical(lex, globals);
    if (*syn_cmd) return cmd_synth(syn, globals);
    if (*ext_cmd) return cmd_extract(ext, globals);
    if (*desk_cmd) return cmd_make_desk(desk, globals);
  } catch (const ag::ValidationError& e) {
    status("error:", e.what(), "\033[31m");
    return kExitValidation;
  } catch (const ag::DataError& e) {
    status("error:", e.what(), "\033[31m");
    return kExitData;
  } catch (const std::exception& e) {
    status("internal error:", e.what(), "\033[31m");
    return kExitInternal;
  }
  return kExitInternal;
}
