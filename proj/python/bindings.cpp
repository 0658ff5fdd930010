#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ablategen/ablation.hpp"
#include "ablategen/datagen.hpp"
#include "ablategen/decoding.hpp"
#include "ablategen/error.hpp"
#include "ablategen/grounded_lm.hpp"
#include "ablategen/jsonl.hpp"
#include "ablategen/lexical.hpp"
#include "ablategen/model_io.hpp"
#include "ablategen/truncation.hpp"

namespace py = pybind11;
using namespace ablategen;

namespace {

DecodingPolicy make_policy(const std::string& name, double alpha) {
  DecodingPolicy p{parse_policy_kind(name), alpha};
  if (p.kind == PolicyKind::kBase) p.alpha = 0.0;
  p.validate();
  return p;
}

std::vector<double> as_list(const ProbDist& d) {
  const auto v = d.values();
  return {v.begin(), v.end()};
}

const GroundedLM* optional_model(const std::optional<GroundedLM>& m) { return m ? &*m : nullptr; }

std::vector<EncodedExample> encode_with(const Vocab& v, const std::vector<Example>& examples) {
  return encode_all(examples, v);
}

Vocab vocab_for(const std::vector<Example>& examples) {
  Vocab v;
  extend_vocab(v, examples);
  return v;
}

std::vector<EvalPair> eval_pairs(const std::vector<std::string>& candidates,
                                 const std::vector<std::string>& references) {
  if (candidates.size() != references.size()) {
    throw ValidationError("candidates and references differ in length");
  }
  Vocab v;
  std::vector<EvalPair> pairs;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    pairs.push_back({tokenize(candidates[i], VocabMode::kBuild, v),
                     tokenize(references[i], VocabMode::kBuild, v)});
  }
  return pairs;
}

std::vector<ScoredPair> scored(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<ScoredPair> out;
  for (const auto& [g, ga] : pairs) out.push_back({g, ga});
  return out;
}

CacheMode parse_cache(const std::string& name) {
  if (name == "grounding") return CacheMode::kGrounding;
  if (name == "none") return CacheMode::kNone;
  throw ValidationError("unknown cache mode '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Grounded n-gram generation with factual-ablation evaluation";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  auto data = py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<DegenerateProbabilityError>(m, "DegenerateProbabilityError", base.ptr());
  py::register_exception<NoEditableFactError>(m, "NoEditableFactError", data.ptr());
  py::register_exception<EmptyKeepSetError>(m, "EmptyKeepSetError", data.ptr());

  py::class_<Vocab>(m, "Vocab")
      .def(py::init<>())
      .def(py::init<std::vector<std::string>>())
      .def("__len__", &Vocab::size)
      .def("lookup", [](const Vocab& v, const std::string& t) { return v.lookup(t); })
      .def("token", &Vocab::token)
      .def("add", [](Vocab& v, const std::string& t) { return v.add(t); })
      .def_property_readonly("tokens", &Vocab::tokens)
      .def("__eq__", &Vocab::operator==);

  m.def("tokenize", [](const std::string& text, const Vocab& v) { return tokenize(text, v); },
        py::arg("text"), py::arg("vocab"));
  m.def("split_words", [](const std::string& text) {
    std::vector<std::string> out;
    for (const auto& s : split_words(text)) out.push_back(s.text);
    return out;
  });
  m.def("detokenize", &detokenize);

  py::class_<Example>(m, "Example")
      .def(py::init<std::string, std::string, std::string>(), py::arg("grounding"),
           py::arg("context"), py::arg("target"))
      .def_readwrite("grounding", &Example::grounding)
      .def_readwrite("context", &Example::context)
      .def_readwrite("target", &Example::target)
      .def("__eq__", [](const Example& a, const Example& b) { return a == b; })
      .def("__repr__", [](const Example& e) { return "Example(" + to_json(e).dump() + ")"; });

  py::class_<AblationExample>(m, "AblationExample")
      .def(py::init<std::string, std::string, std::string, std::string>(), py::arg("grounding"),
           py::arg("grounding_ablated"), py::arg("context"), py::arg("target"))
      .def_readwrite("grounding", &AblationExample::grounding)
      .def_readwrite("grounding_ablated", &AblationExample::grounding_ablated)
      .def_readwrite("context", &AblationExample::context)
      .def_readwrite("target", &AblationExample::target)
      .def("__eq__", [](const AblationExample& a, const AblationExample& b) { return a == b; })
      .def("__repr__",
           [](const AblationExample& e) { return "AblationExample(" + to_json(e).dump() + ")"; });

  py::class_<GroundedLM>(m, "GroundedLM")
      .def_property_readonly("vocab", &GroundedLM::vocab)
      .def_property_readonly("order", [](const GroundedLM& g) { return g.background().order(); })
      .def_property_readonly("k", [](const GroundedLM& g) { return g.background().k(); })
      .def_property_readonly("lam", &GroundedLM::lambda)
      .def_property_readonly("cache", [](const GroundedLM& g) {
        return g.cache_mode() == CacheMode::kGrounding ? "grounding" : "none";
      })
      .def("ungrounded", &GroundedLM::ungrounded)
      .def(
          "next_token_dist",
          [](const GroundedLM& g, const TokenSeq& grounding, const TokenSeq& context,
             const TokenSeq& prefix) { return as_list(g.next_token_dist(grounding, context, prefix)); },
          py::arg("grounding"), py::arg("context"), py::arg("prefix"))
      .def(
          "score",
          [](const GroundedLM& g, const std::string& grounding, const std::string& context,
             const std::string& target, bool include_eos) {
            const auto& v = g.vocab();
            return sequence_logprob(g, tokenize(grounding, v), tokenize(context, v),
                                    tokenize(target, v), include_eos);
          },
          py::arg("grounding"), py::arg("context"), py::arg("target"), py::arg("include_eos") = true);

  m.def(
      "fit",
      [](const std::vector<Example>& examples, int order, double k, double lam,
         const std::string& cache) {
        const auto v = vocab_for(examples);
        return fit_grounded_lm(v, encode_with(v, examples), {order, k, lam}, parse_cache(cache));
      },
      py::arg("examples"), py::arg("order") = 3, py::arg("k") = 0.1, py::arg("lam") = 0.5,
      py::arg("cache") = "grounding");

  m.def(
      "train_loss_truncated",
      [](const std::vector<Example>& examples, double keep_c, double keep_c_gnd, bool grounded,
         std::size_t window, std::size_t warmup, int order, double k, double lam) {
        const auto v = vocab_for(examples);
        TruncationConfig cfg;
        cfg.keep_c = keep_c;
        cfg.keep_c_gnd = keep_c_gnd;
        cfg.mode = grounded ? TruncationMode::kGrounded : TruncationMode::kBasic;
        cfg.window_capacity = window;
        cfg.warmup = warmup;
        auto r = train_loss_truncated(v, encode_with(v, examples), cfg, {order, k, lam});
        std::vector<bool> kept;
        for (const auto& d : r.decisions) kept.push_back(d.kept);
        py::dict out;
        out["model"] = r.model;
        out["hotstart"] = r.hotstart;
        out["kept"] = kept;
        out["steady_state_kept_fraction"] = r.steady_state_kept_fraction();
        return out;
      },
      py::arg("examples"), py::arg("keep_c") = 0.8, py::arg("keep_c_gnd") = 0.8,
      py::arg("grounded") = false, py::arg("window") = 10000, py::arg("warmup") = 100,
      py::arg("order") = 3, py::arg("k") = 0.1, py::arg("lam") = 0.5);

  m.def("save_model", [](const std::string& path, const GroundedLM& g) { save_model(path, g); });
  m.def("load_model", &load_model);
  m.def("model_to_json", [](const GroundedLM& g) { return model_to_json(g).dump(); });
  m.def("model_from_json",
        [](const std::string& text) { return model_from_json(nlohmann::json::parse(text)); });

  m.def("pmi_score", [](const std::vector<double>& p, const std::vector<double>& q,
                        const std::vector<TokenId>& excluded) {
    return pmi_score(ProbDist(p), ProbDist(q), excluded);
  }, py::arg("p"), py::arg("q"), py::arg("excluded") = std::vector<TokenId>{});
  m.def("pmi_interpolate", [](const std::vector<double>& p, const std::vector<double>& s, double alpha) {
    return as_list(pmi_interpolate(ProbDist(p), s, alpha));
  });
  m.def("pmi_add", [](const std::vector<double>& p, const std::vector<double>& s, double alpha) {
    return as_list(pmi_add(ProbDist(p), s, alpha));
  });
  m.def("top_p_filter", [](const std::vector<double>& p, double top_p) {
    return as_list(top_p_filter(ProbDist(p), top_p));
  });

  m.def(
      "generate",
      [](const GroundedLM& g, const std::string& grounding, const std::string& context,
         const std::string& policy, double alpha, const std::optional<GroundedLM>& ungrounded,
         double top_p, int max_tokens, std::uint64_t seed, const std::string& stop) {
        SamplerConfig sc;
        sc.top_p = top_p;
        sc.max_tokens = max_tokens;
        sc.seed = seed;
        if (stop == "sentence") {
          sc.stop = StopRule::kSentence;
        } else if (stop == "eos") {
          sc.stop = StopRule::kEosOnly;
        } else {
          throw ValidationError("unknown stop rule '" + stop + "'");
        }
        const auto& v = g.vocab();
        const auto ids = generate(g, optional_model(ungrounded), make_policy(policy, alpha), sc,
                                  tokenize(grounding, v), tokenize(context, v));
        return detokenize(ids, v);
      },
      py::arg("model"), py::arg("grounding"), py::arg("context"), py::arg("policy") = "base",
      py::arg("alpha") = 0.0, py::arg("ungrounded") = py::none(), py::arg("top_p") = 0.5,
      py::arg("max_tokens") = 40, py::arg("seed") = 0, py::arg("stop") = "sentence");

  m.def("parse_margin", &parse_margin);
  m.def("accuracy", [](const std::vector<std::pair<double, double>>& p) { return accuracy(scored(p)); });
  m.def("margin_accuracy", [](const std::vector<std::pair<double, double>>& p, double margin) {
    return margin_accuracy(scored(p), margin);
  });
  m.def(
      "evaluate",
      [](const GroundedLM& g, const std::vector<AblationExample>& data, const std::string& policy,
         double alpha, const std::optional<GroundedLM>& ungrounded, const std::vector<double>& margins,
         bool include_eos) {
        EvaluateOptions opts;
        opts.margins = margins;
        opts.include_eos = include_eos;
        const auto r = evaluate(g, optional_model(ungrounded), make_policy(policy, alpha), data, opts);
        py::dict out;
        out["n"] = r.n;
        out["accuracy"] = r.accuracy;
        py::list ma;
        for (const auto& x : r.margin_acc) ma.append(py::make_tuple(x.margin_nats, x.value));
        out["margin_acc"] = ma;
        py::list pairs;
        for (const auto& p : r.pairs) pairs.append(py::make_tuple(p.logp_g, p.logp_g_ablated));
        out["pairs"] = pairs;
        return out;
      },
      py::arg("model"), py::arg("data"), py::arg("policy") = "base", py::arg("alpha") = 0.0,
      py::arg("ungrounded") = py::none(), py::arg("margins") = std::vector<double>{kSyntheticMargin},
      py::arg("include_eos") = true);

  m.def(
      "bleu",
      [](const std::vector<std::string>& c, const std::vector<std::string>& r, int max_n, bool smooth) {
        return bleu(eval_pairs(c, r), {max_n, smooth});
      },
      py::arg("candidates"), py::arg("references"), py::arg("max_n") = 4, py::arg("smooth") = false);
  m.def(
      "nist",
      [](const std::vector<std::string>& c, const std::vector<std::string>& r, int max_n) {
        return nist(eval_pairs(c, r), max_n);
      },
      py::arg("candidates"), py::arg("references"), py::arg("max_n") = 5);

  m.def(
      "synth_ablate",
      [](const Example& ex, const std::string& rule, std::uint64_t seed) {
        const auto r = synth_ablate(ex, {parse_edit_kind(rule), seed});
        return py::make_tuple(r.forward, r.mirrored, r.fact, r.edited_fact);
      },
      py::arg("example"), py::arg("rule") = "numeric", py::arg("seed") = 0);
  m.def(
      "quality_filter",
      [](const AblationExample& ex, std::size_t min_chars, std::size_t max_chars,
         std::size_t max_sentences) {
        QualityConfig cfg;
        cfg.min_target_chars = min_chars;
        cfg.max_target_chars = max_chars;
        cfg.max_context_sentences = max_sentences;
        const auto v = quality_filter(ex, cfg);
        return v.accepted ? std::string() : to_string(v.reason);
      },
      py::arg("example"), py::arg("min_target_chars") = 50, py::arg("max_target_chars") = 200,
      py::arg("max_context_sentences") = 3);
  m.def("make_desk_corpus", [](std::size_t n, std::uint64_t seed) {
    auto c = make_desk_corpus(n, seed);
    return py::make_tuple(c.train, c.ablation);
  }, py::arg("n") = 200, py::arg("seed") = 0);
}
