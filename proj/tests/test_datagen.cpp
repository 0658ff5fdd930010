#include <doctest.h>

#include <algorithm>
#include <set>

#include "ablategen/datagen.hpp"
#include "ablategen/error.hpp"

using namespace ablategen;

namespace {

std::vector<std::string> words(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& s : split_words(text)) out.push_back(s.text);
  return out;
}

// Positions where two equal-length token lists differ.
std::vector<std::size_t> diff_positions(const std::string& a, const std::string& b) {
  const auto wa = words(a);
  const auto wb = words(b);
  REQUIRE(wa.size() == wb.size());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    if (wa[i] != wb[i]) out.push_back(i);
  }
  return out;
}

std::string repeat(char c, std::size_t n) { return std::string(n, c); }

}  // namespace

TEST_CASE("numeric edit rewrites the shared number everywhere") {
  const Example ex{"Rescuers reached 4 miners on Monday; all 4 were unhurt.",
                   "The mine collapsed.", "Rescue teams freed 4 miners after a day."};
  const auto r = synth_ablate(ex, {EditKind::kNumeric, 7});
  CHECK(r.fact == "4");
  CHECK(r.edited_fact != "4");
  CHECK(is_digit_run(r.edited_fact));

  CHECK(r.forward.grounding == ex.grounding);
  CHECK(r.forward.target == ex.target);
  CHECK(r.forward.context == ex.context);
  CHECK(r.mirrored.grounding == r.forward.grounding_ablated);
  CHECK(r.mirrored.grounding_ablated == ex.grounding);
  CHECK(r.mirrored.context == ex.context);

  const auto g_ablated = words(r.forward.grounding_ablated);
  CHECK(std::count(g_ablated.begin(), g_ablated.end(), r.edited_fact) == 2);
  CHECK(std::count(g_ablated.begin(), g_ablated.end(), "4") == 0);
  for (auto i : diff_positions(ex.grounding, r.forward.grounding_ablated)) {
    CHECK(words(ex.grounding)[i] == "4");
  }
  for (auto i : diff_positions(ex.target, r.mirrored.target)) CHECK(words(ex.target)[i] == "4");
}

TEST_CASE("numeric edits stay non-negative and never equal the original") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Example ex{"only 3 boats", "", "3 boats left"};
    const auto r = synth_ablate(ex, {EditKind::kNumeric, seed});
    const long edited = std::stol(r.edited_fact);
    CHECK(edited >= 0);
    CHECK(edited != 3);
    CHECK(std::abs(edited - 3) <= 9);
  }
}

TEST_CASE("chronological edit rotates a shared month and keeps casing") {
  const Example ex{"The Queen toured Canada in March 1959.", "", "She toured Canada in March."};
  const auto r = synth_ablate(ex, {EditKind::kChronological, 1});
  CHECK(r.fact == "march");
  CHECK(r.edited_fact != "march");
  const std::string cap = std::string(1, static_cast<char>(r.edited_fact[0] - 'a' + 'A')) +
                          r.edited_fact.substr(1);
  CHECK(r.forward.grounding_ablated.find(cap) != std::string::npos);
  CHECK(r.mirrored.target == "She toured Canada in " + cap + ".");
  CHECK(diff_positions(ex.grounding, r.forward.grounding_ablated).size() == 1);

  std::set<std::string> seen;
  for (std::uint64_t s = 0; s < 300; ++s) {
    seen.insert(synth_ablate(ex, {EditKind::kChronological, s}).edited_fact);
  }
  CHECK(seen.size() == 11);
  CHECK(seen.count("march") == 0);
}

TEST_CASE("synth_ablate requires a fact in both grounding and target") {
  CHECK_THROWS_AS(synth_ablate({"founded in 1999", "", "it was founded long ago"},
                               {EditKind::kNumeric, 1}),
                  NoEditableFactError);
  CHECK_THROWS_AS(synth_ablate({"opened in may", "", "it opened in june"},
                               {EditKind::kChronological, 1}),
                  NoEditableFactError);
  // "4,000" is one token, not a digit run.
  CHECK_THROWS_AS(synth_ablate({"4,000 fans", "", "4,000 fans came"}, {EditKind::kNumeric, 1}),
                  NoEditableFactError);
  CHECK_THROWS_AS(parse_edit_kind("spatial"), ValidationError);
}

TEST_CASE("synth_ablate is deterministic in the seed") {
  const Example ex{"sold 120 cars in july", "", "it sold 120 cars in july"};
  CHECK(synth_ablate(ex, {EditKind::kNumeric, 5}).forward ==
        synth_ablate(ex, {EditKind::kNumeric, 5}).forward);
}

TEST_CASE("quality_filter boundaries") {
  QualityConfig cfg;
  const std::string g = "A clean grounding document about the harbour.";
  AblationExample ok{g, g + " Extra.", "First sentence. Second one.", repeat('x', 120)};
  CHECK(quality_filter(ok, cfg).accepted);

  auto edge = ok;
  edge.target = repeat('y', 50);
  CHECK(quality_filter(edge, cfg).accepted);
  edge.target = repeat('y', 200);
  CHECK(quality_filter(edge, cfg).accepted);
  edge.target = repeat('y', 201);
  CHECK(quality_filter(edge, cfg).reason == RejectReason::kTargetLength);
  edge.target = repeat('y', 49);
  CHECK(quality_filter(edge, cfg).reason == RejectReason::kTargetLength);

  // Characters, not bytes: 60 two-byte characters pass.
  std::string accented;
  for (int i = 0; i < 60; ++i) accented += "\xc3\xa9";
  edge.target = accented;
  CHECK(count_code_points(accented) == 60);
  CHECK(quality_filter(edge, cfg).accepted);

  auto ctx = ok;
  ctx.context = "One. Two! Three? Four.";
  CHECK(quality_filter(ctx, cfg).reason == RejectReason::kContextLength);
  ctx.context = "Version 2.5 shipped. It was late.";
  CHECK(quality_filter(ctx, cfg).accepted);
  ctx.context = "";
  CHECK(quality_filter(ctx, cfg).accepted);

  auto empty = ok;
  empty.grounding_ablated = "  \n";
  CHECK(quality_filter(empty, cfg).reason == RejectReason::kEmptyGrounding);

  auto noisy = ok;
  noisy.grounding = std::string(20, 'a') + std::string(20, '\x01');
  CHECK(quality_filter(noisy, cfg).reason == RejectReason::kFormatting);
  noisy.grounding = repeat('w', 2001);
  CHECK(quality_filter(noisy, cfg).reason == RejectReason::kFormatting);

  // Pure predicate: the same answer twice.
  CHECK(quality_filter(noisy, cfg).reason == quality_filter(noisy, cfg).reason);
}

TEST_CASE("count_sentences and url_host helpers") {
  CHECK(count_sentences("") == 0);
  CHECK(count_sentences("No terminal punctuation") == 1);
  CHECK(count_sentences("One. Two.") == 2);
  CHECK(count_sentences("Pi is 3.14 roughly.") == 1);
  CHECK(url_host("https://www.BBC.co.uk/news/x?y=1") == "www.bbc.co.uk");
  CHECK(url_host("http://user@example.com:8080/a") == "example.com");
  CHECK(url_host("reuters.com/article") == "reuters.com");
}

namespace {

RevisionPairRecord clean_record(int i) {
  const std::string n = std::to_string(i);
  return {"The bridge opened in 1990. It spans the river.",
          "The bridge carried " + n + "0,000 vehicles per day according to the city traffic office.",
          "The bridge carried " + n + "5,000 vehicles per day according to the regional traffic office.",
          "City traffic office report: the bridge carried " + n + "0,000 vehicles per day.",
          "Regional traffic office report: the bridge carried " + n + "5,000 vehicles per day.",
          {"https://news.example.com/a", "https://www.example.org/b"}};
}

}  // namespace

TEST_CASE("extract_natural emits mirrored pairs and filters") {
  std::vector<RevisionPairRecord> records;
  for (int i = 1; i <= 5; ++i) records.push_back(clean_record(i));
  const auto result = extract_natural(records, {});
  CHECK(result.emitted_before_filter == 10);
  REQUIRE(result.examples.size() == 10);
  for (std::size_t i = 0; i < 10; i += 2) {
    const auto& a = result.examples[i];
    const auto& b = result.examples[i + 1];
    CHECK(a.grounding == b.grounding_ablated);
    CHECK(a.grounding_ablated == b.grounding);
    CHECK(a.context == b.context);
    CHECK(a.target == records[i / 2].old_target);
    CHECK(b.target == records[i / 2].new_target);
  }

  auto short_target = clean_record(1);
  short_target.old_target = std::string(30, 'z');
  short_target.new_target = std::string(31, 'z');
  const auto r1 = extract_natural(std::vector<RevisionPairRecord>{short_target}, {});
  CHECK(r1.examples.empty());
  CHECK(r1.rejected.at("target_length") == 2);

  auto long_context = clean_record(1);
  long_context.context = "One. Two. Three. Four.";
  CHECK(extract_natural(std::vector<RevisionPairRecord>{long_context}, {}).examples.empty());

  QualityConfig hosts;
  hosts.allowed_hosts = {"example.com"};
  const auto r2 = extract_natural(std::vector<RevisionPairRecord>{clean_record(2)}, hosts);
  CHECK(r2.examples.empty());
  CHECK(r2.rejected.at("source_host") == 2);
  hosts.allowed_hosts = {"example.com", "example.org"};
  CHECK(extract_natural(std::vector<RevisionPairRecord>{clean_record(2)}, hosts).examples.size() == 2);

  // Filtering the survivors again changes nothing.
  for (const auto& ex : result.examples) CHECK(quality_filter(ex, {}).accepted);
}

TEST_CASE("make_desk_corpus construction guarantees") {
  const auto corpus = make_desk_corpus(200, 9);
  REQUIRE(corpus.train.size() == 200);
  REQUIRE(corpus.ablation.size() == 200);
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& ex = corpus.ablation[i];
    CHECK(ex.grounding == corpus.train[i].grounding);
    CHECK(ex.target == corpus.train[i].target);
    CHECK(ex.grounding != ex.grounding_ablated);
    std::string fact;
    for (const auto& w : words(ex.target)) {
      if (is_digit_run(w)) fact = w;
    }
    REQUIRE(!fact.empty());
    const auto g = words(ex.grounding);
    const auto ga = words(ex.grounding_ablated);
    CHECK(std::count(g.begin(), g.end(), fact) == 1);
    CHECK(std::count(ga.begin(), ga.end(), fact) == 0);
  }

  const auto again = make_desk_corpus(200, 9);
  CHECK(again.train == corpus.train);
  CHECK(again.ablation == corpus.ablation);
  CHECK(make_desk_corpus(200, 10).train != corpus.train);

  const auto one = make_desk_corpus(1, 4);
  CHECK(one.train.size() == 1);
  CHECK(one.ablation.size() == 1);
  CHECK_THROWS_AS(make_desk_corpus(0, 1), ValidationError);
}
