#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ablategen/ablation.hpp"
#include "ablategen/grounded_lm.hpp"

namespace ablategen {

enum class EditKind { kNumeric, kChronological };

std::string to_string(EditKind kind);
EditKind parse_edit_kind(const std::string& name);

struct EditRule {
  EditKind kind = EditKind::kNumeric;
  std::uint64_t seed = 0;
};

// Synthetic runs are capped unless the caller raises the limit explicitly.
inline constexpr std::size_t kDefaultSynthCap = 10000;

struct SynthResult {
  AblationExample forward;   // (g, g', c, y)
  AblationExample mirrored;  // (g', g, c, y')
  std::string fact;          // edited token as it appears in g and y
  std::string edited_fact;   // its replacement in g' and y'
};

// Edits one fact shared (as an identical token) by grounding and target.
// Numeric: a digit-run token is shifted by a nonzero delta in [-9, 9] (the
// result stays non-negative). Chronological: a month name is rotated
// forward by 1..11 months. Every occurrence in both texts is replaced;
// nothing else changes. Throws NoEditableFactError when no such token
// exists.
SynthResult synth_ablate(const Example& ex, const EditRule& rule);

// One Wikipedia-style revision: a cited sentence y in context c was replaced
// by y', and the citation changed from g to g'.
struct RevisionPairRecord {
  std::string context;
  std::string old_target;
  std::string new_target;
  std::string old_grounding;
  std::string new_grounding;
  std::vector<std::string> source_urls;

  bool operator==(const RevisionPairRecord&) const = default;
};

struct QualityConfig {
  std::size_t min_target_chars = 50;
  std::size_t max_target_chars = 200;
  std::size_t max_context_sentences = 3;
  double max_bad_char_fraction = 0.10;
  std::size_t max_line_chars = 2000;
  // Source URL hosts to accept (subdomains match). Empty accepts all.
  std::vector<std::string> allowed_hosts;
};

enum class RejectReason {
  kNone,
  kTargetLength,
  kContextLength,
  kEmptyGrounding,
  kFormatting,
  kSourceHost,
};

std::string to_string(RejectReason reason);

struct FilterVerdict {
  bool accepted = true;
  RejectReason reason = RejectReason::kNone;
};

// Character counts are in Unicode code points. Sentences are split on
// '.', '!' or '?' followed by whitespace or end of text. A character is
// "bad" when it is a control character, a C1 control, U+FFFD, or an invalid
// UTF-8 byte.
FilterVerdict quality_filter(const AblationExample& ex, const QualityConfig& cfg);

std::size_t count_code_points(std::string_view text);
std::size_t count_sentences(std::string_view text);
std::string url_host(std::string_view url);

struct ExtractionResult {
  std::vector<AblationExample> examples;
  std::size_t emitted_before_filter = 0;
  std::map<std::string, std::size_t> rejected;  // reason -> count
};

// Emits (g, g', c, y) and (g', g, c, y') per record, then drops examples
// failing quality_filter (or the host allowlist). Output order follows
// input order.
ExtractionResult extract_natural(std::span<const RevisionPairRecord> records,
                                 const QualityConfig& cfg);

struct DeskCorpus {
  std::vector<Example> train;
  std::vector<AblationExample> ablation;
};

// Templated desk-scale corpus. Target i reads
// "the <entity> <verb> <number> <unit> ."; its grounding states the same
// fact with the number appearing once, and the ablated grounding swaps the
// number for a different one. Deterministic in (n, seed).
DeskCorpus make_desk_corpus(std::size_t n, std::uint64_t seed);

}  // namespace ablategen
