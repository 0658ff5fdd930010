#include "ablategen/datagen.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <random>

#include "ablategen/error.hpp"

namespace ablategen {

namespace {

constexpr std::array<std::string_view, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

int month_index(std::string_view token) {
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (kMonths[i] == token) return static_cast<int>(i);
  }
  return -1;
}

bool contains_token(const std::vector<TokenSpan>& spans, const std::string& token) {
  return std::any_of(spans.begin(), spans.end(),
                     [&](const TokenSpan& s) { return s.text == token; });
}

// Copies the casing pattern of `original` (all caps or leading capital).
std::string match_case(std::string_view original, std::string replacement) {
  const auto is_upper = [](char c) { return c >= 'A' && c <= 'Z'; };
  const bool all_upper =
      original.size() > 1 && std::all_of(original.begin(), original.end(), is_upper);
  for (std::size_t i = 0; i < replacement.size(); ++i) {
    char& c = replacement[i];
    if ((all_upper || (i == 0 && !original.empty() && is_upper(original[0]))) && c >= 'a' &&
        c <= 'z') {
      c = static_cast<char>(c - 'a' + 'A');
    }
  }
  return replacement;
}

std::string replace_token(std::string_view text, const std::string& token,
                          const std::string& replacement) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& span : split_words(text)) {
    if (span.text != token) continue;
    out.append(text.substr(pos, span.begin - pos));
    out += match_case(text.substr(span.begin, span.end - span.begin), replacement);
    pos = span.end;
  }
  out.append(text.substr(pos));
  return out;
}

std::string perturb_number(const std::string& digits, std::mt19937_64& rng) {
  unsigned long long value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() ||
      value > 1'000'000'000'000'000ULL) {
    return {};
  }
  std::uniform_int_distribution<int> magnitude(1, 9);
  std::uniform_int_distribution<int> sign(0, 1);
  for (;;) {
    const int delta = magnitude(rng) * (sign(rng) == 0 ? -1 : 1);
    if (delta < 0 && static_cast<unsigned long long>(-delta) > value) continue;
    const unsigned long long edited =
        delta < 0 ? value - static_cast<unsigned long long>(-delta)
                  : value + static_cast<unsigned long long>(delta);
    return std::to_string(edited);
  }
}

// Decodes one code point starting at text[i]; invalid sequences yield
// U+FFFD and consume one byte.
char32_t next_code_point(std::string_view text, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(text[i]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    ++i;
    return b0;
  } else if ((b0 & 0xe0) == 0xc0) {
    len = 2;
    cp = b0 & 0x1f;
  } else if ((b0 & 0xf0) == 0xe0) {
    len = 3;
    cp = b0 & 0x0f;
  } else if ((b0 & 0xf8) == 0xf0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xfffd;
  }
  if (i + len > text.size()) {
    ++i;
    return 0xfffd;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(text[i + k]);
    if ((b & 0xc0) != 0x80) {
      ++i;
      return 0xfffd;
    }
    cp = (cp << 6) | (b & 0x3f);
  }
  i += len;
  return cp;
}

bool is_bad_char(char32_t cp) {
  if (cp == '\t' || cp == '\n' || cp == '\r') return false;
  if (cp < 0x20 || cp == 0x7f) return true;
  if (cp >= 0x80 && cp <= 0x9f) return true;
  return cp == 0xfffd;
}

bool has_formatting_issues(std::string_view text, const QualityConfig& cfg) {
  std::size_t total = 0;
  std::size_t bad = 0;
  std::size_t line = 0;
  for (std::size_t i = 0; i < text.size();) {
    const char32_t cp = next_code_point(text, i);
    ++total;
    if (is_bad_char(cp)) ++bad;
    if (cp == '\n') {
      line = 0;
    } else if (++line > cfg.max_line_chars) {
      return true;
    }
  }
  return total > 0 &&
         static_cast<double>(bad) >= cfg.max_bad_char_fraction * static_cast<double>(total);
}

bool is_blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

bool host_allowed(const std::string& url, const std::vector<std::string>& allowed) {
  if (allowed.empty()) return true;
  const std::string host = url_host(url);
  for (const auto& a : allowed) {
    if (host == a) return true;
    if (host.size() > a.size() && host.compare(host.size() - a.size(), a.size(), a) == 0 &&
        host[host.size() - a.size() - 1] == '.') {
      return true;
    }
  }
  return false;
}

}  // namespace

std::string to_string(EditKind kind) {
  return kind == EditKind::kNumeric ? "numeric" : "chronological";
}

EditKind parse_edit_kind(const std::string& name) {
  if (name == "numeric") return EditKind::kNumeric;
  if (name == "chronological") return EditKind::kChronological;
  throw ValidationError("unknown edit rule '" + name + "' (expected numeric, chronological)");
}

SynthResult synth_ablate(const Example& ex, const EditRule& rule) {
  const auto g_spans = split_words(ex.grounding);
  const auto y_spans = split_words(ex.target);
  std::mt19937_64 rng(rule.seed);

  for (const auto& span : y_spans) {
    if (!contains_token(g_spans, span.text)) continue;
    std::string edited;
    if (rule.kind == EditKind::kNumeric) {
      if (!is_digit_run(span.text)) continue;
      edited = perturb_number(span.text, rng);
    } else {
      const int month = month_index(span.text);
      if (month < 0) continue;
      const int shift = std::uniform_int_distribution<int>(1, 11)(rng);
      edited = std::string(kMonths[static_cast<std::size_t>((month + shift) % 12)]);
    }
    if (edited.empty()) continue;

    const std::string g_ablated = replace_token(ex.grounding, span.text, edited);
    const std::string y_edited = replace_token(ex.target, span.text, edited);
    return {{ex.grounding, g_ablated, ex.context, ex.target},
            {g_ablated, ex.grounding, ex.context, y_edited},
            span.text,
            edited};
  }
  throw NoEditableFactError("no " + to_string(rule.kind) +
                            " fact shared by grounding and target");
}

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kNone:
      return "none";
    case RejectReason::kTargetLength:
      return "target_length";
    case RejectReason::kContextLength:
      return "context_sentences";
    case RejectReason::kEmptyGrounding:
      return "empty_grounding";
    case RejectReason::kFormatting:
      return "formatting";
    case RejectReason::kSourceHost:
      return "source_host";
  }
  return "none";
}

std::size_t count_code_points(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size();) {
    next_code_point(text, i);
    ++n;
  }
  return n;
}

std::size_t count_sentences(std::string_view text) {
  std::size_t sentences = 0;
  bool content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!space) content = true;
    const bool boundary = (c == '.' || c == '!' || c == '?') &&
                          (i + 1 == text.size() || text[i + 1] == ' ' || text[i + 1] == '\t' ||
                           text[i + 1] == '\n' || text[i + 1] == '\r');
    if (boundary && content) {
      ++sentences;
      content = false;
    }
  }
  if (content) ++sentences;
  return sentences;
}

std::string url_host(std::string_view url) {
  auto scheme = url.find("://");
  if (scheme != std::string_view::npos) url.remove_prefix(scheme + 3);
  const auto end = url.find_first_of("/?#");
  if (end != std::string_view::npos) url = url.substr(0, end);
  const auto at = url.rfind('@');
  if (at != std::string_view::npos) url.remove_prefix(at + 1);
  const auto colon = url.find(':');
  if (colon != std::string_view::npos) url = url.substr(0, colon);
  std::string host(url);
  for (char& c : host) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return host;
}

FilterVerdict quality_filter(const AblationExample& ex, const QualityConfig& cfg) {
  const std::size_t target_chars = count_code_points(ex.target);
  if (target_chars < cfg.min_target_chars || target_chars > cfg.max_target_chars) {
    return {false, RejectReason::kTargetLength};
  }
  if (count_sentences(ex.context) > cfg.max_context_sentences) {
    return {false, RejectReason::kContextLength};
  }
  if (is_blank(ex.grounding) || is_blank(ex.grounding_ablated)) {
    return {false, RejectReason::kEmptyGrounding};
  }
  if (has_formatting_issues(ex.grounding, cfg) || has_formatting_issues(ex.grounding_ablated, cfg)) {
    return {false, RejectReason::kFormatting};
  }
  return {};
}

ExtractionResult extract_natural(std::span<const RevisionPairRecord> records,
                                 const QualityConfig& cfg) {
  ExtractionResult result;
  for (const auto& rec : records) {
    const AblationExample pair[2] = {
        {rec.old_grounding, rec.new_grounding, rec.context, rec.old_target},
        {rec.new_grounding, rec.old_grounding, rec.context, rec.new_target},
    };
    const bool hosts_ok = std::all_of(rec.source_urls.begin(), rec.source_urls.end(),
                                      [&](const std::string& u) {
                                        return host_allowed(u, cfg.allowed_hosts);
                                      });
    for (const auto& ex : pair) {
      ++result.emitted_before_filter;
      FilterVerdict verdict = hosts_ok ? quality_filter(ex, cfg)
                                       : FilterVerdict{false, RejectReason::kSourceHost};
      if (verdict.accepted) {
        result.examples.push_back(ex);
      } else {
        ++result.rejected[to_string(verdict.reason)];
      }
    }
  }
  return result;
}

DeskCorpus make_desk_corpus(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("desk corpus size must be >= 1");
  struct Subject {
    std::string_view entity;
    std::string_view verb;
    std::string_view unit;
  };
  static constexpr std::array<Subject, 16> kSubjects = {{
      {"council", "approved", "projects"},  {"factory", "hired", "workers"},
      {"hospital", "added", "beds"},        {"museum", "acquired", "paintings"},
      {"library", "lent", "books"},         {"airline", "cancelled", "flights"},
      {"university", "admitted", "students"}, {"orchestra", "performed", "concerts"},
      {"union", "recruited", "members"},    {"railway", "opened", "stations"},
      {"brewery", "shipped", "barrels"},    {"shipyard", "launched", "vessels"},
      {"charity", "funded", "schools"},     {"bakery", "sold", "loaves"},
      {"laboratory", "published", "papers"}, {"farm", "harvested", "tonnes"},
  }};
  static constexpr std::array<std::string_view, 7> kDays = {
      "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"};

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_subject(0, kSubjects.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_day(0, kDays.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_month(0, kMonths.size() - 1);
  std::uniform_int_distribution<int> pick_number(2, 999);

  DeskCorpus corpus;
  corpus.train.reserve(n);
  corpus.ablation.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = kSubjects[pick_subject(rng)];
    const std::string day(kDays[pick_day(rng)]);
    const std::string month(kMonths[pick_month(rng)]);
    const int number = pick_number(rng);
    int other = pick_number(rng);
    while (other == number) other = pick_number(rng);

    const std::string entity(s.entity);
    const std::string verb(s.verb);
    const std::string unit(s.unit);
    auto grounding_with = [&](int value) {
      return "in " + month + " officials said the " + entity + " " + verb + " " +
             std::to_string(value) + " " + unit + " during the year .";
    };
    Example ex{grounding_with(number), "the " + entity + " released a statement on " + day + " .",
               "the " + entity + " " + verb + " " + std::to_string(number) + " " + unit + " ."};
    corpus.ablation.push_back({ex.grounding, grounding_with(other), ex.context, ex.target});
    corpus.train.push_back(std::move(ex));
  }
  return corpus;
}

}  // namespace ablategen
