#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ablategen {

using TokenId = std::int32_t;
using TokenSeq = std::vector<TokenId>;

// Ordered token alphabet. Ids are dense; the four reserved markers always
// occupy ids 0..3. BOS and SEP are conditioning-only markers and are never
// prediction targets; every other id is an "event" token.
class Vocab {
 public:
  static constexpr TokenId kUnk = 0;
  static constexpr TokenId kBos = 1;
  static constexpr TokenId kEos = 2;
  static constexpr TokenId kSep = 3;
  static constexpr std::size_t kNumReserved = 4;

  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kBosToken = "<s>";
  static constexpr std::string_view kEosToken = "</s>";
  static constexpr std::string_view kSepToken = "<sep>";

  Vocab();

  // Rebuilds a vocabulary from its token list. The list must start with the
  // reserved markers in id order and contain no duplicates.
  explicit Vocab(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  std::size_t event_size() const { return tokens_.size() - 2; }

  static bool is_event(TokenId id) { return id != kBos && id != kSep; }

  bool contains(TokenId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < tokens_.size();
  }

  std::optional<TokenId> find(std::string_view token) const;

  // Unknown surface tokens map to kUnk.
  TokenId lookup(std::string_view token) const;

  // Throws std::out_of_range for ids outside the vocabulary.
  const std::string& token(TokenId id) const;

  // Returns the existing id when the token is already present.
  TokenId add(std::string_view token);

  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

// A surface token plus the byte range it was cut from in the original text.
// `text` is lowercased; the range points at the original casing.
struct TokenSpan {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Lowercases ASCII, splits on whitespace, and peels leading and trailing
// ASCII punctuation off each word one character at a time. Interior
// punctuation stays attached ("3.5", "don't").
std::vector<TokenSpan> split_words(std::string_view text);

enum class VocabMode { kBuild, kFrozen };

// In build mode unseen tokens are appended to `vocab`; in frozen mode they
// map to Vocab::kUnk and `vocab` is left untouched.
TokenSeq tokenize(std::string_view text, VocabMode mode, Vocab& vocab);
TokenSeq tokenize(std::string_view text, const Vocab& vocab);

std::string detokenize(const TokenSeq& ids, const Vocab& vocab);

bool is_digit_run(std::string_view token);

}  // namespace ablategen
