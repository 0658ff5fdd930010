#include "ablategen/vocab.hpp"

#include <stdexcept>

#include "ablategen/error.hpp"

namespace ablategen {

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) || (c >= 0x5b && c <= 0x60) ||
         (c >= 0x7b && c <= 0x7e);
}

char lower(unsigned char c) {
  return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
}

std::string lowered(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(lower(c));
  return out;
}

}  // namespace

Vocab::Vocab() {
  for (auto t : {kUnkToken, kBosToken, kEosToken, kSepToken}) add(t);
}

Vocab::Vocab(std::vector<std::string> tokens) {
  const std::string_view reserved[] = {kUnkToken, kBosToken, kEosToken, kSepToken};
  if (tokens.size() < kNumReserved) {
    throw DataError("vocabulary is missing reserved tokens");
  }
  for (std::size_t i = 0; i < kNumReserved; ++i) {
    if (tokens[i] != reserved[i]) {
      throw DataError("vocabulary reserved token " + std::to_string(i) + " is '" + tokens[i] +
                      "', expected '" + std::string(reserved[i]) + "'");
    }
  }
  for (const auto& t : tokens) {
    if (index_.count(t) != 0) throw DataError("duplicate vocabulary token '" + t + "'");
    add(t);
  }
}

std::optional<TokenId> Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocab::lookup(std::string_view token) const { return find(token).value_or(kUnk); }

const std::string& Vocab::token(TokenId id) const {
  if (!contains(id)) throw std::out_of_range("token id " + std::to_string(id) + " not in vocab");
  return tokens_[static_cast<std::size_t>(id)];
}

TokenId Vocab::add(std::string_view token) {
  std::string key(token);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

std::vector<TokenSpan> split_words(std::string_view text) {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i == n) break;
    std::size_t begin = i;
    while (i < n && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t end = i;

    std::vector<TokenSpan> trailing;
    while (begin < end && is_punct(static_cast<unsigned char>(text[begin]))) {
      out.push_back({lowered(text.substr(begin, 1)), begin, begin + 1});
      ++begin;
    }
    while (end > begin && is_punct(static_cast<unsigned char>(text[end - 1]))) {
      trailing.push_back({lowered(text.substr(end - 1, 1)), end - 1, end});
      --end;
    }
    if (begin < end) out.push_back({lowered(text.substr(begin, end - begin)), begin, end});
    out.insert(out.end(), trailing.rbegin(), trailing.rend());
  }
  return out;
}

TokenSeq tokenize(std::string_view text, VocabMode mode, Vocab& vocab) {
  TokenSeq ids;
  for (const auto& span : split_words(text)) {
    ids.push_back(mode == VocabMode::kBuild ? vocab.add(span.text) : vocab.lookup(span.text));
  }
  return ids;
}

TokenSeq tokenize(std::string_view text, const Vocab& vocab) {
  TokenSeq ids;
  for (const auto& span : split_words(text)) ids.push_back(vocab.lookup(span.text));
  return ids;
}

std::string detokenize(const TokenSeq& ids, const Vocab& vocab) {
  std::string out;
  for (TokenId id : ids) {
    if (!out.empty()) out.push_back(' ');
    out += vocab.token(id);
  }
  return out;
}

bool is_digit_run(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace ablategen
