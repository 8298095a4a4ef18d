#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "air/term_set.hpp"

namespace air {

using SentenceId = std::int32_t;

struct TokenizerConfig {
  // ASCII letters are lowercased; bytes >= 0x80 are kept verbatim so that
  // UTF-8 words survive as single tokens.
  bool lowercase = true;
};

// Lowercases and splits on any non-alphanumeric byte. Pure-digit tokens are
// kept, empty fragments dropped. Deterministic and locale-independent.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config = {});

class StopwordList {
 public:
  StopwordList() = default;

  // One word per line, UTF-8, '#' starts a comment line. Blank lines ignored.
  static StopwordList load(const std::filesystem::path& path);
  static StopwordList from_text(std::string_view text);
  static StopwordList from_words(std::vector<std::string> words);
  static StopwordList none() { return StopwordList(); }

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_set<std::string, Hash, std::equal_to<>> words_;
};

// Unique non-stopword tokens, order-free.
TermSet content_terms(const std::vector<std::string>& tokens,
                      const StopwordList& stopwords);

// A corpus or paragraph sentence together with its derived term data.
// `length` is the content-token count (duplicates included), which is the
// document length used by BM25.
struct Sentence {
  SentenceId id = 0;
  std::string text;
  std::vector<std::string> content_tokens;
  TermSet terms;
  std::int32_t length = 0;
};

// Fixes one tokenization + stopword configuration so that every component
// (IDF stats, BM25 index, alignment, coverage bookkeeping) sees the same
// term universe.
struct TextPipeline {
  TokenizerConfig config;
  StopwordList stopwords;

  std::vector<std::string> tokens(std::string_view text) const {
    return tokenize(text, config);
  }

  TermSet terms(std::string_view text) const {
    return content_terms(tokens(text), stopwords);
  }

  Sentence make_sentence(SentenceId id, std::string text) const;
};

}  // namespace air
