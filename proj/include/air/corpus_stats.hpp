#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "air/text.hpp"

namespace air {

// Document frequencies over a sentence corpus and the smoothed IDF derived
// from them: idf(t) = ln((N + 1) / (df + 1)) + 1. A term occurring several
// times inside one sentence still counts once (presence semantics). Immutable
// after construction and shareable across threads.
class CorpusStats {
 public:
  static CorpusStats build(std::span<const Sentence> sentences);

  // Tokenizes and counts in parallel; the merged counts are integer sums, so
  // the result is independent of the thread count.
  static CorpusStats build_from_texts(std::span<const std::string> texts,
                                      const TextPipeline& pipeline);

  static CorpusStats from_counts(
      std::int64_t doc_count,
      std::vector<std::pair<std::string, std::int64_t>> doc_freq);

  std::int64_t doc_count() const { return doc_count_; }
  std::size_t term_count() const { return doc_freq_.size(); }

  // 0 for terms never seen in the corpus.
  std::int64_t doc_freq(std::string_view term) const;

  std::vector<std::string> terms_sorted() const;

  double idf(std::string_view term) const;

  // Line format: header "N_DOCS<TAB>count", then "term<TAB>df" sorted by
  // term. Reloading reproduces identical idf values bit-for-bit.
  void save(const std::filesystem::path& path) const;
  static CorpusStats load(const std::filesystem::path& path);

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::int64_t doc_count_ = 0;
  std::unordered_map<std::string, std::int64_t, Hash, std::equal_to<>> doc_freq_;
};

}  // namespace air
