#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "air/dataset.hpp"
#include "air/term_set.hpp"
#include "air/text.hpp"

namespace air {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct Posting {
  SentenceId sentence_id;
  std::int32_t tf;
};

struct ScoredSentence {
  SentenceId sentence_id;
  double score;
};

// Inverted index over stopword-filtered tokens with Lucene-style BM25
// scoring: idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)). Immutable after
// build; searches are pure reads and may run concurrently.
class InvertedIndex {
 public:
  class Builder {
   public:
    explicit Builder(Bm25Params params = {}) : params_(params) {}

    // Sentences must be added in id order starting at 0 (line order).
    void add(std::span<const std::string> content_tokens);

    InvertedIndex build() &&;

   private:
    Bm25Params params_;
    std::unordered_map<std::string, std::uint32_t> term_ids_;
    std::vector<std::vector<Posting>> postings_;
    std::vector<std::int32_t> lengths_;
  };

  std::int64_t doc_count() const { return static_cast<std::int64_t>(lengths_.size()); }
  double avg_len() const { return avg_len_; }
  const Bm25Params& params() const { return params_; }
  std::int32_t sentence_length(SentenceId id) const { return lengths_.at(id); }

  std::int64_t doc_freq(std::string_view term) const;
  std::span<const Posting> postings(std::string_view term) const;
  std::vector<std::string> terms_sorted() const;

  // Descending score, ties by ascending sentence_id, at most k results,
  // zero-score sentences excluded. Empty query yields an empty list.
  std::vector<ScoredSentence> search(const TermSet& query, int k) const;

  // Single binary file with a magic header and format version; reload
  // reproduces identical search results.
  void save(const std::filesystem::path& path) const;
  static InvertedIndex load(const std::filesystem::path& path);

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  Bm25Params params_;
  double avg_len_ = 0.0;
  std::vector<std::int32_t> lengths_;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> term_ids_;
  std::vector<std::vector<Posting>> postings_;
};

InvertedIndex build_index(std::span<const Sentence> sentences,
                          Bm25Params params = {});

InvertedIndex build_index_from_texts(std::span<const std::string> texts,
                                     const TextPipeline& pipeline,
                                     Bm25Params params = {});

inline std::vector<ScoredSentence> bm25_search(const TermSet& query,
                                               const InvertedIndex& index,
                                               int k) {
  return index.search(query, k);
}

// BM25 pool for one candidate answer: query = content terms of question text
// concatenated with the answer text; the pool preserves BM25 rank order and
// carries the sentence texts.
CandidatePool pool_candidates(const QuestionRecord& question,
                              const AnswerCandidate& answer,
                              const InvertedIndex& index,
                              const KnowledgeBase& kb,
                              const TextPipeline& pipeline,
                              int pool_size = 80);

}  // namespace air
