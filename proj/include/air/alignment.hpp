#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "air/corpus_stats.hpp"
#include "air/dataset.hpp"
#include "air/embedding.hpp"
#include "air/term_set.hpp"
#include "air/text.hpp"

namespace air {

struct TermAlignment {
  double sim = 0.0;
  std::string match;  // empty when nothing matched
};

// IDF-weighted sum of per-query-term best similarities, with the per-term
// breakdown kept so chains stay auditable.
struct AlignmentScore {
  double total = 0.0;
  // one entry per unique query term, in query-term (sorted) order
  std::vector<std::pair<std::string, TermAlignment>> per_term;
};

// Best cosine similarity of q against any sentence term; ties resolved to
// the lexicographically smallest matching term. Negative similarities are
// not clamped. Empty sentence yields (0.0, none).
TermAlignment align_term(std::string_view q, const TermSet& sentence_terms,
                         const EmbeddingTable& table);

AlignmentScore score_sentence(const TermSet& query_terms, const Sentence& sentence,
                              const EmbeddingTable& table,
                              const CorpusStats& stats);

// Same shape with exact string matching in place of the embedding max.
AlignmentScore score_sentence_lexical(const TermSet& query_terms,
                                      const Sentence& sentence,
                                      const CorpusStats& stats);

enum class MatcherKind { embedding, lexical };

// Bundles the scoring inputs so ranking and the retriever can switch between
// the embedding and lexical variants uniformly.
struct SentenceScorer {
  MatcherKind kind = MatcherKind::embedding;
  const EmbeddingTable* table = nullptr;  // required for embedding kind
  const CorpusStats* stats = nullptr;

  AlignmentScore score(const TermSet& query_terms, const Sentence& sentence) const;
};

struct RankedCandidate {
  SentenceId sentence_id;
  AlignmentScore score;
};

// Scores every pool sentence against the query (in parallel) and sorts by
// descending total, ties by ascending sentence_id.
std::vector<RankedCandidate> rank_candidates(const TermSet& query_terms,
                                             const CandidatePool& pool,
                                             const SentenceScorer& scorer);

}  // namespace air
