#pragma once

// Serial brute-force reference implementations of the scoring kernels. They
// re-derive every quantity from first principles (no inverted index, no
// OpenMP, no shared accumulators) and exist so tests can check the optimized
// paths against an independent formulation, and so the benchmark has a serial
// baseline. Kept deliberately simple and slow.

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "air/alignment.hpp"
#include "air/bm25.hpp"
#include "air/corpus_stats.hpp"
#include "air/dataset.hpp"
#include "air/embedding.hpp"
#include "air/term_set.hpp"
#include "air/text.hpp"

namespace air::ref {

// Cosine by explicit component loop over the stored unit vectors; identical
// strings score exactly 1.0, any OOV side scores 0.0.
double cosine(std::string_view a, std::string_view b, const EmbeddingTable& table);

// Eq.-style alignment score: sum over query terms of idf(q) * best cosine
// against the sentence terms. table == nullptr selects the lexical variant
// (exact membership instead of the cosine max).
double alignment_score(const TermSet& query, const Sentence& sentence,
                       const EmbeddingTable* table, const CorpusStats& stats);

struct RankedId {
  SentenceId sentence_id;
  double score;
};

// Serial pool ranking with the brute-force scorer; descending score, ties by
// ascending sentence id.
std::vector<RankedId> rank_pool(const TermSet& query, const CandidatePool& pool,
                                const EmbeddingTable* table,
                                const CorpusStats& stats);

// BM25 by full scan: document frequencies, term frequencies and lengths are
// recounted from the token lists on every call.
std::vector<ScoredSentence> bm25_full_scan(
    const TermSet& query, std::span<const std::vector<std::string>> docs,
    Bm25Params params, int k);

// Serial document-frequency counting (ordered map, one pass).
CorpusStats build_stats(std::span<const std::string> texts,
                        const TextPipeline& pipeline);

// Uncovered original terms after soft-matching against every chain sentence.
TermSet remainder(const TermSet& original, std::span<const Sentence> chain,
                  const EmbeddingTable* table, double M);

}  // namespace air::ref
