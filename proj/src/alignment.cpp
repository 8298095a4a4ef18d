#include "air/alignment.hpp"

#include <algorithm>

#include "air/errors.hpp"

namespace air {

TermAlignment align_term(std::string_view q, const TermSet& sentence_terms,
                         const EmbeddingTable& table) {
  TermAlignment best;
  if (sentence_terms.empty()) return best;
  bool first = true;
  // sentence terms iterate in sorted order, so a strict > keeps the
  // lexicographically smallest term on ties
  for (const auto& p : sentence_terms) {
    const double sim = table.cos_sim(q, p);
    if (first || sim > best.sim) {
      best.sim = sim;
      best.match = p;
      first = false;
    }
  }
  return best;
}

namespace {

AlignmentScore score_impl(const TermSet& query_terms, const Sentence& sentence,
                          const EmbeddingTable* table, const CorpusStats& stats) {
  if (query_terms.empty()) throw EmptyQuery();
  AlignmentScore score;
  score.per_term.reserve(query_terms.size());
  for (const auto& q : query_terms) {
    TermAlignment aligned;
    if (table != nullptr) {
      aligned = align_term(q, sentence.terms, *table);
    } else if (sentence.terms.contains(q)) {
      aligned = TermAlignment{1.0, q};
    }
    score.total += stats.idf(q) * aligned.sim;
    score.per_term.emplace_back(q, std::move(aligned));
  }
  return score;
}

}  // namespace

AlignmentScore score_sentence(const TermSet& query_terms, const Sentence& sentence,
                              const EmbeddingTable& table,
                              const CorpusStats& stats) {
  return score_impl(query_terms, sentence, &table, stats);
}

AlignmentScore score_sentence_lexical(const TermSet& query_terms,
                                      const Sentence& sentence,
                                      const CorpusStats& stats) {
  return score_impl(query_terms, sentence, nullptr, stats);
}

AlignmentScore SentenceScorer::score(const TermSet& query_terms,
                                     const Sentence& sentence) const {
  if (kind == MatcherKind::embedding)
    return score_sentence(query_terms, sentence, *table, *stats);
  return score_sentence_lexical(query_terms, sentence, *stats);
}

std::vector<RankedCandidate> rank_candidates(const TermSet& query_terms,
                                             const CandidatePool& pool,
                                             const SentenceScorer& scorer) {
  if (pool.entries.empty()) throw EmptyPool();
  if (query_terms.empty()) throw EmptyQuery();

  const auto n = static_cast<std::int64_t>(pool.entries.size());
  std::vector<RankedCandidate> ranked(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    ranked[i] = RankedCandidate{pool.entries[i].sentence.id,
                                scorer.score(query_terms, pool.entries[i].sentence)};
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedCandidate& a, const RankedCandidate& b) {
              if (a.score.total != b.score.total) return a.score.total > b.score.total;
              return a.sentence_id < b.sentence_id;
            });
  return ranked;
}

}  // namespace air
