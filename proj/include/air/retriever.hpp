#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "air/alignment.hpp"
#include "air/corpus_stats.hpp"
#include "air/dataset.hpp"
#include "air/embedding.hpp"
#include "air/term_set.hpp"
#include "air/text.hpp"

namespace air {

enum class RetrievalMode { controlled, uncontrolled };

struct AirConfig {
  double M = 0.95;            // soft-match cosine threshold
  int T = 2;                  // expansion kicks in when |remainder| <= T
  int max_hops = 6;
  int chain_count = 1;        // parallel chains (p)
  RetrievalMode mode = RetrievalMode::controlled;
  MatcherKind matcher = MatcherKind::embedding;
  std::optional<int> fixed_hops;  // overrides the natural stopping criteria
  bool expand_all_previous = false;

  void validate() const;  // throws ConfigError on invariant violations
};

// Soft term inclusion: a query term counts as covered when its best cosine
// similarity against the justification terms reaches M. The lexical matcher
// reduces this to exact set membership.
struct TermMatcher {
  MatcherKind kind = MatcherKind::embedding;
  const EmbeddingTable* table = nullptr;
  double M = 0.95;

  bool covered(std::string_view q, const TermSet& justification_terms) const;
};

bool soft_covered(std::string_view q, const TermSet& justification_terms,
                  const EmbeddingTable& table, double M);

TermSet compute_remainder(const TermSet& original,
                          std::span<const Sentence> chain_sentences,
                          const TermMatcher& matcher);

double compute_coverage(const TermSet& original,
                        std::span<const Sentence> chain_sentences,
                        const TermMatcher& matcher);

// Remainder/coverage bookkeeping for one in-flight chain.
struct QueryState {
  TermSet original_terms;
  TermSet remainder;
  double coverage = 0.0;
  TermSet current_query;
  int hop = 0;
};

// Next-hop query: the remainder alone while it is still large, otherwise the
// remainder expanded with the new terms of the latest justification (or of
// the whole chain when expand_all_previous is set).
TermSet reformulate(const QueryState& state, std::span<const Sentence> chain,
                    const AirConfig& config);

enum class StopReason {
  all_covered,
  no_new_terms,
  pool_exhausted,
  max_hops,
  fixed_hops_reached,
};

std::string_view to_string(StopReason reason);
std::optional<StopReason> stop_reason_from_string(std::string_view name);

struct HopTrace {
  TermSet query_terms;  // query used to rank this hop
  SentenceId chosen_sentence_id = 0;
  double score = 0.0;
  double coverage = 0.0;      // after this hop
  TermSet remainder_terms;    // after this hop
};

struct EvidenceChain {
  std::vector<SentenceId> sentence_ids;
  std::vector<HopTrace> hops;
  StopReason stop_reason = StopReason::pool_exhausted;
};

// One full retrieval loop: rank the pool with the current query, take the
// best sentence not yet in the chain, update remainder/coverage against the
// original terms, stop or reformulate.
EvidenceChain retrieve_chain(const TermSet& question_answer_query,
                             const CandidatePool& pool, const AirConfig& config,
                             const EmbeddingTable* table,
                             const CorpusStats& stats);

struct ParallelChains {
  std::vector<EvidenceChain> chains;
  std::vector<SentenceId> merged_sentence_ids;  // union, first-seen order
  std::vector<SentenceId> initial_ranking;      // pool ranked by initial query
};

// p chains seeded with the top-p sentences of the initial ranking, each
// continued with the standard loop. p = 1 degenerates to retrieve_chain.
ParallelChains retrieve_parallel(const TermSet& question_answer_query,
                                 const CandidatePool& pool,
                                 const AirConfig& config,
                                 const EmbeddingTable* table,
                                 const CorpusStats& stats);

}  // namespace air
