#include "air/retriever.hpp"

#include <algorithm>
#include <unordered_set>

#include "air/errors.hpp"

namespace air {

void AirConfig::validate() const {
  if (!(M > 0.0 && M <= 1.0)) throw ConfigError("M must be in (0, 1]");
  if (T < 0) throw ConfigError("T must be >= 0");
  if (max_hops < 1) throw ConfigError("max-hops must be >= 1");
  if (chain_count < 1) throw ConfigError("parallel-chains must be >= 1");
  if (fixed_hops && (*fixed_hops < 1 || *fixed_hops > max_hops))
    throw ConfigError("fixed-hops must be in [1, max-hops]");
}

bool TermMatcher::covered(std::string_view q,
                          const TermSet& justification_terms) const {
  if (justification_terms.contains(q)) return true;
  if (kind == MatcherKind::lexical) return false;
  for (const auto& p : justification_terms) {
    if (table->cos_sim(q, p) >= M) return true;
  }
  return false;
}

bool soft_covered(std::string_view q, const TermSet& justification_terms,
                  const EmbeddingTable& table, double M) {
  return TermMatcher{MatcherKind::embedding, &table, M}.covered(
      q, justification_terms);
}

namespace {

TermSet union_of_terms(std::span<const Sentence> chain_sentences) {
  TermSet out;
  for (const Sentence& s : chain_sentences) out = out.set_union(s.terms);
  return out;
}

TermSet remainder_against(const TermSet& original, const TermSet& justification,
                          const TermMatcher& matcher) {
  std::vector<std::string> rem;
  for (const auto& q : original) {
    if (!matcher.covered(q, justification)) rem.push_back(q);
  }
  return TermSet(std::move(rem));
}

double coverage_from_remainder(const TermSet& original, const TermSet& remainder) {
  return (static_cast<double>(original.size()) -
          static_cast<double>(remainder.size())) /
         static_cast<double>(original.size());
}

}  // namespace

TermSet compute_remainder(const TermSet& original,
                          std::span<const Sentence> chain_sentences,
                          const TermMatcher& matcher) {
  return remainder_against(original, union_of_terms(chain_sentences), matcher);
}

double compute_coverage(const TermSet& original,
                        std::span<const Sentence> chain_sentences,
                        const TermMatcher& matcher) {
  if (original.empty()) throw EmptyQuery();
  return coverage_from_remainder(
      original, compute_remainder(original, chain_sentences, matcher));
}

TermSet reformulate(const QueryState& state, std::span<const Sentence> chain,
                    const AirConfig& config) {
  if (static_cast<int>(state.remainder.size()) > config.T) return state.remainder;
  TermSet expansion;
  if (config.expand_all_previous) {
    expansion = union_of_terms(chain);
  } else if (!chain.empty()) {
    expansion = chain.back().terms;
  }
  return state.remainder.set_union(expansion.set_minus(state.original_terms));
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::all_covered: return "all_covered";
    case StopReason::no_new_terms: return "no_new_terms";
    case StopReason::pool_exhausted: return "pool_exhausted";
    case StopReason::max_hops: return "max_hops";
    case StopReason::fixed_hops_reached: return "fixed_hops_reached";
  }
  return "unknown";
}

std::optional<StopReason> stop_reason_from_string(std::string_view name) {
  for (StopReason r : {StopReason::all_covered, StopReason::no_new_terms,
                       StopReason::pool_exhausted, StopReason::max_hops,
                       StopReason::fixed_hops_reached}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

namespace {

const Sentence* find_in_pool(const CandidatePool& pool, SentenceId id) {
  for (const auto& entry : pool.entries) {
    if (entry.sentence.id == id) return &entry.sentence;
  }
  return nullptr;
}

EvidenceChain run_chain(const TermSet& original, const CandidatePool& pool,
                        const AirConfig& config, const SentenceScorer& scorer,
                        const TermMatcher& matcher,
                        std::optional<SentenceId> forced_first) {
  EvidenceChain chain;
  std::vector<Sentence> chosen;
  std::unordered_set<SentenceId> used;
  TermSet current_query = original;
  TermSet prev_remainder = original;  // Q_r before the upcoming hop
  TermSet justification_union;

  for (int hop = 1;; ++hop) {
    const Sentence* pick = nullptr;
    double pick_score = 0.0;
    if (hop == 1 && forced_first) {
      pick = find_in_pool(pool, *forced_first);
      pick_score = scorer.score(current_query, *pick).total;
    } else {
      for (const auto& candidate : rank_candidates(current_query, pool, scorer)) {
        if (used.find(candidate.sentence_id) == used.end()) {
          pick = find_in_pool(pool, candidate.sentence_id);
          pick_score = candidate.score.total;
          break;
        }
      }
    }
    if (pick == nullptr) {
      chain.stop_reason = StopReason::pool_exhausted;
      break;
    }

    used.insert(pick->id);
    chosen.push_back(*pick);
    chain.sentence_ids.push_back(pick->id);
    justification_union = justification_union.set_union(pick->terms);

    TermSet new_remainder = remainder_against(original, justification_union, matcher);
    const double coverage = coverage_from_remainder(original, new_remainder);
    chain.hops.push_back(
        HopTrace{current_query, pick->id, pick_score, coverage, new_remainder});

    bool stop = false;
    if (!config.fixed_hops) {
      if (new_remainder.empty()) {
        chain.stop_reason = StopReason::all_covered;
        stop = true;
      } else if (new_remainder == prev_remainder) {
        chain.stop_reason = StopReason::no_new_terms;
        stop = true;
      }
    } else if (hop == *config.fixed_hops) {
      chain.stop_reason = StopReason::fixed_hops_reached;
      stop = true;
    }
    if (!stop && hop == config.max_hops) {
      chain.stop_reason = StopReason::max_hops;
      stop = true;
    }
    if (!stop && used.size() == pool.entries.size()) {
      chain.stop_reason = StopReason::pool_exhausted;
      stop = true;
    }
    if (stop) break;

    prev_remainder = new_remainder;
    if (config.mode == RetrievalMode::uncontrolled) {
      current_query = current_query.set_union(pick->terms);
    } else {
      QueryState state{original, new_remainder, coverage, current_query, hop};
      TermSet next = reformulate(state, chosen, config);
      // A fixed-hop run can reach full coverage and still have to continue;
      // if expansion yields nothing, keep querying with the previous terms.
      if (!next.empty()) current_query = std::move(next);
    }
  }
  return chain;
}

}  // namespace

EvidenceChain retrieve_chain(const TermSet& question_answer_query,
                             const CandidatePool& pool, const AirConfig& config,
                             const EmbeddingTable* table,
                             const CorpusStats& stats) {
  config.validate();
  if (pool.entries.empty()) throw EmptyPool();
  if (question_answer_query.empty()) throw EmptyQuery();
  const SentenceScorer scorer{config.matcher, table, &stats};
  const TermMatcher matcher{config.matcher, table, config.M};
  return run_chain(question_answer_query, pool, config, scorer, matcher,
                   std::nullopt);
}

ParallelChains retrieve_parallel(const TermSet& question_answer_query,
                                 const CandidatePool& pool,
                                 const AirConfig& config,
                                 const EmbeddingTable* table,
                                 const CorpusStats& stats) {
  config.validate();
  if (pool.entries.empty()) throw EmptyPool();
  if (question_answer_query.empty()) throw EmptyQuery();
  if (pool.entries.size() < static_cast<std::size_t>(config.chain_count))
    throw PoolTooSmall(config.chain_count, pool.entries.size());

  const SentenceScorer scorer{config.matcher, table, &stats};
  const TermMatcher matcher{config.matcher, table, config.M};

  ParallelChains result;
  const auto initial = rank_candidates(question_answer_query, pool, scorer);
  result.initial_ranking.reserve(initial.size());
  for (const auto& candidate : initial)
    result.initial_ranking.push_back(candidate.sentence_id);

  result.chains.reserve(config.chain_count);
  for (int i = 0; i < config.chain_count; ++i) {
    result.chains.push_back(run_chain(question_answer_query, pool, config, scorer,
                                      matcher, result.initial_ranking[i]));
  }

  std::unordered_set<SentenceId> seen;
  for (const auto& chain : result.chains) {
    for (SentenceId id : chain.sentence_ids) {
      if (seen.insert(id).second) result.merged_sentence_ids.push_back(id);
    }
  }
  return result;
}

}  // namespace air
