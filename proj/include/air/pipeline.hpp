#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "air/bm25.hpp"
#include "air/corpus_stats.hpp"
#include "air/dataset.hpp"
#include "air/embedding.hpp"
#include "air/metrics.hpp"
#include "air/retriever.hpp"
#include "air/text.hpp"
#include "air/trace_io.hpp"

namespace air {

enum class DatasetKind { multirc, qasc };

std::string to_string(DatasetKind kind);

// Shared inputs for batch retrieval over one dataset split. Pointers stay
// owned by the caller and must outlive the run; kb/index are only needed for
// records whose candidate_source is kb_pool.
struct RetrievalEnv {
  DatasetKind kind = DatasetKind::multirc;
  std::vector<QuestionRecord> questions;
  const KnowledgeBase* kb = nullptr;
  const InvertedIndex* index = nullptr;
  int pool_size = 80;
  const TextPipeline* pipeline = nullptr;
  const EmbeddingTable* table = nullptr;
  const CorpusStats* stats = nullptr;
};

struct RetrievalOptions {
  AirConfig config;
  bool pad_ranking = false;  // extend merged ids with pool leftovers, cap 10
  bool clamp_chains = true;  // shrink chain count to pool size per unit
};

nlohmann::ordered_json make_config_json(const RetrievalEnv& env,
                                        const RetrievalOptions& opt);

// Runs one (question, answer) retrieval per unit, in dataset order. The loop
// is OpenMP-parallel over units; output order and content are independent of
// thread count. Units with an empty content query or an empty pool yield an
// empty trace (no chains) instead of failing the batch.
std::vector<TraceRecord> run_retrieval(const RetrievalEnv& env,
                                       const RetrievalOptions& opt);

// Macro P/R/F1 of merged evidence ids against gold ids, one unit per
// (question, answer). Gold sets are per question and shared by its answers.
SelectionMetrics evaluate_selection(const std::vector<TraceRecord>& traces,
                                    const std::vector<QuestionRecord>& questions);

// Recall@10 over the correct answer's ranked list (padded_ranking when
// present, merged ids otherwise). Unresolved gold texts become sentinel ids
// that can never be found, so they count as misses rather than aborting.
RecallAt10 evaluate_recall(const std::vector<TraceRecord>& traces,
                           const std::vector<QuestionRecord>& questions);

// Retrieval-quality-vs-hops grid: five retrieval variants, each forced to
// return exactly h sentences per unit, scored with macro F1 (percent).
struct DriftTable {
  std::vector<std::string> variants;
  std::vector<int> hops;
  std::vector<std::vector<double>> f1;  // [hop index][variant index]
  double at(int hop, const std::string& variant) const;
  std::string to_csv(const std::string& config_line) const;
};

DriftTable run_drift(const RetrievalEnv& env, const AirConfig& base,
                     int max_hops = 5);

struct SensitivityPoint {
  double param = 0.0;
  double f1 = 0.0;            // percent
  double both_found = 0.0;    // percent, kb-pool datasets only
  double at_least_one = 0.0;  // percent, kb-pool datasets only
};

struct SensitivityTable {
  std::string param_name;
  bool recall_metric = false;
  std::vector<SensitivityPoint> points;
  std::string to_csv(const std::string& config_line) const;
};

SensitivityTable run_sensitivity_m(const RetrievalEnv& env, const AirConfig& base,
                                   const std::vector<double>& grid);
SensitivityTable run_sensitivity_t(const RetrievalEnv& env, const AirConfig& base,
                                   const std::vector<int>& grid);

}  // namespace air
