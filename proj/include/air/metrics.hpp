#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "air/text.hpp"

namespace air {

struct QuestionPrf {
  std::string question_id;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t retrieved = 0;
  std::int64_t gold = 0;
  std::int64_t overlap = 0;
};

// Macro-averaged evidence-selection precision/recall/F1. Questions without
// gold annotations are excluded from the averages but counted and reported.
struct SelectionMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t evaluated = 0;
  std::vector<std::string> excluded_no_gold;
  std::vector<QuestionPrf> per_question;
};

using IdSetByQuestion = std::map<std::string, std::vector<SentenceId>>;

// Per question: P = |retrieved ∩ gold| / |retrieved| (0 when nothing was
// retrieved), R = |retrieved ∩ gold| / |gold|, F1 their harmonic mean.
// The two maps must carry identical question ids.
SelectionMetrics selection_prf(const IdSetByQuestion& retrieved,
                               const IdSetByQuestion& gold);

struct RecallAt10 {
  double both_found = 0.0;
  double at_least_one_found = 0.0;
  int k = 10;
  std::int64_t questions = 0;
};

// Each gold entry must hold exactly 2 sentences; ranked lists are truncated
// to the top 10 before checking membership.
RecallAt10 recall_at_10(const IdSetByQuestion& ranked_sentences,
                        const IdSetByQuestion& gold_pairs);

// Human-readable aligned table; values rendered as percentages with one
// decimal place.
std::string render_prf_table(const SelectionMetrics& metrics);
std::string render_recall_table(const RecallAt10& metrics);

std::string format_percent(double fraction);

}  // namespace air
