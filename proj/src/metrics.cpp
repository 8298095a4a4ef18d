#include "air/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "air/errors.hpp"

namespace air {

namespace {

void check_aligned_ids(const IdSetByQuestion& a, const IdSetByQuestion& b,
                       const char* a_name, const char* b_name) {
  for (const auto& [id, ignored] : a) {
    if (b.find(id) == b.end())
      throw IdMismatch(std::string("question ") + id + " present in " + a_name +
                       " but missing from " + b_name);
  }
  for (const auto& [id, ignored] : b) {
    if (a.find(id) == a.end())
      throw IdMismatch(std::string("question ") + id + " present in " + b_name +
                       " but missing from " + a_name);
  }
}

std::vector<SentenceId> unique_sorted(std::vector<SentenceId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

SelectionMetrics selection_prf(const IdSetByQuestion& retrieved,
                               const IdSetByQuestion& gold) {
  check_aligned_ids(retrieved, gold, "retrieved", "gold");

  SelectionMetrics out;
  double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
  for (const auto& [id, retrieved_ids] : retrieved) {
    const auto gold_ids = unique_sorted(gold.at(id));
    if (gold_ids.empty()) {
      out.excluded_no_gold.push_back(id);
      continue;
    }
    const auto ret_ids = unique_sorted(retrieved_ids);
    std::vector<SentenceId> overlap;
    std::set_intersection(ret_ids.begin(), ret_ids.end(), gold_ids.begin(),
                          gold_ids.end(), std::back_inserter(overlap));

    QuestionPrf q;
    q.question_id = id;
    q.retrieved = static_cast<std::int64_t>(ret_ids.size());
    q.gold = static_cast<std::int64_t>(gold_ids.size());
    q.overlap = static_cast<std::int64_t>(overlap.size());
    q.precision = ret_ids.empty()
                      ? 0.0
                      : static_cast<double>(q.overlap) / static_cast<double>(q.retrieved);
    q.recall = static_cast<double>(q.overlap) / static_cast<double>(q.gold);
    q.f1 = (q.precision + q.recall) == 0.0
               ? 0.0
               : 2.0 * q.precision * q.recall / (q.precision + q.recall);
    p_sum += q.precision;
    r_sum += q.recall;
    f_sum += q.f1;
    out.per_question.push_back(std::move(q));
  }
  out.evaluated = static_cast<std::int64_t>(out.per_question.size());
  if (out.evaluated > 0) {
    out.precision = p_sum / static_cast<double>(out.evaluated);
    out.recall = r_sum / static_cast<double>(out.evaluated);
    out.f1 = f_sum / static_cast<double>(out.evaluated);
  }
  return out;
}

RecallAt10 recall_at_10(const IdSetByQuestion& ranked_sentences,
                        const IdSetByQuestion& gold_pairs) {
  check_aligned_ids(ranked_sentences, gold_pairs, "ranked", "gold");

  RecallAt10 out;
  std::int64_t both = 0, at_least_one = 0;
  for (const auto& [id, ranked] : ranked_sentences) {
    const auto& golds = gold_pairs.at(id);
    if (golds.size() != 2) throw GoldArityError(id, golds.size());

    const std::size_t cutoff = std::min<std::size_t>(ranked.size(), 10);
    auto found = [&](SentenceId g) {
      return std::find(ranked.begin(), ranked.begin() + cutoff, g) !=
             ranked.begin() + cutoff;
    };
    const int hits = (found(golds[0]) ? 1 : 0) + (found(golds[1]) ? 1 : 0);
    if (hits == 2) ++both;
    if (hits >= 1) ++at_least_one;
    ++out.questions;
  }
  if (out.questions > 0) {
    out.both_found = static_cast<double>(both) / static_cast<double>(out.questions);
    out.at_least_one_found =
        static_cast<double>(at_least_one) / static_cast<double>(out.questions);
  }
  return out;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
  return buf;
}

std::string render_prf_table(const SelectionMetrics& metrics) {
  std::ostringstream out;
  out << "questions evaluated: " << metrics.evaluated;
  if (!metrics.excluded_no_gold.empty())
    out << "  (excluded, no gold: " << metrics.excluded_no_gold.size() << ")";
  out << "\n";
  out << "  P      R      F1\n";
  char row[64];
  std::snprintf(row, sizeof(row), "  %-6s %-6s %-6s\n",
                format_percent(metrics.precision).c_str(),
                format_percent(metrics.recall).c_str(),
                format_percent(metrics.f1).c_str());
  out << row;
  return out.str();
}

std::string render_recall_table(const RecallAt10& metrics) {
  std::ostringstream out;
  out << "questions evaluated: " << metrics.questions << "\n";
  out << "  recall@10 both found: " << format_percent(metrics.both_found)
      << "\n";
  out << "  recall@10 at least one found: "
      << format_percent(metrics.at_least_one_found) << "\n";
  return out.str();
}

}  // namespace air
