#include "air_reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace air::ref {

double cosine(std::string_view a, std::string_view b, const EmbeddingTable& table) {
  if (a == b) return 1.0;
  const float* va = table.vector(a);
  const float* vb = table.vector(b);
  if (va == nullptr || vb == nullptr) return 0.0;
  double acc = 0.0;
  for (int i = 0; i < table.dim(); ++i) {
    acc += static_cast<double>(va[i]) * static_cast<double>(vb[i]);
  }
  return acc;
}

double alignment_score(const TermSet& query, const Sentence& sentence,
                       const EmbeddingTable* table, const CorpusStats& stats) {
  double total = 0.0;
  for (const auto& q : query) {
    double best = 0.0;
    if (table != nullptr) {
      bool first = true;
      for (const auto& p : sentence.terms) {
        const double sim = cosine(q, p, *table);
        if (first || sim > best) {
          best = sim;
          first = false;
        }
      }
    } else if (sentence.terms.contains(q)) {
      best = 1.0;
    }
    total += stats.idf(q) * best;
  }
  return total;
}

std::vector<RankedId> rank_pool(const TermSet& query, const CandidatePool& pool,
                                const EmbeddingTable* table,
                                const CorpusStats& stats) {
  std::vector<RankedId> ranked;
  ranked.reserve(pool.entries.size());
  for (const auto& entry : pool.entries) {
    ranked.push_back(
        {entry.sentence.id, alignment_score(query, entry.sentence, table, stats)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedId& a, const RankedId& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.sentence_id < b.sentence_id;
  });
  return ranked;
}

std::vector<ScoredSentence> bm25_full_scan(
    const TermSet& query, std::span<const std::vector<std::string>> docs,
    Bm25Params params, int k) {
  std::vector<ScoredSentence> out;
  if (k < 1 || query.empty() || docs.empty()) return out;

  const double n_docs = static_cast<double>(docs.size());
  double length_sum = 0.0;
  for (const auto& doc : docs) length_sum += static_cast<double>(doc.size());
  const double avg_len = length_sum / n_docs;

  // df per query term by scanning every document
  std::map<std::string, double> df;
  for (const auto& term : query) {
    std::int64_t count = 0;
    for (const auto& doc : docs) {
      if (std::find(doc.begin(), doc.end(), term) != doc.end()) ++count;
    }
    df[term] = static_cast<double>(count);
  }

  const double k1 = params.k1;
  const double b = params.b;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto& doc = docs[d];
    const double len = static_cast<double>(doc.size());
    double score = 0.0;
    bool matched = false;
    for (const auto& term : query) {
      const auto tf_count = std::count(doc.begin(), doc.end(), term);
      if (tf_count == 0) continue;
      matched = true;
      const double tf = static_cast<double>(tf_count);
      const double term_df = df[term];
      const double idf = std::log(1.0 + (n_docs - term_df + 0.5) / (term_df + 0.5));
      score += idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * len / avg_len));
    }
    if (matched && score != 0.0) {
      out.push_back(ScoredSentence{static_cast<SentenceId>(d), score});
    }
  }

  std::sort(out.begin(), out.end(), [](const ScoredSentence& x, const ScoredSentence& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.sentence_id < y.sentence_id;
  });
  if (out.size() > static_cast<std::size_t>(k)) out.resize(static_cast<std::size_t>(k));
  return out;
}

CorpusStats build_stats(std::span<const std::string> texts,
                        const TextPipeline& pipeline) {
  std::map<std::string, std::int64_t> df;
  for (const auto& text : texts) {
    for (const auto& term : pipeline.terms(text)) ++df[term];
  }
  std::vector<std::pair<std::string, std::int64_t>> rows(df.begin(), df.end());
  return CorpusStats::from_counts(static_cast<std::int64_t>(texts.size()),
                                  std::move(rows));
}

TermSet remainder(const TermSet& original, std::span<const Sentence> chain,
                  const EmbeddingTable* table, double M) {
  std::vector<std::string> missing;
  for (const auto& q : original) {
    bool covered = false;
    for (const auto& sentence : chain) {
      for (const auto& p : sentence.terms) {
        if (table != nullptr ? cosine(q, p, *table) >= M : q == p) {
          covered = true;
          break;
        }
      }
      if (covered) break;
    }
    if (!covered) missing.push_back(q);
  }
  return TermSet(std::move(missing));
}

}  // namespace air::ref
