// Micro-benchmark comparing the serial reference kernels against the
// production implementations (OpenMP pool scoring, OpenMP stats build,
// inverted-index BM25). Synthetic deterministic workload; prints one table.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "air/alignment.hpp"
#include "air/bm25.hpp"
#include "air/corpus_stats.hpp"
#include "air/embedding.hpp"
#include "air/text.hpp"
#include "air_reference.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    fn();
    const auto t1 = Clock::now();
    const double ms =
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count() / 1e6;
    if (ms < best) best = ms;
  }
  return best;
}

std::string word(int i) { return "w" + std::to_string(i); }

struct Workload {
  air::TextPipeline pipeline;  // stopword-free
  std::vector<std::string> corpus_texts;
  std::vector<std::vector<std::string>> corpus_tokens;
  air::CandidatePool pool;
  air::TermSet query;
  air::EmbeddingTable table;
  air::CorpusStats stats;
};

Workload make_workload(int corpus_size, int pool_size, int vocab, int dim) {
  Workload w;
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> word_id(0, vocab - 1);
  std::uniform_int_distribution<int> sentence_len(8, 20);

  w.corpus_texts.reserve(corpus_size);
  w.corpus_tokens.reserve(corpus_size);
  for (int i = 0; i < corpus_size; ++i) {
    const int len = sentence_len(rng);
    std::string text;
    std::vector<std::string> tokens;
    for (int t = 0; t < len; ++t) {
      tokens.push_back(word(word_id(rng)));
      if (!text.empty()) text += ' ';
      text += tokens.back();
    }
    w.corpus_texts.push_back(std::move(text));
    w.corpus_tokens.push_back(std::move(tokens));
  }

  for (int i = 0; i < pool_size; ++i) {
    w.pool.entries.push_back(air::PoolEntry{
        w.pipeline.make_sentence(i, w.corpus_texts[static_cast<std::size_t>(i)]), i});
  }

  std::vector<std::string> query_words;
  for (int i = 0; i < 12; ++i) query_words.push_back(word(word_id(rng)));
  w.query = air::TermSet(std::move(query_words));

  std::normal_distribution<float> component(0.0f, 1.0f);
  std::vector<std::pair<std::string, std::vector<float>>> vectors;
  vectors.reserve(vocab);
  for (int i = 0; i < vocab; ++i) {
    std::vector<float> v(dim);
    for (auto& x : v) x = component(rng);
    vectors.emplace_back(word(i), std::move(v));
  }
  w.table = air::EmbeddingTable::from_vectors(std::move(vectors));
  w.stats = air::CorpusStats::build_from_texts(w.corpus_texts, w.pipeline);
  return w;
}

void print_row(const char* kernel, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-22s %12.2f %14.2f %9.2fx   %s\n", kernel, serial_ms, parallel_ms,
              serial_ms / parallel_ms, match ? "ok" : "MISMATCH");
}

}  // namespace

int main() {
  const int corpus_size = 20000;
  const int pool_size = 2000;
  const int vocab = 4000;
  const int dim = 50;
  const int reps = 5;

  const Workload w = make_workload(corpus_size, pool_size, vocab, dim);
  std::printf("corpus %d sentences, pool %d, vocab %d, dim %d, %d threads\n\n",
              corpus_size, pool_size, vocab, dim, omp_get_max_threads());
  std::printf("%-22s %12s %14s %10s   %s\n", "kernel", "serial ms", "parallel ms",
              "speedup", "check");

  // 1. alignment scoring over the pool
  air::SentenceScorer scorer{air::MatcherKind::embedding, &w.table, &w.stats};
  std::vector<air::RankedCandidate> ranked;
  const double align_par =
      time_ms(reps, [&] { ranked = air::rank_candidates(w.query, w.pool, scorer); });
  std::vector<air::ref::RankedId> ranked_ref;
  const double align_ser = time_ms(reps, [&] {
    ranked_ref = air::ref::rank_pool(w.query, w.pool, &w.table, w.stats);
  });
  bool align_ok = ranked.size() == ranked_ref.size();
  for (std::size_t i = 0; align_ok && i < ranked.size(); ++i) {
    align_ok = ranked[i].sentence_id == ranked_ref[i].sentence_id &&
               ranked[i].score.total == ranked_ref[i].score;
  }
  print_row("alignment ranking", align_ser, align_par, align_ok);

  // 2. corpus statistics build
  air::CorpusStats stats_par;
  const double stats_par_ms = time_ms(reps, [&] {
    stats_par = air::CorpusStats::build_from_texts(w.corpus_texts, w.pipeline);
  });
  air::CorpusStats stats_ser;
  const double stats_ser_ms = time_ms(
      reps, [&] { stats_ser = air::ref::build_stats(w.corpus_texts, w.pipeline); });
  bool stats_ok = stats_par.doc_count() == stats_ser.doc_count() &&
                  stats_par.term_count() == stats_ser.term_count();
  if (stats_ok) {
    for (const auto& term : stats_ser.terms_sorted()) {
      if (stats_par.doc_freq(term) != stats_ser.doc_freq(term)) {
        stats_ok = false;
        break;
      }
    }
  }
  print_row("stats build", stats_ser_ms, stats_par_ms, stats_ok);

  // 3. BM25: inverted index vs full scan
  const air::InvertedIndex index = air::build_index_from_texts(w.corpus_texts, w.pipeline);
  std::vector<air::ScoredSentence> hits;
  const double bm25_idx =
      time_ms(reps, [&] { hits = index.search(w.query, 20); });
  std::vector<air::ScoredSentence> hits_ref;
  const double bm25_scan = time_ms(reps, [&] {
    hits_ref = air::ref::bm25_full_scan(w.query, w.corpus_tokens, index.params(), 20);
  });
  bool bm25_ok = hits.size() == hits_ref.size();
  for (std::size_t i = 0; bm25_ok && i < hits.size(); ++i) {
    bm25_ok = hits[i].sentence_id == hits_ref[i].sentence_id &&
              hits[i].score == hits_ref[i].score;
  }
  print_row("bm25 top-20", bm25_scan, bm25_idx, bm25_ok);

  return (align_ok && stats_ok && bm25_ok) ? 0 : 1;
}
