#pragma once

// Shared fixture builders for the test suite. Everything here is
// deterministic; embedding tables are built in code so tests control the
// exact geometry.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "air/corpus_stats.hpp"
#include "air/dataset.hpp"
#include "air/embedding.hpp"
#include "air/pipeline.hpp"
#include "air/text.hpp"

#ifndef AIR_FIXTURE_DIR
#error "AIR_FIXTURE_DIR must be defined by the build"
#endif
#ifndef AIR_STOPWORD_FILE
#error "AIR_STOPWORD_FILE must be defined by the build"
#endif

namespace airtest {

inline std::filesystem::path fixture_dir() { return AIR_FIXTURE_DIR; }

inline std::filesystem::path fixture(const std::string& name) {
  return fixture_dir() / name;
}

inline std::filesystem::path make_temp_dir() {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  while (true) {
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    const auto candidate =
        base / ("air_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::error_code ec;
    if (std::filesystem::create_directory(candidate, ec)) return candidate;
  }
}

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path = make_temp_dir();
  TempDir() = default;
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path file(const std::string& name) const { return path / name; }
};

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// No stopwords: every token is a content term. Used by the engineered
// mechanism fixtures so nothing surprising is filtered.
inline air::TextPipeline bare_pipeline() {
  air::TextPipeline p;
  p.stopwords = air::StopwordList::none();
  return p;
}

// The repository's English list, as the CLI uses it.
inline air::TextPipeline english_pipeline() {
  air::TextPipeline p;
  p.stopwords = air::StopwordList::load(AIR_STOPWORD_FILE);
  return p;
}

// One-hot embedding per word: distinct words have cosine 0, identical words
// cosine 1. Soft matching then reduces to exact matching, which makes chain
// behavior easy to hand-verify.
inline air::EmbeddingTable one_hot_table(const std::vector<std::string>& words) {
  std::vector<std::pair<std::string, std::vector<float>>> vectors;
  vectors.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::vector<float> v(words.size(), 0.0f);
    v[i] = 1.0f;
    vectors.emplace_back(words[i], std::move(v));
  }
  return air::EmbeddingTable::from_vectors(std::move(vectors));
}

inline air::CandidatePool pool_from_texts(const air::TextPipeline& pipeline,
                                          const std::vector<std::string>& texts) {
  air::CandidatePool pool;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    pool.entries.push_back(
        air::PoolEntry{pipeline.make_sentence(static_cast<air::SentenceId>(i), texts[i]),
                       static_cast<std::int32_t>(i)});
  }
  return pool;
}

inline air::CorpusStats counted_stats(
    std::int64_t doc_count,
    std::vector<std::pair<std::string, std::int64_t>> doc_freq) {
  return air::CorpusStats::from_counts(doc_count, std::move(doc_freq));
}

// Three-hop walkthrough: query {qa..qf}, T=2. Hop 1 takes S0 (covers qa,qb,qc;
// remainder size 3 > T keeps the bare remainder), hop 2 takes S1 (qd is rare,
// so idf(qd) beats idf(qe)+idf(qf); remainder shrinks to {qe,qf} <= T, so the
// next query expands with S1's new terms xx,yy), hop 3 takes S2 -> all
// covered.
struct WalkthroughFixture {
  air::TextPipeline pipeline = bare_pipeline();
  air::EmbeddingTable table = one_hot_table(
      {"qa", "qb", "qc", "qd", "qe", "qf", "xx", "yy", "fill1", "fill2"});
  air::CorpusStats stats = counted_stats(100, {{"qa", 10},
                                               {"qb", 10},
                                               {"qc", 10},
                                               {"qd", 1},
                                               {"qe", 40},
                                               {"qf", 40},
                                               {"xx", 1},
                                               {"yy", 1},
                                               {"fill1", 50},
                                               {"fill2", 50}});
  air::CandidatePool pool =
      pool_from_texts(pipeline, {"qa qb qc", "qd xx yy", "qe qf", "qa qb"});
  air::TermSet query = air::TermSet::of({"qa", "qb", "qc", "qd", "qe", "qf"});
};

// Distractor geometry for the semantic-drift comparison. Gold sentences A=0
// (g1 g2 z1 z2) and B=1 (h1 h2); E=2 shares only the incidental rare terms
// z1..z4 with A. Hop 1 picks A in both modes. A controlled hop 2 queries the
// remainder {h1,h2} and picks B; an uncontrolled hop 2 carries A's z-terms,
// whose high idf makes E outscore B.
struct DriftFixture {
  air::TextPipeline pipeline = bare_pipeline();
  air::EmbeddingTable table = one_hot_table(
      {"g1", "g2", "h1", "h2", "z1", "z2", "z3", "z4", "n1", "n2"});
  air::CorpusStats stats = counted_stats(1000, {{"g1", 50},
                                                {"g2", 50},
                                                {"h1", 100},
                                                {"h2", 100},
                                                {"z1", 2},
                                                {"z2", 2},
                                                {"z3", 2},
                                                {"z4", 2},
                                                {"n1", 500},
                                                {"n2", 500}});
  std::vector<std::string> sentences = {"g1 g2 z1 z2", "h1 h2", "z1 z2 z3 z4",
                                        "n1 n2"};
  air::CandidatePool pool = pool_from_texts(pipeline, sentences);
  air::TermSet query = air::TermSet::of({"g1", "g2", "h1", "h2"});

  air::AirConfig config(air::RetrievalMode mode, int fixed = 0) const {
    air::AirConfig c;
    c.mode = mode;
    c.T = 1;  // keeps controlled hop-2 queries unexpanded
    c.max_hops = 6;
    if (fixed > 0) {
      c.fixed_hops = fixed;
      c.max_hops = fixed > 6 ? fixed : 6;
    }
    return c;
  }

  air::QuestionRecord record() const {
    air::QuestionRecord q;
    q.question_id = "drift:0";
    q.question_text = "g1 g2 h1 h2";
    q.answers.push_back(air::AnswerCandidate{"0", "", true});
    q.candidate_source = air::CandidateSource::paragraph;
    q.paragraph_sentences = sentences;
    q.gold_sentence_ids = {0, 1};
    return q;
  }

  air::RetrievalEnv env() const {
    air::RetrievalEnv e;
    e.kind = air::DatasetKind::multirc;
    e.questions = {record()};
    e.pipeline = &pipeline;
    e.table = &table;
    e.stats = &stats;
    return e;
  }
};

}  // namespace airtest
