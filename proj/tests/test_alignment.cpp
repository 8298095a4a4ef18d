#include <cmath>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "doctest.h"

#include "air/alignment.hpp"
#include "air/errors.hpp"
#include "air_reference.hpp"
#include "helpers.hpp"

using namespace air;

namespace {

// Two-dimensional vectors at chosen angles give exact, hand-checkable
// cosines: cos(aa, ab) = cos(45 deg), cos(aa, opp) = -1.
EmbeddingTable angle_table() {
  const float s = 0.70710678f;
  return EmbeddingTable::from_vectors({{"aa", {1.0f, 0.0f}},
                                       {"ab", {s, s}},
                                       {"ac", {0.0f, 1.0f}},
                                       {"opp", {-1.0f, 0.0f}}});
}

}  // namespace

TEST_SUITE("alignment") {
  TEST_CASE("align_term picks the best cosine and reports the match") {
    const auto table = angle_table();
    const auto sentence = TermSet::of({"ab", "ac"});
    const auto best = align_term("aa", sentence, table);
    CHECK(best.match == "ab");
    CHECK(best.sim == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  }

  TEST_CASE("align_term breaks exact ties toward the smaller term") {
    const auto table = airtest::one_hot_table({"qa", "qb", "qc"});
    // Neither sentence term matches: both cosines are 0, tie -> "qb".
    const auto best = align_term("qa", TermSet::of({"qc", "qb"}), table);
    CHECK(best.sim == 0.0);
    CHECK(best.match == "qb");
  }

  TEST_CASE("align_term keeps negative maxima instead of clamping") {
    const auto table = angle_table();
    const auto best = align_term("aa", TermSet::of({"opp"}), table);
    CHECK(best.match == "opp");
    CHECK(best.sim == doctest::Approx(-1.0).epsilon(1e-6));
  }

  TEST_CASE("align_term on an empty sentence scores zero with no match") {
    const auto table = angle_table();
    const auto best = align_term("aa", TermSet{}, table);
    CHECK(best.sim == 0.0);
    CHECK(best.match.empty());
  }

  TEST_CASE("score_sentence sums idf-weighted best similarities") {
    const auto pipeline = airtest::bare_pipeline();
    const auto table = airtest::one_hot_table({"qa", "qb", "qc"});
    // N = 8: idf(qa) = ln(9/2) + 1, idf(qb) = ln(9/5) + 1, idf(qc) = ln(9/9) + 1
    const auto stats = airtest::counted_stats(8, {{"qa", 1}, {"qb", 4}, {"qc", 8}});
    const auto sentence = pipeline.make_sentence(0, "qa qc");
    const auto query = TermSet::of({"qa", "qb", "qc"});

    const auto score = score_sentence(query, sentence, table, stats);
    const double expected = (std::log(9.0 / 2.0) + 1.0) * 1.0 + 0.0 + 1.0 * 1.0;
    CHECK(score.total == doctest::Approx(expected).epsilon(1e-12));
    REQUIRE(score.per_term.size() == 3);
    CHECK(score.per_term[0].first == "qa");
    CHECK(score.per_term[0].second.sim == 1.0);
    CHECK(score.per_term[0].second.match == "qa");
    CHECK(score.per_term[1].first == "qb");
    CHECK(score.per_term[1].second.sim == 0.0);
    CHECK(score.per_term[2].first == "qc");
    CHECK(score.per_term[2].second.sim == 1.0);
  }

  TEST_CASE("lexical scoring is exact membership with the same shape") {
    const auto pipeline = airtest::bare_pipeline();
    const auto stats = airtest::counted_stats(8, {{"qa", 1}, {"qb", 4}});
    const auto sentence = pipeline.make_sentence(0, "qa qx");
    const auto query = TermSet::of({"qa", "qb"});

    const auto score = score_sentence_lexical(query, sentence, stats);
    CHECK(score.total == doctest::Approx(std::log(9.0 / 2.0) + 1.0).epsilon(1e-12));
    REQUIRE(score.per_term.size() == 2);
    CHECK(score.per_term[0].second.sim == 1.0);
    CHECK(score.per_term[0].second.match == "qa");
    CHECK(score.per_term[1].second.sim == 0.0);
    CHECK(score.per_term[1].second.match.empty());
  }

  TEST_CASE("soft matches accumulate fractional similarity") {
    const auto table = EmbeddingTable::load(airtest::fixture("toy_embeddings.txt"));
    const auto pipeline = airtest::bare_pipeline();
    const auto stats = airtest::counted_stats(10, {{"rusts", 1}, {"rusting", 1}});
    const auto sentence = pipeline.make_sentence(0, "rusting");
    const auto score = score_sentence(TermSet::of({"rusts"}), sentence, table, stats);
    const double idf = std::log(11.0 / 2.0) + 1.0;
    CHECK(score.total == doctest::Approx(idf * 0.96).epsilon(1e-6));
    CHECK(score.per_term[0].second.match == "rusting");
  }

  TEST_CASE("rank_candidates sorts by total, ties by ascending id") {
    const auto pipeline = airtest::bare_pipeline();
    const auto table = airtest::one_hot_table({"qa", "qb"});
    const auto stats = airtest::counted_stats(4, {{"qa", 1}, {"qb", 1}});
    // ids 0 and 2 score identically (same terms), id 1 scores higher.
    const auto pool = airtest::pool_from_texts(pipeline, {"qa", "qa qb", "qa"});
    SentenceScorer scorer{MatcherKind::embedding, &table, &stats};

    const auto ranked = rank_candidates(TermSet::of({"qa", "qb"}), pool, scorer);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].sentence_id == 1);
    CHECK(ranked[1].sentence_id == 0);
    CHECK(ranked[2].sentence_id == 2);
    CHECK(ranked[1].score.total == ranked[2].score.total);
  }

  TEST_CASE("empty pool and empty query are rejected") {
    const auto table = airtest::one_hot_table({"qa"});
    const auto stats = airtest::counted_stats(1, {{"qa", 1}});
    SentenceScorer scorer{MatcherKind::embedding, &table, &stats};
    CandidatePool empty_pool;
    CHECK_THROWS_AS(rank_candidates(TermSet::of({"qa"}), empty_pool, scorer),
                    EmptyPool);
    const auto pool =
        airtest::pool_from_texts(airtest::bare_pipeline(), {"qa"});
    CHECK_THROWS_AS(rank_candidates(TermSet{}, pool, scorer), EmptyQuery);
    const auto sentence = airtest::bare_pipeline().make_sentence(0, "qa");
    CHECK_THROWS_AS(score_sentence(TermSet{}, sentence, table, stats), EmptyQuery);
  }

  TEST_CASE("randomized ranking agrees exactly with the serial reference") {
    const auto pipeline = airtest::bare_pipeline();
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> dim_pick(0, 7);
    std::uniform_real_distribution<float> component(-1.0f, 1.0f);
    std::uniform_int_distribution<int> word_pick(0, 11);
    std::uniform_int_distribution<int> sent_len(1, 6);

    // Random dense vectors for a 12-word vocabulary.
    std::vector<std::pair<std::string, std::vector<float>>> vectors;
    for (int w = 0; w < 12; ++w) {
      std::vector<float> v(8);
      for (auto& x : v) x = component(rng);
      vectors.emplace_back("w" + std::to_string(w), std::move(v));
    }
    const auto table = EmbeddingTable::from_vectors(std::move(vectors));

    std::vector<std::pair<std::string, std::int64_t>> df;
    for (int w = 0; w < 12; ++w) df.emplace_back("w" + std::to_string(w), 1 + w);
    const auto stats = airtest::counted_stats(40, std::move(df));

    for (int round = 0; round < 30; ++round) {
      std::vector<std::string> texts;
      const int pool_n = 2 + round % 12;
      for (int s = 0; s < pool_n; ++s) {
        std::string text;
        const int len = sent_len(rng);
        for (int w = 0; w < len; ++w) {
          if (w) text += ' ';
          text += "w" + std::to_string(word_pick(rng));
        }
        texts.push_back(text);
      }
      const auto pool = airtest::pool_from_texts(pipeline, texts);

      std::vector<std::string> query_words;
      for (int w = 0; w < 1 + round % 5; ++w)
        query_words.push_back("w" + std::to_string(word_pick(rng)));
      const TermSet query{query_words};

      for (const MatcherKind kind : {MatcherKind::embedding, MatcherKind::lexical}) {
        SentenceScorer scorer{kind, &table, &stats};
        const auto fast = rank_candidates(query, pool, scorer);
        const auto slow = ref::rank_pool(
            query, pool, kind == MatcherKind::embedding ? &table : nullptr, stats);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
          CHECK(fast[i].sentence_id == slow[i].sentence_id);
          CHECK(fast[i].score.total == slow[i].score);
        }
      }
    }
  }

#ifdef _OPENMP
  TEST_CASE("ranking is independent of the OpenMP thread count") {
    const auto pipeline = airtest::bare_pipeline();
    const auto table = airtest::one_hot_table({"qa", "qb", "qc", "qd"});
    const auto stats =
        airtest::counted_stats(16, {{"qa", 1}, {"qb", 2}, {"qc", 4}, {"qd", 8}});
    std::vector<std::string> texts;
    for (int i = 0; i < 40; ++i) {
      switch (i % 4) {
        case 0: texts.push_back("qa qb"); break;
        case 1: texts.push_back("qc"); break;
        case 2: texts.push_back("qb qd"); break;
        default: texts.push_back("qa qc qd"); break;
      }
    }
    const auto pool = airtest::pool_from_texts(pipeline, texts);
    SentenceScorer scorer{MatcherKind::embedding, &table, &stats};
    const auto query = TermSet::of({"qa", "qb", "qc", "qd"});

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto serial = rank_candidates(query, pool, scorer);
    omp_set_num_threads(4);
    const auto threaded = rank_candidates(query, pool, scorer);
    omp_set_num_threads(saved);

    REQUIRE(serial.size() == threaded.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(serial[i].sentence_id == threaded[i].sentence_id);
      CHECK(serial[i].score.total == threaded[i].score.total);
    }
  }
#endif
}
