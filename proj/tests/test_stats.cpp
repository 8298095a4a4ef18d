#include <omp.h>

#include <cmath>

#include "doctest.h"

#include "air/corpus_stats.hpp"
#include "air/errors.hpp"
#include "air_reference.hpp"
#include "helpers.hpp"

using namespace air;

namespace {

const std::vector<std::string> kCorpus = {
    "the iron gate rusts", "the gate was painted", "iron and oxygen make rust",
    "children painted the fence"};

}  // namespace

TEST_SUITE("corpus_stats") {
  TEST_CASE("smoothed idf with frozen values") {
    // N=3, df=1 -> ln(4/2) + 1
    const auto stats = CorpusStats::from_counts(3, {{"iron", 1}, {"gate", 3}});
    CHECK(stats.idf("iron") == doctest::Approx(1.6931471805599453).epsilon(1e-12));
    // df == N -> ln(1) + 1 = 1
    CHECK(stats.idf("gate") == doctest::Approx(1.0).epsilon(1e-12));
    // unseen term: df = 0 -> ln(N+1) + 1
    CHECK(stats.doc_freq("zzz") == 0);
    CHECK(stats.idf("zzz") == doctest::Approx(std::log(4.0) + 1.0).epsilon(1e-12));
  }

  TEST_CASE("build from sentences counts presence once per sentence") {
    const auto pipeline = airtest::bare_pipeline();
    std::vector<Sentence> sentences;
    sentences.push_back(pipeline.make_sentence(0, "rust rust rust"));
    sentences.push_back(pipeline.make_sentence(1, "rust gate"));
    const auto stats = CorpusStats::build(sentences);
    CHECK(stats.doc_count() == 2);
    CHECK(stats.doc_freq("rust") == 2);  // not 4
    CHECK(stats.doc_freq("gate") == 1);
  }

  TEST_CASE("parallel build matches the serial reference") {
    const auto pipeline = airtest::english_pipeline();
    const auto parallel = CorpusStats::build_from_texts(kCorpus, pipeline);
    const auto serial = air::ref::build_stats(kCorpus, pipeline);
    REQUIRE(parallel.doc_count() == serial.doc_count());
    REQUIRE(parallel.term_count() == serial.term_count());
    for (const auto& term : serial.terms_sorted()) {
      CAPTURE(term);
      CHECK(parallel.doc_freq(term) == serial.doc_freq(term));
      CHECK(parallel.idf(term) == serial.idf(term));
    }
  }

  TEST_CASE("thread count does not change the counts") {
    const auto pipeline = airtest::english_pipeline();
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = CorpusStats::build_from_texts(kCorpus, pipeline);
    omp_set_num_threads(4);
    const auto four = CorpusStats::build_from_texts(kCorpus, pipeline);
    omp_set_num_threads(saved);
    REQUIRE(one.term_count() == four.term_count());
    for (const auto& term : one.terms_sorted()) {
      CHECK(one.doc_freq(term) == four.doc_freq(term));
    }
  }

  TEST_CASE("save and load round-trip bit-for-bit") {
    airtest::TempDir dir;
    const auto pipeline = airtest::english_pipeline();
    const auto stats = CorpusStats::build_from_texts(kCorpus, pipeline);
    stats.save(dir.file("stats.tsv"));
    const auto loaded = CorpusStats::load(dir.file("stats.tsv"));
    CHECK(loaded.doc_count() == stats.doc_count());
    CHECK(loaded.term_count() == stats.term_count());
    for (const auto& term : stats.terms_sorted()) {
      CHECK(loaded.idf(term) == stats.idf(term));
    }
    // resaving the loaded stats reproduces the file byte for byte
    loaded.save(dir.file("stats2.tsv"));
    CHECK(airtest::read_file(dir.file("stats2.tsv")) ==
          airtest::read_file(dir.file("stats.tsv")));
  }

  TEST_CASE("empty corpus is rejected") {
    CHECK_THROWS_AS(CorpusStats::build(std::span<const Sentence>{}), EmptyCorpus);
    const auto pipeline = airtest::bare_pipeline();
    CHECK_THROWS_AS(CorpusStats::build_from_texts(std::vector<std::string>{}, pipeline),
                    EmptyCorpus);
  }

  TEST_CASE("malformed stats files are rejected with line numbers") {
    airtest::TempDir dir;
    airtest::write_file(dir.file("bad1.tsv"), "WRONG\t3\n");
    CHECK_THROWS_AS(CorpusStats::load(dir.file("bad1.tsv")), MalformedLine);
    airtest::write_file(dir.file("bad2.tsv"), "N_DOCS\t3\nterm-without-df\n");
    CHECK_THROWS_AS(CorpusStats::load(dir.file("bad2.tsv")), MalformedLine);
    airtest::write_file(dir.file("bad3.tsv"), "N_DOCS\t3\nterm\tnot-a-number\n");
    CHECK_THROWS_AS(CorpusStats::load(dir.file("bad3.tsv")), MalformedLine);
    airtest::write_file(dir.file("empty.tsv"), "");
    CHECK_THROWS_AS(CorpusStats::load(dir.file("empty.tsv")), EmptyFile);
  }
}
