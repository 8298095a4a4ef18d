#include <cmath>

#include "doctest.h"

#include "air/embedding.hpp"
#include "air/errors.hpp"
#include "helpers.hpp"

using namespace air;

TEST_SUITE("embedding") {
  TEST_CASE("loads the toy file and normalizes vectors") {
    const auto table = EmbeddingTable::load(airtest::fixture("toy_embeddings.txt"));
    CHECK(table.size() == 15);
    CHECK(table.dim() == 6);
    CHECK(table.duplicates_ignored() == 0);

    const float* iron = table.vector("iron");
    REQUIRE(iron != nullptr);
    double norm = 0.0;
    for (int i = 0; i < table.dim(); ++i) norm += static_cast<double>(iron[i]) * iron[i];
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(table.vector("zzz") == nullptr);
  }

  TEST_CASE("engineered cosines survive loading") {
    const auto table = EmbeddingTable::load(airtest::fixture("toy_embeddings.txt"));
    CHECK(table.cos_sim("rusts", "rusting") == doctest::Approx(0.96).epsilon(1e-6));
    CHECK(table.cos_sim("glow", "shine") == doctest::Approx(0.93).epsilon(1e-6));
    CHECK(table.cos_sim("metal", "iron") == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(table.cos_sim("water", "damp") == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(table.cos_sim("metal", "oxygen") == doctest::Approx(0.0).epsilon(1e-6));
    // symmetric
    CHECK(table.cos_sim("rusting", "rusts") == table.cos_sim("rusts", "rusting"));
  }

  TEST_CASE("identical strings score exactly 1.0, OOV scores 0.0") {
    const auto table = EmbeddingTable::load(airtest::fixture("toy_embeddings.txt"));
    CHECK(table.cos_sim("metal", "metal") == 1.0);  // in vocabulary
    CHECK(table.cos_sim("zzz", "zzz") == 1.0);      // out of vocabulary
    CHECK(table.cos_sim("zzz", "metal") == 0.0);
    CHECK(table.cos_sim("metal", "zzz") == 0.0);
  }

  TEST_CASE("count/dim header line is auto-detected and skipped") {
    airtest::TempDir dir;
    airtest::write_file(dir.file("with_header.txt"), "2 3\naa 1 0 0\nbb 0 1 0\n");
    const auto table = EmbeddingTable::load(dir.file("with_header.txt"));
    CHECK(table.size() == 2);
    CHECK(table.dim() == 3);
    CHECK(table.cos_sim("aa", "bb") == doctest::Approx(0.0));
  }

  TEST_CASE("duplicate words keep the first vector") {
    airtest::TempDir dir;
    airtest::write_file(dir.file("dup.txt"), "aa 1 0\nbb 0 1\naa 0 1\n");
    const auto table = EmbeddingTable::load(dir.file("dup.txt"));
    CHECK(table.size() == 2);
    CHECK(table.duplicates_ignored() == 1);
    // first occurrence of aa is orthogonal to bb
    CHECK(table.cos_sim("aa", "bb") == doctest::Approx(0.0));
  }

  TEST_CASE("dimension mismatches and empty files are errors") {
    airtest::TempDir dir;
    airtest::write_file(dir.file("bad_dim.txt"), "aa 1 0\nbb 0 1 1\n");
    CHECK_THROWS_AS(EmbeddingTable::load(dir.file("bad_dim.txt")), InconsistentDim);
    airtest::write_file(dir.file("empty.txt"), "");
    CHECK_THROWS_AS(EmbeddingTable::load(dir.file("empty.txt")), EmptyFile);
    airtest::write_file(dir.file("noval.txt"), "aa\n");
    CHECK_THROWS_AS(EmbeddingTable::load(dir.file("noval.txt")), MalformedLine);
    CHECK_THROWS_AS(EmbeddingTable::load(dir.file("missing.txt")), FileError);
  }

  TEST_CASE("non-numeric component is a malformed line") {
    airtest::TempDir dir;
    airtest::write_file(dir.file("nan.txt"), "aa 1 0\nbb 0 x\n");
    CHECK_THROWS_AS(EmbeddingTable::load(dir.file("nan.txt")), MalformedLine);
  }

  TEST_CASE("vocab filter keeps only requested words") {
    const auto vocab = TermSet::of({"metal", "iron"});
    const auto table =
        EmbeddingTable::load(airtest::fixture("toy_embeddings.txt"), &vocab);
    CHECK(table.size() == 2);
    CHECK(table.contains("metal"));
    CHECK_FALSE(table.contains("rusts"));
    // filtered-out words fall back to the OOV policy
    CHECK(table.cos_sim("rusts", "rusting") == 0.0);
    CHECK(table.cos_sim("rusts", "rusts") == 1.0);
  }

  TEST_CASE("from_vectors builds a usable normalized table") {
    auto table = EmbeddingTable::from_vectors({{"aa", {3.0f, 4.0f}}, {"bb", {4.0f, 3.0f}}});
    CHECK(table.dim() == 2);
    CHECK(table.cos_sim("aa", "bb") == doctest::Approx(0.96).epsilon(1e-6));
    const float* aa = table.vector("aa");
    REQUIRE(aa != nullptr);
    CHECK(aa[0] == doctest::Approx(0.6f).epsilon(1e-6));
    CHECK(aa[1] == doctest::Approx(0.8f).epsilon(1e-6));
  }
}
