#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "air/term_set.hpp"

namespace air {

// Pretrained word vectors, unit-normalized at load so cosine similarity is a
// plain dot product. Immutable after construction and shareable across all
// scoring threads.
class EmbeddingTable {
 public:
  // GloVe text format: one "word v1 v2 ... vd" line per word, space
  // separated, no header. An optional "count dim" header line (exactly two
  // integer fields) is auto-detected and skipped. Dimensionality is inferred
  // from the first vector line. When vocab_filter is given, only matching
  // words are kept. Duplicate words keep the first occurrence.
  static EmbeddingTable load(const std::filesystem::path& path,
                             const TermSet* vocab_filter = nullptr);

  // Builds a table from in-memory vectors (normalized here too).
  static EmbeddingTable from_vectors(
      std::vector<std::pair<std::string, std::vector<float>>> vectors);

  int dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }
  std::size_t duplicates_ignored() const { return duplicates_ignored_; }

  bool contains(std::string_view word) const {
    return index_.find(word) != index_.end();
  }

  // nullptr when the word is out of vocabulary.
  const float* vector(std::string_view word) const {
    auto it = index_.find(word);
    return it == index_.end() ? nullptr : data_.data() + it->second * dim_;
  }

  // Dot product of stored unit vectors. Identical strings score exactly 1.0
  // whether or not they are in vocabulary; otherwise any OOV side scores 0.0.
  double cos_sim(std::string_view a, std::string_view b) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  int dim_ = 0;
  std::size_t duplicates_ignored_ = 0;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
  std::vector<float> data_;
};

double dot(std::span<const float> a, std::span<const float> b);

}  // namespace air
