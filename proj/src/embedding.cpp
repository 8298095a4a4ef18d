#include "air/embedding.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "air/errors.hpp"

namespace air {

namespace {

// Splits on single spaces; GloVe lines never carry tabs or repeated spaces.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    auto space = line.find(' ', start);
    if (space == std::string_view::npos) space = line.size();
    if (space > start) fields.push_back(line.substr(start, space - start));
    start = space + 1;
  }
  return fields;
}

bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

float parse_component(std::string_view s, std::size_t line_no) {
  float v = 0.0f;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw MalformedLine(line_no, "bad vector component '" + std::string(s) + "'");
  return v;
}

void normalize(std::span<float> v) {
  double norm_sq = 0.0;
  for (float x : v) norm_sq += static_cast<double>(x) * x;
  if (norm_sq <= 0.0) return;  // zero vector stays zero
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (float& x : v) x = static_cast<float>(x * inv);
}

}  // namespace

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path,
                                    const TermSet* vocab_filter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string(), "cannot open embedding file");

  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.empty()) continue;

    // "count dim" header: exactly two integer fields on the first line.
    if (line_no == 1 && fields.size() == 2 && is_integer(fields[0]) &&
        is_integer(fields[1])) {
      continue;
    }

    if (fields.size() < 2)
      throw MalformedLine(line_no, "expected 'word v1 ... vd'");
    const int found_dim = static_cast<int>(fields.size()) - 1;
    if (table.dim_ == 0) {
      table.dim_ = found_dim;
    } else if (found_dim != table.dim_) {
      throw InconsistentDim(line_no, table.dim_, found_dim);
    }

    std::string_view word = fields[0];
    if (vocab_filter != nullptr && !vocab_filter->contains(word)) continue;
    if (table.index_.find(word) != table.index_.end()) {
      ++table.duplicates_ignored_;
      continue;
    }

    const auto row = static_cast<std::uint32_t>(table.index_.size());
    table.data_.resize(table.data_.size() + table.dim_);
    float* dst = table.data_.data() + static_cast<std::size_t>(row) * table.dim_;
    for (int d = 0; d < table.dim_; ++d) dst[d] = parse_component(fields[d + 1], line_no);
    normalize({dst, static_cast<std::size_t>(table.dim_)});
    table.index_.emplace(std::string(word), row);
  }
  if (table.dim_ == 0) throw EmptyFile(path.string());
  return table;
}

EmbeddingTable EmbeddingTable::from_vectors(
    std::vector<std::pair<std::string, std::vector<float>>> vectors) {
  EmbeddingTable table;
  for (auto& [word, vec] : vectors) {
    if (table.dim_ == 0) table.dim_ = static_cast<int>(vec.size());
    if (static_cast<int>(vec.size()) != table.dim_)
      throw InconsistentDim(table.index_.size() + 1, table.dim_,
                            static_cast<int>(vec.size()));
    if (table.index_.find(word) != table.index_.end()) {
      ++table.duplicates_ignored_;
      continue;
    }
    const auto row = static_cast<std::uint32_t>(table.index_.size());
    table.data_.insert(table.data_.end(), vec.begin(), vec.end());
    normalize({table.data_.data() + static_cast<std::size_t>(row) * table.dim_,
               static_cast<std::size_t>(table.dim_)});
    table.index_.emplace(std::move(word), row);
  }
  return table;
}

double EmbeddingTable::cos_sim(std::string_view a, std::string_view b) const {
  // exact self-similarity, so a verbatim term is covered for any M <= 1 even
  // though normalized vectors round their self-dot slightly below 1.0
  if (a == b) return 1.0;
  const float* va = vector(a);
  const float* vb = vector(b);
  if (va == nullptr || vb == nullptr) return 0.0;
  return dot({va, static_cast<std::size_t>(dim_)},
             {vb, static_cast<std::size_t>(dim_)});
}

double dot(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

}  // namespace air
