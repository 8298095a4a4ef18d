#include "air/corpus_stats.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "air/errors.hpp"

namespace air {

CorpusStats CorpusStats::build(std::span<const Sentence> sentences) {
  if (sentences.empty()) throw EmptyCorpus();
  CorpusStats stats;
  stats.doc_count_ = static_cast<std::int64_t>(sentences.size());
  for (const Sentence& s : sentences) {
    for (const auto& term : s.terms) ++stats.doc_freq_[term];
  }
  return stats;
}

CorpusStats CorpusStats::build_from_texts(std::span<const std::string> texts,
                                          const TextPipeline& pipeline) {
  if (texts.empty()) throw EmptyCorpus();
  CorpusStats stats;
  stats.doc_count_ = static_cast<std::int64_t>(texts.size());

  const int n_threads = omp_get_max_threads();
  std::vector<std::unordered_map<std::string, std::int64_t, Hash, std::equal_to<>>>
      local(n_threads);

#pragma omp parallel
  {
    auto& mine = local[omp_get_thread_num()];
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(texts.size()); ++i) {
      for (const auto& term : pipeline.terms(texts[i])) ++mine[term];
    }
  }

  for (auto& m : local) {
    for (auto& [term, df] : m) stats.doc_freq_[term] += df;
  }
  return stats;
}

CorpusStats CorpusStats::from_counts(
    std::int64_t doc_count,
    std::vector<std::pair<std::string, std::int64_t>> doc_freq) {
  CorpusStats stats;
  stats.doc_count_ = doc_count;
  for (auto& [term, df] : doc_freq) stats.doc_freq_[std::move(term)] = df;
  return stats;
}

std::int64_t CorpusStats::doc_freq(std::string_view term) const {
  auto it = doc_freq_.find(term);
  return it == doc_freq_.end() ? 0 : it->second;
}

std::vector<std::string> CorpusStats::terms_sorted() const {
  std::vector<std::string> terms;
  terms.reserve(doc_freq_.size());
  for (const auto& [term, df] : doc_freq_) terms.push_back(term);
  std::sort(terms.begin(), terms.end());
  return terms;
}

double CorpusStats::idf(std::string_view term) const {
  const double df = static_cast<double>(doc_freq(term));
  return std::log((static_cast<double>(doc_count_) + 1.0) / (df + 1.0)) + 1.0;
}

void CorpusStats::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError(path.string(), "cannot open for writing");
  out << "N_DOCS\t" << doc_count_ << "\n";
  std::vector<std::pair<std::string_view, std::int64_t>> rows(doc_freq_.begin(),
                                                              doc_freq_.end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [term, df] : rows) out << term << "\t" << df << "\n";
  if (!out) throw FileError(path.string(), "write failed");
}

CorpusStats CorpusStats::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string(), "cannot open stats file");
  std::string line;
  if (!std::getline(in, line)) throw EmptyFile(path.string());
  std::size_t line_no = 1;
  auto tab = line.find('\t');
  if (tab == std::string::npos || line.substr(0, tab) != "N_DOCS")
    throw MalformedLine(line_no, "expected header 'N_DOCS<TAB>count'");

  auto parse_count = [&](std::string_view field) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || value < 0)
      throw MalformedLine(line_no, "bad count '" + std::string(field) + "'");
    return value;
  };

  CorpusStats stats;
  stats.doc_count_ = parse_count(std::string_view(line).substr(tab + 1));
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    tab = line.find('\t');
    if (tab == std::string::npos)
      throw MalformedLine(line_no, "expected 'term<TAB>df'");
    stats.doc_freq_[line.substr(0, tab)] =
        parse_count(std::string_view(line).substr(tab + 1));
  }
  return stats;
}

}  // namespace air
