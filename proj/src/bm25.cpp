#include "air/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "air/errors.hpp"

namespace air {

namespace {

constexpr char kMagic[8] = {'A', 'I', 'R', 'I', 'D', 'X', '0', '0'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
    throw FileError(path, "truncated index file");
  return value;
}

double mean_length(const std::vector<std::int32_t>& lengths) {
  double sum = 0.0;
  for (std::int32_t len : lengths) sum += len;
  return sum / static_cast<double>(lengths.size());
}

}  // namespace

void InvertedIndex::Builder::add(std::span<const std::string> content_tokens) {
  const auto id = static_cast<SentenceId>(lengths_.size());
  lengths_.push_back(static_cast<std::int32_t>(content_tokens.size()));
  // tf per unique term of this sentence
  std::unordered_map<std::string_view, std::int32_t> tf;
  for (const auto& tok : content_tokens) ++tf[tok];
  // insert in sorted term order so posting allocation order is deterministic
  std::vector<std::pair<std::string_view, std::int32_t>> rows(tf.begin(), tf.end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [term, count] : rows) {
    auto [it, inserted] = term_ids_.try_emplace(std::string(term),
                                                static_cast<std::uint32_t>(postings_.size()));
    if (inserted) postings_.emplace_back();
    postings_[it->second].push_back(Posting{id, count});
  }
}

InvertedIndex InvertedIndex::Builder::build() && {
  if (lengths_.empty()) throw EmptyCorpus();
  InvertedIndex index;
  index.params_ = params_;
  index.lengths_ = std::move(lengths_);
  index.avg_len_ = mean_length(index.lengths_);
  index.postings_ = std::move(postings_);
  for (auto& [term, id] : term_ids_) index.term_ids_.emplace(term, id);
  return index;
}

std::int64_t InvertedIndex::doc_freq(std::string_view term) const {
  auto it = term_ids_.find(term);
  return it == term_ids_.end()
             ? 0
             : static_cast<std::int64_t>(postings_[it->second].size());
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  auto it = term_ids_.find(term);
  if (it == term_ids_.end()) return {};
  return postings_[it->second];
}

std::vector<std::string> InvertedIndex::terms_sorted() const {
  std::vector<std::string> terms;
  terms.reserve(term_ids_.size());
  for (const auto& [term, id] : term_ids_) terms.push_back(term);
  std::sort(terms.begin(), terms.end());
  return terms;
}

std::vector<ScoredSentence> InvertedIndex::search(const TermSet& query,
                                                  int k) const {
  std::vector<ScoredSentence> out;
  if (k < 1 || query.empty()) return out;

  const double n_docs = static_cast<double>(doc_count());
  const double k1 = params_.k1;
  const double b = params_.b;

  // Accumulate per-sentence scores term by term; query terms iterate in
  // sorted order, so each sentence sees the same addition sequence as a
  // full-scan scorer over the same term order.
  std::unordered_map<SentenceId, double> acc;
  for (const auto& term : query) {
    auto plist = postings(term);
    if (plist.empty()) continue;
    const double df = static_cast<double>(plist.size());
    const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
    for (const Posting& p : plist) {
      const double tf = static_cast<double>(p.tf);
      const double len = static_cast<double>(lengths_[p.sentence_id]);
      acc[p.sentence_id] +=
          idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * len / avg_len_));
    }
  }

  out.reserve(acc.size());
  for (const auto& [id, score] : acc) {
    if (score != 0.0) out.push_back(ScoredSentence{id, score});
  }
  auto better = [](const ScoredSentence& x, const ScoredSentence& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.sentence_id < y.sentence_id;
  };
  if (out.size() > static_cast<std::size_t>(k)) {
    std::nth_element(out.begin(), out.begin() + k, out.end(), better);
    out.resize(k);
  }
  std::sort(out.begin(), out.end(), better);
  return out;
}

void InvertedIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError(path.string(), "cannot open for writing");
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kFormatVersion);
  write_pod(out, params_.k1);
  write_pod(out, params_.b);
  write_pod(out, static_cast<std::uint64_t>(lengths_.size()));
  out.write(reinterpret_cast<const char*>(lengths_.data()),
            static_cast<std::streamsize>(lengths_.size() * sizeof(std::int32_t)));

  const auto terms = terms_sorted();
  write_pod(out, static_cast<std::uint64_t>(terms.size()));
  for (const auto& term : terms) {
    write_pod(out, static_cast<std::uint32_t>(term.size()));
    out.write(term.data(), static_cast<std::streamsize>(term.size()));
    const auto plist = postings(term);
    write_pod(out, static_cast<std::uint64_t>(plist.size()));
    out.write(reinterpret_cast<const char*>(plist.data()),
              static_cast<std::streamsize>(plist.size() * sizeof(Posting)));
  }
  if (!out) throw FileError(path.string(), "write failed");
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string(), "cannot open index file");
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw FileError(path.string(), "not an index file (bad magic)");
  const auto version = read_pod<std::uint32_t>(in, path.string());
  if (version != kFormatVersion)
    throw FileError(path.string(),
                    "unsupported index format version " + std::to_string(version));

  InvertedIndex index;
  index.params_.k1 = read_pod<double>(in, path.string());
  index.params_.b = read_pod<double>(in, path.string());
  const auto doc_count = read_pod<std::uint64_t>(in, path.string());
  index.lengths_.resize(doc_count);
  if (!in.read(reinterpret_cast<char*>(index.lengths_.data()),
               static_cast<std::streamsize>(doc_count * sizeof(std::int32_t))))
    throw FileError(path.string(), "truncated index file");
  index.avg_len_ = mean_length(index.lengths_);

  const auto term_count = read_pod<std::uint64_t>(in, path.string());
  index.postings_.resize(term_count);
  for (std::uint64_t t = 0; t < term_count; ++t) {
    const auto term_len = read_pod<std::uint32_t>(in, path.string());
    std::string term(term_len, '\0');
    if (!in.read(term.data(), term_len))
      throw FileError(path.string(), "truncated index file");
    const auto n_postings = read_pod<std::uint64_t>(in, path.string());
    auto& plist = index.postings_[t];
    plist.resize(n_postings);
    if (!in.read(reinterpret_cast<char*>(plist.data()),
                 static_cast<std::streamsize>(n_postings * sizeof(Posting))))
      throw FileError(path.string(), "truncated index file");
    index.term_ids_.emplace(std::move(term), static_cast<std::uint32_t>(t));
  }
  return index;
}

InvertedIndex build_index(std::span<const Sentence> sentences, Bm25Params params) {
  InvertedIndex::Builder builder(params);
  for (const Sentence& s : sentences) builder.add(s.content_tokens);
  return std::move(builder).build();
}

InvertedIndex build_index_from_texts(std::span<const std::string> texts,
                                     const TextPipeline& pipeline,
                                     Bm25Params params) {
  InvertedIndex::Builder builder(params);
  std::vector<std::string> kept;
  for (const auto& text : texts) {
    kept.clear();
    for (auto& tok : pipeline.tokens(text)) {
      if (!pipeline.stopwords.contains(tok)) kept.push_back(std::move(tok));
    }
    builder.add(kept);
  }
  return std::move(builder).build();
}

CandidatePool pool_candidates(const QuestionRecord& question,
                              const AnswerCandidate& answer,
                              const InvertedIndex& index,
                              const KnowledgeBase& kb,
                              const TextPipeline& pipeline,
                              int pool_size) {
  const TermSet query = pipeline.terms(question.question_text + " " + answer.text);
  const auto hits = index.search(query, pool_size);
  CandidatePool pool;
  pool.provenance = PoolProvenance::bm25;
  pool.entries.reserve(hits.size());
  std::int32_t rank = 0;
  for (const auto& hit : hits) {
    pool.entries.push_back(PoolEntry{
        pipeline.make_sentence(hit.sentence_id, kb.fact(hit.sentence_id)), rank++});
  }
  return pool;
}

}  // namespace air
