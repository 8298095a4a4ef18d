#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "air/term_set.hpp"
#include "air/text.hpp"

namespace air {

struct AnswerCandidate {
  std::string id;
  std::string text;
  std::optional<bool> is_correct;

  bool operator==(const AnswerCandidate&) const = default;
};

enum class CandidateSource { paragraph, kb_pool };

// One question with its candidate answers, normalized so the retriever and
// the metrics are dataset-agnostic. Paragraph-mode records carry their own
// candidate sentences; KB-mode records pool candidates through BM25.
struct QuestionRecord {
  std::string question_id;
  std::string question_text;
  std::vector<AnswerCandidate> answers;
  CandidateSource candidate_source = CandidateSource::paragraph;
  std::vector<std::string> paragraph_sentences;
  std::vector<SentenceId> gold_sentence_ids;  // sorted ascending
  std::vector<std::string> gold_texts;        // unresolved gold strings (KB mode)

  bool operator==(const QuestionRecord&) const = default;
};

// A sentence-per-line fact KB; sentence_id is the 0-based line number.
class KnowledgeBase {
 public:
  static KnowledgeBase load(const std::filesystem::path& path);
  static KnowledgeBase from_lines(std::vector<std::string> lines);

  std::size_t size() const { return facts_.size(); }
  const std::string& fact(SentenceId id) const { return facts_.at(id); }
  const std::vector<std::string>& facts() const { return facts_; }

  // Exact match after lowercasing and whitespace collapsing; -1 if absent.
  SentenceId find_normalized(const std::string& text) const;

 private:
  std::vector<std::string> facts_;
};

std::string normalize_for_match(const std::string& text);

enum class PoolProvenance { paragraph, bm25 };

struct PoolEntry {
  Sentence sentence;
  std::int32_t source_rank = 0;
};

// The sentence set AIR ranks each hop: paragraph order for MultiRC-style
// records, BM25 rank order for KB pools.
struct CandidatePool {
  std::vector<PoolEntry> entries;
  PoolProvenance provenance = PoolProvenance::paragraph;
};

CandidatePool make_paragraph_pool(const QuestionRecord& record,
                                  const TextPipeline& pipeline);

// Original MultiRC JSON. Accepts paragraph text with "<b>Sent k: </b>"
// markers or a pre-split "sentences" array; gold ids come from
// "sentences_used" and are 0-based.
std::vector<QuestionRecord> load_multirc(const std::filesystem::path& path);

struct QascDataset {
  std::vector<QuestionRecord> questions;
  KnowledgeBase kb;
};

// Line-delimited QASC questions (8 choices each) plus the fact KB. fact1 and
// fact2 are resolved to KB line ids by normalized exact match where possible,
// otherwise kept as raw gold strings.
QascDataset load_qasc(const std::filesystem::path& questions_path,
                      const std::filesystem::path& kb_path);

// Cache format: one normalized QuestionRecord JSON object per line.
void save_records(const std::vector<QuestionRecord>& records,
                  const std::filesystem::path& path);
std::vector<QuestionRecord> load_records(const std::filesystem::path& path);

}  // namespace air
