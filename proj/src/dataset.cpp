#include "air/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "air/errors.hpp"

namespace air {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string(), "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + " (byte " + std::to_string(e.byte) + ")",
                     e.what());
  }
}

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw MissingField(field);
  return *it;
}

std::string trim(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// "<b>Sent 1: </b>text<br><b>Sent 2: </b>..." -> ["text", ...]
std::vector<std::string> split_marked_paragraph(const std::string& text) {
  static const std::regex marker(R"(<b>Sent\s*\d+:\s*</b>)");
  std::vector<std::string> sentences;
  auto begin = std::sregex_iterator(text.begin(), text.end(), marker);
  auto end = std::sregex_iterator();
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // (pos, len)
  for (auto it = begin; it != end; ++it)
    spans.emplace_back(it->position(), it->length());
  if (spans.empty()) return sentences;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const std::size_t from = spans[i].first + spans[i].second;
    const std::size_t to =
        i + 1 < spans.size() ? spans[i + 1].first : text.size();
    std::string segment = text.substr(from, to - from);
    // strip the trailing <br> separators
    while (true) {
      std::string t = trim(segment);
      if (t.size() >= 4 && t.compare(t.size() - 4, 4, "<br>") == 0) {
        segment = t.substr(0, t.size() - 4);
      } else {
        segment = t;
        break;
      }
    }
    sentences.push_back(segment);
  }
  return sentences;
}

}  // namespace

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string(), "cannot open KB file");
  KnowledgeBase kb;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    kb.facts_.push_back(line);
  }
  if (kb.facts_.empty()) throw EmptyFile(path.string());
  return kb;
}

KnowledgeBase KnowledgeBase::from_lines(std::vector<std::string> lines) {
  KnowledgeBase kb;
  kb.facts_ = std::move(lines);
  return kb;
}

std::string normalize_for_match(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = true;  // also trims leading whitespace
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(static_cast<char>(std::tolower(c)));
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

SentenceId KnowledgeBase::find_normalized(const std::string& text) const {
  const std::string needle = normalize_for_match(text);
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    if (normalize_for_match(facts_[i]) == needle)
      return static_cast<SentenceId>(i);
  }
  return -1;
}

CandidatePool make_paragraph_pool(const QuestionRecord& record,
                                  const TextPipeline& pipeline) {
  CandidatePool pool;
  pool.provenance = PoolProvenance::paragraph;
  pool.entries.reserve(record.paragraph_sentences.size());
  for (std::size_t i = 0; i < record.paragraph_sentences.size(); ++i) {
    pool.entries.push_back(
        PoolEntry{pipeline.make_sentence(static_cast<SentenceId>(i),
                                         record.paragraph_sentences[i]),
                  static_cast<std::int32_t>(i)});
  }
  return pool;
}

std::vector<QuestionRecord> load_multirc(const std::filesystem::path& path) {
  const json root = parse_file(path);
  const json& data = require(root, "data");

  std::vector<QuestionRecord> records;
  for (const auto& item : data) {
    const std::string para_id = require(item, "id").get<std::string>();
    const json& paragraph = require(item, "paragraph");

    std::vector<std::string> sentences;
    if (paragraph.contains("sentences")) {
      for (const auto& s : paragraph["sentences"])
        sentences.push_back(s.get<std::string>());
    } else {
      sentences = split_marked_paragraph(require(paragraph, "text").get<std::string>());
      if (sentences.empty())
        throw ParseError(path.string() + " paragraph " + para_id,
                         "no '<b>Sent k:</b>' markers and no 'sentences' array");
    }

    for (const auto& q : require(paragraph, "questions")) {
      QuestionRecord record;
      record.candidate_source = CandidateSource::paragraph;
      record.paragraph_sentences = sentences;
      record.question_text = require(q, "question").get<std::string>();
      const auto q_idx = require(q, "idx");
      record.question_id =
          para_id + ":" + (q_idx.is_string() ? q_idx.get<std::string>()
                                             : std::to_string(q_idx.get<int>()));

      if (q.contains("sentences_used")) {
        for (const auto& g : q["sentences_used"]) {
          const auto id = g.get<SentenceId>();
          if (id < 0 || static_cast<std::size_t>(id) >= sentences.size())
            throw ParseError(path.string() + " question " + record.question_id,
                             "gold sentence id " + std::to_string(id) +
                                 " outside paragraph of " +
                                 std::to_string(sentences.size()) + " sentences");
          record.gold_sentence_ids.push_back(id);
        }
        std::sort(record.gold_sentence_ids.begin(), record.gold_sentence_ids.end());
        record.gold_sentence_ids.erase(std::unique(record.gold_sentence_ids.begin(),
                                                   record.gold_sentence_ids.end()),
                                       record.gold_sentence_ids.end());
      }

      for (const auto& a : require(q, "answers")) {
        AnswerCandidate answer;
        const auto a_idx = require(a, "idx");
        answer.id = a_idx.is_string() ? a_idx.get<std::string>()
                                      : std::to_string(a_idx.get<int>());
        answer.text = require(a, "text").get<std::string>();
        if (a.contains("isAnswer")) answer.is_correct = a["isAnswer"].get<bool>();
        record.answers.push_back(std::move(answer));
      }
      records.push_back(std::move(record));
    }
  }
  return records;
}

QascDataset load_qasc(const std::filesystem::path& questions_path,
                      const std::filesystem::path& kb_path) {
  QascDataset dataset;
  dataset.kb = KnowledgeBase::load(kb_path);

  std::ifstream in(questions_path, std::ios::binary);
  if (!in) throw FileError(questions_path.string(), "cannot open questions file");

  // Gold facts are resolved against the KB in one batch pass.
  std::vector<std::vector<std::string>> pending_golds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json q;
    try {
      q = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(questions_path.string() + ":" + std::to_string(line_no) +
                           " (byte " + std::to_string(e.byte) + ")",
                       e.what());
    }

    QuestionRecord record;
    record.candidate_source = CandidateSource::kb_pool;
    record.question_id = require(q, "id").get<std::string>();
    const json& question = require(q, "question");
    record.question_text = require(question, "stem").get<std::string>();

    const json& choices = require(question, "choices");
    if (choices.size() != 8)
      throw WrongChoiceCount(record.question_id, choices.size());
    std::string answer_key;
    if (q.contains("answerKey")) answer_key = q["answerKey"].get<std::string>();
    for (const auto& c : choices) {
      AnswerCandidate answer;
      answer.id = require(c, "label").get<std::string>();
      answer.text = require(c, "text").get<std::string>();
      if (!answer_key.empty()) answer.is_correct = answer.id == answer_key;
      record.answers.push_back(std::move(answer));
    }

    std::vector<std::string> golds;
    for (const char* field : {"fact1", "fact2"}) {
      if (q.contains(field) && q[field].is_string()) {
        const auto fact = q[field].get<std::string>();
        if (!trim(fact).empty()) golds.push_back(fact);
      }
    }
    pending_golds.push_back(std::move(golds));
    dataset.questions.push_back(std::move(record));
  }
  if (dataset.questions.empty()) throw EmptyFile(questions_path.string());

  std::unordered_map<std::string, SentenceId> wanted;
  for (const auto& golds : pending_golds) {
    for (const auto& g : golds) wanted.emplace(normalize_for_match(g), -1);
  }
  for (std::size_t i = 0; i < dataset.kb.size(); ++i) {
    auto it = wanted.find(normalize_for_match(dataset.kb.fact(static_cast<SentenceId>(i))));
    if (it != wanted.end() && it->second < 0)
      it->second = static_cast<SentenceId>(i);
  }
  for (std::size_t qi = 0; qi < dataset.questions.size(); ++qi) {
    auto& record = dataset.questions[qi];
    for (const auto& g : pending_golds[qi]) {
      const SentenceId id = wanted.at(normalize_for_match(g));
      if (id >= 0) {
        record.gold_sentence_ids.push_back(id);
      } else {
        record.gold_texts.push_back(g);
      }
    }
    std::sort(record.gold_sentence_ids.begin(), record.gold_sentence_ids.end());
  }
  return dataset;
}

void save_records(const std::vector<QuestionRecord>& records,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError(path.string(), "cannot open for writing");
  for (const auto& record : records) {
    ordered_json j;
    j["question_id"] = record.question_id;
    j["question_text"] = record.question_text;
    j["answers"] = ordered_json::array();
    for (const auto& a : record.answers) {
      ordered_json aj;
      aj["id"] = a.id;
      aj["text"] = a.text;
      if (a.is_correct) aj["is_correct"] = *a.is_correct;
      j["answers"].push_back(std::move(aj));
    }
    j["candidate_source"] =
        record.candidate_source == CandidateSource::paragraph ? "paragraph"
                                                              : "kb_pool";
    j["paragraph_sentences"] = record.paragraph_sentences;
    j["gold_sentence_ids"] = record.gold_sentence_ids;
    j["gold_texts"] = record.gold_texts;
    out << j.dump() << "\n";
  }
  if (!out) throw FileError(path.string(), "write failed");
}

std::vector<QuestionRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string(), "cannot open records file");
  std::vector<QuestionRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no), e.what());
    }
    QuestionRecord record;
    record.question_id = require(j, "question_id").get<std::string>();
    record.question_text = require(j, "question_text").get<std::string>();
    for (const auto& aj : require(j, "answers")) {
      AnswerCandidate a;
      a.id = require(aj, "id").get<std::string>();
      a.text = require(aj, "text").get<std::string>();
      if (aj.contains("is_correct")) a.is_correct = aj["is_correct"].get<bool>();
      record.answers.push_back(std::move(a));
    }
    record.candidate_source =
        require(j, "candidate_source").get<std::string>() == "paragraph"
            ? CandidateSource::paragraph
            : CandidateSource::kb_pool;
    record.paragraph_sentences =
        require(j, "paragraph_sentences").get<std::vector<std::string>>();
    record.gold_sentence_ids =
        require(j, "gold_sentence_ids").get<std::vector<SentenceId>>();
    record.gold_texts = require(j, "gold_texts").get<std::vector<std::string>>();
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace air
