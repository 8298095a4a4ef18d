#include "air/trace_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "air/errors.hpp"
#include "air/version.hpp"

namespace air {

namespace {

std::vector<std::string> string_list(const nlohmann::json& j) {
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(item.get<std::string>());
  return out;
}

std::vector<SentenceId> id_list(const nlohmann::json& j) {
  std::vector<SentenceId> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(item.get<SentenceId>());
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const HopTrace& hop) {
  nlohmann::ordered_json j;
  j["query_terms"] = hop.query_terms.items();
  j["chosen_sentence_id"] = hop.chosen_sentence_id;
  j["score"] = hop.score;
  j["coverage"] = hop.coverage;
  j["remainder_terms"] = hop.remainder_terms.items();
  return j;
}

nlohmann::ordered_json to_json(const EvidenceChain& chain) {
  nlohmann::ordered_json j;
  j["sentence_ids"] = chain.sentence_ids;
  nlohmann::ordered_json hops = nlohmann::ordered_json::array();
  for (const auto& hop : chain.hops) hops.push_back(to_json(hop));
  j["hops"] = std::move(hops);
  j["stop_reason"] = to_string(chain.stop_reason);
  return j;
}

nlohmann::ordered_json to_json(const TraceRecord& record) {
  nlohmann::ordered_json j;
  j["question_id"] = record.question_id;
  j["answer_id"] = record.answer_id;
  nlohmann::ordered_json chains = nlohmann::ordered_json::array();
  for (const auto& chain : record.chains) chains.push_back(to_json(chain));
  j["chains"] = std::move(chains);
  j["merged_sentence_ids"] = record.merged_sentence_ids;
  if (!record.padded_ranking.empty()) j["padded_ranking"] = record.padded_ranking;
  return j;
}

TraceRecord trace_from_json(const nlohmann::json& j) {
  TraceRecord record;
  record.question_id = j.at("question_id").get<std::string>();
  record.answer_id = j.at("answer_id").get<std::string>();
  for (const auto& cj : j.at("chains")) {
    EvidenceChain chain;
    chain.sentence_ids = id_list(cj.at("sentence_ids"));
    for (const auto& hj : cj.at("hops")) {
      HopTrace hop;
      hop.query_terms = TermSet(string_list(hj.at("query_terms")));
      hop.chosen_sentence_id = hj.at("chosen_sentence_id").get<SentenceId>();
      hop.score = hj.at("score").get<double>();
      hop.coverage = hj.at("coverage").get<double>();
      hop.remainder_terms = TermSet(string_list(hj.at("remainder_terms")));
      chain.hops.push_back(std::move(hop));
    }
    const auto reason_name = cj.at("stop_reason").get<std::string>();
    const auto reason = stop_reason_from_string(reason_name);
    if (!reason) throw ParseError("stop_reason", "unknown value '" + reason_name + "'");
    chain.stop_reason = *reason;
    record.chains.push_back(std::move(chain));
  }
  record.merged_sentence_ids = id_list(j.at("merged_sentence_ids"));
  if (j.contains("padded_ranking")) record.padded_ranking = id_list(j.at("padded_ranking"));
  return record;
}

void write_trace_stream(std::ostream& out, const nlohmann::ordered_json& config,
                        const std::vector<TraceRecord>& records) {
  nlohmann::ordered_json meta;
  meta["version"] = std::string(kVersion);
  meta["config_hash"] = hex64(fnv1a64(config.dump()));
  meta["config"] = config;
  nlohmann::ordered_json head;
  head["meta"] = std::move(meta);
  out << head.dump() << '\n';
  for (const auto& record : records) out << to_json(record).dump() << '\n';
}

TraceFile read_trace_stream(std::istream& in, const std::string& location) {
  TraceFile file;
  file.meta = nlohmann::json::object();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(location + ":" + std::to_string(line_no), e.what());
    }
    if (j.contains("meta")) {
      file.meta = j.at("meta");
      continue;
    }
    try {
      file.records.push_back(trace_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(location + ":" + std::to_string(line_no), e.what());
    }
  }
  return file;
}

TraceFile load_traces(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError(path.string(), "cannot open for reading");
  TraceFile file = read_trace_stream(in, path.string());
  if (file.records.empty()) throw EmptyFile(path.string());
  return file;
}

}  // namespace air
