#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "air/retriever.hpp"

namespace air {

// One retrieval outcome for a (question, answer) unit.
struct TraceRecord {
  std::string question_id;
  std::string answer_id;
  std::vector<EvidenceChain> chains;
  std::vector<SentenceId> merged_sentence_ids;
  // Optional rank list (merged chain sentences padded with remaining pool
  // candidates by initial alignment score). Empty when padding is disabled.
  std::vector<SentenceId> padded_ranking;
};

nlohmann::ordered_json to_json(const HopTrace& hop);
nlohmann::ordered_json to_json(const EvidenceChain& chain);
nlohmann::ordered_json to_json(const TraceRecord& record);

TraceRecord trace_from_json(const nlohmann::json& j);

// Stream format: line-delimited JSON. The first line is a metadata object
// {"meta": {"version": ..., "config_hash": ..., "config": {...}}}; every
// following line is one TraceRecord.
void write_trace_stream(std::ostream& out, const nlohmann::ordered_json& config,
                        const std::vector<TraceRecord>& records);

struct TraceFile {
  nlohmann::json meta;  // empty object when the stream had no metadata line
  std::vector<TraceRecord> records;
};

TraceFile read_trace_stream(std::istream& in, const std::string& location);
TraceFile load_traces(const std::filesystem::path& path);

}  // namespace air
