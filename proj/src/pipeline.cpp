#include "air/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <unordered_map>
#include <utility>

#include "air/alignment.hpp"
#include "air/errors.hpp"
#include "air/version.hpp"

namespace air {

namespace {

struct Unit {
  std::size_t question;
  std::size_t answer;
};

std::vector<Unit> flatten_units(const std::vector<QuestionRecord>& questions) {
  std::vector<Unit> units;
  for (std::size_t qi = 0; qi < questions.size(); ++qi) {
    for (std::size_t ai = 0; ai < questions[qi].answers.size(); ++ai) {
      units.push_back({qi, ai});
    }
  }
  return units;
}

// OpenMP loop that keeps the first exception instead of terminating; results
// must be written by index so output order stays thread-independent.
template <typename Fn>
void parallel_units(std::size_t count, Fn&& fn) {
  std::atomic<bool> failed{false};
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(air_pipeline_error)
      {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

void check_env(const RetrievalEnv& env, const AirConfig& config) {
  if (env.pipeline == nullptr) throw ConfigError("retrieval env: text pipeline is required");
  if (env.stats == nullptr) throw ConfigError("retrieval env: corpus stats are required");
  if (config.matcher == MatcherKind::embedding && env.table == nullptr) {
    throw ConfigError("embedding matcher selected but no embedding table loaded");
  }
  for (const auto& q : env.questions) {
    if (q.candidate_source == CandidateSource::kb_pool) {
      if (env.index == nullptr || env.kb == nullptr) {
        throw ConfigError("question " + q.question_id +
                          " pools candidates from a KB, but no index/KB was provided");
      }
      break;
    }
  }
}

CandidatePool unit_pool(const RetrievalEnv& env, const QuestionRecord& question,
                        const AnswerCandidate& answer) {
  if (question.candidate_source == CandidateSource::paragraph) {
    return make_paragraph_pool(question, *env.pipeline);
  }
  return pool_candidates(question, answer, *env.index, *env.kb, *env.pipeline,
                         env.pool_size);
}

std::vector<SentenceId> pad_ids(const std::vector<SentenceId>& merged,
                                const std::vector<SentenceId>& initial_ranking,
                                std::size_t cap) {
  std::vector<SentenceId> out = merged;
  if (out.size() > cap) out.resize(cap);
  for (SentenceId id : initial_ranking) {
    if (out.size() >= cap) break;
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  return out;
}

std::string unit_key(const std::string& question_id, const std::string& answer_id) {
  return question_id + "#" + answer_id;
}

std::string fmt_fixed(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

std::string fmt_param(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

}  // namespace

std::string to_string(DatasetKind kind) {
  return kind == DatasetKind::multirc ? "multirc" : "qasc";
}

nlohmann::ordered_json make_config_json(const RetrievalEnv& env,
                                        const RetrievalOptions& opt) {
  nlohmann::ordered_json j;
  j["dataset"] = to_string(env.kind);
  j["pool"] = env.kind == DatasetKind::qasc ? "bm25" : "paragraph";
  j["pool_size"] = env.pool_size;
  j["questions"] = env.questions.size();
  j["matcher"] = opt.config.matcher == MatcherKind::embedding ? "embedding" : "lexical";
  j["mode"] = opt.config.mode == RetrievalMode::controlled ? "controlled" : "uncontrolled";
  j["M"] = opt.config.M;
  j["T"] = opt.config.T;
  j["max_hops"] = opt.config.max_hops;
  if (opt.config.fixed_hops) {
    j["fixed_hops"] = *opt.config.fixed_hops;
  } else {
    j["fixed_hops"] = nullptr;
  }
  j["parallel_chains"] = opt.config.chain_count;
  j["expand_all_previous"] = opt.config.expand_all_previous;
  j["pad_ranking"] = opt.pad_ranking;
  return j;
}

std::vector<TraceRecord> run_retrieval(const RetrievalEnv& env,
                                       const RetrievalOptions& opt) {
  opt.config.validate();
  check_env(env, opt.config);
  const std::vector<Unit> units = flatten_units(env.questions);
  std::vector<TraceRecord> results(units.size());
  parallel_units(units.size(), [&](std::size_t i) {
    const Unit& unit = units[i];
    const QuestionRecord& question = env.questions[unit.question];
    const AnswerCandidate& answer = question.answers[unit.answer];
    TraceRecord record;
    record.question_id = question.question_id;
    record.answer_id = answer.id;
    const TermSet query = env.pipeline->terms(question.question_text + " " + answer.text);
    if (!query.empty()) {
      const CandidatePool pool = unit_pool(env, question, answer);
      if (!pool.entries.empty()) {
        AirConfig config = opt.config;
        if (opt.clamp_chains &&
            config.chain_count > static_cast<int>(pool.entries.size())) {
          config.chain_count = static_cast<int>(pool.entries.size());
        }
        ParallelChains out =
            retrieve_parallel(query, pool, config, env.table, *env.stats);
        record.chains = std::move(out.chains);
        record.merged_sentence_ids = std::move(out.merged_sentence_ids);
        if (opt.pad_ranking) {
          record.padded_ranking =
              pad_ids(record.merged_sentence_ids, out.initial_ranking, 10);
        }
      }
    }
    results[i] = std::move(record);
  });
  return results;
}

SelectionMetrics evaluate_selection(const std::vector<TraceRecord>& traces,
                                    const std::vector<QuestionRecord>& questions) {
  std::unordered_map<std::string, const QuestionRecord*> by_id;
  by_id.reserve(questions.size());
  for (const auto& q : questions) by_id[q.question_id] = &q;
  IdSetByQuestion retrieved;
  IdSetByQuestion gold;
  for (const auto& trace : traces) {
    auto it = by_id.find(trace.question_id);
    if (it == by_id.end()) {
      throw IdMismatch("trace question '" + trace.question_id +
                       "' does not exist in the dataset");
    }
    const std::string key = unit_key(trace.question_id, trace.answer_id);
    retrieved[key] = trace.merged_sentence_ids;
    gold[key] = it->second->gold_sentence_ids;
  }
  return selection_prf(retrieved, gold);
}

RecallAt10 evaluate_recall(const std::vector<TraceRecord>& traces,
                           const std::vector<QuestionRecord>& questions) {
  std::unordered_map<std::string, const TraceRecord*> by_unit;
  by_unit.reserve(traces.size());
  for (const auto& trace : traces) {
    by_unit[unit_key(trace.question_id, trace.answer_id)] = &trace;
  }
  IdSetByQuestion ranked;
  IdSetByQuestion gold;
  for (const auto& question : questions) {
    const AnswerCandidate* correct = nullptr;
    for (const auto& answer : question.answers) {
      if (answer.is_correct.value_or(false)) {
        correct = &answer;
        break;
      }
    }
    if (correct == nullptr) {
      throw IdMismatch("question '" + question.question_id +
                       "' has no answer marked correct; recall@10 needs answer keys");
    }
    auto it = by_unit.find(unit_key(question.question_id, correct->id));
    if (it == by_unit.end()) {
      throw IdMismatch("no trace found for question '" + question.question_id +
                       "' answer '" + correct->id + "'");
    }
    const TraceRecord& trace = *it->second;
    ranked[question.question_id] = trace.padded_ranking.empty()
                                       ? trace.merged_sentence_ids
                                       : trace.padded_ranking;
    std::vector<SentenceId> pair = question.gold_sentence_ids;
    SentenceId sentinel = -1;  // unresolved gold text: a miss, never a crash
    for (std::size_t i = 0; i < question.gold_texts.size(); ++i) {
      pair.push_back(sentinel--);
    }
    gold[question.question_id] = std::move(pair);
  }
  return recall_at_10(ranked, gold);
}

double DriftTable::at(int hop, const std::string& variant) const {
  for (std::size_t hi = 0; hi < hops.size(); ++hi) {
    if (hops[hi] != hop) continue;
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      if (variants[vi] == variant) return f1[hi][vi];
    }
  }
  throw ConfigError("drift table has no cell (" + std::to_string(hop) + ", " +
                    variant + ")");
}

std::string DriftTable::to_csv(const std::string& config_line) const {
  std::string out = "# " + config_line + "\n";
  out += "hops";
  for (const auto& v : variants) out += "," + v;
  out += "\n";
  for (std::size_t hi = 0; hi < hops.size(); ++hi) {
    out += std::to_string(hops[hi]);
    for (double value : f1[hi]) out += "," + fmt_fixed(value);
    out += "\n";
  }
  return out;
}

namespace {

std::vector<TraceRecord> ranked_baseline(
    const RetrievalEnv& env, const std::vector<Unit>& units, int hops,
    const std::vector<std::optional<InvertedIndex>>& local_indexes,
    bool use_bm25) {
  std::vector<TraceRecord> results(units.size());
  parallel_units(units.size(), [&](std::size_t i) {
    const Unit& unit = units[i];
    const QuestionRecord& question = env.questions[unit.question];
    const AnswerCandidate& answer = question.answers[unit.answer];
    TraceRecord record;
    record.question_id = question.question_id;
    record.answer_id = answer.id;
    const TermSet query = env.pipeline->terms(question.question_text + " " + answer.text);
    if (!query.empty()) {
      if (use_bm25) {
        const InvertedIndex* index =
            question.candidate_source == CandidateSource::paragraph
                ? &*local_indexes[unit.question]
                : env.index;
        for (const auto& hit : index->search(query, hops)) {
          record.merged_sentence_ids.push_back(hit.sentence_id);
        }
      } else {
        const CandidatePool pool = unit_pool(env, question, answer);
        if (!pool.entries.empty()) {
          SentenceScorer scorer{MatcherKind::embedding, env.table, env.stats};
          const auto ranked = rank_candidates(query, pool, scorer);
          const std::size_t take =
              std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(hops));
          for (std::size_t r = 0; r < take; ++r) {
            record.merged_sentence_ids.push_back(ranked[r].sentence_id);
          }
        }
      }
    }
    results[i] = std::move(record);
  });
  return results;
}

}  // namespace

DriftTable run_drift(const RetrievalEnv& env, const AirConfig& base, int max_hops) {
  if (max_hops < 1) throw ConfigError("drift experiment needs max_hops >= 1");
  base.validate();
  check_env(env, base);
  if (env.table == nullptr) {
    throw ConfigError("drift experiment always needs embeddings for its alignment variants");
  }

  DriftTable table;
  table.variants = {"bm25", "lexical_uncontrolled", "alignment_topk",
                    "air_uncontrolled", "air_controlled"};

  // Paragraph questions get a paragraph-local BM25 index; KB questions reuse
  // the shared one.
  std::vector<std::optional<InvertedIndex>> local_indexes(env.questions.size());
  parallel_units(env.questions.size(), [&](std::size_t qi) {
    const QuestionRecord& question = env.questions[qi];
    if (question.candidate_source == CandidateSource::paragraph &&
        !question.paragraph_sentences.empty()) {
      local_indexes[qi] =
          build_index_from_texts(question.paragraph_sentences, *env.pipeline);
    }
  });

  const std::vector<Unit> units = flatten_units(env.questions);
  for (int h = 1; h <= max_hops; ++h) {
    std::vector<double> row;
    for (const auto& variant : table.variants) {
      std::vector<TraceRecord> traces;
      if (variant == "bm25") {
        traces = ranked_baseline(env, units, h, local_indexes, true);
      } else if (variant == "alignment_topk") {
        traces = ranked_baseline(env, units, h, local_indexes, false);
      } else {
        AirConfig config = base;
        config.chain_count = 1;
        config.fixed_hops = h;
        config.max_hops = h;
        config.matcher = variant == "lexical_uncontrolled" ? MatcherKind::lexical
                                                           : MatcherKind::embedding;
        config.mode = variant == "air_controlled" ? RetrievalMode::controlled
                                                  : RetrievalMode::uncontrolled;
        RetrievalOptions opt;
        opt.config = config;
        traces = run_retrieval(env, opt);
      }
      row.push_back(evaluate_selection(traces, env.questions).f1 * 100.0);
    }
    table.hops.push_back(h);
    table.f1.push_back(std::move(row));
  }
  return table;
}

std::string SensitivityTable::to_csv(const std::string& config_line) const {
  std::string out = "# " + config_line + "\n";
  out += param_name + ",f1";
  if (recall_metric) out += ",both_found,at_least_one";
  out += "\n";
  for (const auto& point : points) {
    out += fmt_param(point.param) + "," + fmt_fixed(point.f1);
    if (recall_metric) {
      out += "," + fmt_fixed(point.both_found) + "," + fmt_fixed(point.at_least_one);
    }
    out += "\n";
  }
  return out;
}

namespace {

SensitivityTable run_sensitivity(const RetrievalEnv& env, const AirConfig& base,
                                 std::string param_name,
                                 const std::vector<double>& grid) {
  SensitivityTable table;
  table.param_name = std::move(param_name);
  table.recall_metric = env.kind == DatasetKind::qasc;
  for (double value : grid) {
    RetrievalOptions opt;
    opt.config = base;
    if (table.param_name == "M") {
      opt.config.M = value;
    } else {
      opt.config.T = static_cast<int>(value);
    }
    opt.pad_ranking = table.recall_metric;
    const auto traces = run_retrieval(env, opt);
    SensitivityPoint point;
    point.param = value;
    point.f1 = evaluate_selection(traces, env.questions).f1 * 100.0;
    if (table.recall_metric) {
      const RecallAt10 recall = evaluate_recall(traces, env.questions);
      point.both_found = recall.both_found * 100.0;
      point.at_least_one = recall.at_least_one_found * 100.0;
    }
    table.points.push_back(point);
  }
  return table;
}

}  // namespace

SensitivityTable run_sensitivity_m(const RetrievalEnv& env, const AirConfig& base,
                                   const std::vector<double>& grid) {
  return run_sensitivity(env, base, "M", grid);
}

SensitivityTable run_sensitivity_t(const RetrievalEnv& env, const AirConfig& base,
                                   const std::vector<int>& grid) {
  std::vector<double> values(grid.begin(), grid.end());
  return run_sensitivity(env, base, "T", values);
}

}  // namespace air
