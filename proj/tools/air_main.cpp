#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"

#include "air/errors.hpp"
#include "air/pipeline.hpp"
#include "air/version.hpp"
#include "stopwords_data.hpp"

namespace {

using namespace air;

struct DataOptions {
  std::string dataset;
  std::string questions;
  std::string kb;
  std::string index_path;
  std::string stats_path;
  std::string stopwords_path;
  std::string embeddings;
  int pool_size = 80;
  int threads = 0;
};

struct AirFlags {
  std::string matcher = "embedding";
  std::string mode = "controlled";
  double M = 0.95;
  int T = 2;
  bool t_given = false;
  int max_hops = 6;
  int fixed_hops = 0;  // 0 = natural stopping
  int parallel_chains = 1;
  bool expand_all_previous = false;
};

struct Needs {
  bool embeddings = false;
  bool stats = false;
  bool index = false;
};

struct LoadedData {
  DatasetKind kind = DatasetKind::multirc;
  TextPipeline pipeline;
  std::vector<QuestionRecord> questions;
  std::optional<KnowledgeBase> kb;
  std::optional<InvertedIndex> index;
  std::optional<CorpusStats> stats;
  std::optional<EmbeddingTable> table;
  int pool_size = 80;

  RetrievalEnv env() const {
    RetrievalEnv e;
    e.kind = kind;
    e.questions = questions;
    e.kb = kb ? &*kb : nullptr;
    e.index = index ? &*index : nullptr;
    e.pool_size = pool_size;
    e.pipeline = &pipeline;
    e.table = table ? &*table : nullptr;
    e.stats = stats ? &*stats : nullptr;
    return e;
  }
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--dataset", d.dataset, "Dataset flavor")
      ->required()
      ->check(CLI::IsMember({"multirc", "qasc"}));
  cmd->add_option("--questions", d.questions, "Question file (JSON or JSONL)")
      ->required();
  cmd->add_option("--kb", d.kb, "Fact KB, one sentence per line (qasc)");
  cmd->add_option("--index", d.index_path, "Prebuilt BM25 index (else built in memory)");
  cmd->add_option("--stats", d.stats_path, "Precomputed corpus stats (else built in memory)");
  cmd->add_option("--stopwords", d.stopwords_path,
                  "Stopword file (default: the bundled English list)");
  cmd->add_option("--embeddings", d.embeddings,
                  "Word vectors in GloVe text format (default: $AIR_EMBEDDINGS)");
  cmd->add_option("--pool-size", d.pool_size, "BM25 candidate pool size per answer")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", d.threads, "OpenMP thread count (0 = runtime default)");
}

void add_air_flags(CLI::App* cmd, AirFlags& f, bool with_fixed) {
  cmd->add_option("--matcher", f.matcher, "Term matcher")
      ->check(CLI::IsMember({"embedding", "lexical"}));
  cmd->add_option("--mode", f.mode, "Query reformulation mode")
      ->check(CLI::IsMember({"controlled", "uncontrolled"}));
  cmd->add_option("--M", f.M, "Soft-match cosine threshold (default 0.95)");
  cmd->add_option("--T", f.T,
                  "Remainder size at which the query is expanded "
                  "(default 2 for multirc, 4 for qasc)");
  cmd->add_option("--max-hops", f.max_hops, "Hop budget per chain");
  if (with_fixed) {
    cmd->add_option("--fixed-hops", f.fixed_hops,
                    "Retrieve exactly this many hops, overriding natural stopping");
  }
  cmd->add_option("--parallel-chains", f.parallel_chains,
                  "Number of parallel evidence chains (p)");
  cmd->add_flag("--expand-all-previous", f.expand_all_previous,
                "Expand queries with terms of the whole chain, not just the last hop");
}

AirConfig make_config(const AirFlags& f, DatasetKind kind) {
  AirConfig config;
  config.matcher = f.matcher == "embedding" ? MatcherKind::embedding : MatcherKind::lexical;
  config.mode = f.mode == "controlled" ? RetrievalMode::controlled
                                       : RetrievalMode::uncontrolled;
  config.M = f.M;
  config.T = f.t_given ? f.T : (kind == DatasetKind::qasc ? 4 : 2);
  config.max_hops = f.max_hops;
  if (f.fixed_hops > 0) config.fixed_hops = f.fixed_hops;
  config.chain_count = f.parallel_chains;
  config.expand_all_previous = f.expand_all_previous;
  return config;
}

std::vector<std::string> unique_paragraph_texts(const std::vector<QuestionRecord>& questions) {
  std::vector<std::string> texts;
  std::unordered_set<std::string> seen;
  for (const auto& q : questions) {
    std::string key;
    for (const auto& s : q.paragraph_sentences) {
      key += s;
      key += '\n';
    }
    if (seen.insert(std::move(key)).second) {
      texts.insert(texts.end(), q.paragraph_sentences.begin(),
                   q.paragraph_sentences.end());
    }
  }
  return texts;
}

TermSet vocab_filter(const LoadedData& data) {
  std::vector<std::string> words = data.stats->terms_sorted();
  for (const auto& q : data.questions) {
    const auto q_terms = data.pipeline.terms(q.question_text);
    words.insert(words.end(), q_terms.begin(), q_terms.end());
    for (const auto& a : q.answers) {
      const auto a_terms = data.pipeline.terms(a.text);
      words.insert(words.end(), a_terms.begin(), a_terms.end());
    }
  }
  return TermSet(std::move(words));
}

LoadedData load_data(const DataOptions& d, const Needs& needs) {
  if (d.threads > 0) omp_set_num_threads(d.threads);

  LoadedData data;
  data.pool_size = d.pool_size;
  data.pipeline.stopwords = d.stopwords_path.empty()
                                ? StopwordList::from_text(kDefaultStopwordText)
                                : StopwordList::load(d.stopwords_path);

  if (d.dataset == "qasc") {
    data.kind = DatasetKind::qasc;
    if (d.kb.empty()) throw ConfigError("--dataset qasc requires --kb");
    QascDataset dataset = load_qasc(d.questions, d.kb);
    data.questions = std::move(dataset.questions);
    data.kb = std::move(dataset.kb);
  } else {
    data.kind = DatasetKind::multirc;
    data.questions = load_multirc(d.questions);
  }

  if (needs.stats) {
    if (!d.stats_path.empty()) {
      data.stats = CorpusStats::load(d.stats_path);
    } else if (data.kind == DatasetKind::qasc) {
      data.stats = CorpusStats::build_from_texts(data.kb->facts(), data.pipeline);
    } else {
      const auto texts = unique_paragraph_texts(data.questions);
      data.stats = CorpusStats::build_from_texts(texts, data.pipeline);
    }
  }

  if (needs.index && data.kind == DatasetKind::qasc) {
    if (!d.index_path.empty()) {
      data.index = InvertedIndex::load(d.index_path);
    } else {
      data.index = build_index_from_texts(data.kb->facts(), data.pipeline);
    }
  }

  if (needs.embeddings) {
    std::string path = d.embeddings;
    if (path.empty()) {
      if (const char* env = std::getenv("AIR_EMBEDDINGS")) path = env;
    }
    if (path.empty()) {
      throw ConfigError("embeddings needed: pass --embeddings or set AIR_EMBEDDINGS");
    }
    const TermSet vocab = vocab_filter(data);
    data.table = EmbeddingTable::load(path, &vocab);
  }
  return data;
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError(path, "cannot open for writing");
  out << content;
  if (!out) throw FileError(path, "write failed");
}

// ---- subcommands -----------------------------------------------------------

struct IndexArgs {
  std::string kb;
  std::string out;
  std::string stats_out;
  std::string stopwords_path;
  double k1 = 1.2;
  double b = 0.75;
  int threads = 0;
};

void cmd_index(const IndexArgs& args) {
  if (args.threads > 0) omp_set_num_threads(args.threads);
  TextPipeline pipeline;
  pipeline.stopwords = args.stopwords_path.empty()
                           ? StopwordList::from_text(kDefaultStopwordText)
                           : StopwordList::load(args.stopwords_path);
  const KnowledgeBase kb = KnowledgeBase::load(args.kb);
  const InvertedIndex index =
      build_index_from_texts(kb.facts(), pipeline, Bm25Params{args.k1, args.b});
  index.save(args.out);
  std::cout << "indexed " << index.doc_count() << " sentences, avg length "
            << index.avg_len() << ", " << index.terms_sorted().size()
            << " unique terms -> " << args.out << "\n";
  if (!args.stats_out.empty()) {
    const CorpusStats stats = CorpusStats::build_from_texts(kb.facts(), pipeline);
    stats.save(args.stats_out);
    std::cout << "corpus stats for " << stats.doc_count() << " sentences ("
              << stats.term_count() << " terms) -> " << args.stats_out << "\n";
  }
}

struct RetrieveArgs {
  DataOptions data;
  AirFlags air;
  std::string out = "-";
  // tri-state: unset means "qasc on, multirc off"
  bool pad_ranking = false;
  bool no_pad_ranking = false;
};

void cmd_retrieve(const RetrieveArgs& args) {
  Needs needs;
  needs.stats = true;
  needs.index = true;
  needs.embeddings = args.air.matcher == "embedding";
  const LoadedData data = load_data(args.data, needs);

  RetrievalOptions opt;
  opt.config = make_config(args.air, data.kind);
  opt.pad_ranking = data.kind == DatasetKind::qasc;
  if (args.pad_ranking) opt.pad_ranking = true;
  if (args.no_pad_ranking) opt.pad_ranking = false;

  const RetrievalEnv env = data.env();
  const auto traces = run_retrieval(env, opt);

  std::ostringstream buffer;
  write_trace_stream(buffer, make_config_json(env, opt), traces);
  write_text(args.out, buffer.str());
  std::cerr << "retrieved evidence for " << traces.size() << " (question, answer) units\n";
}

struct EvaluateArgs {
  DataOptions data;
  std::string traces;
  std::string metric = "prf";
  std::string out;
  bool json_to_stdout = false;
};

void cmd_evaluate(const EvaluateArgs& args) {
  const TraceFile trace_file = load_traces(args.traces);
  const LoadedData data = load_data(args.data, Needs{});

  nlohmann::ordered_json report;
  report["version"] = std::string(kVersion);
  report["metric"] = args.metric;
  report["traces"] = args.traces;
  if (trace_file.meta.contains("config_hash")) {
    report["trace_config_hash"] = trace_file.meta.at("config_hash");
  }

  std::string table;
  if (args.metric == "prf") {
    const SelectionMetrics metrics =
        evaluate_selection(trace_file.records, data.questions);
    report["precision"] = metrics.precision;
    report["recall"] = metrics.recall;
    report["f1"] = metrics.f1;
    report["evaluated"] = metrics.evaluated;
    report["excluded_no_gold"] = metrics.excluded_no_gold.size();
    table = render_prf_table(metrics);
  } else {
    const RecallAt10 metrics = evaluate_recall(trace_file.records, data.questions);
    report["both_found"] = metrics.both_found;
    report["at_least_one_found"] = metrics.at_least_one_found;
    report["k"] = metrics.k;
    report["questions"] = metrics.questions;
    table = render_recall_table(metrics);
  }

  if (args.json_to_stdout) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << table;
  }
  if (!args.out.empty()) {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw FileError(args.out, "cannot open for writing");
    out << report.dump(2) << "\n";
  }
}

struct ExperimentArgs {
  DataOptions data;
  AirFlags air;
  std::string name;
  std::string out_dir;
  int hops = 5;
  std::vector<double> grid;
};

void cmd_experiment(const ExperimentArgs& args) {
  Needs needs;
  needs.stats = true;
  needs.index = true;
  needs.embeddings = true;
  const LoadedData data = load_data(args.data, needs);
  const RetrievalEnv env = data.env();
  const AirConfig base = make_config(args.air, data.kind);

  RetrievalOptions base_opt;
  base_opt.config = base;
  const std::string config_hash =
      hex64(fnv1a64(make_config_json(env, base_opt).dump()));
  const std::string config_line = "air " + std::string(kVersion) +
                                  " experiment=" + args.name +
                                  " dataset=" + to_string(env.kind) +
                                  " config=" + config_hash;

  std::filesystem::create_directories(args.out_dir);
  std::string csv;
  std::filesystem::path out_path(args.out_dir);
  if (args.name == "drift") {
    const DriftTable table = run_drift(env, base, args.hops);
    csv = table.to_csv(config_line);
    out_path /= "drift.csv";
  } else if (args.name == "sensitivity-m") {
    std::vector<double> grid = args.grid;
    if (grid.empty()) grid = {0.95, 0.85, 0.75};
    const SensitivityTable table = run_sensitivity_m(env, base, grid);
    csv = table.to_csv(config_line);
    out_path /= "sensitivity_m.csv";
  } else {
    std::vector<int> grid;
    for (double g : args.grid) grid.push_back(static_cast<int>(g));
    if (grid.empty()) grid = {1, 2, 3, 4, 5};
    const SensitivityTable table = run_sensitivity_t(env, base, grid);
    csv = table.to_csv(config_line);
    out_path /= "sensitivity_t.csv";
  }
  write_text(out_path.string(), csv);
  std::cout << csv;
  std::cerr << "wrote " << out_path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"air: unsupervised iterative evidence retrieval"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(air::kVersion));

  IndexArgs index_args;
  auto* index_cmd = app.add_subcommand("index", "Build a BM25 index over a fact KB");
  index_cmd->add_option("--kb", index_args.kb, "Fact KB, one sentence per line")->required();
  index_cmd->add_option("--out", index_args.out, "Index output path")->required();
  index_cmd->add_option("--stats-out", index_args.stats_out,
                        "Also write corpus statistics to this path");
  index_cmd->add_option("--stopwords", index_args.stopwords_path,
                        "Stopword file (default: the bundled English list)");
  index_cmd->add_option("--k1", index_args.k1, "BM25 k1 (default 1.2)");
  index_cmd->add_option("--b", index_args.b, "BM25 b (default 0.75)");
  index_cmd->add_option("--threads", index_args.threads, "OpenMP thread count");

  RetrieveArgs retrieve_args;
  auto* retrieve_cmd =
      app.add_subcommand("retrieve", "Run iterative evidence retrieval over a dataset");
  add_data_options(retrieve_cmd, retrieve_args.data);
  add_air_flags(retrieve_cmd, retrieve_args.air, true);
  retrieve_cmd->add_option("--out", retrieve_args.out, "Trace output path ('-' = stdout)");
  retrieve_cmd->add_flag("--pad-ranking", retrieve_args.pad_ranking,
                         "Pad merged evidence with pool leftovers up to 10 ids");
  retrieve_cmd->add_flag("--no-pad-ranking", retrieve_args.no_pad_ranking,
                         "Disable ranking padding (default for multirc)");

  EvaluateArgs evaluate_args;
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "Score retrieval traces against gold evidence");
  add_data_options(evaluate_cmd, evaluate_args.data);
  evaluate_cmd->add_option("--traces", evaluate_args.traces, "Trace file from 'retrieve'")
      ->required();
  evaluate_cmd->add_option("--metric", evaluate_args.metric, "Metric family")
      ->check(CLI::IsMember({"prf", "recall10"}));
  evaluate_cmd->add_option("--out", evaluate_args.out, "Write the JSON report here");
  evaluate_cmd->add_flag("--json", evaluate_args.json_to_stdout,
                         "Print the JSON report instead of the table");

  ExperimentArgs experiment_args;
  auto* experiment_cmd =
      app.add_subcommand("experiment", "Run a predefined experiment grid, write CSV");
  add_data_options(experiment_cmd, experiment_args.data);
  add_air_flags(experiment_cmd, experiment_args.air, false);
  experiment_cmd
      ->add_option("--name", experiment_args.name, "Experiment name")
      ->required()
      ->check(CLI::IsMember({"drift", "sensitivity-m", "sensitivity-t"}));
  experiment_cmd->add_option("--out-dir", experiment_args.out_dir, "CSV output directory")
      ->required();
  experiment_cmd->add_option("--hops", experiment_args.hops,
                             "Hop budget for the drift grid (default 5)");
  experiment_cmd->add_option("--grid", experiment_args.grid,
                             "Override the sensitivity parameter grid")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // CLI11 counts flags during parse; record whether --T was given explicitly.
  retrieve_args.air.t_given = retrieve_cmd->count("--T") > 0;
  experiment_args.air.t_given = experiment_cmd->count("--T") > 0;

  try {
    if (index_cmd->parsed()) {
      cmd_index(index_args);
    } else if (retrieve_cmd->parsed()) {
      cmd_retrieve(retrieve_args);
    } else if (evaluate_cmd->parsed()) {
      cmd_evaluate(evaluate_args);
    } else if (experiment_cmd->parsed()) {
      cmd_experiment(experiment_args);
    }
  } catch (const air::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
