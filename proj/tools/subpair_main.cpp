// Command-line front end: train / eval / grid / analyze over a plain-text
// run config. Every artifact lands under --out-dir next to a manifest.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subpair/analysis.hpp"
#include "subpair/checkpoint.hpp"
#include "subpair/errors.hpp"
#include "subpair/grid.hpp"
#include "subpair/runconfig.hpp"
#include "subpair/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace subpair;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = "subpair_out";
  std::optional<std::uint64_t> seed;
  int workers = 1;
  bool explain = false;
};

RunConfig load_config(const GlobalArgs& args, bool required) {
  if (args.config_path.empty()) {
    if (required) throw ConfigError("this command needs --config <file>");
    return RunConfig::defaults();
  }
  RunConfig config = RunConfig::parse_file(args.config_path);
  if (args.seed) {
    config.set("model", "seed", std::to_string(*args.seed));
    config.set("train", "seed", std::to_string(*args.seed));
  }
  return config;
}

class OutputDir {
 public:
  OutputDir(const std::string& path, const std::string& command)
      : dir_(path) {
    fs::create_directories(dir_);
    manifest_["command"] = command;
    manifest_["outputs"] = json::array();
  }

  std::string file(const std::string& name) {
    manifest_["outputs"].push_back(name);
    return (dir_ / name).string();
  }

  void note(const std::string& key, const json& value) { manifest_[key] = value; }

  void finish() {
    std::ofstream os(dir_ / "manifest.json");
    os << manifest_.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  json manifest_;
};

std::vector<SentencePairRecord> load_split(const std::string& path,
                                           const LoadOptions& options,
                                           const char* what) {
  if (path.empty()) {
    throw ConfigError(std::string("no ") + what + " path configured");
  }
  LoadReport report;
  auto records = load_pairs(path, options, &report);
  std::cerr << what << ": " << report.loaded << " pairs from " << path;
  if (report.malformed) std::cerr << ", " << report.malformed << " malformed";
  if (report.filtered) std::cerr << ", " << report.filtered << " filtered";
  std::cerr << "\n";
  return records;
}

std::optional<PretrainedEmbeddings> maybe_pretrained(const RunConfig& config,
                                                     const TrainConfig& train) {
  const std::string path = config.pretrained_path();
  if (path.empty()) return std::nullopt;
  Rng rng(train.model.seed ^ 0x70726574ULL);  // independent init stream
  return load_pretrained(path, rng);
}

int cmd_train(const GlobalArgs& args) {
  const RunConfig config = load_config(args, true);
  const TrainConfig train_config = config.train_config();
  const LoadOptions load_options = config.load_options();

  const auto train_set = load_split(config.train_path(), load_options, "train");
  std::vector<SentencePairRecord> dev_set;
  if (!config.dev_path().empty()) {
    dev_set = load_split(config.dev_path(), load_options, "dev");
  }
  auto pretrained = maybe_pretrained(config, train_config);

  const TrainResult result =
      train(train_set, dev_set, train_config, std::move(pretrained));

  OutputDir out(args.out_dir, "train");
  out.note("config", args.config_path);
  out.note("model_seed", train_config.model.seed);
  out.note("train_seed", train_config.seed);
  {
    std::ofstream os(out.file("metrics.jsonl"));
    write_metrics_jsonl(os, result.history);
  }
  save_checkpoint(result.model, out.file("checkpoint_final.bin"));
  {
    std::ofstream os(out.file("checkpoint_best.bin"), std::ios::binary);
    os.write(reinterpret_cast<const char*>(result.best_checkpoint.data()),
             static_cast<std::streamsize>(result.best_checkpoint.size()));
  }
  {
    std::ofstream os(out.file("word_vocab.tsv"));
    result.model.lexicon().words.write_tsv(os);
  }
  if (train_config.model.uses_subwords()) {
    std::ofstream os(out.file("subword_vocab.tsv"));
    result.model.lexicon().subwords.write_tsv(os);
  }
  if (train_config.model.gamma > 0) {
    std::ofstream os(out.file("lm_vocab.tsv"));
    result.model.lexicon().lm_words.write_tsv(os);
  }
  out.note("best_epoch", result.best_epoch);
  out.note("best_dev_f1", result.best_dev_f1);
  out.finish();
  std::cerr << "best epoch " << result.best_epoch << " (dev F1 "
            << result.best_dev_f1 << "), outputs in " << args.out_dir << "\n";
  return 0;
}

int cmd_eval(const GlobalArgs& args, const std::string& checkpoint_path,
             const std::string& test_path, const std::string& format) {
  PwiModel model = load_checkpoint(RunConfig::resolve_path(checkpoint_path));
  LoadOptions options;
  options.format = pair_format_from_string(format);
  options.lowercase = model.config().lowercase;
  const auto test_set =
      load_split(RunConfig::resolve_path(test_path), options, "test");

  const EvalReport report = evaluate_model(model, test_set);
  OutputDir out(args.out_dir, "eval");
  out.note("checkpoint", checkpoint_path);
  {
    std::ofstream os(out.file("report.tsv"));
    write_report_tsv(os, report);
  }
  {
    std::ofstream os(out.file("pr_curve.tsv"));
    write_pr_tsv(os, report.curve);
  }
  {
    json j;
    j["max_f1"] = report.max_f1;
    j["threshold"] = report.threshold;
    j["accuracy_at_0.5"] = report.accuracy;
    j["parameters"] = report.parameter_count;
    std::ofstream os(out.file("report.json"));
    os << j.dump(2) << '\n';
  }
  out.finish();
  write_report_tsv(std::cout, report);
  return 0;
}

int cmd_grid(const GlobalArgs& args) {
  const RunConfig config = load_config(args, true);
  const TrainConfig base = config.train_config();
  const LoadOptions load_options = config.load_options();
  const auto train_set = load_split(config.train_path(), load_options, "train");
  const auto test_set = load_split(config.test_path(), load_options, "test");
  std::vector<SentencePairRecord> dev_set;
  if (!config.dev_path().empty()) {
    dev_set = load_split(config.dev_path(), load_options, "dev");
  }
  auto pretrained = maybe_pretrained(config, base);

  const double lm_gamma = base.model.gamma > 0 ? base.model.gamma : 0.1;
  const auto cells = table2_grid(base.model, lm_gamma);
  const auto results = run_grid(train_set, dev_set, test_set, base, cells,
                                args.workers, std::move(pretrained));

  OutputDir out(args.out_dir, "grid");
  out.note("config", args.config_path);
  out.note("workers", args.workers);
  {
    std::ofstream os(out.file("grid.tsv"));
    write_grid_tsv(os, results);
  }
  out.finish();
  write_grid_tsv(std::cout, results);
  for (const auto& cell : results) {
    if (!cell.error.empty()) {
      std::cerr << "cell " << cell.name << " failed: " << cell.error << "\n";
    }
  }
  return 0;
}

int cmd_analyze_overlap(const GlobalArgs& args, const std::string& data_path,
                        const std::string& format, bool no_spaces_flag) {
  bool include_spaces = true;
  if (!args.config_path.empty()) {
    const RunConfig config = load_config(args, false);
    include_spaces = config.get("analysis", "include_spaces") != "false";
  }
  if (no_spaces_flag) include_spaces = false;
  LoadOptions options;
  options.format = pair_format_from_string(format);
  const auto records =
      load_split(RunConfig::resolve_path(data_path), options, "data");

  OutputDir out(args.out_dir, "analyze-overlap");
  std::ofstream os(out.file("overlap.tsv"));
  auto emit = [&](std::ostream& stream) {
    stream << "unit\tfilter\tpairs\tmean_shorter\tmean_longer\tmean_union\t"
              "mean_intersection\tratio\n";
    for (OverlapUnit unit : {OverlapUnit::kChar1, OverlapUnit::kChar2,
                             OverlapUnit::kWord1, OverlapUnit::kWord2}) {
      for (PairFilter filter : {PairFilter::kAll, PairFilter::kParaphraseOnly}) {
        OverlapStats stats;
        try {
          stats = overlap_stats(records, unit, filter, include_spaces);
        } catch (const std::invalid_argument&) {
          continue;  // filter selected zero pairs
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s\t%s\t%zu\t%.4f\t%.4f\t%.4f\t%.4f\t%.6f\n",
                      to_string(unit).c_str(),
                      filter == PairFilter::kAll ? "all" : "paraphrase",
                      stats.pairs, stats.mean_shorter, stats.mean_longer,
                      stats.mean_union, stats.mean_intersection, stats.ratio);
        stream << buf;
      }
    }
  };
  emit(os);
  emit(std::cout);
  out.finish();
  return 0;
}

int cmd_analyze_oov(const GlobalArgs& args, const std::string& data_path,
                    const std::string& pretrained_path,
                    const std::string& format) {
  LoadOptions options;
  options.format = pair_format_from_string(format);
  const auto records =
      load_split(RunConfig::resolve_path(data_path), options, "data");
  Rng rng(1);
  const PretrainedEmbeddings pre =
      load_pretrained(RunConfig::resolve_path(pretrained_path), rng);
  const OovStats stats = oov_stats(records, pre.vocab);

  OutputDir out(args.out_dir, "analyze-oov");
  auto emit = [&](std::ostream& stream) {
    stream << "inv\toov\tratio\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu\t%zu\t%.6f\n", stats.inv, stats.oov,
                  stats.ratio);
    stream << buf;
  };
  std::ofstream os(out.file("oov.tsv"));
  emit(os);
  emit(std::cout);
  out.finish();
  return 0;
}

int cmd_analyze_neighbors(const GlobalArgs& args,
                          const std::string& checkpoint_path,
                          const std::vector<std::string>& queries, int k,
                          bool dump) {
  PwiModel model = load_checkpoint(RunConfig::resolve_path(checkpoint_path));
  OutputDir out(args.out_dir, "analyze-neighbors");
  std::ofstream os(out.file("neighbors.tsv"));
  auto emit = [&](std::ostream& stream) {
    stream << "query\trank\tword\tcosine\n";
    for (const std::string& query : queries) {
      const auto neighbors = nearest_neighbors(query, model, k);
      for (std::size_t r = 0; r < neighbors.size(); ++r) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s\t%zu\t%s\t%.6f\n", query.c_str(),
                      r + 1, neighbors[r].word.c_str(), neighbors[r].cosine);
        stream << buf;
      }
    }
  };
  emit(os);
  emit(std::cout);
  if (dump) {
    const Vocab& words = model.lexicon().words;
    std::vector<std::vector<double>> vectors;
    vectors.reserve(static_cast<std::size_t>(words.size()));
    for (int id = 0; id < words.size(); ++id) {
      vectors.push_back(model.word_vector(words.token(id)));
    }
    std::ofstream dump_os(out.file("embeddings.txt"));
    write_embedding_text(dump_os, words, vectors);
  }
  out.finish();
  return 0;
}

int cmd_analyze_baseline(const GlobalArgs& args, const std::string& train_path,
                         const std::string& test_path,
                         const std::string& format) {
  LoadOptions options;
  options.format = pair_format_from_string(format);
  const auto train_set =
      load_split(RunConfig::resolve_path(train_path), options, "train");
  const auto test_set =
      load_split(RunConfig::resolve_path(test_path), options, "test");
  const EvalReport report = ngram_lr_baseline(train_set, test_set);

  OutputDir out(args.out_dir, "analyze-baseline");
  {
    std::ofstream os(out.file("baseline_report.tsv"));
    write_report_tsv(os, report);
  }
  {
    std::ofstream os(out.file("baseline_pr.tsv"));
    write_pr_tsv(os, report.curve);
  }
  out.finish();
  write_report_tsv(std::cout, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subword-augmented pairwise word interaction models for "
               "sentence-pair classification"};
  app.name("subpair");

  GlobalArgs args;
  app.add_option("--config", args.config_path,
                 "Run settings file (key = value under [sections])");
  app.add_option("--seed", args.seed, "Override the model and training seeds");
  app.add_option("--out-dir", args.out_dir, "Directory for output artifacts")
      ->capture_default_str();
  app.add_option("--workers", args.workers, "Worker threads for grid cells")
      ->capture_default_str();
  app.add_flag("--explain", args.explain,
               "Print every setting (defaults marked) and exit");

  CLI::App* train_cmd =
      app.add_subcommand("train", "Train a model and write checkpoints");
  train_cmd->fallthrough();

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Score a checkpoint on a test split");
  eval_cmd->fallthrough();
  std::string eval_checkpoint, eval_test, eval_format = "canonical";
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "Model checkpoint file")
      ->required();
  eval_cmd->add_option("--test", eval_test, "Test split path")->required();
  eval_cmd->add_option("--format", eval_format,
                       "Data format: canonical, pit or url")
      ->capture_default_str();

  CLI::App* grid_cmd = app.add_subcommand(
      "grid", "Run the 16-cell model-variation grid and tabulate F1");
  grid_cmd->fallthrough();

  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Corpus statistics and baselines");
  analyze_cmd->fallthrough();
  analyze_cmd->require_subcommand(1);

  CLI::App* overlap_cmd = analyze_cmd->add_subcommand(
      "overlap", "Character/word multiset overlap per pair filter");
  overlap_cmd->fallthrough();
  std::string overlap_data, overlap_format = "canonical";
  bool overlap_no_spaces = false;
  overlap_cmd->add_option("--data", overlap_data, "Dataset path")->required();
  overlap_cmd->add_option("--format", overlap_format, "Data format")
      ->capture_default_str();
  overlap_cmd->add_flag("--no-spaces", overlap_no_spaces,
                        "Exclude spaces from character units");

  CLI::App* oov_cmd = analyze_cmd->add_subcommand(
      "oov", "In/out-of-vocabulary type counts against an embedding file");
  oov_cmd->fallthrough();
  std::string oov_data, oov_pretrained, oov_format = "canonical";
  oov_cmd->add_option("--data", oov_data, "Dataset path")->required();
  oov_cmd->add_option("--pretrained", oov_pretrained, "Embedding text file")
      ->required();
  oov_cmd->add_option("--format", oov_format, "Data format")
      ->capture_default_str();

  CLI::App* neighbors_cmd = analyze_cmd->add_subcommand(
      "neighbors", "Nearest vocabulary words under cosine similarity");
  neighbors_cmd->fallthrough();
  std::string nb_checkpoint;
  std::vector<std::string> nb_queries;
  int nb_k = 5;
  bool nb_dump = false;
  neighbors_cmd->add_option("--checkpoint", nb_checkpoint, "Model checkpoint")
      ->required();
  neighbors_cmd->add_option("--query", nb_queries, "Query word (repeatable)")
      ->required();
  neighbors_cmd->add_option("-k,--k", nb_k, "Neighbors per query")
      ->capture_default_str();
  neighbors_cmd->add_flag("--dump", nb_dump,
                          "Also dump all word vectors as text");

  CLI::App* baseline_cmd = analyze_cmd->add_subcommand(
      "baseline", "Logistic regression over n-gram overlap features");
  baseline_cmd->fallthrough();
  std::string bl_train, bl_test, bl_format = "canonical";
  baseline_cmd->add_option("--train", bl_train, "Training split")->required();
  baseline_cmd->add_option("--test", bl_test, "Test split")->required();
  baseline_cmd->add_option("--format", bl_format, "Data format")
      ->capture_default_str();

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (args.explain) {
      load_config(args, false).explain(std::cout);
      return 0;
    }
    if (train_cmd->parsed()) return cmd_train(args);
    if (eval_cmd->parsed())
      return cmd_eval(args, eval_checkpoint, eval_test, eval_format);
    if (grid_cmd->parsed()) return cmd_grid(args);
    if (analyze_cmd->parsed()) {
      if (overlap_cmd->parsed())
        return cmd_analyze_overlap(args, overlap_data, overlap_format,
                                   overlap_no_spaces);
      if (oov_cmd->parsed())
        return cmd_analyze_oov(args, oov_data, oov_pretrained, oov_format);
      if (neighbors_cmd->parsed())
        return cmd_analyze_neighbors(args, nb_checkpoint, nb_queries, nb_k,
                                     nb_dump);
      if (baseline_cmd->parsed())
        return cmd_analyze_baseline(args, bl_train, bl_test, bl_format);
    }
    std::cout << app.help();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
