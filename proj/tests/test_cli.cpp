// End-to-end checks against the built binary. CMake passes its location
// via SUBPAIR_BIN; runs use throwaway directories under /tmp.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary_path() {
  const char* bin = std::getenv("SUBPAIR_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "SUBPAIR_BIN must point at the subpair binary");
  return bin;
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run(const std::string& args) {
  const std::string out_file =
      (fs::temp_directory_path() / "subpair_cli_out.txt").string();
  const std::string cmd =
      binary_path() + " " + args + " > " + out_file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Workspace {
  fs::path dir;

  Workspace() {
    dir = fs::temp_directory_path() /
          ("subpair_ws_" + std::to_string(std::rand()));
    fs::create_directories(dir);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  void write_corpus(const std::string& name) const {
    subpair::testing::write_canonical_tsv(path(name),
                                          subpair::testing::synthetic_corpus());
  }

  void write_config(const std::string& name, const std::string& extra) const {
    std::ofstream os(dir / name);
    os << "[data]\n"
       << "train = " << path("train.tsv") << "\n"
       << "[model]\n"
       << "word_dim = 10\nhidden = 8\nsubword_dim = 5\nchar_hidden = 6\n"
       << "[train]\nepochs = 2\n"
       << extra;
  }
};

}  // namespace

TEST_CASE("--help matches the golden file and lists every flag") {
  const char* golden_path = std::getenv("SUBPAIR_HELP_GOLDEN");
  REQUIRE(golden_path != nullptr);
  const RunResult result = run("--help");
  CHECK(result.exit_code == 0);
  CHECK(result.output == slurp(golden_path));
  for (const char* flag :
       {"--config", "--seed", "--out-dir", "--workers", "--explain", "train",
        "eval", "grid", "analyze"}) {
    INFO(flag);
    CHECK(result.output.find(flag) != std::string::npos);
  }
}

TEST_CASE("missing config file exits 2 and names the path") {
  const RunResult result = run("train --config /no/such/file.conf");
  CHECK(result.exit_code == 2);
}

TEST_CASE("unknown config keys exit 2") {
  Workspace ws;
  ws.write_corpus("train.tsv");
  {
    std::ofstream os(ws.dir / "bad.conf");
    os << "[model]\nnot_a_key = 1\n";
  }
  const RunResult result = run("train --config " + ws.path("bad.conf"));
  CHECK(result.exit_code == 2);
}

TEST_CASE("missing data file exits 3") {
  Workspace ws;
  {
    std::ofstream os(ws.dir / "run.conf");
    os << "[data]\ntrain = " << ws.path("absent.tsv") << "\n";
  }
  const RunResult result = run("train --config " + ws.path("run.conf"));
  CHECK(result.exit_code == 3);
}

TEST_CASE("missing checkpoint exits 2") {
  Workspace ws;
  ws.write_corpus("train.tsv");
  const RunResult result = run("eval --checkpoint " + ws.path("none.bin") +
                               " --test " + ws.path("train.tsv"));
  CHECK(result.exit_code == 2);
}

TEST_CASE("--explain prints every default") {
  const RunResult result = run("--explain");
  CHECK(result.exit_code == 0);
  for (const char* key : {"[data]", "[model]", "[train]", "[analysis]",
                          "subword_n", "aggregation", "alpha", "gamma",
                          "dev_fraction", "include_spaces"}) {
    INFO(key);
    CHECK(result.output.find(key) != std::string::npos);
  }
  CHECK(result.output.find("(default)") != std::string::npos);
}

TEST_CASE("train produces checkpoints, metrics, vocab dumps and a manifest") {
  Workspace ws;
  ws.write_corpus("train.tsv");
  ws.write_config("run.conf", "");
  const RunResult result = run("train --config " + ws.path("run.conf") +
                               " --out-dir " + ws.path("out"));
  REQUIRE(result.exit_code == 0);
  for (const char* name :
       {"checkpoint_final.bin", "checkpoint_best.bin", "metrics.jsonl",
        "word_vocab.tsv", "subword_vocab.tsv", "manifest.json"}) {
    INFO(name);
    CHECK(fs::exists(ws.dir / "out" / name));
  }
  const std::string manifest = slurp(ws.dir / "out" / "manifest.json");
  CHECK(manifest.find("checkpoint_final.bin") != std::string::npos);
  CHECK(manifest.find("\"command\": \"train\"") != std::string::npos);
}

TEST_CASE("identically seeded runs write byte-identical artifacts") {
  Workspace ws;
  ws.write_corpus("train.tsv");
  ws.write_config("run.conf", "");
  REQUIRE(run("train --config " + ws.path("run.conf") + " --seed 11 --out-dir " +
              ws.path("a"))
              .exit_code == 0);
  REQUIRE(run("train --config " + ws.path("run.conf") + " --seed 11 --out-dir " +
              ws.path("b"))
              .exit_code == 0);
  for (const char* name :
       {"metrics.jsonl", "checkpoint_final.bin", "checkpoint_best.bin"}) {
    INFO(name);
    CHECK(slurp(ws.dir / "a" / name) == slurp(ws.dir / "b" / name));
  }
  // A different seed changes the metrics.
  REQUIRE(run("train --config " + ws.path("run.conf") + " --seed 12 --out-dir " +
              ws.path("c"))
              .exit_code == 0);
  CHECK(slurp(ws.dir / "a" / "metrics.jsonl") !=
        slurp(ws.dir / "c" / "metrics.jsonl"));
}

TEST_CASE("eval round-trips the checkpoint and reports the parameter count") {
  Workspace ws;
  ws.write_corpus("train.tsv");
  ws.write_config("run.conf", "");
  REQUIRE(run("train --config " + ws.path("run.conf") + " --out-dir " +
              ws.path("out"))
              .exit_code == 0);
  const RunResult eval1 =
      run("eval --checkpoint " + ws.path("out/checkpoint_best.bin") +
          " --test " + ws.path("train.tsv") + " --out-dir " + ws.path("e1"));
  REQUIRE(eval1.exit_code == 0);
  const RunResult eval2 =
      run("eval --checkpoint " + ws.path("out/checkpoint_best.bin") +
          " --test " + ws.path("train.tsv") + " --out-dir " + ws.path("e2"));
  CHECK(eval1.output == eval2.output);  // checkpoint round trip preserves F1
  CHECK(fs::exists(ws.dir / "e1" / "report.tsv"));
  CHECK(fs::exists(ws.dir / "e1" / "pr_curve.tsv"));

  // parameter count in the eval report equals the trained model's
  const std::string report = slurp(ws.dir / "e1" / "report.json");
  CHECK(report.find("\"parameters\"") != std::string::npos);
  const std::string metrics = slurp(ws.dir / "out" / "manifest.json");
  CHECK(!metrics.empty());
}

TEST_CASE("analyze overlap reproduces hand numbers on a 2-pair fixture") {
  Workspace ws;
  {
    std::ofstream os(ws.dir / "tiny.tsv");
    os << "1\ta b\ta c\n";
    os << "0\tx y\tx y\n";
  }
  const RunResult result = run("analyze overlap --data " + ws.path("tiny.tsv") +
                               " --out-dir " + ws.path("ov"));
  REQUIRE(result.exit_code == 0);
  // word-1, all pairs: pair 1 has 1/3, pair 2 has 2/2 ->
  // mean_intersection = 1.5, mean_union = 2.5, ratio = 0.6
  CHECK(result.output.find("word-1\tall\t2\t2.0000\t2.0000\t2.5000\t1.5000\t0.600000") !=
        std::string::npos);
}

TEST_CASE("analyze neighbors finds the query's own spelling first") {
  Workspace ws;
  ws.write_corpus("train.tsv");
  ws.write_config("run.conf", "");
  REQUIRE(run("train --config " + ws.path("run.conf") + " --out-dir " +
              ws.path("out"))
              .exit_code == 0);
  const RunResult result =
      run("analyze neighbors --checkpoint " + ws.path("out/checkpoint_final.bin") +
          " --query sister -k 4 --dump --out-dir " + ws.path("nb"));
  REQUIRE(result.exit_code == 0);
  CHECK(result.output.find("sister\t1\t") != std::string::npos);
  CHECK(fs::exists(ws.dir / "nb" / "neighbors.tsv"));
  CHECK(fs::exists(ws.dir / "nb" / "embeddings.txt"));
}

TEST_CASE("analyze baseline reaches F1 1.0 on separable data") {
  Workspace ws;
  ws.write_corpus("train.tsv");
  const RunResult result =
      run("analyze baseline --train " + ws.path("train.tsv") + " --test " +
          ws.path("train.tsv") + " --out-dir " + ws.path("bl"));
  REQUIRE(result.exit_code == 0);
  CHECK(result.output.find("max_f1\t1\n") != std::string::npos);
  CHECK(fs::exists(ws.dir / "bl" / "baseline_report.tsv"));
}

TEST_CASE("grid writes a table with one row per cell") {
  Workspace ws;
  ws.write_corpus("train.tsv");
  {
    std::ofstream os(ws.dir / "run.conf");
    os << "[data]\ntrain = " << ws.path("train.tsv") << "\ntest = "
       << ws.path("train.tsv") << "\n"
       << "[model]\nword_dim = 6\nhidden = 5\nsubword_dim = 3\nchar_hidden = 4\n"
       << "[train]\nepochs = 1\n";
  }
  const RunResult result = run("grid --config " + ws.path("run.conf") +
                               " --workers 4 --out-dir " + ws.path("g"));
  REQUIRE(result.exit_code == 0);
  const std::string table = slurp(ws.dir / "g" / "grid.tsv");
  for (const char* row :
       {"word-pretrained-fixed", "word-random-updated", "c2w-unigram",
        "cnn-trigram", "lm-c2w-bigram", "lm-cnn-trigram"}) {
    INFO(row);
    CHECK(table.find(row) != std::string::npos);
  }
  // The two pretrained cells fail cleanly (no embedding file configured).
  CHECK(table.find("cell requires pretrained embeddings") != std::string::npos);
}
