#include "subpair/grid.hpp"

#include <atomic>
#include <cstdio>
#include <ostream>
#include <thread>

#include "subpair/errors.hpp"

namespace subpair {

std::vector<GridCell> table2_grid(const ModelConfig& base, double lm_gamma) {
  std::vector<GridCell> cells;
  auto push = [&](const std::string& name, InputMode input, int n, double gamma,
                  bool pretrain) {
    GridCell cell;
    cell.name = name;
    cell.model = base;
    cell.model.input = input;
    cell.model.subword_n = n;
    cell.model.gamma = gamma;
    cell.pretrain = pretrain;
    cells.push_back(std::move(cell));
  };
  push("word-pretrained-fixed", InputMode::kWordPretrainedFixed, base.subword_n,
       0.0, true);
  push("word-pretrained-updated", InputMode::kWordPretrainedUpdated,
       base.subword_n, 0.0, true);
  push("word-random-fixed", InputMode::kWordRandomFixed, base.subword_n, 0.0,
       false);
  push("word-random-updated", InputMode::kWordRandomUpdated, base.subword_n,
       0.0, false);
  static const char* kGramName[] = {"unigram", "bigram", "trigram"};
  for (int n = 1; n <= 3; ++n) {
    push(std::string("c2w-") + kGramName[n - 1], InputMode::kSubwordC2w, n, 0.0,
         false);
  }
  for (int n = 1; n <= 3; ++n) {
    push(std::string("cnn-") + kGramName[n - 1], InputMode::kSubwordCnn, n, 0.0,
         false);
  }
  for (int n = 1; n <= 3; ++n) {
    push(std::string("lm-c2w-") + kGramName[n - 1], InputMode::kSubwordC2w, n,
         lm_gamma, false);
  }
  for (int n = 1; n <= 3; ++n) {
    push(std::string("lm-cnn-") + kGramName[n - 1], InputMode::kSubwordCnn, n,
         lm_gamma, false);
  }
  return cells;
}

std::vector<GridCellResult> run_grid(
    const std::vector<SentencePairRecord>& train_set,
    const std::vector<SentencePairRecord>& dev_set,
    const std::vector<SentencePairRecord>& test_set, const TrainConfig& base,
    const std::vector<GridCell>& cells, int workers,
    std::optional<PretrainedEmbeddings> pretrained) {
  std::vector<GridCellResult> results(cells.size());
  std::atomic<std::size_t> next{0};

  auto run_cell = [&](std::size_t ci) {
    const GridCell& cell = cells[ci];
    GridCellResult& out = results[ci];
    out.name = cell.name;
    out.pretrain = cell.pretrain;
    try {
      TrainConfig config = base;
      config.model = cell.model;
      if (cell.pretrain && !pretrained) {
        throw ConfigError("cell requires pretrained embeddings");
      }
      std::optional<PretrainedEmbeddings> pre;
      if (cell.model.uses_pretrained() ||
          cell.model.input == InputMode::kCombined) {
        pre = pretrained;  // copy: cells run concurrently
      }
      TrainResult trained = train(train_set, dev_set, config, std::move(pre));
      out.parameters = trained.model.store().trainable_count();
      out.dev_f1 = trained.best_dev_f1;
      out.test_f1_last = evaluate_model(trained.model, test_set).max_f1;
      const PwiModel best = load_checkpoint_bytes(trained.best_checkpoint);
      out.test_f1_best = evaluate_model(best, test_set).max_f1;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  };

  workers = std::max(1, workers);
  if (workers == 1) {
    for (std::size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t ci = next.fetch_add(1);
          if (ci >= cells.size()) break;
          run_cell(ci);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return results;
}

void write_grid_tsv(std::ostream& os,
                    const std::vector<GridCellResult>& results) {
  os << "model\tpretrain\tparameters\tdev_f1\ttest_f1_best\ttest_f1_last\terror\n";
  char buf[128];
  for (const GridCellResult& r : results) {
    os << r.name << '\t' << (r.pretrain ? "yes" : "--") << '\t' << r.parameters
       << '\t';
    std::snprintf(buf, sizeof(buf), "%.6g\t%.6g\t%.6g\t", r.dev_f1,
                  r.test_f1_best, r.test_f1_last);
    os << buf << r.error << '\n';
  }
}

}  // namespace subpair
