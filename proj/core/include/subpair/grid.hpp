#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "subpair/train.hpp"

namespace subpair {

struct GridCell {
  std::string name;
  ModelConfig model;
  bool pretrain = false;  // mirror of the table's "pre-train?" column
};

// The 16-cell variation grid: word inputs {pretrained, random} x {fixed,
// updated}, both compositions x n-gram 1/2/3, and the same six subword
// rows again with the LM objective enabled.
std::vector<GridCell> table2_grid(const ModelConfig& base, double lm_gamma = 0.1);

struct GridCellResult {
  std::string name;
  bool pretrain = false;
  std::size_t parameters = 0;
  double dev_f1 = 0.0;       // best dev F1 during training
  double test_f1_best = 0.0; // test F1 of the best-dev checkpoint
  double test_f1_last = 0.0; // test F1 of the final epoch
  std::string error;         // non-empty when the cell failed
};

// Trains and evaluates one model per cell; failures are recorded in the
// cell result and do not stop the grid. Cells run on `workers` threads;
// the result order is the cell order regardless of scheduling.
std::vector<GridCellResult> run_grid(
    const std::vector<SentencePairRecord>& train_set,
    const std::vector<SentencePairRecord>& dev_set,
    const std::vector<SentencePairRecord>& test_set, const TrainConfig& base,
    const std::vector<GridCell>& cells, int workers = 1,
    std::optional<PretrainedEmbeddings> pretrained = {});

void write_grid_tsv(std::ostream& os, const std::vector<GridCellResult>& results);

}  // namespace subpair
