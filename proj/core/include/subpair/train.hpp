#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "subpair/checkpoint.hpp"
#include "subpair/evaluation.hpp"
#include "subpair/model.hpp"
#include "subpair/optimizer.hpp"

namespace subpair {

struct TrainConfig {
  int epochs = 20;
  OptimizerConfig optimizer;
  int batch_size = 1;
  std::uint64_t seed = 1;
  // Fraction of the training set held out for epoch selection when no dev
  // split is given. The holdout keeps at least one positive pair.
  double dev_fraction = 0.1;
  ModelConfig model;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double dev_f1 = 0.0;
  double dev_threshold = 0.0;
  bool is_best = false;
};

struct TrainResult {
  PwiModel model;  // final-epoch parameters
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_dev_f1 = 0.0;
  std::vector<std::uint8_t> best_checkpoint;  // serialized best-epoch model
};

// Deterministic given config.seed and config.model.seed. Throws TrainError
// when the loss becomes non-finite, DataError on an empty training set.
TrainResult train(const std::vector<SentencePairRecord>& train_set,
                  const std::vector<SentencePairRecord>& dev_set,
                  const TrainConfig& config,
                  std::optional<PretrainedEmbeddings> pretrained = {});

// Paraphrase-probability scores plus labels for a split.
void score_records(const PwiModel& model,
                   const std::vector<SentencePairRecord>& records,
                   std::vector<double>* scores, std::vector<int>* labels);

EvalReport evaluate_model(const PwiModel& model,
                          const std::vector<SentencePairRecord>& records);

// One JSON object per epoch, newline-delimited. Contains no wall-clock
// data, so identically seeded runs emit identical bytes.
void write_metrics_jsonl(std::ostream& os, const std::vector<EpochRecord>& history);

}  // namespace subpair
