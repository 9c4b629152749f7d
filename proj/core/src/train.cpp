#include "subpair/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "subpair/errors.hpp"
#include "subpair/grad_check.hpp"

namespace subpair {

namespace {

// Seeded holdout. Keeps at least one positive pair in the dev part when
// the corpus has any, so the F1 sweep stays defined.
void split_holdout(const std::vector<SentencePairRecord>& all, double fraction,
                   Rng rng, std::vector<SentencePairRecord>* train_out,
                   std::vector<SentencePairRecord>* dev_out) {
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng.engine());
  std::size_t dev_n = static_cast<std::size_t>(
      std::lround(fraction * static_cast<double>(all.size())));
  dev_n = std::max<std::size_t>(1, std::min(dev_n, all.size() - 1));

  std::vector<std::size_t> dev_idx(order.begin(),
                                   order.begin() + static_cast<std::ptrdiff_t>(dev_n));
  std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(dev_n),
                                     order.end());
  auto has_pos = [&](const std::vector<std::size_t>& idx) {
    return std::any_of(idx.begin(), idx.end(),
                       [&](std::size_t i) { return all[i].label == 1; });
  };
  if (!has_pos(dev_idx) && has_pos(train_idx)) {
    for (std::size_t& ti : train_idx) {
      if (all[ti].label == 1) {
        std::swap(ti, dev_idx.front());
        break;
      }
    }
  }
  for (std::size_t i : train_idx) train_out->push_back(all[i]);
  for (std::size_t i : dev_idx) dev_out->push_back(all[i]);
}

}  // namespace

void score_records(const PwiModel& model,
                   const std::vector<SentencePairRecord>& records,
                   std::vector<double>* scores, std::vector<int>* labels) {
  scores->clear();
  labels->clear();
  scores->reserve(records.size());
  labels->reserve(records.size());
  for (const SentencePairRecord& rec : records) {
    scores->push_back(model.paraphrase_probability(rec));
    labels->push_back(rec.label);
  }
}

EvalReport evaluate_model(const PwiModel& model,
                          const std::vector<SentencePairRecord>& records) {
  std::vector<double> scores;
  std::vector<int> labels;
  score_records(model, records, &scores, &labels);
  return evaluate_scores(scores, labels, model.store().trainable_count());
}

TrainResult train(const std::vector<SentencePairRecord>& train_set,
                  const std::vector<SentencePairRecord>& dev_set,
                  const TrainConfig& config,
                  std::optional<PretrainedEmbeddings> pretrained) {
  if (train_set.empty()) {
    throw DataError("train: empty training set");
  }
  if (config.epochs < 1) {
    throw ConfigError("train: epochs must be >= 1");
  }
  if (config.batch_size < 1) {
    throw ConfigError("train: batch_size must be >= 1");
  }

  Rng run_rng(config.seed);
  std::vector<SentencePairRecord> fit;
  std::vector<SentencePairRecord> dev;
  if (dev_set.empty() && config.dev_fraction > 0.0 && train_set.size() > 1) {
    split_holdout(train_set, config.dev_fraction, run_rng.fork(1), &fit, &dev);
  } else {
    fit = train_set;
    dev = dev_set;
  }

  const Lexicon lexicon = build_lexicon(fit, config.model, std::move(pretrained));
  TrainResult result;
  result.model = PwiModel::build(config.model, lexicon);
  PwiModel& model = result.model;

  Optimizer optimizer(config.optimizer);
  Rng shuffle_rng = run_rng.fork(2);
  const bool dev_has_pos =
      std::any_of(dev.begin(), dev.end(),
                  [](const SentencePairRecord& r) { return r.label == 1; });

  std::vector<std::size_t> order(fit.size());
  std::iota(order.begin(), order.end(), 0);

  result.best_dev_f1 = -1.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
    double epoch_loss = 0.0;
    std::size_t correct = 0;
    std::size_t done = 0;
    while (done < order.size()) {
      const std::size_t batch_end =
          std::min(done + static_cast<std::size_t>(config.batch_size),
                   order.size());
      model.store().zero_grads();
      Tensor batch_loss;
      for (std::size_t bi = done; bi < batch_end; ++bi) {
        const SentencePairRecord& rec = fit[order[bi]];
        const PairForward fwd = model.forward_pair(rec);
        const Tensor loss = model.loss_from_forward(fwd, rec);
        const double prob = fwd.probabilities.values()[1];
        if ((prob >= 0.5 ? 1 : 0) == rec.label) ++correct;
        epoch_loss += loss.item();
        if (!std::isfinite(loss.item())) {
          throw TrainError("loss became non-finite at epoch " +
                           std::to_string(epoch) + ", pair " +
                           rec.source_id);
        }
        batch_loss = batch_loss.valid() ? add(batch_loss, loss) : loss;
      }
      backward(batch_loss);
      optimizer.step(model.store());
      done = batch_end;
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = epoch_loss / static_cast<double>(fit.size());
    record.train_accuracy =
        static_cast<double>(correct) / static_cast<double>(fit.size());
    if (!dev.empty() && dev_has_pos) {
      std::vector<double> scores;
      std::vector<int> labels;
      score_records(model, dev, &scores, &labels);
      const MaxF1 best = max_f1(scores, labels);
      record.dev_f1 = best.f1;
      record.dev_threshold = best.threshold;
    }
    if (record.dev_f1 > result.best_dev_f1) {
      result.best_dev_f1 = record.dev_f1;
      result.best_epoch = epoch;
      result.best_checkpoint = checkpoint_bytes(model);
      record.is_best = true;
    }
    result.history.push_back(record);
  }
  if (result.best_checkpoint.empty()) {
    result.best_checkpoint = checkpoint_bytes(model);
    result.best_epoch = config.epochs;
  }
  return result;
}

void write_metrics_jsonl(std::ostream& os,
                         const std::vector<EpochRecord>& history) {
  for (const EpochRecord& rec : history) {
    nlohmann::json j;
    j["epoch"] = rec.epoch;
    j["train_loss"] = rec.train_loss;
    j["train_accuracy"] = rec.train_accuracy;
    j["dev_f1"] = rec.dev_f1;
    j["dev_threshold"] = rec.dev_threshold;
    j["is_best"] = rec.is_best;
    os << j.dump() << '\n';
  }
}

}  // namespace subpair
