#include <benchmark/benchmark.h>

#include "subpair/analysis.hpp"
#include "subpair/evaluation.hpp"
#include "subpair/model.hpp"
#include "subpair/subword.hpp"
#include "subpair/train.hpp"

using namespace subpair;

namespace {

std::vector<SentencePairRecord> bench_corpus() {
  std::vector<SentencePairRecord> records;
  const char* sentences[] = {
      "the quick brown fox jumps over the lazy dog",
      "a quick brown fox jumped over a sleepy dog",
      "markets rallied after the announcement on friday",
      "stocks climbed when the statement landed friday",
  };
  records.push_back({tokenize(sentences[0], false), tokenize(sentences[1], false), 1, "b0"});
  records.push_back({tokenize(sentences[2], false), tokenize(sentences[3], false), 1, "b1"});
  records.push_back({tokenize(sentences[0], false), tokenize(sentences[3], false), 0, "b2"});
  records.push_back({tokenize(sentences[2], false), tokenize(sentences[1], false), 0, "b3"});
  return records;
}

ModelConfig bench_config(InputMode input, Aggregation agg) {
  ModelConfig config;
  config.input = input;
  config.aggregation = agg;
  config.word_dim = 50;
  config.hidden = 50;
  config.subword_dim = 16;
  config.char_hidden = 32;
  config.cnn_depth = 4;
  config.cnn_channels = 16;
  config.seed = 1;
  return config;
}

void BM_ForwardPair(benchmark::State& state) {
  const auto corpus = bench_corpus();
  const ModelConfig config = bench_config(
      state.range(0) == 0 ? InputMode::kWordRandomUpdated : InputMode::kSubwordCnn,
      state.range(1) == 0 ? Aggregation::kMlp : Aggregation::kDeepCnn);
  const PwiModel model = PwiModel::build(config, build_lexicon(corpus, config));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        model.paraphrase_probability(corpus[i++ % corpus.size()]));
  }
}
BENCHMARK(BM_ForwardPair)
    ->ArgsProduct({{0, 1}, {0, 1}})
    ->ArgNames({"subword", "deep_cnn"});

void BM_TrainStep(benchmark::State& state) {
  const auto corpus = bench_corpus();
  ModelConfig config = bench_config(InputMode::kSubwordCnn, Aggregation::kMlp);
  config.gamma = 0.1;
  PwiModel model = PwiModel::build(config, build_lexicon(corpus, config));
  Optimizer optimizer({OptimizerConfig::Kind::kAdam, 1e-3});
  std::size_t i = 0;
  for (auto _ : state) {
    const SentencePairRecord& rec = corpus[i++ % corpus.size()];
    model.store().zero_grads();
    backward(model.pair_loss(rec));
    optimizer.step(model.store());
  }
}
BENCHMARK(BM_TrainStep);

void BM_Interact(benchmark::State& state) {
  const int len = static_cast<int>(state.range(0));
  ParameterStore store;
  Rng rng(3);
  const EncoderParams encoder = EncoderParams::create(store, "enc", 50, 50, rng);
  std::vector<Tensor> vecs;
  for (int i = 0; i < len; ++i)
    vecs.push_back(Tensor::uniform({50}, -1, 1, rng, false));
  const EncodedSentence enc = encode(vecs, encoder);
  for (auto _ : state) {
    benchmark::DoNotOptimize(interact(enc, enc));
  }
}
BENCHMARK(BM_Interact)->Arg(8)->Arg(16)->Arg(32);

void BM_ExtractSubwords(benchmark::State& state) {
  const SubwordScheme scheme =
      SubwordScheme::for_ngram(static_cast<int>(state.range(0)));
  const std::string word = "characteristically";
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_subwords(word, scheme));
  }
}
BENCHMARK(BM_ExtractSubwords)->Arg(1)->Arg(2)->Arg(3);

void BM_MaxF1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int i = 0; i < n; ++i) {
    scores.push_back(rng.uniform(0, 1));
    labels.push_back(rng.uniform_int(0, 1));
  }
  labels[0] = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_f1(scores, labels));
  }
}
BENCHMARK(BM_MaxF1)->Arg(1000)->Arg(10000);

void BM_OverlapStats(benchmark::State& state) {
  const auto corpus = bench_corpus();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        overlap_stats(corpus, OverlapUnit::kChar2, PairFilter::kAll));
  }
}
BENCHMARK(BM_OverlapStats);

}  // namespace

BENCHMARK_MAIN();
