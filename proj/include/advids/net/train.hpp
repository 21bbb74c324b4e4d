#pragma once

#include "advids/net/gradients.hpp"

namespace advids::net {

enum class Optimizer : std::uint8_t { Sgd = 0, Adam = 1 };

struct TrainConfig {
  int epochs = 50;
  int eval_interval = 10;  // evaluate every this many epochs
  int batch_size = 128;
  double learning_rate = 1e-3;
  Optimizer optimizer = Optimizer::Adam;
  std::uint64_t seed = 0;
  Loss loss = Loss::CategoricalCrossEntropy;
};

struct EvalRecord {
  int epoch;
  double metric;  // F1 for cross-entropy heads, detection rate for sigmoid heads
  double eval_loss;
};

struct TrainHistory {
  std::vector<EvalRecord> evals;
  int best_epoch = 0;
  double best_metric = 0.0;
};

// Mini-batch training with best-checkpoint selection: the model is evaluated
// on (Xe, ye) every eval_interval epochs and the parameters of the
// best-scoring evaluation are restored at the end. The checkpoint metric is
// F1 on class 1 for CategoricalCrossEntropy and detection rate (recall on
// label 1) for BinaryCrossEntropy. Layers with trainable == false are never
// touched. Deterministic for equal (seed, data, config).
TrainHistory train(Network& net, const Mat& X, const Vec& y, const Mat& Xe,
                   const Vec& ye, const TrainConfig& cfg);

}  // namespace advids::net
