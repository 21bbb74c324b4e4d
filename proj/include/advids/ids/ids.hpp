#pragma once

#include "advids/cluster/clustering.hpp"
#include "advids/data/dataset.hpp"
#include "advids/net/train.hpp"

namespace advids::ids {

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// precision/recall/F1 on the positive (malicious) class; 0/0 counts as 0
// with a warning on stderr
Metrics metrics_from_labels(const Vec& y_true, const Vec& y_pred);

// input -> 3 ReLU(256) -> softmax(2)
struct SerialIds {
  net::Network net;
  bool trained = false;
};

SerialIds make_serial(int input_dim, std::uint64_t seed);

net::TrainHistory train_serial(SerialIds& ids, const data::LabeledDataset& train,
                               const data::LabeledDataset& eval,
                               net::TrainConfig cfg);

// ensemble member per feature cluster plus an output network consuming the
// concatenated member class probabilities (2 per member)
struct ParallelIds {
  cluster::FeatureClusters clusters;
  std::vector<net::Network> members;
  net::Network output_net;
  bool trained = false;

  int meta_width() const { return static_cast<int>(members.size()) * 2; }
};

ParallelIds make_parallel(const cluster::FeatureClusters& clusters, std::uint64_t seed);

struct ParallelTrainHistory {
  std::vector<net::TrainHistory> members;
  net::TrainHistory output;
};

// Members train independently on their column slices (concurrently), the
// meta-dataset is built from their best-checkpoint predictions on the
// training split, and the output network trains on it with the same config.
ParallelTrainHistory train_parallel(ParallelIds& ids, const data::LabeledDataset& train,
                                    const data::LabeledDataset& eval,
                                    net::TrainConfig cfg, unsigned workers = 0);

Mat slice_columns(const Mat& X, const std::vector<int>& cols);

// member class probabilities side by side: column block k is member k's
// softmax output on its slice
Mat member_meta_features(const ParallelIds& ids, const Mat& X);

Mat classify_proba(const SerialIds& ids, const Mat& X);
Mat classify_proba(const ParallelIds& ids, const Mat& X);
Vec hard_labels(const Mat& proba);

Metrics evaluate(const SerialIds& ids, const data::LabeledDataset& ds);
Metrics evaluate(const ParallelIds& ids, const data::LabeledDataset& ds);

}  // namespace advids::ids
