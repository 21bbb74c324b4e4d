#include "advids/ids/ids.hpp"

#include <iostream>

#include "advids/rng.hpp"
#include "advids/util.hpp"

namespace advids::ids {

Metrics metrics_from_labels(const Vec& y_true, const Vec& y_pred) {
  if (y_true.size() != y_pred.size()) throw ShapeError("metrics: label size mismatch");
  if (y_true.size() == 0) throw DataError("metrics: empty input");
  long tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < y_true.size(); ++i) {
    const bool t = y_true[i] > 0.5;
    const bool p = y_pred[i] > 0.5;
    if (p && t) ++tp;
    if (p && !t) ++fp;
    if (!p && t) ++fn;
  }
  Metrics m;
  if (tp + fp == 0) {
    std::cerr << "[advids] warning: precision 0/0, reporting 0\n";
    m.precision = 0.0;
  } else {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  if (tp + fn == 0) {
    std::cerr << "[advids] warning: recall 0/0, reporting 0\n";
    m.recall = 0.0;
  } else {
    m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

namespace {

constexpr int kHidden = 256;

net::Network classifier_net(int input_dim, std::uint64_t seed) {
  using net::Activation;
  return net::init_network({input_dim, kHidden, kHidden, kHidden, 2},
                           {Activation::Relu, Activation::Relu, Activation::Relu,
                            Activation::Softmax},
                           seed);
}

}  // namespace

SerialIds make_serial(int input_dim, std::uint64_t seed) {
  return SerialIds{classifier_net(input_dim, seed), false};
}

net::TrainHistory train_serial(SerialIds& ids, const data::LabeledDataset& train,
                               const data::LabeledDataset& eval, net::TrainConfig cfg) {
  if (cfg.loss != net::Loss::CategoricalCrossEntropy) {
    throw ConfigError("train_serial: loss must be categorical cross-entropy");
  }
  auto hist = net::train(ids.net, train.X, train.y, eval.X, eval.y, cfg);
  ids.trained = true;
  return hist;
}

ParallelIds make_parallel(const cluster::FeatureClusters& clusters, std::uint64_t seed) {
  if (clusters.clusters.empty()) throw ConfigError("make_parallel: no clusters");
  ParallelIds ids;
  ids.clusters = clusters;
  for (std::size_t k = 0; k < clusters.clusters.size(); ++k) {
    ids.members.push_back(classifier_net(static_cast<int>(clusters.clusters[k].size()),
                                         Rng::mix(seed, 0x100 + k)));
  }
  ids.output_net = classifier_net(static_cast<int>(clusters.clusters.size()) * 2,
                                  Rng::mix(seed, 0x200));
  return ids;
}

Mat slice_columns(const Mat& X, const std::vector<int>& cols) {
  Mat out(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] < 0 || cols[j] >= X.cols()) {
      throw ConfigError("slice_columns: column index out of range");
    }
    out.col(static_cast<Eigen::Index>(j)) = X.col(cols[j]);
  }
  return out;
}

Mat member_meta_features(const ParallelIds& ids, const Mat& X) {
  Mat meta(X.rows(), ids.meta_width());
  for (std::size_t k = 0; k < ids.members.size(); ++k) {
    const Mat slice = slice_columns(X, ids.clusters.clusters[k]);
    meta.middleCols(static_cast<Eigen::Index>(2 * k), 2) = ids.members[k].output(slice);
  }
  return meta;
}

ParallelTrainHistory train_parallel(ParallelIds& ids, const data::LabeledDataset& train,
                                    const data::LabeledDataset& eval,
                                    net::TrainConfig cfg, unsigned workers) {
  if (cfg.loss != net::Loss::CategoricalCrossEntropy) {
    throw ConfigError("train_parallel: loss must be categorical cross-entropy");
  }
  const auto& clusters = ids.clusters.clusters;
  for (const auto& c : clusters) {
    for (int col : c) {
      if (col < 0 || col >= train.X.cols()) {
        throw ConfigError("train_parallel: cluster column out of range");
      }
    }
  }
  if (workers == 0) workers = default_workers();
  ParallelTrainHistory hist;
  hist.members.resize(ids.members.size());
  run_parallel(ids.members.size(), workers, [&](std::size_t k) {
    const Mat xtr = slice_columns(train.X, clusters[k]);
    const Mat xev = slice_columns(eval.X, clusters[k]);
    net::TrainConfig mc = cfg;
    mc.seed = Rng::mix(cfg.seed, 0x300 + k);
    hist.members[k] = net::train(ids.members[k], xtr, train.y, xev, eval.y, mc);
  });
  // meta-dataset from the trained members' predictions
  const Mat meta_train = member_meta_features(ids, train.X);
  const Mat meta_eval = member_meta_features(ids, eval.X);
  net::TrainConfig oc = cfg;
  oc.seed = Rng::mix(cfg.seed, 0x400);
  hist.output = net::train(ids.output_net, meta_train, train.y, meta_eval, eval.y, oc);
  ids.trained = true;
  return hist;
}

Mat classify_proba(const SerialIds& ids, const Mat& X) {
  if (X.rows() == 0) return Mat(0, 2);
  return ids.net.output(X);
}

Mat classify_proba(const ParallelIds& ids, const Mat& X) {
  if (X.rows() == 0) return Mat(0, 2);
  return ids.output_net.output(member_meta_features(ids, X));
}

Vec hard_labels(const Mat& proba) {
  Vec labels(proba.rows());
  for (Eigen::Index r = 0; r < proba.rows(); ++r) {
    Eigen::Index arg;
    proba.row(r).maxCoeff(&arg);
    labels[r] = static_cast<double>(arg);
  }
  return labels;
}

Metrics evaluate(const SerialIds& ids, const data::LabeledDataset& ds) {
  if (ds.rows() == 0) throw DataError("evaluate: empty dataset");
  return metrics_from_labels(ds.y, hard_labels(classify_proba(ids, ds.X)));
}

Metrics evaluate(const ParallelIds& ids, const data::LabeledDataset& ds) {
  if (ds.rows() == 0) throw DataError("evaluate: empty dataset");
  return metrics_from_labels(ds.y, hard_labels(classify_proba(ids, ds.X)));
}

}  // namespace advids::ids
