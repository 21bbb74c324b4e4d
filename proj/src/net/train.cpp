#include "advids/net/train.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "advids/rng.hpp"

namespace advids::net {

namespace {

struct Snapshot {
  std::vector<Mat> W;
  std::vector<Vec> b;
};

Snapshot take_snapshot(const Network& net) {
  Snapshot s;
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    s.W.push_back(net.layer(i).W);
    s.b.push_back(net.layer(i).b);
  }
  return s;
}

void restore_snapshot(Network& net, const Snapshot& s) {
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    net.layer(i).W = s.W[i];
    net.layer(i).b = s.b[i];
  }
}

// checkpoint metric over the eval split; class 1 is the positive class
double checkpoint_metric(const Network& net, const Mat& Xe, const Vec& ye, Loss loss,
                         double* eval_loss) {
  const Trace tr = net.trace(Xe);
  if (eval_loss != nullptr) *eval_loss = loss_value(net, tr, ye, loss);
  const Mat& out = tr.output();
  long tp = 0, fp = 0, fn = 0;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    int pred;
    if (loss == Loss::BinaryCrossEntropy) {
      pred = out(r, 0) >= 0.5 ? 1 : 0;
    } else {
      Eigen::Index arg;
      out.row(r).maxCoeff(&arg);
      pred = static_cast<int>(arg);
    }
    const int truth = ye[r] > 0.5 ? 1 : 0;
    if (pred == 1 && truth == 1) ++tp;
    if (pred == 1 && truth == 0) ++fp;
    if (pred == 0 && truth == 1) ++fn;
  }
  if (loss == Loss::BinaryCrossEntropy) {
    // detection rate = recall on the positive class
    return (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
  }
  const double prec = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
  const double rec = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
  return (prec + rec) == 0.0 ? 0.0 : 2.0 * prec * rec / (prec + rec);
}

struct AdamState {
  std::vector<Mat> mW, vW;
  std::vector<Vec> mb, vb;
  long t = 0;
};

}  // namespace

TrainHistory train(Network& net, const Mat& X, const Vec& y, const Mat& Xe,
                   const Vec& ye, const TrainConfig& cfg) {
  if (cfg.epochs <= 0) throw ConfigError("train: epochs must be positive");
  if (cfg.eval_interval <= 0) throw ConfigError("train: eval_interval must be positive");
  if (cfg.batch_size <= 0) throw ConfigError("train: batch_size must be positive");
  if (cfg.learning_rate <= 0.0) throw ConfigError("train: learning_rate must be positive");
  if (X.rows() == 0 || Xe.rows() == 0) throw DataError("train: empty dataset");
  if (X.cols() != net.input_dim() || Xe.cols() != net.input_dim()) {
    throw ShapeError("train: dataset width does not match network input");
  }
  if (y.size() != X.rows() || ye.size() != Xe.rows()) {
    throw DataError("train: label count does not match row count");
  }

  const auto L = net.layer_count();
  std::vector<char> update(L, 0);
  for (std::size_t i = 0; i < L; ++i) update[i] = net.layer(i).trainable ? 1 : 0;

  AdamState adam;
  if (cfg.optimizer == Optimizer::Adam) {
    adam.mW.resize(L);
    adam.vW.resize(L);
    adam.mb.resize(L);
    adam.vb.resize(L);
    for (std::size_t i = 0; i < L; ++i) {
      if (!update[i]) continue;
      const DenseLayer& l = net.layer(i);
      adam.mW[i] = Mat::Zero(l.W.rows(), l.W.cols());
      adam.vW[i] = Mat::Zero(l.W.rows(), l.W.cols());
      adam.mb[i] = Vec::Zero(l.b.size());
      adam.vb[i] = Vec::Zero(l.b.size());
    }
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

  const auto n = static_cast<std::size_t>(X.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainHistory hist;
  double best = -std::numeric_limits<double>::infinity();
  Snapshot best_snap;
  bool have_best = false;

  Mat bx;
  Vec by;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle_rng(Rng::mix(cfg.seed, 0x5u + static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t bsz = std::min<std::size_t>(cfg.batch_size, n - start);
      bx.resize(bsz, X.cols());
      by.resize(bsz);
      for (std::size_t r = 0; r < bsz; ++r) {
        bx.row(r) = X.row(order[start + r]);
        by[r] = y[order[start + r]];
      }
      const Trace tr = net.trace(bx);
      const double batch_loss = loss_value(net, tr, by, cfg.loss);
      if (!std::isfinite(batch_loss) || !tr.output().allFinite()) {
        throw NumericError("train: loss diverged (non-finite) at epoch " +
                           std::to_string(epoch));
      }
      Mat delta = loss_delta(net, tr, by, cfg.loss) / static_cast<double>(bsz);
      BackpropOut bp = backward(net, bx, tr, delta, true, false);
      if (cfg.optimizer == Optimizer::Adam) {
        adam.t += 1;
        const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam.t));
        const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam.t));
        for (std::size_t i = 0; i < L; ++i) {
          if (!update[i]) continue;
          DenseLayer& l = net.layer(i);
          adam.mW[i] = kBeta1 * adam.mW[i] + (1.0 - kBeta1) * bp.params.dW[i];
          adam.vW[i] = kBeta2 * adam.vW[i].array().matrix() +
                       (1.0 - kBeta2) * bp.params.dW[i].array().square().matrix();
          adam.mb[i] = kBeta1 * adam.mb[i] + (1.0 - kBeta1) * bp.params.db[i];
          adam.vb[i] = kBeta2 * adam.vb[i].array().matrix() +
                       (1.0 - kBeta2) * bp.params.db[i].array().square().matrix();
          l.W.array() -= cfg.learning_rate * (adam.mW[i].array() / bc1) /
                         ((adam.vW[i].array() / bc2).sqrt() + kEps);
          l.b.array() -= cfg.learning_rate * (adam.mb[i].array() / bc1) /
                         ((adam.vb[i].array() / bc2).sqrt() + kEps);
        }
      } else {
        for (std::size_t i = 0; i < L; ++i) {
          if (!update[i]) continue;
          DenseLayer& l = net.layer(i);
          l.W -= cfg.learning_rate * bp.params.dW[i];
          l.b -= cfg.learning_rate * bp.params.db[i];
        }
      }
    }
    if (epoch % cfg.eval_interval == 0) {
      double eval_loss = 0.0;
      const double metric = checkpoint_metric(net, Xe, ye, cfg.loss, &eval_loss);
      hist.evals.push_back({epoch, metric, eval_loss});
      if (metric > best) {
        best = metric;
        best_snap = take_snapshot(net);
        have_best = true;
        hist.best_epoch = epoch;
        hist.best_metric = metric;
      }
    }
  }
  if (have_best) restore_snapshot(net, best_snap);
  return hist;
}

}  // namespace advids::net
