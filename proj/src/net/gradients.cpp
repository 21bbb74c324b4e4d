#include "advids/net/gradients.hpp"

#include <cmath>

namespace advids::net {

const char* loss_name(Loss l) {
  switch (l) {
    case Loss::CategoricalCrossEntropy: return "categorical_cross_entropy";
    case Loss::BinaryCrossEntropy: return "binary_cross_entropy";
    case Loss::SquaredError: return "squared_error";
  }
  return "?";
}

namespace {

constexpr double kProbFloor = 1e-12;

// derivative of a hidden activation, expressed through the post-activation
Mat act_deriv_from_post(Activation act, const Mat& a) {
  switch (act) {
    case Activation::Relu:
      return (a.array() > 0.0).cast<double>();
    case Activation::Linear:
      return Mat::Ones(a.rows(), a.cols());
    default:
      throw ConfigError("softmax/sigmoid only supported as the network head");
  }
}

}  // namespace

BackpropOut backward(const Network& net, const Mat& X, const Trace& tr,
                     const Mat& delta_last, bool want_params, bool want_input) {
  const auto L = net.layer_count();
  if (delta_last.rows() != X.rows() || delta_last.cols() != net.output_dim()) {
    throw ShapeError("backward: delta shape mismatch");
  }
  BackpropOut out;
  if (want_params) {
    out.params.dW.resize(L);
    out.params.db.resize(L);
  }
  Mat delta = delta_last;
  for (std::size_t i = L; i-- > 0;) {
    const DenseLayer& l = net.layer(i);
    const Mat& a_prev = (i == 0) ? X : tr.acts[i - 1];
    if (want_params) {
      out.params.dW[i].noalias() = a_prev.transpose() * delta;
      out.params.db[i] = delta.colwise().sum().transpose();
    }
    if (i == 0 && !want_input) break;
    Mat g;
    g.noalias() = delta * l.W.transpose();
    if (i == 0) {
      out.dX = std::move(g);
    } else {
      delta = g.cwiseProduct(act_deriv_from_post(net.layer(i - 1).act, tr.acts[i - 1]));
    }
  }
  return out;
}

Mat loss_delta(const Network& net, const Trace& tr, const Vec& targets, Loss loss) {
  const Mat& out = tr.output();
  const auto rows = out.rows();
  if (targets.size() != rows) throw ShapeError("loss_delta: target count mismatch");
  const Activation head = net.layer(net.layer_count() - 1).act;
  Mat delta;
  switch (loss) {
    case Loss::CategoricalCrossEntropy: {
      if (head != Activation::Softmax) {
        throw ConfigError("categorical cross-entropy requires a softmax head");
      }
      delta = out;
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double t = targets[r];
        const auto cls = static_cast<Eigen::Index>(t);
        if (cls < 0 || cls >= out.cols() || static_cast<double>(cls) != t) {
          throw ConfigError("cross-entropy target must be a class index");
        }
        delta(r, cls) -= 1.0;
      }
      return delta;
    }
    case Loss::BinaryCrossEntropy: {
      if (head != Activation::Sigmoid || out.cols() != 1) {
        throw ConfigError("binary cross-entropy requires a single sigmoid unit");
      }
      delta = out;
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double t = targets[r];
        if (t != 0.0 && t != 1.0) throw ConfigError("binary target must be 0 or 1");
        delta(r, 0) -= t;
      }
      return delta;
    }
    case Loss::SquaredError: {
      // L = sum_j (out_j - t)^2 with the target broadcast over outputs
      Mat dOut = out;
      for (Eigen::Index r = 0; r < rows; ++r) dOut.row(r).array() -= targets[r];
      dOut *= 2.0;
      switch (head) {
        case Activation::Linear:
          return dOut;
        case Activation::Sigmoid:
          return (dOut.array() * out.array() * (1.0 - out.array())).matrix();
        case Activation::Relu:
          return (dOut.array() * (out.array() > 0.0).cast<double>()).matrix();
        case Activation::Softmax:
          throw ConfigError("squared error on a softmax head is not supported");
      }
      throw ConfigError("unhandled head activation");
    }
  }
  throw ConfigError("unhandled loss");
}

double loss_value(const Network& net, const Trace& tr, const Vec& targets, Loss loss) {
  (void)net;
  const Mat& out = tr.output();
  const auto rows = out.rows();
  if (targets.size() != rows) throw ShapeError("loss_value: target count mismatch");
  if (rows == 0) return 0.0;
  double total = 0.0;
  switch (loss) {
    case Loss::CategoricalCrossEntropy:
      for (Eigen::Index r = 0; r < rows; ++r) {
        const auto cls = static_cast<Eigen::Index>(targets[r]);
        total += -std::log(std::max(out(r, cls), kProbFloor));
      }
      break;
    case Loss::BinaryCrossEntropy:
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double p = std::min(std::max(out(r, 0), kProbFloor), 1.0 - kProbFloor);
        total += targets[r] > 0.5 ? -std::log(p) : -std::log(1.0 - p);
      }
      break;
    case Loss::SquaredError:
      for (Eigen::Index r = 0; r < rows; ++r) {
        total += (out.row(r).array() - targets[r]).square().sum();
      }
      break;
  }
  return total / static_cast<double>(rows);
}

Mat grad_input_batch(const Network& net, const Mat& X, const Vec& targets, Loss loss) {
  const Trace tr = net.trace(X);
  const Mat delta = loss_delta(net, tr, targets, loss);
  return backward(net, X, tr, delta, false, true).dX;
}

Vec grad_input(const Network& net, const Vec& x, double target, Loss loss) {
  Mat X = x.transpose();
  Vec t(1);
  t[0] = target;
  return grad_input_batch(net, X, t, loss).row(0).transpose();
}

Mat grad_logits_batch(const Network& net, const Mat& X, const Mat& seed) {
  const Trace tr = net.trace(X);
  if (seed.rows() != X.rows() || seed.cols() != net.output_dim()) {
    throw ShapeError("grad_logits_batch: seed shape mismatch");
  }
  return backward(net, X, tr, seed, false, true).dX;
}

}  // namespace advids::net
