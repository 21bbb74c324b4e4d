#pragma once

#include "advids/net/network.hpp"

namespace advids::net {

enum class Loss : std::uint8_t {
  CategoricalCrossEntropy = 0,
  BinaryCrossEntropy = 1,
  SquaredError = 2,
};

const char* loss_name(Loss l);

struct ParamGrads {
  std::vector<Mat> dW;
  std::vector<Vec> db;
};

struct BackpropOut {
  ParamGrads params;
  Mat dX;
};

// Backpropagate from a gradient seeded at the last layer's pre-activation.
// delta_last is rows x out_dim, one row per sample, unscaled (callers decide
// about batch averaging). Hidden layers must be Relu or Linear.
BackpropOut backward(const Network& net, const Mat& X, const Trace& tr,
                     const Mat& delta_last, bool want_params, bool want_input);

// dLoss/d(last pre-activation), one row per sample. For
// CategoricalCrossEntropy targets are class indices; for BinaryCrossEntropy
// targets are 0/1; for SquaredError targets are real values.
Mat loss_delta(const Network& net, const Trace& tr, const Vec& targets, Loss loss);

// mean loss over the batch
double loss_value(const Network& net, const Trace& tr, const Vec& targets, Loss loss);

// gradient of the per-sample loss with respect to the input
Vec grad_input(const Network& net, const Vec& x, double target, Loss loss);
Mat grad_input_batch(const Network& net, const Mat& X, const Vec& targets, Loss loss);

// gradient of sum_j seed(r,j) * logit_j(x_r) w.r.t. each input row; used by
// attacks that differentiate logit combinations directly (decision-boundary
// and margin objectives bypass the softmax)
Mat grad_logits_batch(const Network& net, const Mat& X, const Mat& seed);

}  // namespace advids::net
