#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "advids/types.hpp"

namespace advids::net {

enum class Activation : std::uint8_t { Relu = 0, Softmax = 1, Sigmoid = 2, Linear = 3 };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// One dense transform: y = act(x * W + b), W is fan_in x fan_out.
// Layers are held by shared_ptr so transfer-learning modes can alias the
// same parameters from several networks; `trainable` gates updates.
struct DenseLayer {
  Mat W;
  Vec b;
  Activation act = Activation::Linear;
  bool trainable = true;

  int fan_in() const { return static_cast<int>(W.rows()); }
  int fan_out() const { return static_cast<int>(W.cols()); }
};

using LayerPtr = std::shared_ptr<DenseLayer>;

// forward-pass record: post-activation per layer plus the last layer's
// pre-activation (logits), which attack gradients are seeded from
struct Trace {
  std::vector<Mat> acts;
  Mat last_preact;
  const Mat& output() const { return acts.back(); }
};

class Network {
 public:
  Network() = default;
  Network(int input_dim, std::vector<LayerPtr> layers);

  int input_dim() const { return input_dim_; }
  int output_dim() const;
  std::size_t layer_count() const { return layers_.size(); }

  DenseLayer& layer(std::size_t i) { return *layers_[i]; }
  const DenseLayer& layer(std::size_t i) const { return *layers_[i]; }
  const LayerPtr& layer_ptr(std::size_t i) const { return layers_[i]; }

  // X: rows are samples. Returns post-activations for every layer.
  std::vector<Mat> forward(const Mat& X) const;
  Trace trace(const Mat& X) const;
  Mat output(const Mat& X) const;  // last activation only
  Mat logits(const Mat& X) const;  // last pre-activation

  Network clone() const;  // deep copy of all layers

  std::uint64_t fingerprint() const;  // FNV-1a over all parameter bytes

 private:
  void check_wiring() const;

  int input_dim_ = 0;
  std::vector<LayerPtr> layers_;
};

// Seeded He-style initialization: weights uniform in (-L, L) with
// L = sqrt(6 / fan_in), biases zero. Layer i draws from an xoshiro256++
// stream seeded with mix(seed, i), so equal seeds give bit-identical
// parameters regardless of platform.
Network init_network(const std::vector<int>& layer_dims,
                     const std::vector<Activation>& activations,
                     std::uint64_t seed);

LayerPtr make_dense(int fan_in, int fan_out, Activation act, std::uint64_t seed);

}  // namespace advids::net
