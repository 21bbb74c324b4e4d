#include "advids/net/network.hpp"

#include <cmath>

#include "advids/rng.hpp"

namespace advids::net {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Softmax: return "softmax";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Linear: return "linear";
  }
  return "?";
}

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::Relu;
  if (name == "softmax") return Activation::Softmax;
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "linear") return Activation::Linear;
  throw ConfigError("unknown activation: " + name);
}

namespace {

Mat apply_activation(Activation act, Mat z) {
  switch (act) {
    case Activation::Relu:
      return z.cwiseMax(0.0);
    case Activation::Linear:
      return z;
    case Activation::Sigmoid:
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double v = z.data()[i];
        if (v >= 0.0) {
          z.data()[i] = 1.0 / (1.0 + std::exp(-v));
        } else {
          const double e = std::exp(v);
          z.data()[i] = e / (1.0 + e);
        }
      }
      return z;
    case Activation::Softmax:
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        const double m = z.row(r).maxCoeff();
        z.row(r) = (z.row(r).array() - m).exp();
        z.row(r) /= z.row(r).sum();
      }
      return z;
  }
  throw ConfigError("unhandled activation");
}

}  // namespace

Network::Network(int input_dim, std::vector<LayerPtr> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
  check_wiring();
}

void Network::check_wiring() const {
  if (layers_.empty()) throw ConfigError("network needs at least one layer");
  if (input_dim_ <= 0) throw ConfigError("network input dimension must be positive");
  int prev = input_dim_;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& l = *layers_[i];
    if (l.fan_in() != prev) {
      throw ConfigError("layer " + std::to_string(i) + " expects fan_in " +
                        std::to_string(prev) + ", got " + std::to_string(l.fan_in()));
    }
    if (l.b.size() != l.fan_out()) {
      throw ConfigError("layer " + std::to_string(i) + " bias size mismatch");
    }
    const bool head = (i + 1 == layers_.size());
    if (!head && (l.act == Activation::Softmax || l.act == Activation::Sigmoid)) {
      throw ConfigError("softmax/sigmoid may only appear as the final layer");
    }
    prev = l.fan_out();
  }
}

int Network::output_dim() const { return layers_.back()->fan_out(); }

Trace Network::trace(const Mat& X) const {
  if (X.cols() != input_dim_) {
    throw ShapeError("forward: batch has width " + std::to_string(X.cols()) +
                     ", network expects " + std::to_string(input_dim_));
  }
  Trace tr;
  tr.acts.reserve(layers_.size());
  const Mat* prev = &X;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& l = *layers_[i];
    Mat z = (*prev * l.W).rowwise() + l.b.transpose();
    if (i + 1 == layers_.size()) tr.last_preact = z;
    tr.acts.push_back(apply_activation(l.act, std::move(z)));
    prev = &tr.acts.back();
  }
  return tr;
}

std::vector<Mat> Network::forward(const Mat& X) const { return trace(X).acts; }

Mat Network::output(const Mat& X) const { return trace(X).acts.back(); }

Mat Network::logits(const Mat& X) const { return trace(X).last_preact; }

Network Network::clone() const {
  std::vector<LayerPtr> copies;
  copies.reserve(layers_.size());
  for (const auto& l : layers_) copies.push_back(std::make_shared<DenseLayer>(*l));
  return Network(input_dim_, std::move(copies));
}

std::uint64_t Network::fingerprint() const {
  Fnv1a h;
  for (const auto& l : layers_) {
    h.update(l->W.data(), sizeof(double) * static_cast<std::size_t>(l->W.size()));
    h.update(l->b.data(), sizeof(double) * static_cast<std::size_t>(l->b.size()));
  }
  return h.digest();
}

LayerPtr make_dense(int fan_in, int fan_out, Activation act, std::uint64_t seed) {
  if (fan_in <= 0 || fan_out <= 0) throw ConfigError("layer dimensions must be positive");
  auto l = std::make_shared<DenseLayer>();
  l->W.resize(fan_in, fan_out);
  l->b = Vec::Zero(fan_out);
  l->act = act;
  Rng rng(seed);
  const double limit = std::sqrt(6.0 / fan_in);
  for (int i = 0; i < fan_in; ++i) {
    for (int j = 0; j < fan_out; ++j) l->W(i, j) = rng.uniform(-limit, limit);
  }
  return l;
}

Network init_network(const std::vector<int>& layer_dims,
                     const std::vector<Activation>& activations,
                     std::uint64_t seed) {
  if (layer_dims.size() < 2) {
    throw ConfigError("init_network: need at least input and output dims");
  }
  if (activations.size() != layer_dims.size() - 1) {
    throw ConfigError("init_network: got " + std::to_string(activations.size()) +
                      " activations for " + std::to_string(layer_dims.size() - 1) +
                      " layers");
  }
  std::vector<LayerPtr> layers;
  layers.reserve(activations.size());
  for (std::size_t i = 0; i + 1 < layer_dims.size(); ++i) {
    layers.push_back(make_dense(layer_dims[i], layer_dims[i + 1], activations[i],
                                Rng::mix(seed, i)));
  }
  return Network(layer_dims.front(), std::move(layers));
}

}  // namespace advids::net
