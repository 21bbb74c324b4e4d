#include "advids/detect/bank.hpp"

#include "advids/rng.hpp"
#include "advids/util.hpp"

namespace advids::detect {

const char* transfer_mode_name(TransferMode m) {
  switch (m) {
    case TransferMode::FeatureExtraction: return "fe";
    case TransferMode::FineTuning: return "ft";
    case TransferMode::DuplicateFineTuning: return "dft";
  }
  return "?";
}

TransferMode transfer_mode_from_name(const std::string& name) {
  if (name == "fe") return TransferMode::FeatureExtraction;
  if (name == "ft") return TransferMode::FineTuning;
  if (name == "dft") return TransferMode::DuplicateFineTuning;
  throw ConfigError("unknown transfer mode: " + name);
}

namespace {

constexpr int kHeadWidth = 256;

// prefix handling per mode: FE shares and freezes, FT shares and keeps
// trainable, DFT deep-copies
net::LayerPtr take_prefix_layer(const net::LayerPtr& src, TransferMode mode) {
  switch (mode) {
    case TransferMode::FeatureExtraction:
      src->trainable = false;
      return src;
    case TransferMode::FineTuning:
      src->trainable = true;
      return src;
    case TransferMode::DuplicateFineTuning: {
      auto copy = std::make_shared<net::DenseLayer>(*src);
      copy->trainable = true;
      return copy;
    }
  }
  throw ConfigError("unhandled transfer mode");
}

net::Network detector_net(int input_dim, const std::vector<net::LayerPtr>& prefix,
                          TransferMode mode, std::uint64_t seed) {
  std::vector<net::LayerPtr> layers;
  layers.reserve(prefix.size() + 3);
  for (const auto& l : prefix) layers.push_back(take_prefix_layer(l, mode));
  const int joint = prefix.empty() ? input_dim : prefix.back()->fan_out();
  layers.push_back(net::make_dense(joint, kHeadWidth, net::Activation::Relu,
                                   Rng::mix(seed, 1)));
  layers.push_back(net::make_dense(kHeadWidth, kHeadWidth, net::Activation::Relu,
                                   Rng::mix(seed, 2)));
  layers.push_back(net::make_dense(kHeadWidth, 1, net::Activation::Sigmoid,
                                   Rng::mix(seed, 3)));
  return net::Network(input_dim, std::move(layers));
}

}  // namespace

DetectorBank build_serial_bank(const ids::SerialIds& ids, TransferMode mode,
                               std::uint64_t head_seed) {
  if (!ids.trained) throw ConfigError("build_serial_bank: IDS is not trained");
  DetectorBank bank;
  bank.mode = mode;
  bank.source_fingerprint = ids.net.fingerprint();
  const auto hidden = ids.net.layer_count() - 1;  // exclude the softmax head
  for (std::size_t n = 1; n <= hidden; ++n) {
    std::vector<net::LayerPtr> prefix;
    for (std::size_t i = 0; i < n; ++i) prefix.push_back(ids.net.layer_ptr(i));
    AdversarialDetector det;
    det.net = detector_net(ids.net.input_dim(), prefix, mode, Rng::mix(head_seed, n));
    det.placement = {Design::Serial, static_cast<int>(n)};
    det.prefix_layers = static_cast<int>(n);
    bank.detectors.push_back(std::move(det));
  }
  return bank;
}

DetectorBank build_parallel_bank(const ids::ParallelIds& ids, TransferMode mode,
                                 std::uint64_t head_seed) {
  if (!ids.trained) throw ConfigError("build_parallel_bank: IDS is not trained");
  DetectorBank bank;
  bank.mode = mode;
  Fnv1a fp;
  for (const auto& m : ids.members) {
    const auto h = m.fingerprint();
    fp.update(&h, sizeof(h));
  }
  const auto oh = ids.output_net.fingerprint();
  fp.update(&oh, sizeof(oh));
  bank.source_fingerprint = fp.digest();
  for (std::size_t k = 0; k < ids.members.size(); ++k) {
    const net::Network& member = ids.members[k];
    std::vector<net::LayerPtr> prefix;
    const auto hidden = member.layer_count() - 1;  // all hidden ReLU layers
    for (std::size_t i = 0; i < hidden; ++i) prefix.push_back(member.layer_ptr(i));
    AdversarialDetector det;
    det.net = detector_net(member.input_dim(), prefix, mode, Rng::mix(head_seed, 0x50 + k));
    det.placement = {Design::Parallel, static_cast<int>(k)};
    det.prefix_layers = static_cast<int>(hidden);
    bank.detectors.push_back(std::move(det));
    bank.slices.push_back(ids.clusters.clusters[k]);
  }
  return bank;
}

std::vector<net::TrainHistory> train_bank(DetectorBank& bank,
                                          const data::AdvDataset& train,
                                          const data::AdvDataset& eval,
                                          net::TrainConfig cfg, unsigned workers) {
  if (cfg.loss != net::Loss::BinaryCrossEntropy) {
    throw ConfigError("train_bank: loss must be binary cross-entropy");
  }
  if (workers == 0) workers = default_workers();
  // shared prefixes make concurrent FT training a data race
  if (bank.mode == TransferMode::FineTuning) workers = 1;
  std::vector<net::TrainHistory> hist(bank.size());
  run_parallel(bank.size(), workers, [&](std::size_t k) {
    Mat xtr, xev;
    if (bank.slices.empty()) {
      xtr = train.X;
      xev = eval.X;
    } else {
      xtr = ids::slice_columns(train.X, bank.slices[k]);
      xev = ids::slice_columns(eval.X, bank.slices[k]);
    }
    net::TrainConfig dc = cfg;
    dc.seed = Rng::mix(cfg.seed, 0x600 + k);
    hist[k] = net::train(bank.detectors[k].net, xtr, train.y_adv, xev, eval.y_adv, dc);
  });
  return hist;
}

Mat detect(const DetectorBank& bank, const Mat& X) {
  Mat out(X.rows(), static_cast<Eigen::Index>(bank.size()));
  if (X.rows() == 0) return out;
  for (std::size_t k = 0; k < bank.size(); ++k) {
    const Mat input = bank.slices.empty() ? X : ids::slice_columns(X, bank.slices[k]);
    out.col(static_cast<Eigen::Index>(k)) = bank.detectors[k].net.output(input);
  }
  return out;
}

}  // namespace advids::detect
