#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "advids/detect/bank.hpp"
#include "advids/rng.hpp"

using namespace advids;
using detect::TransferMode;

namespace {

ids::SerialIds tiny_serial(Rng& rng) {
  // small stand-in with the serial layout (3 hidden + softmax head)
  auto ids = ids::SerialIds{net::init_network({6, 8, 8, 8, 2},
                                              {net::Activation::Relu, net::Activation::Relu,
                                               net::Activation::Relu, net::Activation::Softmax},
                                              rng.next()),
                            true};
  return ids;
}

ids::ParallelIds tiny_parallel(Rng& rng) {
  cluster::FeatureClusters fc;
  fc.clusters = {{0, 1, 2}, {3, 4, 5}};
  fc.method = cluster::Method::Distribution;
  fc.k_max = 2;
  auto p = ids::make_parallel(fc, rng.next());
  p.trained = true;
  return p;
}

data::AdvDataset toy_adv(Rng& rng, int rows, int width, double shift) {
  data::AdvDataset ds;
  ds.X.resize(rows, width);
  ds.y_adv.resize(rows);
  ds.provenance.resize(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    const bool adv = r % 2 == 0;
    for (int c = 0; c < width; ++c) {
      ds.X(r, c) = 0.5 + 0.15 * rng.normal() + (adv ? shift : 0.0);
    }
    ds.y_adv[r] = adv ? 1.0 : 0.0;
    ds.provenance[static_cast<std::size_t>(r)] =
        adv ? data::Provenance::Fgsm : data::Provenance::None;
  }
  return ds;
}

std::vector<Mat> snapshot(const net::Network& n) {
  std::vector<Mat> out;
  for (std::size_t l = 0; l < n.layer_count(); ++l) out.push_back(n.layer(l).W);
  return out;
}

}  // namespace

TEST_CASE("bank construction: sizes, shapes, mode flags, fingerprint gate") {
  Rng rng(12);
  auto serial = tiny_serial(rng);
  const auto bank = detect::build_serial_bank(serial, TransferMode::DuplicateFineTuning, 7);
  CHECK(bank.size() == 3);  // one per hidden layer
  for (std::size_t n = 0; n < 3; ++n) {
    const auto& det = bank.detectors[n];
    CHECK(det.prefix_layers == static_cast<int>(n) + 1);
    // prefix + 2 ReLU(256) + sigmoid unit
    CHECK(det.net.layer_count() == n + 1 + 3);
    CHECK(det.net.output_dim() == 1);
    CHECK(det.net.layer(det.net.layer_count() - 1).act == net::Activation::Sigmoid);
  }

  auto par = tiny_parallel(rng);
  const auto pbank = detect::build_parallel_bank(par, TransferMode::DuplicateFineTuning, 7);
  CHECK(pbank.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(pbank.detectors[k].net.input_dim() == 3);  // cluster width
    CHECK(pbank.slices[k] == par.clusters.clusters[k]);
  }

  ids::SerialIds untrained{serial.net, false};
  CHECK_THROWS_AS(detect::build_serial_bank(untrained, TransferMode::FeatureExtraction, 1),
                  ConfigError);
}

TEST_CASE("transfer modes: DFT and FE never touch the IDS, FT aliases it") {
  Rng rng(23);
  net::TrainConfig cfg;
  cfg.epochs = 6;
  cfg.eval_interval = 3;
  cfg.batch_size = 32;
  cfg.seed = 5;
  cfg.loss = net::Loss::BinaryCrossEntropy;

  const auto train = toy_adv(rng, 240, 6, 0.25);
  const auto eval = toy_adv(rng, 120, 6, 0.25);

  // DFT: IDS parameters bit-identical after detector training
  {
    auto serial = tiny_serial(rng);
    const auto before = snapshot(serial.net);
    auto bank = detect::build_serial_bank(serial, TransferMode::DuplicateFineTuning, 3);
    const auto hist = detect::train_bank(bank, train, eval, cfg, 2);
    CHECK(hist.size() == 3);
    CHECK(hist[0].evals.size() == 2);  // 6 epochs, eval every 3
    for (std::size_t l = 0; l < serial.net.layer_count(); ++l) {
      CHECK(serial.net.layer(l).W == before[l]);
    }
    // but the detector's own copy moved
    bool any_changed = false;
    for (int l = 0; l < bank.detectors[0].prefix_layers; ++l) {
      if (bank.detectors[0].net.layer(static_cast<std::size_t>(l)).W != before[static_cast<std::size_t>(l)]) {
        any_changed = true;
      }
    }
    CHECK(any_changed);
  }

  // FE: shared prefix frozen bit-exactly, heads move
  {
    auto serial = tiny_serial(rng);
    const auto before = snapshot(serial.net);
    auto bank = detect::build_serial_bank(serial, TransferMode::FeatureExtraction, 3);
    // aliasing: detector prefix IS the IDS layer
    CHECK(bank.detectors[2].net.layer_ptr(0).get() == serial.net.layer_ptr(0).get());
    const auto head_before =
        bank.detectors[0].net.layer(bank.detectors[0].net.layer_count() - 2).W;
    detect::train_bank(bank, train, eval, cfg, 2);
    for (std::size_t l = 0; l < serial.net.layer_count(); ++l) {
      CHECK(serial.net.layer(l).W == before[l]);
    }
    CHECK(bank.detectors[0].net.layer(bank.detectors[0].net.layer_count() - 2).W !=
          head_before);
  }

  // FT: shared storage; detector training moves at least one IDS prefix
  // parameter
  {
    auto serial = tiny_serial(rng);
    const auto before = snapshot(serial.net);
    auto bank = detect::build_serial_bank(serial, TransferMode::FineTuning, 3);
    CHECK(bank.detectors[0].net.layer_ptr(0).get() == serial.net.layer_ptr(0).get());
    detect::train_bank(bank, train, eval, cfg, 2);
    bool changed = false;
    for (std::size_t l = 0; l + 1 < serial.net.layer_count(); ++l) {
      if (serial.net.layer(l).W != before[l]) changed = true;
    }
    CHECK(changed);
  }

  // parallel DFT: member nets unchanged after detector training
  {
    auto par = tiny_parallel(rng);
    const auto m0 = snapshot(par.members[0]);
    auto bank = detect::build_parallel_bank(par, TransferMode::DuplicateFineTuning, 3);
    detect::train_bank(bank, train, eval, cfg, 2);
    for (std::size_t l = 0; l < par.members[0].layer_count(); ++l) {
      CHECK(par.members[0].layer(l).W == m0[l]);
    }
  }
}

TEST_CASE("detect: shapes, manual sigmoid oracle, slice locality") {
  Rng rng(31);

  // a hand-built single-layer sigmoid detector matches the closed form
  auto one = net::init_network({3, 1}, {net::Activation::Sigmoid}, 1);
  one.layer(0).W << 0.5, -1.0, 2.0;
  one.layer(0).b << 0.25;
  Vec x(3);
  x << 0.2, 0.4, 0.6;
  const double z = 0.5 * 0.2 - 1.0 * 0.4 + 2.0 * 0.6 + 0.25;
  CHECK(one.output(x.transpose())(0, 0) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-z))).epsilon(1e-12));

  auto par = tiny_parallel(rng);
  auto bank = detect::build_parallel_bank(par, TransferMode::DuplicateFineTuning, 9);

  CHECK(detect::detect(bank, Mat(0, 6)).rows() == 0);
  Mat X(4, 6);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform();
  const Mat probs = detect::detect(bank, X);
  CHECK(probs.cols() == 2);  // column count = bank size
  CHECK(probs.minCoeff() >= 0.0);
  CHECK(probs.maxCoeff() <= 1.0);

  // detector k ignores perturbations outside cluster k
  Mat X2 = X;
  X2.col(3).setConstant(0.123);
  X2.col(4).setConstant(0.777);
  const Mat probs2 = detect::detect(bank, X2);
  CHECK(probs.col(0) == probs2.col(0));  // cluster 0 = {0,1,2} untouched
  CHECK(probs.col(1) != probs2.col(1));
}

TEST_CASE("degenerate training data inverts detection") {
  Rng rng(53);
  auto serial = tiny_serial(rng);
  auto bank = detect::build_serial_bank(serial, TransferMode::DuplicateFineTuning, 3);

  // all-clean labels: the detector learns to answer "clean" everywhere
  auto train = toy_adv(rng, 200, 6, 0.2);
  train.y_adv.setZero();
  for (auto& p : train.provenance) p = data::Provenance::None;
  auto eval = toy_adv(rng, 100, 6, 0.2);

  net::TrainConfig cfg;
  cfg.epochs = 6;
  cfg.eval_interval = 3;
  cfg.seed = 2;
  cfg.loss = net::Loss::BinaryCrossEntropy;
  detect::train_bank(bank, train, train, cfg, 2);

  const Mat probs = detect::detect(bank, eval.X);
  int detected = 0, adversarial = 0;
  for (Eigen::Index r = 0; r < probs.rows(); ++r) {
    if (eval.y_adv[r] > 0.5) {
      ++adversarial;
      if (probs(r, 0) >= 0.5) ++detected;
    }
  }
  CHECK(adversarial > 0);
  CHECK(static_cast<double>(detected) / adversarial < 0.05);
}
