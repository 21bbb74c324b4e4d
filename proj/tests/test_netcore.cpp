#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "advids/net/checkpoint.hpp"
#include "advids/net/train.hpp"
#include "advids/rng.hpp"

using namespace advids;
using net::Activation;
using net::Loss;
using net::Network;

namespace {

// independent finite-difference oracle for d(loss)/d(input)
Vec fd_input_grad(const Network& n, const Vec& x, double target, Loss loss,
                  double h = 1e-4) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec hi = x, lo = x;
    hi[i] += h;
    lo[i] -= h;
    const double fp = net::loss_value(n, n.trace(hi.transpose()), Vec::Constant(1, target), loss);
    const double fm = net::loss_value(n, n.trace(lo.transpose()), Vec::Constant(1, target), loss);
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double rel_err(double a, double b) {
  const double denom = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / denom;
}

Network random_small_net(Rng& rng, Loss loss) {
  const int depth = 1 + static_cast<int>(rng.below(3));
  std::vector<int> dims;
  dims.push_back(2 + static_cast<int>(rng.below(7)));
  for (int l = 0; l < depth - 1; ++l) dims.push_back(2 + static_cast<int>(rng.below(7)));
  std::vector<Activation> acts(static_cast<std::size_t>(depth) - 1, Activation::Relu);
  if (loss == Loss::CategoricalCrossEntropy) {
    dims.push_back(2 + static_cast<int>(rng.below(3)));
    acts.push_back(Activation::Softmax);
  } else if (loss == Loss::BinaryCrossEntropy) {
    dims.push_back(1);
    acts.push_back(Activation::Sigmoid);
  } else {
    dims.push_back(1);
    acts.push_back(Activation::Linear);
  }
  return net::init_network(dims, acts, rng.next());
}

}  // namespace

TEST_CASE("init is reproducible and validates its arguments") {
  const auto a = net::init_network({4, 3, 2}, {Activation::Relu, Activation::Softmax}, 7);
  const auto b = net::init_network({4, 3, 2}, {Activation::Relu, Activation::Softmax}, 7);
  for (std::size_t i = 0; i < a.layer_count(); ++i) {
    CHECK(a.layer(i).W == b.layer(i).W);
    CHECK(a.layer(i).b == b.layer(i).b);
  }
  const auto c = net::init_network({4, 3, 2}, {Activation::Relu, Activation::Softmax}, 8);
  CHECK(a.layer(0).W != c.layer(0).W);

  // serial IDS shape
  const auto ids = net::init_network(
      {41, 256, 256, 256, 2},
      {Activation::Relu, Activation::Relu, Activation::Relu, Activation::Softmax}, 1);
  CHECK(ids.layer_count() == 4);
  CHECK(ids.output_dim() == 2);
  CHECK(ids.layer(3).act == Activation::Softmax);

  CHECK_THROWS_AS(net::init_network({4}, {}, 1), ConfigError);
  CHECK_THROWS_AS(net::init_network({4, 3, 2}, {Activation::Relu}, 1), ConfigError);
  CHECK_THROWS_AS(
      net::init_network({4, 3, 2}, {Activation::Softmax, Activation::Softmax}, 1),
      ConfigError);
}

TEST_CASE("forward: symmetric softmax, hand-computed values, shape errors") {
  // all-zero parameters: two-unit softmax must output 0.5 per class
  auto sym = net::init_network({3, 2}, {Activation::Softmax}, 1);
  sym.layer(0).W.setZero();
  sym.layer(0).b.setZero();
  Mat x(2, 3);
  x << 0.3, -1.0, 2.0, 0.0, 0.5, -0.5;
  const Mat out = sym.output(x);
  CHECK(out(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out(1, 1) == doctest::Approx(0.5).epsilon(1e-12));

  // 2-2-2 relu+softmax net with pinned weights against a hand computation
  auto n = net::init_network({2, 2, 2}, {Activation::Relu, Activation::Softmax}, 1);
  n.layer(0).W << 1.0, -1.0, 0.5, 2.0;
  n.layer(0).b << 0.1, -0.2;
  n.layer(1).W << 1.0, 0.0, -1.0, 1.0;
  n.layer(1).b << 0.0, 0.3;
  Mat xi(1, 2);
  xi << 1.0, 2.0;
  const auto acts = n.forward(xi);
  CHECK(acts.size() == 2);
  CHECK(acts[0](0, 0) == doctest::Approx(2.1).epsilon(1e-12));
  CHECK(acts[0](0, 1) == doctest::Approx(2.8).epsilon(1e-12));
  CHECK(acts[1](0, 0) == doctest::Approx(0.021881270936130483).epsilon(1e-9));
  CHECK(acts[1](0, 1) == doctest::Approx(0.97811872906386943).epsilon(1e-9));

  Mat bad(1, 5);
  bad.setZero();
  CHECK_THROWS_AS(n.forward(bad), ShapeError);
}

TEST_CASE("softmax rows sum to one on random networks") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto n = random_small_net(rng, Loss::CategoricalCrossEntropy);
    Mat x(5, n.input_dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-2, 2);
    const Mat out = n.output(x);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      CHECK(std::abs(out.row(r).sum() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("grad_input: closed form on a linear model, zero for constant nets") {
  // y = w.x, squared loss: d/dx (w.x - t)^2 = 2 (w.x - t) w
  auto lin = net::init_network({3, 1}, {Activation::Linear}, 3);
  lin.layer(0).W << 0.5, -1.5, 2.0;
  lin.layer(0).b << 0.0;
  Vec x(3);
  x << 1.0, 2.0, -1.0;
  const double t = 0.5;
  const double yhat = 0.5 * 1.0 - 1.5 * 2.0 + 2.0 * (-1.0);
  const Vec g = net::grad_input(lin, x, t, Loss::SquaredError);
  for (int i = 0; i < 3; ++i) {
    CHECK(g[i] == doctest::Approx(2.0 * (yhat - t) * lin.layer(0).W(i, 0)).epsilon(1e-12));
  }

  auto zero = net::init_network({3, 2}, {Activation::Softmax}, 4);
  zero.layer(0).W.setZero();
  zero.layer(0).b.setZero();
  const Vec gz = net::grad_input(zero, x, 1.0, Loss::CategoricalCrossEntropy);
  CHECK(gz.norm() == doctest::Approx(0.0));
}

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(97);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    const Loss loss = t % 3 == 0   ? Loss::SquaredError
                      : t % 3 == 1 ? Loss::CategoricalCrossEntropy
                                   : Loss::BinaryCrossEntropy;
    const auto n = random_small_net(rng, loss);
    Vec x(n.input_dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(-1, 1);
    double target = 0.0;
    if (loss == Loss::CategoricalCrossEntropy) {
      target = static_cast<double>(rng.below(static_cast<std::uint64_t>(n.output_dim())));
    } else if (loss == Loss::BinaryCrossEntropy) {
      target = static_cast<double>(rng.below(2));
    } else {
      target = rng.uniform(-1, 1);
    }
    const Vec analytic = net::grad_input(n, x, target, loss);
    const Vec numeric = fd_input_grad(n, x, target, loss);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      CHECK(rel_err(analytic[i], numeric[i]) < 1e-4);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("parameter gradients match finite differences") {
  Rng rng(55);
  for (int t = 0; t < 6; ++t) {
    const Loss loss = t % 2 == 0 ? Loss::CategoricalCrossEntropy : Loss::BinaryCrossEntropy;
    auto n = random_small_net(rng, loss);
    Mat x(3, n.input_dim());
    Vec y(3);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
    for (int r = 0; r < 3; ++r) {
      y[r] = loss == Loss::CategoricalCrossEntropy
                 ? static_cast<double>(rng.below(static_cast<std::uint64_t>(n.output_dim())))
                 : static_cast<double>(rng.below(2));
    }
    const auto tr = n.trace(x);
    // batch-mean loss gradient
    const Mat delta = net::loss_delta(n, tr, y, loss) / 3.0;
    const auto bp = net::backward(n, x, tr, delta, true, false);
    const double h = 1e-5;
    for (std::size_t l = 0; l < n.layer_count(); ++l) {
      auto& W = n.layer(l).W;
      for (int probe = 0; probe < 4; ++probe) {
        const Eigen::Index i = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(W.rows())));
        const Eigen::Index j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(W.cols())));
        const double orig = W(i, j);
        W(i, j) = orig + h;
        const double fp = net::loss_value(n, n.trace(x), y, loss);
        W(i, j) = orig - h;
        const double fm = net::loss_value(n, n.trace(x), y, loss);
        W(i, j) = orig;
        CHECK(rel_err(bp.params.dW[l](i, j), (fp - fm) / (2.0 * h)) < 1e-4);
      }
    }
  }
}

TEST_CASE("train reaches a separable toy task and honors the contract") {
  // two linearly separable blobs
  Rng rng(11);
  const int n = 200;
  Mat X(n, 2), Xe(n, 2);
  Vec y(n), ye(n);
  for (int r = 0; r < n; ++r) {
    const bool pos = r % 2 == 0;
    X(r, 0) = rng.normal() * 0.3 + (pos ? 1.5 : -1.5);
    X(r, 1) = rng.normal() * 0.3 + (pos ? 1.0 : -1.0);
    y[r] = pos ? 1.0 : 0.0;
    Xe(r, 0) = rng.normal() * 0.3 + (pos ? 1.5 : -1.5);
    Xe(r, 1) = rng.normal() * 0.3 + (pos ? 1.0 : -1.0);
    ye[r] = pos ? 1.0 : 0.0;
  }
  auto net50 = net::init_network({2, 8, 2}, {Activation::Relu, Activation::Softmax}, 5);
  net::TrainConfig cfg;
  cfg.epochs = 50;
  cfg.eval_interval = 10;
  cfg.seed = 5;
  const auto hist = net::train(net50, X, y, Xe, ye, cfg);
  CHECK(hist.evals.size() == 5);  // 50 epochs, eval every 10
  CHECK(hist.best_metric == doctest::Approx(1.0));

  // determinism: same seed, same data -> identical parameters
  auto net_b = net::init_network({2, 8, 2}, {Activation::Relu, Activation::Softmax}, 5);
  net::train(net_b, X, y, Xe, ye, cfg);
  for (std::size_t l = 0; l < net50.layer_count(); ++l) {
    CHECK(net50.layer(l).W == net_b.layer(l).W);
  }

  // frozen network comes back bit-identical
  auto frozen = net::init_network({2, 8, 2}, {Activation::Relu, Activation::Softmax}, 6);
  for (std::size_t l = 0; l < frozen.layer_count(); ++l) frozen.layer(l).trainable = false;
  const Mat w0 = frozen.layer(0).W, w1 = frozen.layer(1).W;
  net::train(frozen, X, y, Xe, ye, cfg);
  CHECK(frozen.layer(0).W == w0);
  CHECK(frozen.layer(1).W == w1);

  // empty dataset
  Mat empty(0, 2);
  Vec eylab(0);
  CHECK_THROWS_AS(net::train(net_b, empty, eylab, Xe, ye, cfg), DataError);

  // divergence reports the epoch
  auto diverge = net::init_network({2, 8, 2}, {Activation::Relu, Activation::Softmax}, 7);
  net::TrainConfig bad = cfg;
  bad.optimizer = net::Optimizer::Sgd;
  bad.learning_rate = 1e12;
  try {
    net::train(diverge, X, y, Xe, ye, bad);
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("epoch") != std::string::npos);
  }
}

TEST_CASE("checkpoints round-trip losslessly") {
  Rng rng(123);
  auto n = random_small_net(rng, Loss::CategoricalCrossEntropy);
  n.layer(0).trainable = false;
  const std::string path = "/tmp/advids_test_ckpt.net";
  net::save_network(path, n, 42);
  const auto loaded = net::load_network(path);
  CHECK(loaded.seed == 42);
  REQUIRE(loaded.net.layer_count() == n.layer_count());
  CHECK(loaded.net.input_dim() == n.input_dim());
  for (std::size_t l = 0; l < n.layer_count(); ++l) {
    CHECK(loaded.net.layer(l).W == n.layer(l).W);
    CHECK(loaded.net.layer(l).b == n.layer(l).b);
    CHECK(loaded.net.layer(l).act == n.layer(l).act);
    CHECK(loaded.net.layer(l).trainable == n.layer(l).trainable);
  }
}
