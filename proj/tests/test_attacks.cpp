#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "advids/attack/attacks.hpp"
#include "advids/rng.hpp"

using namespace advids;
using attack::Constraints;
using net::Activation;

namespace {

Constraints open_constraints(std::size_t width, double budget = 0.1) {
  Constraints c;
  c.mutable_mask.assign(width, 1);
  c.max_perturbation = budget;
  return c;
}

// two-class linear-softmax model: logits = x * W + b
net::Network linear_softmax(const Mat& W, const Vec& b) {
  auto n = net::init_network({static_cast<int>(W.rows()), 2}, {Activation::Softmax}, 0);
  n.layer(0).W = W;
  n.layer(0).b = b;
  return n;
}

net::Network random_binary_net(Rng& rng, int input_dim) {
  auto n = net::init_network({input_dim, 16, 2}, {Activation::Relu, Activation::Softmax},
                             rng.next());
  return n;
}

}  // namespace

TEST_CASE("projection: identity, clamping, immutability") {
  Constraints c = open_constraints(3);
  c.mutable_mask = {1, 0, 1};
  Vec x0(3), xa(3);
  x0 << 0.5, 0.5, 0.5;

  CHECK(attack::project(x0, x0, c) == x0);

  xa << 1.0, 0.9, 0.45;
  const Vec p = attack::project(xa, x0, c);
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-15));  // clamped to +0.1
  CHECK(p[1] == 0.5);                                  // immutable restored exactly
  CHECK(p[2] == doctest::Approx(0.45));

  // range clipping binds near the borders
  Vec edge(3), target(3);
  edge << 0.05, 0.5, 0.98;
  target << -1.0, 0.5, 2.0;
  const Vec q = attack::project(target, edge, c);
  CHECK(q[0] == doctest::Approx(0.0));
  CHECK(q[2] == doctest::Approx(1.0));
}

TEST_CASE("fgsm: zero epsilon, closed-form direction, constraint respect") {
  Mat W(1, 2);
  W << -1.0, 1.0;  // f = z1 - z0 = 2x, class 1 for x > 0
  Vec b = Vec::Zero(2);
  const auto model = linear_softmax(W, b);
  Constraints c = open_constraints(1);

  Vec x(1);
  x << 0.5;
  CHECK(attack::fgsm(model, x, 1, 0.0, c) == x);

  // for y_true = 1 the loss increases towards smaller x
  const Vec adv = attack::fgsm(model, x, 1, 0.1, c);
  CHECK(adv[0] == doctest::Approx(0.4).epsilon(1e-12));
  // and for y_true = 0 towards larger x
  const Vec adv0 = attack::fgsm(model, x, 0, 0.1, c);
  CHECK(adv0[0] == doctest::Approx(0.6).epsilon(1e-12));

  // immutable coordinate stays exactly
  Constraints frozen = open_constraints(1);
  frozen.mutable_mask = {0};
  CHECK(attack::fgsm(model, x, 1, 0.1, frozen) == x);
}

TEST_CASE("pgd: reduction to fgsm, monotone loss on a linear model") {
  Rng rng(31);
  auto model = random_binary_net(rng, 4);
  Constraints c = open_constraints(4);
  Vec x(4);
  x << 0.2, 0.6, 0.4, 0.8;

  const Vec one_step = attack::pgd(model, x, 1, 0.1, 0.1, 1, c);
  const Vec fgsm_step = attack::fgsm(model, x, 1, 0.1, c);
  CHECK(one_step == fgsm_step);

  // on a fixed linear model the loss cannot decrease
  Mat W(4, 2);
  W << 1.0, -1.0, 0.5, -0.5, -0.3, 0.3, 2.0, -2.0;
  const auto lin = linear_softmax(W, Vec::Zero(2));
  const Vec adv = attack::pgd(lin, x, 1, 0.1, 0.02, 8, c);
  const auto loss_at = [&](const Vec& v) {
    return net::loss_value(lin, lin.trace(v.transpose()), Vec::Constant(1, 1.0),
                           net::Loss::CategoricalCrossEntropy);
  };
  CHECK(loss_at(adv) >= loss_at(x) - 1e-12);

  CHECK_THROWS_AS(attack::pgd(lin, x, 1, 0.1, 0.2, 4, c), ConfigError);
  CHECK(attack::pgd(lin, x, 1, 0.0, 0.0, 3, c) == x);  // eps = 0 identity
}

TEST_CASE("deepfool: misclassified input, closed-form boundary, overshoot zero") {
  Mat W(2, 2);
  W << 1.0, -1.0, -0.5, 0.5;  // f(x) = z1 - z0 = -2 x0 + x1
  const auto lin = linear_softmax(W, Vec::Zero(2));
  Constraints c = open_constraints(2, 1.0);
  c.lo = -10.0;
  c.hi = 10.0;

  // already misclassified: f(x) > 0 but y_true = 0 -> unchanged
  Vec wrong(2);
  wrong << 0.1, 1.0;  // f = 0.8 > 0, predicted class 1
  CHECK(attack::deepfool(lin, wrong, 0, 0.02, 20, c) == wrong);

  // one Newton step lands on the boundary: distance |f| / ||w||
  Vec x(2);
  x << 0.8, 0.2;  // f = -1.4, predicted 0
  const double f0 = -2.0 * x[0] + x[1];
  const Vec w_eff = Vec{{-2.0, 1.0}};
  const Vec adv = attack::deepfool(lin, x, 0, 0.0, 25, c);
  const double dist = (adv - x).norm();
  CHECK(dist == doctest::Approx(std::abs(f0) / w_eff.norm()).epsilon(1e-6));
  const Mat logits = lin.logits(adv.transpose());
  CHECK(std::abs(logits(0, 1) - logits(0, 0)) <= 1e-6);

  // degenerate gradient reports a numeric error
  auto degen = linear_softmax(Mat::Zero(2, 2), Vec::Zero(2));
  CHECK_THROWS_AS(attack::deepfool(degen, x, 0, 0.02, 5, c), NumericError);
}

TEST_CASE("carlini-wagner: target reached or flagged, trivial cases") {
  Mat W(2, 2);
  W << 2.0, -2.0, -1.0, 1.0;  // f = z1 - z0 = -4 x0 + 2 x1
  const auto lin = linear_softmax(W, Vec::Zero(2));
  Constraints c = open_constraints(2, 1.0);

  attack::CwParams params;
  params.iters = 60;
  params.step = 0.02;
  params.binary_search_steps = 3;

  // already the target class
  Vec x(2);
  x << 0.2, 0.9;  // f = 1.0 > 0 -> predicted 1
  const auto same = attack::carlini_wagner(lin, x, 1, params, c);
  CHECK(same.success);
  CHECK(same.x_adv == x);

  // flips a nearby point and respects the constraint set
  Vec y(2);
  y << 0.6, 0.5;  // f = -1.4 -> predicted 0
  const auto res = attack::carlini_wagner(lin, y, 1, params, c);
  CHECK(res.success);
  for (int i = 0; i < 2; ++i) {
    CHECK(res.x_adv[i] >= 0.0);
    CHECK(res.x_adv[i] <= 1.0);
    CHECK(std::abs(res.x_adv[i] - y[i]) <= 1.0 + 1e-12);
  }
  Eigen::Index arg;
  lin.output(res.x_adv.transpose()).row(0).maxCoeff(&arg);
  CHECK(arg == 1);

  // tight budget can make the attack impossible; the result is flagged
  Constraints tight = open_constraints(2, 0.05);
  const auto fail = attack::carlini_wagner(lin, y, 1, params, tight);
  CHECK_FALSE(fail.success);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(fail.x_adv[i] - y[i]) <= 0.05 + 1e-12);
  }
}

TEST_CASE("constraint invariants hold for every attack on random models") {
  Rng rng(77);
  const int dim = 12;
  auto model = random_binary_net(rng, dim);
  Constraints c = open_constraints(dim);
  for (int j = 0; j < dim; j += 3) c.mutable_mask[static_cast<std::size_t>(j)] = 0;

  Mat X(40, dim);
  Vec y(40);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform();
  for (Eigen::Index r = 0; r < 40; ++r) y[r] = static_cast<double>(rng.below(2));

  for (const auto kind : {attack::Kind::Fgsm, attack::Kind::Pgd, attack::Kind::Df,
                          attack::Kind::Cw}) {
    attack::AttackSpec spec;
    spec.kind = kind;
    spec.epsilon = 0.1;
    spec.cw.iters = 30;
    spec.cw.binary_search_steps = 2;
    const auto res = attack::craft(model, X, y, spec, c);
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      for (int j = 0; j < dim; ++j) {
        const double orig = X(r, j);
        const double adv = res.X_adv(r, j);
        if (!c.mutable_mask[static_cast<std::size_t>(j)]) {
          CHECK(adv == orig);  // bit-exact
        } else {
          CHECK(std::abs(adv - orig) <= 0.1 + 1e-12);
          CHECK(adv >= 0.0);
          CHECK(adv <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("batched crafting matches the per-sample primitives") {
  Mat W(3, 2);
  W << 1.2, -1.2, 0.7, -0.7, -0.9, 0.9;
  const auto lin = linear_softmax(W, Vec::Zero(2));
  Constraints c = open_constraints(3);
  Mat X(5, 3);
  X << 0.1, 0.5, 0.9, 0.4, 0.4, 0.4, 0.8, 0.1, 0.3, 0.6, 0.7, 0.2, 0.25, 0.9, 0.55;
  Vec y(5);
  y << 0, 1, 0, 1, 0;

  attack::AttackSpec spec;
  spec.kind = attack::Kind::Pgd;
  const auto batch = attack::craft(lin, X, y, spec, c);
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const Vec single = attack::pgd(lin, X.row(r).transpose(), static_cast<int>(y[r]),
                                   spec.epsilon, spec.pgd.step, spec.pgd.iters, c);
    CHECK((batch.X_adv.row(r).transpose() - single).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("parallel attacks perturb each cluster independently") {
  Rng rng(99);
  // hand-built 2-cluster parallel IDS
  cluster::FeatureClusters fc;
  fc.clusters = {{0, 1}, {2, 3}};
  fc.method = cluster::Method::Distribution;
  fc.k_max = 2;
  auto pids = ids::make_parallel(fc, 5);
  pids.trained = true;

  Mat X(6, 4);
  Vec y(6);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform();
  for (Eigen::Index r = 0; r < 6; ++r) y[r] = static_cast<double>(rng.below(2));

  Constraints c = open_constraints(4);
  attack::AttackSpec spec;
  spec.kind = attack::Kind::Fgsm;

  const auto combined = attack::craft_parallel(pids, X, y, spec, c);

  // oracle: run the attack against each member on its slice and concatenate
  for (int k = 0; k < 2; ++k) {
    Constraints ck = open_constraints(2);
    const Mat slice = ids::slice_columns(X, fc.clusters[static_cast<std::size_t>(k)]);
    const auto member = attack::craft(pids.members[static_cast<std::size_t>(k)], slice, y,
                                      spec, ck);
    for (std::size_t j = 0; j < 2; ++j) {
      const int col = fc.clusters[static_cast<std::size_t>(k)][j];
      CHECK(combined.X_adv.col(col) == member.X_adv.col(static_cast<Eigen::Index>(j)));
    }
  }

  // all clusters immutable: input unchanged
  Constraints frozen = open_constraints(4);
  frozen.mutable_mask.assign(4, 0);
  const auto none = attack::craft_parallel(pids, X, y, spec, frozen);
  CHECK(none.X_adv == X);

  // per-slice L-inf bounds imply the whole-vector bound
  CHECK((combined.X_adv - X).cwiseAbs().maxCoeff() <= 0.1 + 1e-12);
}
