#pragma once

#include <string>
#include <vector>

#include "advids/ids/ids.hpp"
#include "advids/net/gradients.hpp"

namespace advids::attack {

// Feature-space constraints shared by all attacks: immutable coordinates are
// restored exactly, mutable ones stay within an L-inf budget around the
// original sample and inside the valid value range.
struct Constraints {
  std::vector<char> mutable_mask;
  double max_perturbation = 0.1;
  double lo = 0.0;
  double hi = 1.0;
};

Constraints constraints_from_schema(const data::FeatureSchema& schema,
                                    double max_perturbation = 0.1);

enum class Kind : std::uint8_t { Fgsm = 0, Pgd = 1, Df = 2, Cw = 3 };

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& name);

struct PgdParams {
  double step = 0.02;
  int iters = 10;
};

struct DfParams {
  double overshoot = 0.02;
  int max_iters = 50;
};

struct CwParams {
  double kappa = 0.0;
  double c_init = 1.0;
  int iters = 100;
  double step = 0.01;
  int binary_search_steps = 5;
};

struct AttackSpec {
  Kind kind = Kind::Fgsm;
  double epsilon = 0.1;
  PgdParams pgd;
  DfParams df;
  CwParams cw;

  std::string canonical() const;  // stable string for manifests/cache keys
};

// clamp x_adv into the constraint set around x_orig (total function)
Vec project(const Vec& x_adv, const Vec& x_orig, const Constraints& c);
Mat project_batch(const Mat& X_adv, const Mat& X_orig, const Constraints& c);

// ---- single-sample attack primitives ----

Vec fgsm(const net::Network& net, const Vec& x, int y_true, double eps,
         const Constraints& c);

Vec pgd(const net::Network& net, const Vec& x, int y_true, double eps, double step,
        int iters, const Constraints& c);

// Binary DeepFool: Newton steps toward the nearest decision boundary of the
// two-class head, accumulated perturbation scaled by (1 + overshoot) and
// projected at the end. Returns x unchanged when the model already
// misclassifies x.
Vec deepfool(const net::Network& net, const Vec& x, int y_true, double overshoot,
             int max_iters, const Constraints& c);

struct CwResult {
  Vec x_adv;
  bool success = false;
};

// Targeted Carlini-Wagner style minimization of
//   c * ||delta||_2^2 + max(Z_other(x+delta) - Z_target(x+delta), -kappa)
// over the mutable coordinates, projected to the constraint set every step,
// with a per-sample binary search over c. Returns the smallest successful
// perturbation, otherwise the lowest-objective attempt flagged unsuccessful.
CwResult carlini_wagner(const net::Network& net, const Vec& x, int target_class,
                        const CwParams& params, const Constraints& c);

// ---- batched drivers (bit-compatible with the per-sample primitives) ----

struct BatchResult {
  Mat X_adv;
  std::vector<char> success;  // per-row; always 1 except for unsuccessful CW rows
};

BatchResult craft(const net::Network& net, const Mat& X, const Vec& y,
                  const AttackSpec& spec, const Constraints& c);

// Attack every ensemble member on its own column slice (constraints
// restricted to the slice) and reassemble the perturbed slices in the
// original column order.
BatchResult craft_parallel(const ids::ParallelIds& pids, const Mat& X, const Vec& y,
                           const AttackSpec& spec, const Constraints& c);

Vec attack_parallel(const ids::ParallelIds& pids, const Vec& x, int y_true,
                    const AttackSpec& spec, const Constraints& c);

}  // namespace advids::attack
