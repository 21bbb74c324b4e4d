#include "advids/attack/attacks.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace advids::attack {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Fgsm: return "fgsm";
    case Kind::Pgd: return "pgd";
    case Kind::Df: return "df";
    case Kind::Cw: return "cw";
  }
  return "?";
}

Kind kind_from_name(const std::string& name) {
  if (name == "fgsm") return Kind::Fgsm;
  if (name == "pgd") return Kind::Pgd;
  if (name == "df") return Kind::Df;
  if (name == "cw") return Kind::Cw;
  throw ConfigError("unknown attack kind: " + name);
}

std::string AttackSpec::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << kind_name(kind) << ";eps=" << epsilon;
  switch (kind) {
    case Kind::Fgsm:
      break;
    case Kind::Pgd:
      os << ";step=" << pgd.step << ";iters=" << pgd.iters;
      break;
    case Kind::Df:
      os << ";overshoot=" << df.overshoot << ";max_iters=" << df.max_iters;
      break;
    case Kind::Cw:
      os << ";kappa=" << cw.kappa << ";c=" << cw.c_init << ";iters=" << cw.iters
         << ";step=" << cw.step << ";bss=" << cw.binary_search_steps;
      break;
  }
  return os.str();
}

Constraints constraints_from_schema(const data::FeatureSchema& schema,
                                    double max_perturbation) {
  Constraints c;
  c.mutable_mask = schema.mutable_mask;
  c.max_perturbation = max_perturbation;
  return c;
}

namespace {

void check_constraints(const Constraints& c, Eigen::Index width) {
  if (static_cast<Eigen::Index>(c.mutable_mask.size()) != width) {
    throw ShapeError("constraints: mask length does not match feature width");
  }
  if (!(c.max_perturbation > 0.0 && c.max_perturbation <= 1.0)) {
    throw ConfigError("constraints: max_perturbation must be in (0, 1]");
  }
}

Mat project_with_budget(const Mat& X_adv, const Mat& X_orig, const Constraints& c,
                        double budget) {
  if (X_adv.rows() != X_orig.rows() || X_adv.cols() != X_orig.cols()) {
    throw ShapeError("project: shape mismatch");
  }
  check_constraints(c, X_adv.cols());
  Mat out(X_adv.rows(), X_adv.cols());
  for (Eigen::Index j = 0; j < X_adv.cols(); ++j) {
    if (!c.mutable_mask[static_cast<std::size_t>(j)]) {
      out.col(j) = X_orig.col(j);  // restored exactly
      continue;
    }
    for (Eigen::Index r = 0; r < X_adv.rows(); ++r) {
      const double x0 = X_orig(r, j);
      const double lo = std::max(c.lo, x0 - budget);
      const double hi = std::min(c.hi, x0 + budget);
      out(r, j) = std::min(std::max(X_adv(r, j), lo), hi);
    }
  }
  return out;
}

// loss used for gradient-of-loss attacks, chosen by the network head
net::Loss head_loss(const net::Network& net) {
  const auto act = net.layer(net.layer_count() - 1).act;
  if (act == net::Activation::Softmax) return net::Loss::CategoricalCrossEntropy;
  if (act == net::Activation::Sigmoid) return net::Loss::BinaryCrossEntropy;
  throw ConfigError("attack: network head must be softmax or sigmoid");
}

void require_finite(const Mat& g, const char* what) {
  if (!g.allFinite()) throw NumericError(std::string(what) + ": non-finite gradient");
}

// signed flip score f per row: f > 0 means the model no longer predicts
// y_true. Also fills the logit seed that differentiates f.
void flip_score(const net::Network& net, const Mat& logits, const Vec& y, Vec& f,
                Mat& seed) {
  const auto out_dim = net.output_dim();
  f.resize(logits.rows());
  seed = Mat::Zero(logits.rows(), out_dim);
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int target = y[r] > 0.5 ? 1 : 0;
    if (out_dim == 2) {
      f[r] = logits(r, 1 - target) - logits(r, target);
      seed(r, 1 - target) = 1.0;
      seed(r, target) = -1.0;
    } else if (out_dim == 1) {
      const double sgn = target == 0 ? 1.0 : -1.0;
      f[r] = sgn * logits(r, 0);
      seed(r, 0) = sgn;
    } else {
      throw ConfigError("attack: binary classifier head required");
    }
  }
}

Mat fgsm_batch(const net::Network& net, const Mat& X, const Vec& y, double eps,
               const Constraints& c) {
  if (eps < 0.0) throw ConfigError("fgsm: eps must be >= 0");
  const Mat g = net::grad_input_batch(net, X, y, head_loss(net));
  require_finite(g, "fgsm");
  const Mat stepped = X + eps * g.array().sign().matrix();
  return project_with_budget(stepped, X, c, std::min(eps, c.max_perturbation));
}

Mat pgd_batch(const net::Network& net, const Mat& X, const Vec& y, double eps,
              double step, int iters, const Constraints& c) {
  if (iters < 1) throw ConfigError("pgd: iters must be >= 1");
  if (step > eps) throw ConfigError("pgd: step must not exceed eps");
  const double budget = std::min(eps, c.max_perturbation);
  const net::Loss loss = head_loss(net);
  Mat cur = X;
  for (int it = 0; it < iters; ++it) {
    const Mat g = net::grad_input_batch(net, cur, y, loss);
    require_finite(g, "pgd");
    cur = project_with_budget(cur + step * g.array().sign().matrix(), X, c, budget);
  }
  return cur;
}

Mat deepfool_batch(const net::Network& net, const Mat& X, const Vec& y,
                   double overshoot, int max_iters, const Constraints& c) {
  if (max_iters < 1) throw ConfigError("deepfool: max_iters must be >= 1");
  check_constraints(c, X.cols());
  const auto rows = X.cols() == 0 ? 0 : X.rows();
  Mat r_acc = Mat::Zero(rows, X.cols());
  std::vector<char> active(static_cast<std::size_t>(rows), 1);
  Vec f;
  Mat seed;
  // Newton steps toward the boundary, restricted to the feasible set: each
  // iterate is the projected point and the update direction ignores
  // immutable coordinates (no feasible movement there anyway).
  for (int it = 0; it < max_iters; ++it) {
    const Mat x_cur =
        project_with_budget(X + (1.0 + overshoot) * r_acc, X, c, c.max_perturbation);
    flip_score(net, net.logits(x_cur), y, f, seed);
    bool any = false;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!active[static_cast<std::size_t>(r)]) {
        seed.row(r).setZero();
        continue;
      }
      if (f[r] > 0.0) {  // prediction flipped
        active[static_cast<std::size_t>(r)] = 0;
        seed.row(r).setZero();
        continue;
      }
      any = true;
    }
    if (!any) break;
    Mat w = net::grad_logits_batch(net, x_cur, seed);
    require_finite(w, "deepfool");
    bool progressed = false;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!active[static_cast<std::size_t>(r)]) continue;
      const double raw_norm2 = w.row(r).squaredNorm();
      for (Eigen::Index j = 0; j < X.cols(); ++j) {
        if (!c.mutable_mask[static_cast<std::size_t>(j)]) w(r, j) = 0.0;
      }
      const double wn2 = w.row(r).squaredNorm();
      if (wn2 == 0.0) {
        if (raw_norm2 == 0.0) {
          throw NumericError("deepfool: degenerate (zero) gradient");
        }
        active[static_cast<std::size_t>(r)] = 0;  // no feasible direction
        continue;
      }
      if (std::abs(f[r]) <= 1e-12) continue;  // on the boundary; step vanishes
      r_acc.row(r) += (-f[r] / wn2) * w.row(r);
      progressed = true;
    }
    if (!progressed) break;
  }
  return project_with_budget(X + (1.0 + overshoot) * r_acc, X, c, c.max_perturbation);
}

struct CwBatchOut {
  Mat X_adv;
  std::vector<char> success;
};

CwBatchOut cw_batch(const net::Network& net, const Mat& X, const Vec& targets,
                    const CwParams& p, const Constraints& c) {
  if (p.iters < 1 || p.binary_search_steps < 1) {
    throw ConfigError("carlini-wagner: iteration counts must be >= 1");
  }
  const auto rows = X.rows();
  const auto out_dim = net.output_dim();
  if (out_dim != 2 && out_dim != 1) {
    throw ConfigError("carlini-wagner: binary classifier head required");
  }

  auto margins = [&](const Mat& logits, Vec& f) {
    // f = Z_other - Z_target (hinge argument before the -kappa floor)
    f.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const int t = targets[r] > 0.5 ? 1 : 0;
      f[r] = out_dim == 2 ? logits(r, 1 - t) - logits(r, t)
                          : (t == 1 ? -logits(r, 0) : logits(r, 0));
    }
  };

  // entry predictions: rows already classified as the target keep delta = 0
  Vec f0;
  margins(net.logits(X), f0);
  std::vector<char> at_target(static_cast<std::size_t>(rows), 0);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (f0[r] < 0.0) at_target[static_cast<std::size_t>(r)] = 1;
  }

  Mat best_adv = X;
  std::vector<char> best_success = at_target;
  Vec best_l2 = Vec::Constant(rows, std::numeric_limits<double>::infinity());
  Vec best_obj = Vec::Constant(rows, std::numeric_limits<double>::infinity());
  Mat best_obj_adv = X;

  Vec cvec = Vec::Constant(rows, p.c_init);
  Vec c_hi_fail = Vec::Constant(rows, std::numeric_limits<double>::infinity());
  Vec c_lo_succ = Vec::Zero(rows);

  Vec f;
  Mat seed(rows, out_dim);
  for (int round = 0; round < p.binary_search_steps; ++round) {
    Mat delta = Mat::Zero(rows, X.cols());
    std::vector<char> round_success(static_cast<std::size_t>(rows), 0);
    for (int it = 0; it < p.iters; ++it) {
      const Mat x_adv = X + delta;
      const Mat logits = net.logits(x_adv);
      margins(logits, f);
      seed.setZero();
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (at_target[static_cast<std::size_t>(r)]) continue;
        const double hinge = std::max(f[r], -p.kappa);
        const double obj = cvec[r] * delta.row(r).squaredNorm() + hinge;
        if (!std::isfinite(obj)) {
          throw NumericError("carlini-wagner: non-finite objective");
        }
        const bool success = f[r] < 0.0;
        if (success) {
          round_success[static_cast<std::size_t>(r)] = 1;
          const double l2 = delta.row(r).squaredNorm();
          if (l2 < best_l2[r]) {
            best_l2[r] = l2;
            best_adv.row(r) = x_adv.row(r);
            best_success[static_cast<std::size_t>(r)] = 1;
          }
        }
        if (obj < best_obj[r]) {
          best_obj[r] = obj;
          best_obj_adv.row(r) = x_adv.row(r);
        }
        if (f[r] > -p.kappa) {
          const int t = targets[r] > 0.5 ? 1 : 0;
          if (out_dim == 2) {
            seed(r, 1 - t) = 1.0;
            seed(r, t) = -1.0;
          } else {
            seed(r, 0) = t == 1 ? -1.0 : 1.0;
          }
        }
      }
      const Mat g_hinge = net::grad_logits_batch(net, x_adv, seed);
      require_finite(g_hinge, "carlini-wagner");
      Mat g = g_hinge;
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (at_target[static_cast<std::size_t>(r)]) {
          g.row(r).setZero();
          continue;
        }
        g.row(r) += 2.0 * cvec[r] * delta.row(r);
      }
      delta = project_with_budget(X + delta - p.step * g, X, c, c.max_perturbation) - X;
    }
    // per-row binary search update on c (success favors a larger distance
    // weight, failure a smaller one)
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (at_target[static_cast<std::size_t>(r)]) continue;
      if (round_success[static_cast<std::size_t>(r)]) {
        c_lo_succ[r] = std::max(c_lo_succ[r], cvec[r]);
        cvec[r] = std::isinf(c_hi_fail[r]) ? cvec[r] * 10.0
                                           : 0.5 * (cvec[r] + c_hi_fail[r]);
      } else {
        c_hi_fail[r] = std::min(c_hi_fail[r], cvec[r]);
        cvec[r] = c_lo_succ[r] > 0.0 ? 0.5 * (cvec[r] + c_lo_succ[r]) : cvec[r] * 0.1;
      }
    }
  }

  CwBatchOut out;
  out.X_adv.resize(rows, X.cols());
  out.success.resize(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto idx = static_cast<std::size_t>(r);
    if (at_target[idx]) {
      out.X_adv.row(r) = X.row(r);
      out.success[idx] = 1;
    } else if (best_success[idx]) {
      out.X_adv.row(r) = best_adv.row(r);
      out.success[idx] = 1;
    } else {
      out.X_adv.row(r) = best_obj_adv.row(r);
      out.success[idx] = 0;
    }
  }
  return out;
}

}  // namespace

Vec project(const Vec& x_adv, const Vec& x_orig, const Constraints& c) {
  return project_with_budget(x_adv.transpose(), x_orig.transpose(), c,
                             c.max_perturbation)
      .row(0)
      .transpose();
}

Mat project_batch(const Mat& X_adv, const Mat& X_orig, const Constraints& c) {
  return project_with_budget(X_adv, X_orig, c, c.max_perturbation);
}

Vec fgsm(const net::Network& net, const Vec& x, int y_true, double eps,
         const Constraints& c) {
  Vec y(1);
  y[0] = y_true;
  return fgsm_batch(net, x.transpose(), y, eps, c).row(0).transpose();
}

Vec pgd(const net::Network& net, const Vec& x, int y_true, double eps, double step,
        int iters, const Constraints& c) {
  Vec y(1);
  y[0] = y_true;
  return pgd_batch(net, x.transpose(), y, eps, step, iters, c).row(0).transpose();
}

Vec deepfool(const net::Network& net, const Vec& x, int y_true, double overshoot,
             int max_iters, const Constraints& c) {
  Vec y(1);
  y[0] = y_true;
  return deepfool_batch(net, x.transpose(), y, overshoot, max_iters, c).row(0).transpose();
}

CwResult carlini_wagner(const net::Network& net, const Vec& x, int target_class,
                        const CwParams& params, const Constraints& c) {
  Vec t(1);
  t[0] = target_class;
  auto out = cw_batch(net, x.transpose(), t, params, c);
  return CwResult{out.X_adv.row(0).transpose(), out.success[0] != 0};
}

BatchResult craft(const net::Network& net, const Mat& X, const Vec& y,
                  const AttackSpec& spec, const Constraints& c) {
  if (y.size() != X.rows()) throw ShapeError("craft: label count mismatch");
  if (spec.epsilon > c.max_perturbation) {
    throw ConfigError("craft: attack epsilon exceeds the constraint budget");
  }
  BatchResult out;
  out.success.assign(static_cast<std::size_t>(X.rows()), 1);
  switch (spec.kind) {
    case Kind::Fgsm:
      out.X_adv = fgsm_batch(net, X, y, spec.epsilon, c);
      break;
    case Kind::Pgd:
      out.X_adv = pgd_batch(net, X, y, spec.epsilon, spec.pgd.step, spec.pgd.iters, c);
      break;
    case Kind::Df:
      out.X_adv = deepfool_batch(net, X, y, spec.df.overshoot, spec.df.max_iters, c);
      break;
    case Kind::Cw: {
      // evasion semantics: aim for the class opposite the true label
      Vec targets(y.size());
      for (Eigen::Index r = 0; r < y.size(); ++r) targets[r] = y[r] > 0.5 ? 0.0 : 1.0;
      auto cw = cw_batch(net, X, targets, spec.cw, c);
      out.X_adv = std::move(cw.X_adv);
      out.success = std::move(cw.success);
      break;
    }
  }
  return out;
}

BatchResult craft_parallel(const ids::ParallelIds& pids, const Mat& X, const Vec& y,
                           const AttackSpec& spec, const Constraints& c) {
  check_constraints(c, X.cols());
  BatchResult out;
  out.X_adv = X;
  out.success.assign(static_cast<std::size_t>(X.rows()), 1);
  for (std::size_t k = 0; k < pids.members.size(); ++k) {
    const auto& cols = pids.clusters.clusters[k];
    Constraints slice_c;
    slice_c.max_perturbation = c.max_perturbation;
    slice_c.lo = c.lo;
    slice_c.hi = c.hi;
    slice_c.mutable_mask.reserve(cols.size());
    for (int col : cols) {
      slice_c.mutable_mask.push_back(c.mutable_mask[static_cast<std::size_t>(col)]);
    }
    const Mat slice = ids::slice_columns(X, cols);
    BatchResult member = craft(pids.members[k], slice, y, spec, slice_c);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out.X_adv.col(cols[j]) = member.X_adv.col(static_cast<Eigen::Index>(j));
    }
    for (std::size_t r = 0; r < out.success.size(); ++r) {
      out.success[r] = out.success[r] && member.success[r];
    }
  }
  return out;
}

Vec attack_parallel(const ids::ParallelIds& pids, const Vec& x, int y_true,
                    const AttackSpec& spec, const Constraints& c) {
  Vec y(1);
  y[0] = y_true;
  return craft_parallel(pids, x.transpose(), y, spec, c).X_adv.row(0).transpose();
}

}  // namespace advids::attack
