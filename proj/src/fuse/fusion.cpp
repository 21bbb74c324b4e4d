#include "advids/fuse/fusion.hpp"

#include <cmath>

namespace advids::fuse {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Majority: return "majority";
    case Rule::BayesAvg: return "bayes_avg";
    case Rule::Dempster: return "dempster";
  }
  return "?";
}

Rule rule_from_name(const std::string& name) {
  if (name == "majority") return Rule::Majority;
  if (name == "bayes_avg") return Rule::BayesAvg;
  if (name == "dempster") return Rule::Dempster;
  throw ConfigError("unknown fusion rule: " + name);
}

bool is_valid_mass(const BeliefMass& m, double tol) {
  if (m.m_clean < -tol || m.m_adv < -tol || m.m_omega < -tol) return false;
  return std::abs(m.m_clean + m.m_adv + m.m_omega - 1.0) <= tol;
}

FusionDecision fuse_majority(const std::vector<double>& p, double threshold) {
  if (p.empty()) throw DataError("fuse_majority: empty probability vector");
  std::size_t votes_adv = 0;
  for (double v : p) {
    if (v >= threshold) ++votes_adv;
  }
  const std::size_t votes_clean = p.size() - votes_adv;
  FusionDecision d;
  d.rule = Rule::Majority;
  d.adversarial = votes_adv >= votes_clean;  // tie -> adversarial
  d.score = static_cast<double>(votes_adv) / static_cast<double>(p.size());
  return d;
}

FusionDecision fuse_bayes_avg(const std::vector<double>& p) {
  if (p.empty()) throw DataError("fuse_bayes_avg: empty probability vector");
  double total = 0.0;
  for (double v : p) total += v;
  const double mean = total / static_cast<double>(p.size());
  FusionDecision d;
  d.rule = Rule::BayesAvg;
  d.adversarial = mean >= 0.5;
  d.score = mean;
  return d;
}

BeliefMass to_bba(double p_adv) {
  if (!(p_adv >= 0.0 && p_adv <= 1.0)) {
    throw DataError("to_bba: probability outside [0, 1]");
  }
  const double confidence = std::abs(2.0 * p_adv - 1.0);
  BeliefMass m;
  m.m_adv = p_adv * confidence;
  m.m_clean = (1.0 - p_adv) * confidence;
  m.m_omega = 1.0 - confidence;
  return m;
}

BeliefMass dempster_combine(const BeliefMass& a, const BeliefMass& b) {
  if (!is_valid_mass(a) || !is_valid_mass(b)) {
    throw DataError("dempster_combine: invalid mass function");
  }
  const double conflict = a.m_clean * b.m_adv + a.m_adv * b.m_clean;
  const double norm = 1.0 - conflict;
  if (norm <= 1e-12) {
    throw ConflictError("dempster_combine: total conflict between sources");
  }
  BeliefMass out;
  out.m_clean = (a.m_clean * b.m_clean + a.m_clean * b.m_omega + a.m_omega * b.m_clean) / norm;
  out.m_adv = (a.m_adv * b.m_adv + a.m_adv * b.m_omega + a.m_omega * b.m_adv) / norm;
  out.m_omega = (a.m_omega * b.m_omega) / norm;
  // the unnormalized masses sum to 1-k exactly in real arithmetic; remove the
  // float drift that builds up when k is close to 1
  const double sum = out.m_clean + out.m_adv + out.m_omega;
  out.m_clean /= sum;
  out.m_adv /= sum;
  out.m_omega /= sum;
  return out;
}

FusionDecision fuse_dempster(const std::vector<double>& p) {
  if (p.empty()) throw DataError("fuse_dempster: empty probability vector");
  BeliefMass acc;  // vacuous identity
  for (std::size_t i = 0; i < p.size(); ++i) {
    try {
      acc = dempster_combine(acc, to_bba(p[i]));
    } catch (const ConflictError&) {
      throw ConflictError(
          "fuse_dempster: total conflict between detector " + std::to_string(i) +
          " and the combination of detectors 0.." + std::to_string(i - 1));
    }
  }
  const double betp = acc.m_adv + 0.5 * acc.m_omega;
  FusionDecision d;
  d.rule = Rule::Dempster;
  d.adversarial = betp >= 0.5;
  d.score = betp;
  return d;
}

}  // namespace advids::fuse
