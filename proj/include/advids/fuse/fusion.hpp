#pragma once

#include <string>
#include <vector>

#include "advids/types.hpp"

namespace advids::fuse {

// Mass function over the frame {clean, adversarial}; m_omega is the
// ignorance mass on the whole frame. The empty set carries no mass by
// construction.
struct BeliefMass {
  double m_clean = 0.0;
  double m_adv = 0.0;
  double m_omega = 1.0;  // vacuous by default
};

bool is_valid_mass(const BeliefMass& m, double tol = 1e-9);

enum class Rule : std::uint8_t { Majority = 0, BayesAvg = 1, Dempster = 2 };

const char* rule_name(Rule r);
Rule rule_from_name(const std::string& name);

struct FusionDecision {
  bool adversarial = false;
  double score = 0.0;  // rule-specific confidence in [0,1]
  Rule rule = Rule::Majority;
};

// Thresholded votes; ties go to adversarial (false alarms are preferred to
// missed evasions). Score is the adversarial vote fraction.
FusionDecision fuse_majority(const std::vector<double>& p, double threshold = 0.5);

// Mean adversarial probability; the 0.5 boundary counts as adversarial.
FusionDecision fuse_bayes_avg(const std::vector<double>& p);

// Confidence-discounted mass from one detector probability:
// c = |2p - 1|, m_adv = p*c, m_clean = (1-p)*c, m_omega = 1-c.
BeliefMass to_bba(double p_adv);

// Dempster's rule for the two-element frame; throws ConflictError on total
// conflict (normalizer 1-k vanishes).
BeliefMass dempster_combine(const BeliefMass& a, const BeliefMass& b);

// Fold dempster_combine over to_bba(p_i) and decide through the pignistic
// probability BetP(adv) = m_adv + m_omega / 2 (0.5 boundary -> adversarial).
FusionDecision fuse_dempster(const std::vector<double>& p);

}  // namespace advids::fuse
