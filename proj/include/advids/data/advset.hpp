#pragma once

#include <array>

#include "advids/data/dataset.hpp"

namespace advids::data {

// Attack-specific detector dataset: the clean rows relabeled 0 plus their
// perturbed counterparts labeled 1, shuffled with `seed`. Exactly 50/50.
AdvDataset build_attack_specific(const Mat& clean_X, const Mat& adv_X,
                                 Provenance attack, std::uint64_t seed);

// Balanced detector dataset: clean half is all of clean_X; the adversarial
// half is drawn in equal quarters (+-1 row, documented order fgsm, pgd, cw,
// df) from the four attack pools.
AdvDataset build_balanced(const Mat& clean_X,
                          const std::array<Mat, 4>& per_attack,
                          std::uint64_t seed);

// documented attack order for quarter allocation
constexpr std::array<Provenance, 4> kBalancedOrder = {
    Provenance::Fgsm, Provenance::Pgd, Provenance::Cw, Provenance::Df};

}  // namespace advids::data
