#pragma once

#include "advids/data/dataset.hpp"

namespace advids::data {

// Fit preprocessing on (typically) the training split: drop flagged rows,
// one-hot expand categoricals with a lexicographically sorted vocabulary,
// min-max scale numerics to [0,1], binarize labels (benign vs everything
// else) and populate the mutability mask from the dialect rules.
LabeledDataset preprocess(const RawRecords& raw);

// Apply an existing schema (training statistics) to another split. Values
// outside the fitted range are clipped to [0,1]; categories unseen at fit
// time produce an all-zero one-hot group.
LabeledDataset preprocess_with(const RawRecords& raw, const FeatureSchema& schema);

// benign label string for a dialect ("normal" / "BENIGN")
bool is_benign_label(Dialect dialect, const std::string& label);

}  // namespace advids::data
