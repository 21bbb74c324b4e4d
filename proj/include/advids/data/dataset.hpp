#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "advids/types.hpp"

namespace advids::data {

enum class Dialect : std::uint8_t { NslKdd = 0, Cicids2017 = 1 };

const char* dialect_name(Dialect d);
Dialect dialect_from_name(const std::string& name);

struct RawFeature {
  std::string name;
  bool categorical = false;
};

// Rows as parsed from disk, before any numeric conversion.
struct RawRecords {
  Dialect dialect;
  std::vector<RawFeature> features;
  std::vector<std::vector<std::string>> rows;  // feature values as strings
  std::vector<std::string> labels;             // attack-family label column
  std::vector<std::size_t> flagged;            // rows with Infinity/NaN artifacts
};

struct OneHotGroup {
  std::string source;  // raw feature name
  int begin = 0;       // expanded column range [begin, end)
  int end = 0;
};

// Expanded-column schema: one-hot layout, per-column min/max from the fit
// (training) split, and the attack mutability mask.
struct FeatureSchema {
  std::vector<RawFeature> features;
  std::vector<std::vector<std::string>> categories;  // per feature; empty if numeric
  std::vector<OneHotGroup> onehot_groups;
  std::vector<std::string> expanded_names;
  std::vector<char> mutable_mask;  // expanded width
  std::vector<double> col_min, col_max;
  Dialect dialect = Dialect::NslKdd;

  int expanded_width() const { return static_cast<int>(expanded_names.size()); }

  std::string to_json() const;
  static FeatureSchema from_json(const std::string& text);
  void save(const std::string& path) const;
  static FeatureSchema load(const std::string& path);
};

struct LabeledDataset {
  Mat X;  // rows normalized to [0,1]
  Vec y;  // 0 = benign, 1 = malicious
  FeatureSchema schema;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
};

// row provenance in adversarial detector datasets
enum class Provenance : std::uint8_t { None = 0, Fgsm = 1, Pgd = 2, Cw = 3, Df = 4 };

const char* provenance_name(Provenance p);

struct AdvDataset {
  Mat X;
  Vec y_adv;  // 0 = clean, 1 = adversarial
  std::vector<Provenance> provenance;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
};

// normalized matrix + label column persisted as CSV (UTF-8, comma, header)
void save_labeled_csv(const std::string& path, const LabeledDataset& ds);
LabeledDataset load_labeled_csv(const std::string& csv_path,
                                const std::string& schema_path);

}  // namespace advids::data
