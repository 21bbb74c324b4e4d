#pragma once

#include <array>
#include <map>
#include <optional>

#include "advids/data/advset.hpp"
#include "advids/data/load.hpp"
#include "advids/data/preprocess.hpp"
#include "advids/detect/bank.hpp"
#include "advids/fuse/fusion.hpp"
#include "advids/harness/config.hpp"

namespace advids::harness {

// evaluation attack order used by every table
constexpr std::array<attack::Kind, 4> kAttackOrder = {
    attack::Kind::Fgsm, attack::Kind::Pgd, attack::Kind::Cw, attack::Kind::Df};

// detector training rows: the four attack-specific sets plus the balanced set
constexpr int kBalancedRow = 4;
extern const std::array<const char*, 5> kTrainRowNames;

struct TrainedModel {
  bool parallel = false;
  ids::SerialIds serial;
  ids::ParallelIds par;

  Mat classify_proba(const Mat& X) const;
  Vec hard_labels(const Mat& X) const;
  std::uint64_t fingerprint() const;
};

// everything derived for one seed: the trained IDS, the adversarial
// matrices (aligned to subsampled source rows) and the detector datasets
struct SeedArtifacts {
  std::uint64_t seed = 0;
  TrainedModel model;
  std::vector<Eigen::Index> train_idx, eval_idx;  // subsample into the splits
  std::array<Mat, 4> adv_train, adv_eval;         // cw pools are prefix-sized
  std::array<data::AdvDataset, 5> det_train, det_eval;
};

struct AttackImpact {
  std::vector<std::string> rows;             // "clean" + configured attacks
  std::vector<ids::Metrics> mean;            // seed means, aligned with rows
  std::vector<std::vector<ids::Metrics>> per_seed;
};

struct CrossDetection {
  std::vector<std::string> row_names;     // training sets
  std::vector<std::string> col_names;     // evaluation attacks
  std::vector<Mat> per_detector;          // seed-mean detection rates
  std::map<std::string, Mat> per_rule;    // fusion rule -> seed-mean matrix
};

struct BaselineResult {
  double detection_rate = 0.0;  // seed mean
  std::vector<double> per_seed;
};

class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg);

  const ExperimentConfig& config() const { return cfg_; }
  const data::LabeledDataset& train_data();
  const data::LabeledDataset& test_data();
  const cluster::FeatureClusters& feature_clusters();
  attack::Constraints constraints();

  // preprocess, persist the normalized datasets + schema (+ cluster map)
  void prepare(bool persist = true);

  SeedArtifacts& artifacts(std::size_t seed_index);
  TrainedModel train_model(std::uint64_t seed);

  AttackImpact run_attack_impact();
  CrossDetection run_cross_detection();
  BaselineResult run_advtrain_baseline();

  // end-to-end: prepare, all experiments, reports; returns the report dir
  std::string run_all();

  void persist_models();

  // fuse one detector-probability row with saturation clamping (exactly 0/1
  // sigmoid outputs would otherwise produce spurious total conflict)
  static bool fused_label(fuse::Rule rule, const std::vector<double>& p);

 private:
  void ensure_data();
  Mat craft_cached(const TrainedModel& model, const Mat& src, const Vec& y,
                   attack::Kind kind, const char* tag);
  void build_adv_sets(SeedArtifacts& art);

  ExperimentConfig cfg_;
  std::optional<data::LabeledDataset> train_, test_;
  std::optional<cluster::FeatureClusters> clusters_;
  std::map<std::size_t, SeedArtifacts> artifacts_;
};

// stratified subsample of `want` rows (seeded, sorted ascending)
std::vector<Eigen::Index> stratified_sample(const Vec& y, Eigen::Index want,
                                            std::uint64_t seed);

Mat take_rows(const Mat& X, const std::vector<Eigen::Index>& idx);
Vec take_rows(const Vec& y, const std::vector<Eigen::Index>& idx);

}  // namespace advids::harness
