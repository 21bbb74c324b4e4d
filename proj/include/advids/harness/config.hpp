#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advids/attack/attacks.hpp"
#include "advids/net/train.hpp"

namespace advids::harness {

// Mirrors the CLI flags and the JSON config file (see README for the
// schema). Relative data paths resolve against $ADVIDS_DATA_DIR.
struct ExperimentConfig {
  // data
  std::string dialect = "nslkdd";
  std::string train_path = "train.csv";
  std::string test_path = "test.csv";
  int max_train_rows = 200000;  // stratified subsample caps
  int max_test_rows = 40000;

  // design
  std::string design = "serial";  // serial | parallel
  std::string cluster_method = "distribution";
  int cluster_k = 9;

  // attacks
  std::vector<std::string> attacks = {"fgsm", "pgd", "cw", "df"};
  double epsilon = 0.1;
  double pgd_step = 0.02;
  int pgd_iters = 10;
  double df_overshoot = 0.02;
  int df_max_iters = 50;
  double cw_kappa = 0.0;
  double cw_c = 1.0;
  int cw_iters = 100;
  double cw_step = 0.01;
  int cw_bss = 5;
  // adversarial-set sizes (desk scale); cw gets smaller pools
  int adv_train_rows = 3000;
  int adv_eval_rows = 1500;
  int cw_train_rows = 1200;
  int cw_eval_rows = 600;

  // detectors / fusion
  std::string transfer_mode = "dft";
  std::vector<std::string> fusion_rules = {"majority", "bayes_avg", "dempster"};

  // training
  int serial_epochs = 50;
  int parallel_epochs = 30;
  int detector_epochs = 30;
  int eval_interval = 10;
  int batch_size = 128;
  double learning_rate = 1e-3;
  std::string optimizer = "adam";

  // run
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::string out_dir = "out";
  unsigned workers = 0;  // 0 = hardware concurrency

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  void save(const std::string& path) const;

  std::uint64_t config_hash() const;

  // resolved input paths ($ADVIDS_DATA_DIR for relative ones)
  std::string resolved_train_path() const;
  std::string resolved_test_path() const;

  bool parallel_design() const;
  net::TrainConfig ids_train_config(std::uint64_t seed) const;
  net::TrainConfig detector_train_config(std::uint64_t seed) const;
  attack::AttackSpec attack_spec(attack::Kind kind) const;

  void validate() const;
};

extern const char* kDataDirEnvVar;  // "ADVIDS_DATA_DIR"

}  // namespace advids::harness
