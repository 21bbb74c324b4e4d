// advids command line: preprocess traffic corpora, train IDS models, craft
// evasion attacks, build detector datasets, train adversarial detector
// banks, run the cross-detection and baseline experiments and emit reports.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "advids/harness/report.hpp"
#include "advids/synth/synth.hpp"
#include "advids/version.hpp"

namespace fs = std::filesystem;
using advids::harness::Experiment;
using advids::harness::ExperimentConfig;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string design;
  std::vector<std::uint64_t> seeds;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config (JSON)")
      ->required();
  cmd->add_option("--out-dir", opts.out_dir, "override the config out_dir");
  cmd->add_option("--design", opts.design, "override: serial | parallel");
  cmd->add_option("--seed", opts.seeds, "override the seed list");
}

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg = ExperimentConfig::from_file(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (!opts.design.empty()) cfg.design = opts.design;
  if (!opts.seeds.empty()) cfg.seeds = opts.seeds;
  cfg.validate();
  return cfg;
}

void print_impact(const advids::harness::AttackImpact& impact) {
  for (std::size_t r = 0; r < impact.rows.size(); ++r) {
    std::printf("%-10s precision %.4f recall %.4f f1 %.4f\n", impact.rows[r].c_str(),
                impact.mean[r].precision, impact.mean[r].recall, impact.mean[r].f1);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adversarial evasion attacks and multi-detector defenses for "
               "deep network intrusion detection"};
  app.set_version_flag("--version", advids::kVersion);
  app.require_subcommand(1);

  CommonOpts opts;

  auto* cmd_prep = app.add_subcommand("preprocess", "normalize a corpus and persist it");
  add_common(cmd_prep, opts);

  auto* cmd_train = app.add_subcommand("train-ids", "train the configured IDS design");
  add_common(cmd_train, opts);

  auto* cmd_attack = app.add_subcommand("attack", "craft adversarial matrices + report IDS impact");
  add_common(cmd_attack, opts);

  auto* cmd_advsets = app.add_subcommand("build-advsets", "build detector train/eval datasets");
  add_common(cmd_advsets, opts);

  auto* cmd_dets = app.add_subcommand("train-detectors", "train a detector bank per training set");
  add_common(cmd_dets, opts);

  auto* cmd_cross = app.add_subcommand("cross-detect", "cross-detection matrices per detector and rule");
  add_common(cmd_cross, opts);

  auto* cmd_base = app.add_subcommand("baseline", "adversarial-training disagreement baseline");
  add_common(cmd_base, opts);

  auto* cmd_report = app.add_subcommand("report", "re-emit reports from a full run");
  add_common(cmd_report, opts);

  auto* cmd_all = app.add_subcommand("run-all", "full pipeline: data, models, attacks, detectors, reports");
  add_common(cmd_all, opts);

  // demo-data generator (synthetic corpora in the real on-disk dialects)
  std::string gen_dataset = "nslkdd";
  std::string gen_out = ".";
  int gen_train_rows = 6000, gen_test_rows = 2500;
  std::uint64_t gen_seed = 1;
  auto* cmd_gen = app.add_subcommand("gen-data", "write synthetic demo corpora");
  cmd_gen->add_option("--dataset", gen_dataset, "nslkdd | cicids2017");
  cmd_gen->add_option("--out", gen_out, "output directory");
  cmd_gen->add_option("--train-rows", gen_train_rows, "training rows");
  cmd_gen->add_option("--test-rows", gen_test_rows, "test rows");
  cmd_gen->add_option("--seed", gen_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) {
      fs::create_directories(gen_out);
      const fs::path dir(gen_out);
      if (gen_dataset == "nslkdd") {
        advids::synth::write_nsl_like_csv((dir / "nsl_train.csv").string(),
                                          gen_train_rows, gen_seed);
        advids::synth::write_nsl_like_csv((dir / "nsl_test.csv").string(),
                                          gen_test_rows, gen_seed + 1);
      } else if (gen_dataset == "cicids2017") {
        advids::synth::write_cic_like_csv((dir / "cic_train.csv").string(),
                                          gen_train_rows, gen_seed);
        advids::synth::write_cic_like_csv((dir / "cic_test.csv").string(),
                                          gen_test_rows, gen_seed + 1);
      } else {
        std::cerr << "unknown dataset " << gen_dataset << "\n";
        return 2;
      }
      std::cout << "wrote demo corpus to " << gen_out << "\n";
      return 0;
    }

    ExperimentConfig cfg = load_config(opts);
    Experiment exp(cfg);

    if (cmd_prep->parsed()) {
      exp.prepare(true);
      std::cout << "normalized datasets under " << cfg.out_dir << "/data\n";
    } else if (cmd_train->parsed()) {
      exp.prepare(true);
      exp.persist_models();
      std::cout << "model bundles under " << cfg.out_dir << "/models\n";
    } else if (cmd_attack->parsed()) {
      print_impact(exp.run_attack_impact());
    } else if (cmd_advsets->parsed()) {
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) exp.artifacts(s);
      std::cout << "adversarial matrices cached under " << cfg.out_dir << "/cache\n";
    } else if (cmd_dets->parsed() || cmd_cross->parsed()) {
      const auto cross = exp.run_cross_detection();
      for (const auto& [rule, m] : cross.per_rule) {
        std::cout << "rule " << rule << " (rows: train sets, cols: eval attacks)\n"
                  << m << "\n";
      }
      fs::create_directories(cfg.out_dir + "/reports");
      for (std::size_t d = 0; d < cross.per_detector.size(); ++d) {
        advids::harness::report::write_matrix_csv(
            cfg.out_dir + "/reports/cross_detection_detector_" + std::to_string(d) + ".csv",
            "train_set", cross.row_names, cross.col_names, cross.per_detector[d]);
      }
      for (const auto& [rule, m] : cross.per_rule) {
        advids::harness::report::write_matrix_csv(
            cfg.out_dir + "/reports/cross_detection_rule_" + rule + ".csv", "train_set",
            cross.row_names, cross.col_names, m);
      }
    } else if (cmd_base->parsed()) {
      const auto res = exp.run_advtrain_baseline();
      std::printf("disagreement detection rate: %.4f\n", res.detection_rate);
    } else if (cmd_report->parsed() || cmd_all->parsed()) {
      const std::string dir = exp.run_all();
      std::cout << "reports under " << dir << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
