#include "advids/harness/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "advids/version.hpp"

namespace advids::harness::report {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void write_impact_csv(const std::string& path, const AttackImpact& impact) {
  auto out = open_out(path);
  out << "dataset,precision,recall,f1\n";
  for (std::size_t r = 0; r < impact.rows.size(); ++r) {
    out << impact.rows[r] << ',' << fmt(impact.mean[r].precision) << ','
        << fmt(impact.mean[r].recall) << ',' << fmt(impact.mean[r].f1) << '\n';
  }
}

void write_impact_seeds_csv(const std::string& path, const ExperimentConfig& cfg,
                            const AttackImpact& impact) {
  auto out = open_out(path);
  out << "seed,dataset,precision,recall,f1\n";
  for (std::size_t s = 0; s < impact.per_seed.size(); ++s) {
    for (std::size_t r = 0; r < impact.rows.size(); ++r) {
      const auto& m = impact.per_seed[s][r];
      out << cfg.seeds[s] << ',' << impact.rows[r] << ',' << fmt(m.precision) << ','
          << fmt(m.recall) << ',' << fmt(m.f1) << '\n';
    }
  }
}

void write_impact_md(const std::string& path, const AttackImpact& impact) {
  auto out = open_out(path);
  out << "| dataset | precision | recall | f1 |\n";
  out << "|---|---|---|---|\n";
  for (std::size_t r = 0; r < impact.rows.size(); ++r) {
    out << "| " << impact.rows[r] << " | " << fmt(impact.mean[r].precision) << " | "
        << fmt(impact.mean[r].recall) << " | " << fmt(impact.mean[r].f1) << " |\n";
  }
}

void write_matrix_md(const std::string& path, const std::string& corner,
                     const std::vector<std::string>& row_names,
                     const std::vector<std::string>& col_names, const Mat& values) {
  auto out = open_out(path);
  out << "| " << corner;
  for (const auto& c : col_names) out << " | " << c;
  out << " |\n|";
  for (std::size_t i = 0; i <= col_names.size(); ++i) out << "---|";
  out << "\n";
  for (std::size_t r = 0; r < row_names.size(); ++r) {
    out << "| " << row_names[r];
    for (std::size_t c = 0; c < col_names.size(); ++c) {
      out << " | " << fmt(values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    out << " |\n";
  }
}

// x/y series per attack for external plotting: clean f1 vs attacked f1
void write_plot_series(const std::string& path, const AttackImpact& impact) {
  auto out = open_out(path);
  out << "attack,f1_clean,f1_attacked\n";
  for (std::size_t r = 1; r < impact.rows.size(); ++r) {
    out << impact.rows[r] << ',' << fmt(impact.mean[0].f1) << ','
        << fmt(impact.mean[r].f1) << '\n';
  }
}

}  // namespace

void write_matrix_csv(const std::string& path, const std::string& corner,
                      const std::vector<std::string>& row_names,
                      const std::vector<std::string>& col_names, const Mat& values) {
  auto out = open_out(path);
  out << corner;
  for (const auto& c : col_names) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < row_names.size(); ++r) {
    out << row_names[r];
    for (std::size_t c = 0; c < col_names.size(); ++c) {
      out << ',' << fmt(values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    out << '\n';
  }
}

void emit_report(const ExperimentConfig& cfg, const AttackImpact& impact,
                 const CrossDetection* cross, const BaselineResult* baseline,
                 const std::string& report_dir) {
  fs::create_directories(report_dir);
  const fs::path dir(report_dir);
  write_impact_csv((dir / "attack_impact.csv").string(), impact);
  write_impact_seeds_csv((dir / "attack_impact_seeds.csv").string(), cfg, impact);
  write_impact_md((dir / "attack_impact.md").string(), impact);
  fs::create_directories(dir / "plots");
  write_plot_series((dir / "plots" / "f1_drop.csv").string(), impact);

  if (cross != nullptr) {
    for (std::size_t d = 0; d < cross->per_detector.size(); ++d) {
      const std::string base = "cross_detection_detector_" + std::to_string(d);
      write_matrix_csv((dir / (base + ".csv")).string(), "train_set", cross->row_names,
                       cross->col_names, cross->per_detector[d]);
      write_matrix_md((dir / (base + ".md")).string(), "train_set", cross->row_names,
                      cross->col_names, cross->per_detector[d]);
    }
    for (const auto& [rule, values] : cross->per_rule) {
      const std::string base = "cross_detection_rule_" + rule;
      write_matrix_csv((dir / (base + ".csv")).string(), "train_set", cross->row_names,
                       cross->col_names, values);
      write_matrix_md((dir / (base + ".md")).string(), "train_set", cross->row_names,
                      cross->col_names, values);
    }
  }

  if (baseline != nullptr) {
    auto out = open_out((dir / "baseline.csv").string());
    out << "metric,value\n";
    out << "disagreement_detection_rate," << fmt(baseline->detection_rate) << '\n';
    for (std::size_t s = 0; s < baseline->per_seed.size(); ++s) {
      out << "seed_" << cfg.seeds[s] << ',' << fmt(baseline->per_seed[s]) << '\n';
    }
  }

  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = json::parse(cfg.to_json());
  char hash_buf[20];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                static_cast<unsigned long long>(cfg.config_hash()));
  manifest["config_hash"] = hash_buf;
  manifest["seeds"] = cfg.seeds;
  auto out = open_out((dir / "run_manifest.json").string());
  out << manifest.dump(2) << "\n";
}

}  // namespace advids::harness::report
