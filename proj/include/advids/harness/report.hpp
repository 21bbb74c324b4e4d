#pragma once

#include "advids/harness/experiment.hpp"

namespace advids::harness::report {

// Deterministic report bundle: CSV + markdown tables, plot-data series and
// the run manifest (config dump, config hash, seeds, version). Numbers are
// printed with 4 decimal places; identical inputs give byte-identical files.
void emit_report(const ExperimentConfig& cfg, const AttackImpact& impact,
                 const CrossDetection* cross, const BaselineResult* baseline,
                 const std::string& report_dir);

void write_matrix_csv(const std::string& path, const std::string& corner,
                      const std::vector<std::string>& row_names,
                      const std::vector<std::string>& col_names, const Mat& values);

}  // namespace advids::harness::report
