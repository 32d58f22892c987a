#pragma once

#include "ferro/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ferro {

/// Writes config.cfg, summary.csv, and per member trajectory_mNNNN.bin (+ ledger_mNNNN.csv).
int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);

/// Runs the property and audit suite. Writes verify_report.csv and verify_failures.json.
/// Exit 1 on a failed audit, 2 when existing artifacts in out_dir belong to a different config.
int cmd_verify(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);

/// Scans diagnostics.sweep_lambdas; writes sweep.csv.
int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);

/// Prints header and summary of trajectory files or ledger CSVs; checks hashes when a config is given.
int cmd_inspect(const std::vector<std::string>& files, const ExperimentConfig* cfg, std::ostream& log);

/// The verify suite without file output.
std::vector<EstimateReport> verify_suite(const ExperimentConfig& cfg, std::ostream& log);

/// Trajectory files in dir whose header hash differs from the config's.
std::vector<std::string> mismatched_artifacts(const ExperimentConfig& cfg, const std::string& dir);

}  // namespace ferro
