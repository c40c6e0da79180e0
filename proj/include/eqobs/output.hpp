#pragma once

// Run artifacts: trajectory.csv, trajectory.svg, lyapunov.svg, summary.json.
//
// CSV columns, in order:
//   t
//   true_P_<r><c>   n*n entries of P, row-major
//   true_V_<i>      d algebra coordinates of V
//   est_P_<r><c>, est_V_<i>   same for the estimate φ(X̂, ξ°)
//   lyapunov, lyapunov_rate, err_A_norm, err_a_norm
//   residual_true, residual_observer, residual_lifted
//   lift_deviation, A_norm, A_inv_norm
// Values are printed with 17 significant digits so they parse back exactly.

#include <filesystem>
#include <string>
#include <vector>

#include "eqobs/scenario.hpp"

namespace eqobs {

std::vector<std::string> csv_header(int n, int d);
void write_csv(const std::vector<TrajectoryRecord>& records, const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

/// True (blue) and estimated (red) planar paths; ★ marks the start, ○ the end.
/// The planar coordinates are P(0, n-1), P(1, n-1).
void write_trajectory_svg(const std::vector<TrajectoryRecord>& records,
                          const std::filesystem::path& path);
/// log10 L(t) against t.
void write_lyapunov_svg(const std::vector<TrajectoryRecord>& records,
                        const std::filesystem::path& path);
void write_summary_json(const ScenarioSummary& summary, const std::filesystem::path& path,
                        const std::string& config_hash = {});

/// Writes all four artifacts into out_dir (created if missing). Throws Error
/// when records is empty or the directory is unwritable.
std::vector<std::filesystem::path> emit_outputs(const std::vector<TrajectoryRecord>& records,
                                                const std::filesystem::path& out_dir,
                                                const std::string& config_hash = {});

}  // namespace eqobs
