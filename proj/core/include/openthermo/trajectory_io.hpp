#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "openthermo/model.hpp"
#include "openthermo/simulation.hpp"

namespace openthermo {

/// Column names in file order:
///   t, S[k] N[k] T[k] p[k] mu[k] per compartment, q qdot x xdot (piston),
///   Sigma, I, E, P_W, P_H, P_M, firstlaw_residual.
std::vector<std::string> trajectory_columns(const NetworkModel& model);

/// CSV with a header row, LF line endings and shortest round-trip numbers.
void write_trajectory(const Trajectory& traj, const NetworkModel& model, std::ostream& out);
/// Throws std::runtime_error naming the path on I/O failure.
void write_trajectory(const Trajectory& traj, const NetworkModel& model,
                      const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a column; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace openthermo
