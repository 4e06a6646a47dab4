#include "openthermo/trajectory_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "openthermo/scenario.hpp"

namespace openthermo {

std::vector<std::string> trajectory_columns(const NetworkModel& model) {
  std::vector<std::string> cols{"t"};
  for (std::size_t k = 1; k <= model.compartments.size(); ++k) {
    const std::string i = "[" + std::to_string(k) + "]";
    for (const char* name : {"S", "N", "T", "p", "mu"}) cols.push_back(name + i);
  }
  if (model.system_class == SystemClass::simple_mechanical) {
    for (const char* name : {"q", "qdot", "x", "xdot"}) cols.emplace_back(name);
  }
  for (const char* name : {"Sigma", "I", "E", "P_W", "P_H", "P_M", "firstlaw_residual"}) {
    cols.emplace_back(name);
  }
  return cols;
}

void write_trajectory(const Trajectory& traj, const NetworkModel& model, std::ostream& out) {
  const auto cols = trajectory_columns(model);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  const StateLayout& L = *traj.layout;
  for (const auto& s : traj.samples) {
    const Diagnostics& d = s.diagnostics;
    std::vector<double> row{s.t};
    for (const auto& c : d.compartments) {
      row.insert(row.end(), {c.S, c.N, c.state.T, c.state.p, c.state.mu});
    }
    if (L.has_mechanics()) {
      row.insert(row.end(), {s.y[L.q()], s.y[L.qdot()], s.y[L.x()], s.y[L.xdot()]});
    }
    double sigma = 0.0;
    for (std::size_t i = 0; i < L.entropy_count(); ++i) sigma += s.y[L.Sigma(i)];
    row.insert(row.end(), {sigma, d.I, d.E, d.P_W, d.P_H, d.P_M, d.first_law_residual});
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void write_trajectory(const Trajectory& traj, const NetworkModel& model,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_trajectory(traj, model, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
      const std::size_t c = s.find(',', pos);
      out.push_back(s.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    return out;
  };
  if (!std::getline(in, line)) return t;
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw std::runtime_error("malformed CSV cell '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != t.header.size()) throw std::runtime_error("CSV row has the wrong number of cells");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace openthermo
