#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "openthermo/integrator.hpp"
#include "openthermo/model.hpp"

namespace openthermo {

struct RunSpec {
  double t_final = 10.0;
  IntegrationOptions integration;
  bool operator==(const RunSpec& o) const;
};

struct Scenario {
  NetworkModel model;
  RunSpec run;
};

struct SourceLocation {
  int line = 0;    ///< 1-based
  int column = 0;  ///< 1-based, 0 when the whole line/section is meant
};

struct Diagnostic {
  SourceLocation where;
  std::string message;
  std::string to_string() const;
};

/// Every syntax and semantic problem found in a scenario document.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Parses the line-oriented scenario format:
///
///   # comment
///   [gas air]
///   R = 8.314462618
///   [compartment tank]
///   V = 1
///   N0 = 40
///   T0 = 300            # or S0 = <entropy>
///   [port in]
///   compartment = tank
///   J = ramp 0 0.1 0 1  # const <x> | ramp <x0> <x1> <t0> <t1> | table <path> | <x>
///   [run]
///   class = simple_single
///
/// Table paths are resolved against `base_dir`. Throws ScenarioError with
/// located diagnostics; the resulting model always passes validate().
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = ".");

Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text for a scenario; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

/// Shortest decimal string that reads back to the same double.
std::string format_number(double x);

}  // namespace openthermo
