#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>

#include "openthermo/audit.hpp"
#include "openthermo/demos.hpp"
#include "openthermo/errors.hpp"
#include "openthermo/scenario.hpp"
#include "openthermo/simulation.hpp"
#include "openthermo/trajectory_io.hpp"

namespace openthermo::cli {

namespace {

struct Failure {
  int code;
  std::string message;
};

nlohmann::json to_json(const CheckResult& c) {
  nlohmann::json j;
  j["check"] = c.check;
  j["max_violation"] = c.max_violation;
  j["t"] = c.t;
  j["tolerance"] = c.tolerance;
  j["verdict"] = c.passed ? "pass" : "fail";
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

nlohmann::json to_json(const AuditReport& r) {
  nlohmann::json j;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  j["verdict"] = r.passed() ? "pass" : "fail";
  return j;
}

void print_report(const AuditReport& r, bool json, std::ostream& out) {
  if (json)
    out << to_json(r).dump(2) << '\n';
  else
    out << r.to_text();
}

Scenario load(const std::string& path) {
  try {
    return load_scenario(path);
  } catch (const ScenarioError& e) {
    std::string msg;
    for (const auto& d : e.diagnostics()) msg += path + ":" + d.to_string() + "\n";
    throw Failure{usage_error, msg};
  }
}

void check_run(const RunSpec& run) {
  std::string msg;
  if (!(run.t_final > 0.0)) msg += "t_final must be positive\n";
  for (const auto& v : run.integration.violations()) msg += v + "\n";
  if (!msg.empty()) throw Failure{usage_error, msg};
}

void write_csv(const Trajectory& traj, const NetworkModel& model, const std::string& path,
               std::ostream& out) {
  if (path.empty() || path == "-") {
    write_trajectory(traj, model, out);
    return;
  }
  write_trajectory(traj, model, std::filesystem::path(path));
}

void require_completed(const Trajectory& traj, std::ostream& err) {
  if (traj.completed()) return;
  err << "integration stopped at t=" << format_number(traj.termination.t) << ": "
      << traj.termination.reason << '\n';
  throw Failure{runtime_error, ""};
}

struct SimulateArgs {
  std::string scenario;
  std::string out;
  std::optional<double> tf, dt;
  std::optional<std::string> method;
};

int run_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  Scenario s = load(a.scenario);
  if (a.tf) s.run.t_final = *a.tf;
  if (a.dt) s.run.integration.sample_dt = *a.dt;
  if (a.method) s.run.integration.method = *parse_method(*a.method);
  check_run(s.run);
  const Trajectory traj = simulate(s.model, s.run.t_final, s.run.integration);
  write_csv(traj, s.model, a.out, out);
  if (!a.out.empty() && a.out != "-")
    err << "wrote " << traj.samples.size() << " samples to " << a.out << '\n';
  require_completed(traj, err);
  return ok;
}

int run_audit(const std::string& path, bool json, std::ostream& out) {
  const Scenario s = load(path);
  check_run(s.run);
  const AuditReport r = run_audits(s.model, s.run.t_final, s.run.integration);
  print_report(r, json, out);
  return r.passed() ? ok : audit_failed;
}

int run_demo(const std::string& name, const std::string& out_path, bool print, bool json,
             std::ostream& out, std::ostream& err) {
  const std::vector<std::string>& names = demo_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string msg = "unknown demo '" + name + "'; available:";
    for (const auto& n : names) msg += " " + n;
    throw Failure{usage_error, msg + "\n"};
  }
  if (print) {
    out << demo_text(name);
    return ok;
  }
  const Scenario s = demo_scenario(name);
  const Trajectory traj = simulate(s.model, s.run.t_final, s.run.integration);
  const std::string path = out_path.empty() ? name + ".csv" : out_path;
  write_trajectory(traj, s.model, std::filesystem::path(path));
  err << "wrote " << traj.samples.size() << " samples to " << path << '\n';
  require_completed(traj, err);
  const AuditReport r = run_audits(s.model, s.run.t_final, s.run.integration);
  print_report(r, json, out);
  return r.passed() ? ok : audit_failed;
}

int run_derive(const std::string& path, bool json, std::ostream& out) {
  const Scenario s = load(path);
  if (!supports_cross_validation(s.model))
    throw Failure{usage_error, "derive: class " + std::string(to_string(s.model.system_class)) +
                                   " has no variational embedding (supported: simple_single, "
                                   "simple_mechanical)\n"};
  AuditReport r;
  r.checks.push_back(cross_validation_audit(s.model));
  print_report(r, json, out);
  return r.passed() ? ok : audit_failed;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate and audit open thermodynamic compartment networks", "openthermo"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "integrate a scenario and write the CSV trajectory");
  simulate_cmd->add_option("scenario", sim.scenario, "scenario file")->required();
  simulate_cmd->add_option("--out", sim.out, "CSV output path (default: standard output)");
  simulate_cmd->add_option("--tf", sim.tf, "final time [s]");
  simulate_cmd->add_option("--dt", sim.dt, "sample interval [s]");
  simulate_cmd->add_option("--method", sim.method, "rk4 or rk45")
      ->check(CLI::IsMember({"rk4", "rk45"}));

  std::string audit_path;
  bool audit_json = false;
  auto* audit_cmd = app.add_subcommand("audit", "run every applicable audit on a scenario");
  audit_cmd->add_option("scenario", audit_path, "scenario file")->required();
  audit_cmd->add_flag("--json", audit_json, "structured report");

  std::string demo_name, demo_out;
  bool demo_print = false, demo_json = false;
  auto* demo_cmd = app.add_subcommand("demo", "run a built-in example: simulate, write CSV, audit");
  demo_cmd->add_option("name", demo_name, "demo name")->required();
  demo_cmd->add_option("--out", demo_out, "CSV output path (default: <name>.csv)");
  demo_cmd->add_flag("--print", demo_print, "print the scenario text and exit");
  demo_cmd->add_flag("--json", demo_json, "structured report");

  std::string derive_path;
  bool derive_json = false;
  auto* derive_cmd = app.add_subcommand("derive", "cross-check against the variational solver");
  derive_cmd->add_option("scenario", derive_path, "scenario file")->required();
  derive_cmd->add_flag("--json", derive_json, "structured report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return usage_error;
  }

  try {
    if (*simulate_cmd) return run_simulate(sim, out, err);
    if (*audit_cmd) return run_audit(audit_path, audit_json, out);
    if (*demo_cmd) return run_demo(demo_name, demo_out, demo_print, demo_json, out, err);
    if (*derive_cmd) return run_derive(derive_path, derive_json, out);
  } catch (const Failure& f) {
    err << f.message;
    return f.code;
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) err << v << '\n';
    return usage_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return runtime_error;
  }
  return usage_error;
}

}  // namespace openthermo::cli
