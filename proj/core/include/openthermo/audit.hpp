#pragma once

#include <string>
#include <vector>

#include "openthermo/dynamics.hpp"
#include "openthermo/embedding.hpp"
#include "openthermo/integrator.hpp"
#include "openthermo/model.hpp"
#include "openthermo/simulation.hpp"

namespace openthermo {

struct CheckResult {
  std::string check;
  double max_violation = 0.0;
  double t = 0.0;  ///< time of the worst violation
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct AuditReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  /// One line per check plus an overall verdict line.
  std::string to_text() const;
};

struct AuditTolerances {
  double first_law = 1e-6;
  double second_law = 1e-10;
  double entropy_bookkeeping = 1e-6;
  double mole_balance = 1e-6;
  double gauge = 1e-9;
  double equilibrium = 1e-6;
  double cross_validation = 1e-5;
};

/// Centered-difference dE/dt against P_W + P_H + P_M at interior samples,
/// relative to max(1, max |dE/dt|). Needs at least three samples.
CheckResult first_law_audit(const NetworkModel& model, const Trajectory& traj, double tol = 1e-6);

/// I >= -tol * scale at every sample and Sigma non-decreasing.
CheckResult second_law_audit(const NetworkModel& model, const Trajectory& traj, double tol = 1e-10);

/// Centered-difference dS_total/dt against I + port and source entropy flows.
CheckResult entropy_bookkeeping_audit(const NetworkModel& model, const Trajectory& traj,
                                      double tol = 1e-6);

/// N_total(t) - N_total(0) against the trapezoid integral of the port inflow.
CheckResult mole_balance_audit(const NetworkModel& model, const Trajectory& traj, double tol = 1e-6);

/// Reruns with shifted Gamma/W initial values and shifted reference constants
/// and compares T, p, N, I and energy differences.
CheckResult gauge_invariance_audit(const NetworkModel& model, double t_final,
                                   const IntegrationOptions& options,
                                   const DynamicsOptions& dynamics = {}, double tol = 1e-9);

/// Temperature and chemical-potential spreads must fall below tol times their
/// initial values and S_total must not decrease. Isolated models only.
CheckResult equilibrium_audit(const NetworkModel& model, const Trajectory& traj, double tol = 1e-6);

struct CrossValidationOptions {
  double h = 1e-3;
  double t_final = 1.0;
  double sample_dt = 0.1;
  EmbedOptions embed;
  DynamicsOptions dynamics;
};

/// Specialized dynamics (RK4) against the abstract Lagrangian solver on the
/// same step; maximum relative state discrepancy per component.
CheckResult cross_validation_audit(const NetworkModel& model, const CrossValidationOptions& options = {},
                                   double tol = 1e-5);

bool supports_cross_validation(const NetworkModel& model);

/// Simulates and runs every applicable audit.
AuditReport run_audits(const NetworkModel& model, double t_final, const IntegrationOptions& options,
                       const DynamicsOptions& dynamics = {}, const AuditTolerances& tol = {});

}  // namespace openthermo
