#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace openthermo {

/// Time-dependent Lagrangian system with m nonlinear velocity constraints
///   A(t, q, v) v + B(t, q, v) = 0
/// and an external force field. Multipliers are solver outputs.
struct LagrangianSystem {
  using Scalar = std::function<double(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;
  using Matrix =
      std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;
  using Vector =
      std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;

  std::size_t n = 0;
  std::size_t m = 0;
  Scalar L;
  Matrix A;       ///< m x n
  Vector B;       ///< m
  Vector F_ext;   ///< n; may be empty (zero force)
  /// Characteristic magnitudes used to size difference steps; optional.
  Eigen::VectorXd q_scale, v_scale;
};

struct AccelResult {
  Eigen::VectorXd a;       ///< accelerations (zero in velocity-determined directions unless requested)
  Eigen::VectorXd lambda;  ///< constraint multipliers
  Eigen::VectorXd v;       ///< velocity with the velocity-determined components made consistent
  std::vector<bool> velocity_determined;  ///< coordinates with a vanishing mass row
  int newton_iterations = 0;
};

struct SolveOptions {
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  /// Relative size below which a mass-matrix row counts as zero.
  double mass_null_tol = 1e-7;
  /// Also differentiate the consistent velocity along the flow to fill a for
  /// velocity-determined coordinates (three extra solves).
  bool null_accelerations = false;
};

/// E = <dL/dv, v> - L.
double energy(const LagrangianSystem& sys, double t, const Eigen::VectorXd& q,
              const Eigen::VectorXd& v);

/// A v + B.
Eigen::VectorXd constraint_residual(const LagrangianSystem& sys, double t, const Eigen::VectorXd& q,
                                    const Eigen::VectorXd& v);

/// Mass matrix d2L/dv2 by extrapolated differences.
Eigen::MatrixXd mass_matrix(const LagrangianSystem& sys, double t, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& v);

/// Residual of d/dt(dL/dv) - dL/dq - A^T lambda - F_ext for given (a, lambda).
Eigen::VectorXd euler_lagrange_residual(const LagrangianSystem& sys, double t,
                                        const Eigen::VectorXd& q, const Eigen::VectorXd& v,
                                        const Eigen::VectorXd& a, const Eigen::VectorXd& lambda);

/// Solves the Lagrange-d'Alembert equations for the acceleration and the
/// multipliers. Regular systems: saddle-point solve with the differentiated
/// constraint. Coordinates whose mass row vanishes have their velocity fixed
/// algebraically (Newton on the corresponding equations plus the constraint).
/// Throws SolverError on singular systems or Newton failure.
AccelResult solve_accel(const LagrangianSystem& sys, double t, const Eigen::VectorXd& q,
                        const Eigen::VectorXd& v, const SolveOptions& options = {});

struct AbstractState {
  double t = 0.0;
  Eigen::VectorXd q, v;
};

struct AbstractOptions {
  double h = 1e-3;
  double sample_dt = 0.0;  ///< 0 records every step
  double proj_tol = 1e-10;
  SolveOptions solve;
};

struct AbstractTrajectory {
  std::vector<AbstractState> samples;
  std::vector<Eigen::VectorXd> multipliers;  ///< lambda at each sample
  double max_constraint_residual = 0.0;      ///< over all accepted steps
  std::size_t steps = 0;
};

/// Classical RK4 on (q' = v, v' = a) with a velocity projection after each
/// step so that |A v + B| <= proj_tol.
AbstractTrajectory integrate_abstract(const LagrangianSystem& sys, const AbstractState& start,
                                      double t_final, const AbstractOptions& options = {});

/// Makes v satisfy the constraint: velocity-determined components are
/// re-solved, the remaining ones projected by the minimum-norm correction.
Eigen::VectorXd project_velocity(const LagrangianSystem& sys, double t, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& v, const SolveOptions& options = {});

}  // namespace openthermo
