#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "openthermo/ldav.hpp"
#include "openthermo/model.hpp"

namespace openthermo {

struct EmbedOptions {
  /// Reverses the sign of the affine constraint term (used to show the
  /// cross-solver check is sensitive to it).
  bool flip_B = false;
};

/// A single-compartment network written as an abstract Lagrangian system with
/// coordinates (q, x, S, N, Gamma, W, Sigma) (piston) or (S, N, Gamma, W, Sigma)
/// (fixed volume), Lagrangian L + W' N + (S - Sigma) Gamma' and one
/// nonlinear constraint.
struct EmbeddedSystem {
  LagrangianSystem system;
  std::vector<std::string> labels;
  std::shared_ptr<const NetworkModel> model;
  std::shared_ptr<const StateLayout> layout;

  /// Abstract configuration of a dynamics state vector.
  Eigen::VectorXd configuration(std::span<const double> y) const;
  /// Abstract velocity of a dynamics state; components the dynamics state does
  /// not carry (entropy, moles, displacements) are returned as zero.
  Eigen::VectorXd velocity_guess(std::span<const double> y) const;
  /// Dynamics state vector for an abstract (q, v).
  std::vector<double> to_state(const Eigen::VectorXd& q, const Eigen::VectorXd& v) const;

  bool mechanical() const { return layout->has_mechanics(); }
};

/// Throws PreconditionError for classes other than simple_single and
/// simple_mechanical.
EmbeddedSystem embed_open_system(const NetworkModel& model, const EmbedOptions& options = {});

}  // namespace openthermo
