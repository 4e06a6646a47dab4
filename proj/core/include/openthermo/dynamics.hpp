#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "openthermo/gas.hpp"
#include "openthermo/model.hpp"

namespace openthermo {

/// Single-sign RHS corruptions used to prove the audits are not vacuous.
/// Diagnostics are always evaluated with Mutation::none.
enum class Mutation {
  none,
  flip_port_inflow,             ///< port flux enters the mole balance with the wrong sign
  flip_port_thermal_term,       ///< J (H - T s - mu) enters T dS/dt with the wrong sign
  flip_port_potential,          ///< J (H - T s + mu): breaks reference-state invariance
  drop_port_entropy_advection,  ///< T sum s^a J^a missing from T dS/dt
  drop_source_entropy,          ///< T sum J_S^b missing from T_k dS_k/dt
  flip_coupling_flux,           ///< matter exchange runs against the potential gradient
  flip_heat_flux,               ///< heat exchange runs from cold to hot
  flip_friction,                ///< friction accelerates the relative motion
};

std::string_view to_string(Mutation m);

struct DynamicsOptions {
  Mutation mutation = Mutation::none;
};

struct PortResolution {
  std::size_t compartment = 0;
  bool inflow = false;
  double J = 0.0;    ///< mol/s, positive into the system
  double J_S = 0.0;  ///< entropy flow, s_a * J
  double T_a = 0.0, p_a = 0.0, mu_a = 0.0, s_a = 0.0, h_a = 0.0;
  double v_a = 0.0;  ///< port velocity (piston class only)
};

struct CouplingFlux {
  std::size_t k = 0, l = 0;
  double Q = 0.0;   ///< power received by l from k through the heat channel, J^{kl}(T^l - T^k)
  double Jm = 0.0;  ///< molar flux from k to l
};

/// Heat (Q) and matter (Jm) flux of one coupling given the two compartment
/// states. Onsager: [Q; Jm] = L [1/T_l - 1/T_k; mu_k/T_k - mu_l/T_l].
/// diffusion_G: Q = 0, Jm = G (mu_k - mu_l).
CouplingFlux coupling_fluxes(const CouplingSpec& c, double T_k, double T_l, double mu_k,
                             double mu_l);

/// Contributions to the internal entropy production rate, W/K.
struct EntropyProduction {
  double friction = 0.0;         ///< lambda (qdot - xdot)^2 / T
  double velocity_mixing = 0.0;  ///< sum J M0 (v^a - xdot)^2 / (2T)
  double port_mixing = 0.0;      ///< sum J (H^a - T s^a - mu) / T
  double coupling = 0.0;         ///< diffusion and heat exchange between compartments
  double sources = 0.0;          ///< sum J_S (T_H - T) / T
  double total() const { return friction + velocity_mixing + port_mixing + coupling + sources; }
};

struct CompartmentReport {
  double S = 0.0;  ///< entropy attributed to the compartment
  double N = 0.0;
  double V = 0.0;
  MolarState state;
};

struct Diagnostics {
  double E = 0.0;        ///< total energy
  double S_total = 0.0;  ///< total entropy
  double N_total = 0.0;
  double I = 0.0;        ///< internal entropy production rate
  EntropyProduction I_terms;
  double P_W = 0.0, P_H = 0.0, P_M = 0.0;
  double E_dot = 0.0;               ///< chain rule applied to E with the assembled rates
  double first_law_residual = 0.0;  ///< E_dot - (P_W + P_H + P_M)
  double entropy_inflow = 0.0;      ///< sum of port and source entropy flows
  double molar_inflow = 0.0;        ///< sum of port molar flows
  std::vector<CompartmentReport> compartments;
};

/// Everything computed in one RHS evaluation.
struct Evaluation {
  std::vector<double> dydt;
  std::vector<PortResolution> ports;
  std::vector<CouplingFlux> couplings;
  Diagnostics diagnostics;
};

/// Assembles the state derivative and diagnostics for any system class.
/// Throws DomainError when the state leaves the physical domain
/// (N <= 0, q <= 0, non-positive temperature).
Evaluation evaluate(const NetworkModel& model, const StateLayout& layout,
                    std::span<const double> y, double t, const DynamicsOptions& options = {});

std::vector<double> rhs(const NetworkModel& model, const StateLayout& layout,
                        std::span<const double> y, double t, const DynamicsOptions& options = {});

/// Port state at time t. Inflow uses the prescribed (T_in, p_in), outflow the
/// compartment's own state.
PortResolution resolve_port(const NetworkModel& model, const StateLayout& layout,
                            std::span<const double> y, double t, std::size_t port_index);

Diagnostics power_channels(const NetworkModel& model, const StateLayout& layout,
                           std::span<const double> y, double t);

/// Per-compartment intensive state (one shared T for the simple classes).
std::vector<CompartmentReport> compartment_states(const NetworkModel& model,
                                                  const StateLayout& layout,
                                                  std::span<const double> y);

}  // namespace openthermo
