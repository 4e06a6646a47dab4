#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "openthermo/gas.hpp"
#include "openthermo/time_function.hpp"

namespace openthermo {

enum class SystemClass { simple_single, simple_mechanical, simple_diffusion, non_simple };

std::string_view to_string(SystemClass c);
std::optional<SystemClass> parse_system_class(std::string_view name);

struct CompartmentSpec {
  std::string id;
  double V = 1.0;   ///< fixed volume (initial volume for the piston class), m^3
  double S0 = 0.0;  ///< initial entropy, J/K
  double N0 = 1.0;  ///< initial amount, mol
  bool operator==(const CompartmentSpec&) const = default;
};

/// Matter port. J > 0 is inflow at the prescribed (T_in, p_in); J <= 0 is
/// outflow carrying the compartment's own state.
struct PortSpec {
  std::string id;
  std::string compartment;
  TimeFunction J;
  TimeFunction T_in = TimeFunction::constant(300.0);
  TimeFunction p_in = TimeFunction::constant(1.0e5);
  bool operator==(const PortSpec&) const = default;
};

/// Heat source delivering entropy flow J_S at temperature T_H.
struct HeatSourceSpec {
  std::string id;
  std::string compartment;
  TimeFunction J_S;
  TimeFunction T_H = TimeFunction::constant(300.0);
  bool operator==(const HeatSourceSpec&) const = default;
};

enum class CouplingKind { diffusion_G, onsager_2x2 };

/// 2x2 phenomenological matrix, heat row first: [[HH, HM], [MH, MM]].
struct OnsagerMatrix {
  double HH = 0.0;
  double HM = 0.0;
  double MH = 0.0;
  double MM = 0.0;
  bool operator==(const OnsagerMatrix&) const = default;
};

/// Symmetric and positive semi-definite, both to `rel_tol` times the norm.
bool onsager_symmetric(const OnsagerMatrix& L, double rel_tol = 1e-12);
bool onsager_psd(const OnsagerMatrix& L, double rel_tol = 1e-12);

struct CouplingSpec {
  std::string id;
  std::string first;
  std::string second;
  CouplingKind kind = CouplingKind::diffusion_G;
  double G = 0.0;  ///< mol^2 K / (J s), diffusion_G only
  OnsagerMatrix L;  ///< onsager_2x2 only
  bool operator==(const CouplingSpec&) const = default;
};

/// Piston of mass M on a cylinder of section A; the gas volume is A*q.
struct MechanicsSpec {
  double M = 1.0;
  double A_section = 1.0;
  double lambda_fr = 0.0;
  TimeFunction F_ext_q = TimeFunction::constant(0.0);
  TimeFunction F_ext_x = TimeFunction::constant(0.0);
  double q0 = 1.0;
  double qdot0 = 0.0;
  double x0 = 0.0;
  double xdot0 = 0.0;
  /// Inflow velocity per port id; ports not listed inject at rest.
  std::vector<std::pair<std::string, TimeFunction>> port_velocities;
  bool operator==(const MechanicsSpec&) const = default;

  const TimeFunction* velocity_of(std::string_view port_id) const;
};

struct NetworkModel {
  GasSpec gas;
  SystemClass system_class = SystemClass::simple_single;
  std::vector<CompartmentSpec> compartments;
  std::vector<PortSpec> ports;
  std::vector<HeatSourceSpec> sources;
  std::vector<CouplingSpec> couplings;
  std::optional<MechanicsSpec> mechanics;

  bool operator==(const NetworkModel&) const = default;

  /// Position of a compartment in declaration order, if present.
  std::optional<std::size_t> compartment_index(std::string_view id) const;
  /// True when the model exchanges neither matter, heat nor work.
  bool isolated() const;
};

struct Violation {
  std::string entity;
  std::string rule;
  std::string message() const { return entity + ": " + rule; }
};

std::vector<Violation> validate(const NetworkModel& model);
/// Throws ValidationError when validate() reports anything.
void require_valid(const NetworkModel& model);

enum class SlotKind { S, N, q, qdot, x, xdot, Sigma, Gamma, W };

struct Slot {
  SlotKind kind;
  int compartment;  ///< 0-based compartment, or -1 for whole-system slots
  std::string label;
};

/// Mapping between the flat state vector and named quantities. A pure
/// function of the system class and declaration order.
class StateLayout {
 public:
  static StateLayout for_model(const NetworkModel& model);

  std::size_t size() const noexcept { return slots_.size(); }
  const std::vector<Slot>& slots() const noexcept { return slots_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  std::size_t compartments() const noexcept { return K_; }
  /// 1 for the simple classes (one shared entropy), K for non-simple.
  std::size_t entropy_count() const noexcept { return entropies_; }
  bool has_mechanics() const noexcept { return mech_; }

  std::size_t S(std::size_t i = 0) const { return s_off_ + i; }
  std::size_t N(std::size_t k) const { return n_off_ + k; }
  std::size_t q() const { return mech_off_; }
  std::size_t qdot() const { return mech_off_ + 1; }
  std::size_t x() const { return mech_off_ + 2; }
  std::size_t xdot() const { return mech_off_ + 3; }
  std::size_t Sigma(std::size_t i = 0) const { return sigma_off_ + i; }
  std::size_t Gamma(std::size_t i = 0) const { return gamma_off_ + i; }
  std::size_t W(std::size_t k) const { return w_off_ + k; }

  bool operator==(const StateLayout& other) const;

 private:
  std::vector<Slot> slots_;
  std::size_t K_ = 0, entropies_ = 0;
  bool mech_ = false;
  std::size_t s_off_ = 0, n_off_ = 0, mech_off_ = 0, sigma_off_ = 0, gamma_off_ = 0, w_off_ = 0;
};

struct MechanicalState {
  double q = 0.0, qdot = 0.0, x = 0.0, xdot = 0.0;
  bool operator==(const MechanicalState&) const = default;
};

/// Labeled view of a state vector.
struct StateView {
  std::vector<double> S;      ///< one entry (simple classes) or K (non-simple)
  std::vector<double> N;      ///< K entries
  std::optional<MechanicalState> mech;
  std::vector<double> Sigma;  ///< same length as S
  std::vector<double> Gamma;  ///< same length as S
  std::vector<double> W;      ///< K entries
  bool operator==(const StateView&) const = default;
};

StateView unpack(const StateLayout& layout, std::span<const double> y);
std::vector<double> pack(const StateLayout& layout, const StateView& view);

struct SystemState {
  double t = 0.0;
  std::vector<double> y;
  std::shared_ptr<const StateLayout> layout;
};

/// Flat initial vector: S0/N0/mechanics initials, Sigma = Gamma = W = 0.
SystemState initial_state(const NetworkModel& model);

}  // namespace openthermo
