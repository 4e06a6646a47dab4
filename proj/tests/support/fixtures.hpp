#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "openthermo/gas.hpp"
#include "openthermo/model.hpp"

namespace fixtures {

inline constexpr double kR = 8.314462618;

inline openthermo::GasSpec air() {
  return openthermo::GasSpec::make(kR, 2.5 * kR, 298.15, 1e5, 6197.0, 191.6, 0.028);
}

// Ideal-gas property formulas written out independently of the library.
struct GasOracle {
  double R = kR, c_v = 2.5 * kR, T_ref = 298.15, p_ref = 1e5, u_ref = 6197.0, s_ref = 191.6;

  double c_p() const { return c_v + R; }
  double u(double T) const { return u_ref + c_v * (T - T_ref); }
  double h(double T) const { return u(T) + R * T; }
  double s(double T, double p) const { return s_ref + c_p() * std::log(T / T_ref) - R * std::log(p / p_ref); }
  double mu(double T, double p) const { return h(T) - T * s(T, p); }
  double T_from(double S, double N, double V) const {
    const double v = V / N;
    return T_ref * std::exp((S / N - s_ref + R * std::log(R * T_ref / (v * p_ref))) / c_v);
  }
  double S_from(double T, double N, double V) const { return N * s(T, N * R * T / V); }
  double U(double S, double N, double V) const { return N * u(T_from(S, N, V)); }
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

inline double rel_diff(double a, double b) {
  const double m = std::max(std::abs(a), std::abs(b));
  return m == 0.0 ? 0.0 : std::abs(a - b) / m;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline double log_uniform(std::mt19937_64& g, double lo, double hi) {
  return std::exp(uniform(g, std::log(lo), std::log(hi)));
}

inline openthermo::CompartmentSpec compartment(const std::string& id, double V, double N, double T,
                                               const openthermo::GasSpec& gas = air()) {
  return {id, V, openthermo::entropy_from_TNV(gas, T, N, V), N};
}

inline openthermo::PortSpec port(const std::string& id, const std::string& comp, double J,
                                 double T_in = 300.0, double p_in = 2e5) {
  openthermo::PortSpec p;
  p.id = id;
  p.compartment = comp;
  p.J = openthermo::TimeFunction::constant(J);
  p.T_in = openthermo::TimeFunction::constant(T_in);
  p.p_in = openthermo::TimeFunction::constant(p_in);
  return p;
}

inline openthermo::CouplingSpec diffusion(const std::string& id, const std::string& a,
                                          const std::string& b, double G) {
  openthermo::CouplingSpec c;
  c.id = id;
  c.first = a;
  c.second = b;
  c.kind = openthermo::CouplingKind::diffusion_G;
  c.G = G;
  return c;
}

inline openthermo::CouplingSpec onsager(const std::string& id, const std::string& a, const std::string& b,
                                        double HH, double HM, double MH, double MM) {
  openthermo::CouplingSpec c;
  c.id = id;
  c.first = a;
  c.second = b;
  c.kind = openthermo::CouplingKind::onsager_2x2;
  c.L = {HH, HM, MH, MM};
  return c;
}

inline openthermo::HeatSourceSpec heat_source(const std::string& id, const std::string& comp, double J_S,
                                              double T_H) {
  openthermo::HeatSourceSpec s;
  s.id = id;
  s.compartment = comp;
  s.J_S = openthermo::TimeFunction::constant(J_S);
  s.T_H = openthermo::TimeFunction::constant(T_H);
  return s;
}

inline openthermo::NetworkModel tank(double J = 0.1, double T_in = 350.0, double p_in = 2e5) {
  openthermo::NetworkModel m;
  m.gas = air();
  m.system_class = openthermo::SystemClass::simple_single;
  m.compartments = {compartment("tank", 1.0, 40.0, 300.0)};
  m.ports = {port("in", "tank", J, T_in, p_in)};
  return m;
}

inline openthermo::NetworkModel piston(double lambda_fr = 0.5, double velocity = 5.0) {
  openthermo::NetworkModel m;
  m.gas = air();
  m.system_class = openthermo::SystemClass::simple_mechanical;
  m.compartments = {compartment("cyl", 0.01, 0.4, 300.0)};
  m.ports = {port("in", "cyl", 0.01, 320.0, 1.2e5)};
  openthermo::MechanicsSpec mech;
  mech.M = 200.0;
  mech.A_section = 0.01;
  mech.lambda_fr = lambda_fr;
  mech.F_ext_q = openthermo::TimeFunction::constant(-1000.0);
  mech.q0 = 1.0;
  mech.port_velocities = {{"in", openthermo::TimeFunction::constant(velocity)}};
  m.mechanics = mech;
  return m;
}

/// Closed chain of n compartments at one temperature, unequal fillings.
inline openthermo::NetworkModel diffusion_chain(std::size_t n, double G = 1e-3) {
  openthermo::NetworkModel m;
  m.gas = air();
  m.system_class = openthermo::SystemClass::simple_diffusion;
  for (std::size_t k = 0; k < n; ++k) {
    m.compartments.push_back(compartment("c" + std::to_string(k), 1.0, 50.0 - 5.0 * k, 300.0));
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    m.couplings.push_back(diffusion("g" + std::to_string(k), "c" + std::to_string(k),
                                    "c" + std::to_string(k + 1), G));
  }
  return m;
}

/// Two compartments with their own temperatures and no ports or sources.
inline openthermo::NetworkModel heat_matter_isolated() {
  openthermo::NetworkModel m;
  m.gas = air();
  m.system_class = openthermo::SystemClass::non_simple;
  m.compartments = {compartment("hot", 1.0, 40.0, 350.0), compartment("cold", 1.0, 40.0, 300.0)};
  m.couplings = {onsager("wall", "hot", "cold", 5e6, 300.0, 300.0, 0.2)};
  return m;
}

}  // namespace fixtures
