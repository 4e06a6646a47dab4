#include "openthermo/dynamics.hpp"

#include <cmath>

#include "openthermo/errors.hpp"

namespace openthermo {

std::string_view to_string(Mutation m) {
  switch (m) {
    case Mutation::none: return "none";
    case Mutation::flip_port_inflow: return "flip_port_inflow";
    case Mutation::flip_port_thermal_term: return "flip_port_thermal_term";
    case Mutation::flip_port_potential: return "flip_port_potential";
    case Mutation::drop_port_entropy_advection: return "drop_port_entropy_advection";
    case Mutation::drop_source_entropy: return "drop_source_entropy";
    case Mutation::flip_coupling_flux: return "flip_coupling_flux";
    case Mutation::flip_heat_flux: return "flip_heat_flux";
    case Mutation::flip_friction: return "flip_friction";
  }
  return "unknown";
}

CouplingFlux coupling_fluxes(const CouplingSpec& c, double T_k, double T_l, double mu_k,
                             double mu_l) {
  if (!(T_k > 0.0) || !(T_l > 0.0)) throw DomainError("coupling " + c.id + ": T must be positive");
  CouplingFlux f;
  if (c.kind == CouplingKind::diffusion_G) {
    f.Q = 0.0;
    f.Jm = c.G * (mu_k - mu_l);
    return f;
  }
  const double X_H = 1.0 / T_l - 1.0 / T_k;
  const double X_M = mu_k / T_k - mu_l / T_l;
  f.Q = c.L.HH * X_H + c.L.HM * X_M;
  f.Jm = c.L.MH * X_H + c.L.MM * X_M;
  return f;
}

namespace {

double compartment_volume(const NetworkModel& model, const StateLayout& layout,
                          std::span<const double> y, std::size_t k) {
  if (layout.has_mechanics()) {
    const double q = y[layout.q()];
    if (!(q > 0.0)) throw DomainError("piston position q must be positive (got " + std::to_string(q) + ")");
    return model.mechanics->A_section * q;
  }
  return model.compartments[k].V;
}

PortResolution resolve_with(const NetworkModel& model, const StateLayout& layout,
                            std::span<const double> y, double t, std::size_t a,
                            const std::vector<CompartmentReport>& comps) {
  const PortSpec& port = model.ports[a];
  PortResolution r;
  r.compartment = *model.compartment_index(port.compartment);
  r.J = port.J(t);
  r.inflow = r.J > 0.0;
  if (r.inflow) {
    MolarState m;
    try {
      m = molar_state_from_Tp(model.gas, port.T_in(t), port.p_in(t));
    } catch (const DomainError& e) {
      throw DomainError("port " + port.id + ": " + e.what());
    }
    r.T_a = m.T;
    r.p_a = m.p;
    r.mu_a = m.mu;
    r.s_a = m.s;
    r.h_a = m.h;
    if (model.mechanics) {
      const TimeFunction* v = model.mechanics->velocity_of(port.id);
      r.v_a = v ? (*v)(t) : 0.0;
    }
  } else {
    const MolarState& m = comps[r.compartment].state;
    r.T_a = m.T;
    r.p_a = m.p;
    r.mu_a = m.mu;
    r.s_a = m.s;
    r.h_a = m.h;
    if (layout.has_mechanics()) r.v_a = y[layout.xdot()];
  }
  r.J_S = r.s_a * r.J;
  return r;
}

}  // namespace

std::vector<CompartmentReport> compartment_states(const NetworkModel& model,
                                                  const StateLayout& layout,
                                                  std::span<const double> y) {
  if (y.size() != layout.size()) throw StructuralError("state vector does not match the layout");
  const std::size_t K = layout.compartments();
  std::vector<CompartmentReport> out(K);
  for (std::size_t k = 0; k < K; ++k) {
    out[k].N = y[layout.N(k)];
    out[k].V = compartment_volume(model, layout, y, k);
    if (!(out[k].N > 0.0)) {
      throw DomainError("compartment " + model.compartments[k].id + ": N must be positive (got " +
                        std::to_string(out[k].N) + ")");
    }
  }
  const GasSpec& gas = model.gas;
  if (model.system_class == SystemClass::non_simple) {
    for (std::size_t k = 0; k < K; ++k) {
      out[k].S = y[layout.S(k)];
      out[k].state = intensive_from_extensive(gas, out[k].S, out[k].N, out[k].V);
    }
  } else if (K == 1) {
    out[0].S = y[layout.S()];
    out[0].state = intensive_from_extensive(gas, out[0].S, out[0].N, out[0].V);
  } else {
    std::vector<double> N(K), V(K);
    for (std::size_t k = 0; k < K; ++k) {
      N[k] = out[k].N;
      V[k] = out[k].V;
    }
    const double T = shared_temperature(gas, y[layout.S()], N, V);
    for (std::size_t k = 0; k < K; ++k) {
      out[k].state = molar_state_from_Tp(gas, T, N[k] * gas.R * T / V[k]);
      out[k].S = N[k] * out[k].state.s;
    }
  }
  return out;
}

PortResolution resolve_port(const NetworkModel& model, const StateLayout& layout,
                            std::span<const double> y, double t, std::size_t port_index) {
  auto comps = compartment_states(model, layout, y);
  return resolve_with(model, layout, y, t, port_index, comps);
}

Evaluation evaluate(const NetworkModel& model, const StateLayout& layout,
                    std::span<const double> y, double t, const DynamicsOptions& options) {
  const Mutation mut = options.mutation;
  const GasSpec& gas = model.gas;
  const std::size_t K = layout.compartments();

  Evaluation ev;
  Diagnostics& d = ev.diagnostics;
  d.compartments = compartment_states(model, layout, y);
  const auto& comps = d.compartments;

  for (std::size_t a = 0; a < model.ports.size(); ++a) {
    ev.ports.push_back(resolve_with(model, layout, y, t, a, comps));
  }
  for (const auto& c : model.couplings) {
    const std::size_t k = *model.compartment_index(c.first);
    const std::size_t l = *model.compartment_index(c.second);
    CouplingFlux f = coupling_fluxes(c, comps[k].state.T, comps[l].state.T, comps[k].state.mu,
                                     comps[l].state.mu);
    f.k = k;
    f.l = l;
    if (mut == Mutation::flip_coupling_flux) f.Jm = -f.Jm;
    if (mut == Mutation::flip_heat_flux) f.Q = -f.Q;
    ev.couplings.push_back(f);
  }
  struct Source {
    std::size_t k;
    double J_S, T_H;
  };
  std::vector<Source> sources;
  for (const auto& s : model.sources) {
    Source src{*model.compartment_index(s.compartment), s.J_S(t), s.T_H(t)};
    if (!(src.T_H > 0.0)) throw DomainError("source " + s.id + ": T_H must be positive");
    sources.push_back(src);
  }

  std::vector<double>& dy = ev.dydt;
  dy.assign(layout.size(), 0.0);

  // Mole balance.
  const double inflow_sign = mut == Mutation::flip_port_inflow ? -1.0 : 1.0;
  std::vector<double> Ndot(K, 0.0);
  for (const auto& p : ev.ports) {
    Ndot[p.compartment] += inflow_sign * p.J;
    d.molar_inflow += p.J;
    d.entropy_inflow += p.J_S;
  }
  for (const auto& f : ev.couplings) {
    Ndot[f.k] -= f.Jm;
    Ndot[f.l] += f.Jm;
  }
  for (const auto& s : sources) d.entropy_inflow += s.J_S;
  for (std::size_t k = 0; k < K; ++k) {
    dy[layout.N(k)] = Ndot[k];
    d.N_total += comps[k].N;
  }

  // Port term J (H^a - T s^a - mu) as it enters the entropy equation.
  auto port_term = [&](const PortResolution& p, double T, double mu) {
    switch (mut) {
      case Mutation::flip_port_thermal_term: return -p.J * (p.h_a - T * p.s_a - mu);
      case Mutation::flip_port_potential: return p.J * (p.h_a - T * p.s_a + mu);
      default: return p.J * (p.h_a - T * p.s_a - mu);
    }
  };
  const bool advect = mut != Mutation::drop_port_entropy_advection;

  if (model.system_class == SystemClass::non_simple) {
    std::vector<double> TSdot(K, 0.0), flows(K, 0.0);
    for (const auto& f : ev.couplings) {
      TSdot[f.k] += -f.Q + f.Jm * comps[f.k].state.mu;
      TSdot[f.l] += f.Q - f.Jm * comps[f.l].state.mu;
      const double Tk = comps[f.k].state.T, Tl = comps[f.l].state.T;
      d.I_terms.coupling += f.Q * (1.0 / Tl - 1.0 / Tk) +
                            f.Jm * (comps[f.k].state.mu / Tk - comps[f.l].state.mu / Tl);
    }
    for (const auto& p : ev.ports) {
      const auto& m = comps[p.compartment].state;
      TSdot[p.compartment] += port_term(p, m.T, m.mu) + (advect ? m.T * p.J_S : 0.0);
      flows[p.compartment] += p.J_S;
      d.I_terms.port_mixing += p.J * (p.h_a - m.T * p.s_a - m.mu) / m.T;
    }
    for (const auto& s : sources) {
      const double Tk = comps[s.k].state.T;
      TSdot[s.k] += -s.J_S * (Tk - s.T_H) +
                    (mut == Mutation::drop_source_entropy ? 0.0 : Tk * s.J_S);
      flows[s.k] += s.J_S;
      d.I_terms.sources += s.J_S * (s.T_H - Tk) / Tk;
    }
    for (std::size_t k = 0; k < K; ++k) {
      const auto& m = comps[k].state;
      const double Sdot = TSdot[k] / m.T;
      dy[layout.S(k)] = Sdot;
      dy[layout.Sigma(k)] = Sdot - flows[k];
      dy[layout.Gamma(k)] = m.T;
      dy[layout.W(k)] = m.mu;
      d.S_total += comps[k].S;
      d.E += comps[k].N * m.u;
      d.E_dot += TSdot[k] + m.mu * Ndot[k];
    }
  } else {
    // One shared temperature.
    const double T = comps[0].state.T;
    double TSdot = 0.0;
    for (const auto& f : ev.couplings) {
      const double dmu = comps[f.k].state.mu - comps[f.l].state.mu;
      TSdot += f.Jm * dmu;
      d.I_terms.coupling += f.Jm * dmu / T;
    }
    double xdot = 0.0, qdot = 0.0;
    const double M0 = gas.molar_mass;
    if (layout.has_mechanics()) {
      xdot = y[layout.xdot()];
      qdot = y[layout.qdot()];
    }
    for (const auto& p : ev.ports) {
      const double mu = comps[p.compartment].state.mu;
      TSdot += port_term(p, T, mu) + (advect ? T * p.J_S : 0.0);
      d.I_terms.port_mixing += p.J * (p.h_a - T * p.s_a - mu) / T;
      if (layout.has_mechanics()) {
        const double dv = p.v_a - xdot;
        TSdot += 0.5 * M0 * p.J * dv * dv;
        d.I_terms.velocity_mixing += 0.5 * M0 * p.J * dv * dv / T;
      }
    }
    for (const auto& c : comps) d.E += c.N * c.state.u;
    d.S_total = y[layout.S()];

    if (layout.has_mechanics()) {
      const auto& mech = *model.mechanics;
      const double N = comps[0].N;
      const double p = comps[0].state.p;
      const double rel = qdot - xdot;
      const double friction_power = mech.lambda_fr * rel * rel;
      TSdot += friction_power;
      d.I_terms.friction = friction_power / T;

      double F_fr_q = -mech.lambda_fr * rel;
      const double F_fr_x = -F_fr_q;
      if (mut == Mutation::flip_friction) F_fr_q = -F_fr_q;
      double momentum_in = 0.0;
      for (const auto& pr : ev.ports) momentum_in += M0 * pr.J * pr.v_a;
      const double Fq = mech.F_ext_q(t), Fx = mech.F_ext_x(t);
      const double qddot = (p * mech.A_section + F_fr_q + Fq) / mech.M;
      const double xddot = (F_fr_x + momentum_in + Fx - M0 * Ndot[0] * xdot) / (M0 * N);
      dy[layout.q()] = qdot;
      dy[layout.qdot()] = qddot;
      dy[layout.x()] = xdot;
      dy[layout.xdot()] = xddot;

      d.E += 0.5 * mech.M * qdot * qdot + 0.5 * M0 * N * xdot * xdot;
      d.P_W = Fq * qdot + Fx * xdot;
      d.E_dot = mech.M * qdot * qddot + 0.5 * M0 * Ndot[0] * xdot * xdot +
                M0 * N * xdot * xddot + TSdot - p * mech.A_section * qdot +
                comps[0].state.mu * Ndot[0];
      dy[layout.W(0)] = comps[0].state.mu - 0.5 * M0 * xdot * xdot;
    } else {
      d.E_dot = TSdot;
      for (std::size_t k = 0; k < K; ++k) {
        d.E_dot += comps[k].state.mu * Ndot[k];
        dy[layout.W(k)] = comps[k].state.mu;
      }
    }
    dy[layout.S()] = TSdot / T;
    dy[layout.Sigma()] = d.I_terms.total();
    dy[layout.Gamma()] = T;
  }

  for (const auto& s : sources) d.P_H += s.J_S * s.T_H;
  for (const auto& p : ev.ports) {
    if (layout.has_mechanics()) {
      d.P_M += p.J * (p.h_a + 0.5 * gas.molar_mass * p.v_a * p.v_a);
    } else {
      d.P_M += p.J * p.mu_a + p.J_S * p.T_a;
    }
  }
  d.I = d.I_terms.total();
  d.first_law_residual = d.E_dot - (d.P_W + d.P_H + d.P_M);

  for (double v : dy) {
    if (!std::isfinite(v)) throw IntegrityError("non-finite state derivative", t, {y.begin(), y.end()});
  }
  return ev;
}

std::vector<double> rhs(const NetworkModel& model, const StateLayout& layout,
                        std::span<const double> y, double t, const DynamicsOptions& options) {
  return evaluate(model, layout, y, t, options).dydt;
}

Diagnostics power_channels(const NetworkModel& model, const StateLayout& layout,
                           std::span<const double> y, double t) {
  return evaluate(model, layout, y, t).diagnostics;
}

}  // namespace openthermo
