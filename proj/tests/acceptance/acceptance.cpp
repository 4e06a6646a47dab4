// Acceptance run: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "openthermo/audit.hpp"
#include "openthermo/demos.hpp"
#include "openthermo/dynamics.hpp"
#include "openthermo/errors.hpp"
#include "openthermo/gas.hpp"
#include "openthermo/scenario.hpp"

using namespace openthermo;
using fixtures::GasOracle;
using fixtures::uniform;

namespace {

const double kM0 = 0.028;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<double> single_state(const NetworkModel& m, double S, double N) {
  const auto L = StateLayout::for_model(m);
  std::vector<double> y(L.size(), 0.0);
  y[L.S()] = S;
  y[L.N(0)] = N;
  return y;
}

Trajectory run_scenario(const Scenario& s, const DynamicsOptions& d = {}) {
  return simulate(s.model, s.run.t_final, s.run.integration, d);
}

// 1. Energy balance on every demo.
Outcome first_law() {
  Outcome o;
  double worst = 0.0, slowest = 0.0;
  for (const auto& name : demo_names()) {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario s = demo_scenario(name);
    const Trajectory tr = run_scenario(s);
    const CheckResult r = first_law_audit(s.model, tr, 1e-6);
    const double dt = seconds_since(t0);
    worst = std::max(worst, r.max_violation);
    slowest = std::max(slowest, dt);
    o.require(tr.completed(), name + " did not complete");
    o.require(r.passed, name + fmt(" residual %.3g", r.max_violation));
    o.require(dt < 5.0, name + fmt(" took %.2f s", dt));
  }
  o.detail = fmt("max residual %.3g (tol 1e-6), slowest %.2f s", worst, slowest) +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

// 2. Non-negative production on admissible demos; a compressive-inflow
// scenario must be flagged.
Outcome second_law() {
  Outcome o;
  for (const auto& name : demo_names()) {
    const Scenario s = demo_scenario(name);
    const CheckResult r = second_law_audit(s.model, run_scenario(s), 1e-10);
    o.require(r.passed, name + fmt(" violation %.3g", r.max_violation));
  }
  const NetworkModel bad = fixtures::tank(0.1, 300.0, 5e4);
  IntegrationOptions io;
  io.sample_dt = 0.1;
  const CheckResult flagged = second_law_audit(bad, simulate(bad, 1.0, io), 1e-10);
  o.require(!flagged.passed, "p_in < p not flagged");
  const std::string summary = fmt("%.0f demos admissible; p_in < p flagged (violation %.3g)",
                                  double(demo_names().size()), flagged.max_violation);
  o.detail = summary + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

// 3. The tank production rate equals its alternative closed forms.
Outcome dual_forms() {
  Outcome o;
  const GasOracle g;
  const double cp = g.c_p(), R = g.R;
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double J = fixtures::log_uniform(rng, 1e-3, 10.0);
    const double T1 = uniform(rng, 150, 900), p1 = fixtures::log_uniform(rng, 1e4, 1e7);
    const double T = uniform(rng, 150, 900), N = uniform(rng, 1, 200);
    const NetworkModel m = fixtures::tank(J, T1, p1);
    const double V = m.compartments[0].V, p = N * R * T / V;
    const auto d = power_channels(m, StateLayout::for_model(m), single_state(m, g.S_from(T, N, V), N), 0.0);
    const double s = g.s(T, p), s1 = g.s(T1, p1), mu = g.mu(T, p), mu1 = g.mu(T1, p1);
    const double thermal = cp * (T1 / T - 1 - std::log(T1 / T)), mechanical = -R * std::log(p / p1);
    const double scale = J * (std::abs(thermal) + std::abs(mechanical));
    for (double f : {(s1 * J * (T1 - T) + J * (mu1 - mu)) / T, J * (thermal + mechanical),
                     J * ((g.h(T1) - g.h(T)) - T * (s1 - s)) / T}) {
      worst = std::max(worst, std::abs(d.I - f) / scale);
    }
  }
  o.require(worst <= 1e-10, "forms disagree");
  o.detail = fmt("1000 states, max relative difference %.3g (tol 1e-10)", worst) +
             (o.pass ? "" : " | " + o.detail);
  return o;
}

// 4. Derivatives of U(S, N, V) reproduce T, mu and -p; molar identities.
Outcome identities() {
  Outcome o;
  const GasSpec gas = fixtures::air();
  std::mt19937_64 rng(102);
  double worst = 0.0;
  auto diff = [](const std::function<double(double)>& f, double x, double h) {
    return (8 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12 * h);
  };
  for (int i = 0; i < 100; ++i) {
    const double T = uniform(rng, 150, 1500), N = fixtures::log_uniform(rng, 0.01, 1000);
    const double V = fixtures::log_uniform(rng, 1e-3, 100);
    const double S = entropy_from_TNV(gas, T, N, V);
    const MolarState st = intensive_from_extensive(gas, S, N, V);
    const double dS = diff([&](double x) { return internal_energy_total(gas, x, N, V); }, S, 1e-3 * N);
    const double dN = diff([&](double x) { return internal_energy_total(gas, S, x, V); }, N, 1e-4 * N);
    const double dV = diff([&](double x) { return internal_energy_total(gas, S, N, x); }, V, 1e-4 * V);
    worst = std::max({worst, fixtures::rel_diff(dS, st.T), fixtures::rel_diff(dN, st.mu),
                      fixtures::rel_diff(-dV, st.p)});
    const double v = V / N;
    worst = std::max({worst, fixtures::rel_diff(st.h, st.u + st.p * v),
                      fixtures::rel_diff(st.mu, st.h - st.T * st.s), fixtures::rel_diff(st.p * v, gas.R * st.T)});
  }
  worst = std::max(worst, fixtures::rel_diff(gas.c_p - gas.c_v, gas.R));
  o.require(worst <= 1e-6, "identity violated");
  o.detail = fmt("100 states, max relative error %.3g (tol 1e-6)", worst);
  return o;
}

// 5. Specialized dynamics against the variational solver.
Outcome cross_validation() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  NetworkModel slipping = fixtures::piston(2.0);
  slipping.mechanics->qdot0 = 0.5;
  double worst = 0.0;
  for (const NetworkModel& m : {fixtures::tank(), fixtures::piston(), slipping}) {
    const CheckResult r = cross_validation_audit(m, {}, 1e-5);
    worst = std::max(worst, r.max_violation);
    o.require(r.passed, std::string(to_string(m.system_class)) + fmt(" discrepancy %.3g", r.max_violation));
  }
  const double dt = seconds_since(t0);
  o.require(dt < 30.0, fmt("took %.1f s", dt));
  o.detail = fmt("tank and piston, max discrepancy %.3g (tol 1e-5), %.2f s", worst, dt) +
             (o.pass ? "" : " | " + o.detail);
  return o;
}

// 6. Piston production splits into friction, velocity mixing and port mixing.
Outcome piston_decomposition() {
  Outcome o;
  const GasOracle g;
  std::mt19937_64 rng(103);
  double worst = 0.0, most_negative = 0.0;
  for (int i = 0; i < 1000; ++i) {
    NetworkModel m = fixtures::piston(uniform(rng, 0, 10), uniform(rng, -20, 20));
    const auto L = StateLayout::for_model(m);
    const double q = uniform(rng, 0.5, 2), N = uniform(rng, 0.1, 1), T = uniform(rng, 250, 450);
    const double V = m.mechanics->A_section * q, p = N * g.R * T / V;
    const double J = fixtures::log_uniform(rng, 1e-4, 0.1);
    const double T1 = uniform(rng, 200, 600), p1 = p * uniform(rng, 1.0, 3.0);
    m.ports[0] = fixtures::port("in", "cyl", J, T1, p1);
    std::vector<double> y(L.size(), 0.0);
    y[L.S()] = g.S_from(T, N, V);
    y[L.N(0)] = N;
    y[L.q()] = q;
    y[L.qdot()] = uniform(rng, -2, 2);
    y[L.xdot()] = uniform(rng, -2, 2);
    const auto ev = evaluate(m, L, y, 0.0);
    const double va = (*m.mechanics->velocity_of("in"))(0.0);
    const double rel = y[L.qdot()] - y[L.xdot()];
    const double friction = m.mechanics->lambda_fr * rel * rel / T;
    const double velocity = J * 0.5 * kM0 * (va - y[L.xdot()]) * (va - y[L.xdot()]) / T;
    const double mixing = J * (g.h(T1) - T * g.s(T1, p1) - g.mu(T, p)) / T;
    const double scale =
        friction + velocity + J * (std::abs(g.h(T1)) + T * std::abs(g.s(T1, p1)) + std::abs(g.mu(T, p))) / T;
    const auto& terms = ev.diagnostics.I_terms;
    worst = std::max({worst, std::abs(ev.dydt[L.Sigma()] - (friction + velocity + mixing)) / scale,
                      std::abs(terms.friction - friction) / scale,
                      std::abs(terms.velocity_mixing - velocity) / scale,
                      std::abs(terms.port_mixing - mixing) / scale});
    most_negative = std::min({most_negative, terms.friction / scale, terms.velocity_mixing / scale,
                              terms.port_mixing / scale});
  }
  o.require(worst <= 1e-9, "decomposition mismatch");
  o.require(most_negative >= -1e-12, "negative term");
  o.detail = fmt("1000 states, max relative mismatch %.3g (tol 1e-9), min term %.3g", worst, most_negative);
  return o;
}

NetworkModel isolated_heat_matter() {
  NetworkModel m = demo_scenario("heat-matter").model;
  m.ports.clear();
  m.sources.clear();
  return m;
}

NetworkModel closed_chain() {
  NetworkModel m = demo_scenario("serial-membrane").model;
  m.ports.clear();
  return m;
}

// 7. Closed networks conserve energy and moles; pair fluxes are antisymmetric.
Outcome conservation() {
  Outcome o;
  IntegrationOptions io;
  io.method = Method::rk4;
  io.h0 = 1e-3;
  io.h_max = 1e-3;
  io.sample_dt = 0.5;
  double worst_E = 0.0, worst_N = 0.0;
  for (const NetworkModel& m : {isolated_heat_matter(), closed_chain()}) {
    const Trajectory tr = simulate(m, 10.0, io);
    o.require(tr.completed() && tr.accepted_steps >= 10000, "run incomplete");
    const auto& d0 = tr.samples.front().diagnostics;
    for (const auto& s : tr.samples) {
      worst_E = std::max(worst_E, std::abs(s.diagnostics.E - d0.E) / std::abs(d0.E));
      worst_N = std::max(worst_N, std::abs(s.diagnostics.N_total - d0.N_total) / d0.N_total);
    }
  }
  o.require(worst_E <= 1e-8 && worst_N <= 1e-8, "drift too large");

  std::mt19937_64 rng(104);
  bool antisymmetric = true;
  for (int i = 0; i < 1000; ++i) {
    const double Tk = uniform(rng, 200, 600), Tl = uniform(rng, 200, 600);
    const double muk = uniform(rng, -6e4, 0), mul = uniform(rng, -6e4, 0);
    for (const auto& c : {fixtures::diffusion("g", "a", "b", uniform(rng, 0, 1e-2)),
                          fixtures::onsager("w", "a", "b", 1e6, 30, 30, 0.02)}) {
      const auto f = coupling_fluxes(c, Tk, Tl, muk, mul);
      const auto r = coupling_fluxes(c, Tl, Tk, mul, muk);
      antisymmetric = antisymmetric && f.Q == -r.Q && f.Jm == -r.Jm;
    }
  }
  o.require(antisymmetric, "pair fluxes not antisymmetric");
  o.detail = fmt("RK4 h=1e-3 over 10 s: energy drift %.3g, mole drift %.3g (tol 1e-8); pair fluxes antisymmetric",
                 worst_E, worst_N) +
             (o.pass ? "" : " | " + o.detail);
  return o;
}

// 8. An isolated heat-and-matter pair relaxes to a common T and mu.
Outcome equilibrium() {
  Outcome o;
  const NetworkModel m = isolated_heat_matter();
  IntegrationOptions io;
  io.sample_dt = 1.0;
  io.h_max = 1.0;
  io.abs_tol = io.rel_tol = 1e-9;
  const Trajectory tr = simulate(m, 600.0, io);
  const CheckResult r = equilibrium_audit(m, tr, 1e-6);
  const CheckResult s = second_law_audit(m, tr, 1e-10);
  o.require(r.passed, "spread ratio too large");
  o.require(s.passed, "entropy decreased");
  o.detail = fmt("after 600 s, spread ratio %.3g (tol 1e-6)", r.max_violation);
  return o;
}

// 9. Cross effect and dissipation of the linear closure.
Outcome onsager() {
  Outcome o;
  const double Tk = 360, Tl = 300, mul = -45000;
  const auto coupled = fixtures::onsager("w", "a", "b", 1e6, 200, 200, 0.2);
  const auto diagonal = fixtures::onsager("w", "a", "b", 1e6, 0, 0, 0.2);
  const double cross_equal_mu = coupling_fluxes(coupled, Tk, Tl, mul, mul).Jm;
  const double cross_no_force = coupling_fluxes(coupled, Tk, Tl, mul * Tk / Tl, mul).Jm;
  const double diag_no_force = coupling_fluxes(diagonal, Tk, Tl, mul * Tk / Tl, mul).Jm;
  o.require(cross_equal_mu != 0.0 && cross_no_force != 0.0, "no cross effect");
  o.require(diag_no_force == 0.0, "matter moved without a force or coupling");

  std::mt19937_64 rng(105);
  double most_negative = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = uniform(rng, -2, 2), b = uniform(rng, -2, 2), c = uniform(rng, -2, 2), d = uniform(rng, -2, 2);
    const double scale = std::pow(10.0, uniform(rng, 0, 6));
    const auto cp = fixtures::onsager("w", "a", "b", scale * (a * a + c * c), scale * (a * b + c * d),
                                      scale * (a * b + c * d), scale * (b * b + d * d));
    const double tk = uniform(rng, 200, 600), tl = uniform(rng, 200, 600);
    const double mk = uniform(rng, -6e4, 0), ml = uniform(rng, -6e4, 0);
    const auto f = coupling_fluxes(cp, tk, tl, mk, ml);
    const double XH = 1 / tl - 1 / tk, XM = mk / tk - ml / tl;
    const double mag = std::abs(f.Q * XH) + std::abs(f.Jm * XM);
    if (mag > 0) most_negative = std::min(most_negative, (f.Q * XH + f.Jm * XM) / mag);
  }
  o.require(most_negative >= -1e-12, "negative dissipation");
  o.detail = fmt("cross flux %.3g mol/s at equal mu, %.3g at zero matter force; min normalized dissipation %.3g",
                 cross_equal_mu, cross_no_force, most_negative) +
             (o.pass ? "" : " | " + o.detail);
  return o;
}

std::vector<double> rk4_final(const NetworkModel& m, double h, double tf) {
  IntegrationOptions io;
  io.method = Method::rk4;
  io.h0 = h;
  io.h_max = h;
  io.h_min = std::min(1e-10, h);
  io.sample_dt = tf;
  return simulate(m, tf, io).samples.back().y;
}

double scaled_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  return d;
}

// 10. Fourth-order self-convergence and parser robustness.
Outcome convergence_and_fuzz() {
  Outcome o;
  std::string ratios;
  // Coarsest steps per demo: small enough to be stable, large enough that
  // the finest level stays well above roundoff.
  const std::pair<const char*, double> ladders[] = {{"heat-matter", 0.1}, {"piston", 0.04}};
  for (const auto& [name, h0] : ladders) {
    const NetworkModel m = demo_scenario(name).model;
    std::vector<std::vector<double>> y;
    for (double h : {h0, h0 / 2, h0 / 4, h0 / 8}) y.push_back(rk4_final(m, h, 2.0));
    for (std::size_t i = 0; i + 2 < y.size(); ++i) {
      const double ratio = scaled_distance(y[i], y[i + 1]) / scaled_distance(y[i + 1], y[i + 2]);
      o.require(ratio >= 12.0 && ratio <= 20.0, std::string(name) + fmt(" ratio %.3g", ratio));
      ratios += (ratios.empty() ? "" : ", ") + fmt("%.2f", ratio);
    }
  }

  std::mt19937_64 rng(106);
  int rejected = 0, crashed = 0;
  const std::string alphabet = "[]=#\n -.0123456789eEabcdefghijklmnopqrstuvwxyz_";
  for (int i = 0; i < 100000; ++i) {
    std::string text;
    if (i % 2 == 0) {
      text.resize(rng() % 256);
      for (char& c : text) c = char(rng() & 0xff);
    } else {
      text = demo_text(demo_names()[rng() % demo_names().size()]);
      for (int e = 0, n = 1 + int(rng() % 8); e < n && !text.empty(); ++e) {
        const std::size_t pos = rng() % text.size();
        switch (rng() % 3) {
          case 0: text.erase(pos, 1 + rng() % 5); break;
          case 1: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
          default: text[pos] = alphabet[rng() % alphabet.size()];
        }
      }
    }
    try {
      parse_scenario(text);
    } catch (const ScenarioError& e) {
      ++rejected;
      if (e.diagnostics().empty()) ++crashed;
    } catch (...) {
      ++crashed;
    }
  }
  o.require(crashed == 0, fmt("%.0f inputs escaped as non-diagnostic errors", crashed));
  o.detail = "RK4 error ratios " + ratios + " (range 12-20); " +
             fmt("100000 fuzzed inputs, %.0f rejected with diagnostics, %.0f unexpected", rejected, crashed) +
             (o.pass ? "" : " | " + o.detail);
  return o;
}

// 11. Every audit catches the corruption aimed at it and passes without it.
Outcome mutations() {
  Outcome o;
  IntegrationOptions fine;
  fine.abs_tol = fine.rel_tol = 1e-10;
  fine.h_max = 0.05;
  auto sampled = [&](double dt) {
    IntegrationOptions io = fine;
    io.sample_dt = dt;
    return io;
  };
  const NetworkModel tank = fixtures::tank();
  NetworkModel open_pair = demo_scenario("two-compartment").model;
  NetworkModel heated = isolated_heat_matter();
  heated.sources = {fixtures::heat_source("heater", "cold", 2.0, 400.0)};
  NetworkModel slipping = fixtures::piston(2.0);
  slipping.mechanics->qdot0 = 0.5;
  const NetworkModel isolated = isolated_heat_matter();

  struct Row {
    const char* audit;
    Mutation mutation;
    std::function<CheckResult(const DynamicsOptions&)> run;
  };
  const std::vector<Row> rows = {
      {"first_law", Mutation::flip_port_thermal_term,
       [&](const DynamicsOptions& d) { return first_law_audit(tank, simulate(tank, 5.0, sampled(0.05), d)); }},
      {"second_law", Mutation::flip_coupling_flux,
       [&](const DynamicsOptions& d) {
         return second_law_audit(open_pair, simulate(open_pair, 5.0, sampled(0.05), d));
       }},
      {"entropy_bookkeeping", Mutation::drop_port_entropy_advection,
       [&](const DynamicsOptions& d) {
         return entropy_bookkeeping_audit(tank, simulate(tank, 5.0, sampled(0.05), d));
       }},
      {"entropy_bookkeeping", Mutation::drop_source_entropy,
       [&](const DynamicsOptions& d) {
         return entropy_bookkeeping_audit(heated, simulate(heated, 5.0, sampled(0.0025), d));
       }},
      {"mole_balance", Mutation::flip_port_inflow,
       [&](const DynamicsOptions& d) { return mole_balance_audit(tank, simulate(tank, 5.0, sampled(0.05), d)); }},
      {"gauge_invariance", Mutation::flip_port_potential,
       [&](const DynamicsOptions& d) { return gauge_invariance_audit(tank, 2.0, sampled(0.05), d); }},
      {"equilibrium", Mutation::flip_heat_flux,
       [&](const DynamicsOptions& d) {
         IntegrationOptions io = sampled(1.0);
         io.h_max = 1.0;
         io.abs_tol = io.rel_tol = 1e-9;
         return equilibrium_audit(isolated, simulate(isolated, 600.0, io, d));
       }},
      {"cross_validation", Mutation::flip_friction,
       [&](const DynamicsOptions& d) {
         CrossValidationOptions co;
         co.dynamics = d;
         return cross_validation_audit(slipping, co);
       }},
  };
  int caught = 0;
  for (const auto& row : rows) {
    const std::string label = std::string(row.audit) + "/" + std::string(to_string(row.mutation));
    CheckResult clean = row.run({}), broken;
    try {
      broken = row.run({row.mutation});
    } catch (const std::exception& e) {
      broken.passed = false;  // the corrupted run could not even complete
    }
    o.require(clean.passed, label + fmt(" fails unmutated (%.3g)", clean.max_violation));
    o.require(!broken.passed, label + " not detected");
    if (!broken.passed) ++caught;
  }
  CrossValidationOptions flipped;
  flipped.embed.flip_B = true;
  const bool b_caught = !cross_validation_audit(fixtures::piston(), flipped).passed;
  o.require(b_caught, "cross_validation/flip_B not detected");
  o.detail = fmt("%.0f of %.0f corruptions detected, unmutated runs pass", caught + (b_caught ? 1 : 0),
                 double(rows.size() + 1)) +
             (o.pass ? "" : " | " + o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {
      first_law, second_law,  dual_forms, identities, cross_validation,     piston_decomposition,
      conservation, equilibrium, onsager, convergence_and_fuzz, mutations,
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      r = criteria[i]();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (!r.pass) ++failures;
    std::printf("criterion %zu: %s %s\n", i + 1, r.pass ? "PASS" : "FAIL", r.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
