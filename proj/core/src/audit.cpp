#include "openthermo/audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "openthermo/errors.hpp"
#include "openthermo/ldav.hpp"

namespace openthermo {

namespace {

void need_samples(const Trajectory& traj, std::size_t n, const char* check) {
  if (traj.samples.size() < n) {
    throw PreconditionError(std::string(check) + " needs at least " + std::to_string(n) +
                            " samples, got " + std::to_string(traj.samples.size()));
  }
}

/// Second-order derivative of f at interior sample i on a possibly uneven grid.
double centered(const Trajectory& traj, std::size_t i, const std::function<double(const Sample&)>& f) {
  const auto& a = traj.samples[i - 1];
  const auto& b = traj.samples[i];
  const auto& c = traj.samples[i + 1];
  const double h1 = b.t - a.t, h2 = c.t - b.t;
  return -h2 / (h1 * (h1 + h2)) * f(a) + (h2 - h1) / (h1 * h2) * f(b) + h1 / (h2 * (h1 + h2)) * f(c);
}

CheckResult finish(CheckResult r) {
  r.passed = std::isfinite(r.max_violation) && r.max_violation <= r.tolerance;
  return r;
}

/// Compares a rate computed by differencing against a model rate.
CheckResult rate_check(const std::string& name, const Trajectory& traj,
                       const std::function<double(const Sample&)>& quantity,
                       const std::function<double(const Sample&)>& model_rate, double tol) {
  need_samples(traj, 3, name.c_str());
  CheckResult r{name, 0.0, traj.samples.front().t, tol, false, {}};
  double worst = 0.0, scale = 1.0;
  for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
    const double fd = centered(traj, i, quantity);
    scale = std::max(scale, std::abs(fd));
    const double res = std::abs(fd - model_rate(traj.samples[i]));
    if (!(res <= worst)) {
      worst = res;
      r.t = traj.samples[i].t;
    }
  }
  r.max_violation = worst / scale;
  return finish(r);
}

double sigma_total(const Trajectory& traj, const Sample& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < traj.layout->entropy_count(); ++i) sum += s.y[traj.layout->Sigma(i)];
  return sum;
}

}  // namespace

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string AuditReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << std::left << std::setw(20) << c.check << ' ' << (c.passed ? "PASS" : "FAIL")
       << "  max_violation=" << std::setprecision(3) << std::scientific << c.max_violation
       << "  tol=" << c.tolerance << std::defaultfloat << std::setprecision(6) << "  t=" << c.t;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << '\n';
  }
  os << "overall " << (passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

CheckResult first_law_audit(const NetworkModel&, const Trajectory& traj, double tol) {
  return rate_check(
      "first_law", traj, [](const Sample& s) { return s.diagnostics.E; },
      [](const Sample& s) { return s.diagnostics.P_W + s.diagnostics.P_H + s.diagnostics.P_M; }, tol);
}

CheckResult entropy_bookkeeping_audit(const NetworkModel&, const Trajectory& traj, double tol) {
  return rate_check(
      "entropy_bookkeeping", traj, [](const Sample& s) { return s.diagnostics.S_total; },
      [](const Sample& s) { return s.diagnostics.I + s.diagnostics.entropy_inflow; }, tol);
}

CheckResult second_law_audit(const NetworkModel&, const Trajectory& traj, double tol) {
  need_samples(traj, 1, "second_law");
  CheckResult r{"second_law", 0.0, traj.samples.front().t, tol, false, {}};
  double scale = 1.0, sigma_scale = 1.0;
  for (const auto& s : traj.samples) {
    const auto& it = s.diagnostics.I_terms;
    scale = std::max(scale, std::abs(it.friction) + std::abs(it.velocity_mixing) +
                                std::abs(it.port_mixing) + std::abs(it.coupling) +
                                std::abs(it.sources));
    sigma_scale = std::max(sigma_scale, std::abs(sigma_total(traj, s)));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const double v = -s.diagnostics.I / scale;
    if (v > worst) {
      worst = v;
      r.t = s.t;
      r.note = "internal entropy production is negative";
    }
    if (i > 0) {
      const double drop = (sigma_total(traj, traj.samples[i - 1]) - sigma_total(traj, s)) / sigma_scale;
      if (drop > worst) {
        worst = drop;
        r.t = s.t;
        r.note = "internal entropy decreased";
      }
    }
  }
  r.max_violation = worst;
  return finish(r);
}

CheckResult mole_balance_audit(const NetworkModel&, const Trajectory& traj, double tol) {
  need_samples(traj, 1, "mole_balance");
  CheckResult r{"mole_balance", 0.0, traj.samples.front().t, tol, false, {}};
  const double N0 = traj.samples.front().diagnostics.N_total;
  double scale = std::max(1.0, std::abs(N0));
  for (const auto& s : traj.samples) scale = std::max(scale, std::abs(s.diagnostics.N_total));
  double integral = 0.0, worst = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i - 1];
    const auto& b = traj.samples[i];
    integral += 0.5 * (b.t - a.t) * (a.diagnostics.molar_inflow + b.diagnostics.molar_inflow);
    const double res = std::abs(b.diagnostics.N_total - N0 - integral) / scale;
    if (res > worst) {
      worst = res;
      r.t = b.t;
    }
  }
  r.max_violation = worst;
  return finish(r);
}

CheckResult gauge_invariance_audit(const NetworkModel& model, double t_final,
                                   const IntegrationOptions& options, const DynamicsOptions& dynamics,
                                   double tol) {
  IntegrationOptions fixed = options;
  fixed.method = Method::rk4;
  CheckResult r{"gauge_invariance", 0.0, 0.0, tol, false, {}};

  const Trajectory base = simulate(model, t_final, fixed, dynamics);

  // Observables that must not depend on the gauge: T, p, N per compartment,
  // I, and energy relative to its reference.
  auto observables = [](const Sample& s, double du) {
    std::vector<double> o;
    for (const auto& c : s.diagnostics.compartments) {
      o.push_back(c.state.T);
      o.push_back(c.state.p);
      o.push_back(c.N);
    }
    o.push_back(s.diagnostics.I);
    o.push_back(s.diagnostics.E - du * s.diagnostics.N_total);
    return o;
  };
  double worst = 0.0;
  auto compare = [&](const Trajectory& other, double du, const char* what) {
    if (other.samples.size() != base.samples.size()) {
      worst = std::numeric_limits<double>::infinity();
      r.note = std::string(what) + ": run ended at a different time";
      return;
    }
    const std::size_t n = observables(base.samples.front(), 0.0).size();
    std::vector<double> scale(n, 1.0);
    for (const auto& s : base.samples) {
      auto o = observables(s, 0.0);
      for (std::size_t j = 0; j < n; ++j) scale[j] = std::max(scale[j], std::abs(o[j]));
    }
    for (std::size_t i = 0; i < base.samples.size(); ++i) {
      auto a = observables(base.samples[i], 0.0);
      auto b = observables(other.samples[i], du);
      for (std::size_t j = 0; j < n; ++j) {
        const double d = std::abs(a[j] - b[j]) / scale[j];
        if (!(d <= worst)) {
          worst = d;
          r.t = base.samples[i].t;
          r.note = what;
        }
      }
    }
  };

  {
    SystemState s = initial_state(model);
    const StateLayout& L = *s.layout;
    for (std::size_t i = 0; i < L.entropy_count(); ++i) s.y[L.Gamma(i)] += 100.0;
    for (std::size_t k = 0; k < L.compartments(); ++k) s.y[L.W(k)] += 1000.0;
    compare(simulate(model, s, t_final, fixed, dynamics), 0.0, "displacement offsets");
  }
  {
    const double ds = 7.0;
    NetworkModel shifted = model;
    const GasSpec& g = model.gas;
    shifted.gas = GasSpec::make(g.R, g.c_v, g.T_ref, g.p_ref, g.u_ref, g.s_ref + ds, g.molar_mass);
    for (auto& c : shifted.compartments) c.S0 += c.N0 * ds;
    compare(simulate(shifted, t_final, fixed, dynamics), 0.0, "entropy reference shift");
  }
  {
    const double du = 500.0;
    NetworkModel shifted = model;
    const GasSpec& g = model.gas;
    shifted.gas = GasSpec::make(g.R, g.c_v, g.T_ref, g.p_ref, g.u_ref + du, g.s_ref, g.molar_mass);
    // Shifting u_ref adds du to every mu: the matter force picks up du times
    // the thermal force and each transferred mole carries du more energy. The
    // same physical transfer (Q' = Q + du Jm) needs the transformed matrix.
    for (auto& c : shifted.couplings) {
      if (c.kind != CouplingKind::onsager_2x2) continue;
      const OnsagerMatrix L = c.L;
      c.L.HH = L.HH + du * (L.HM + L.MH) + du * du * L.MM;
      c.L.HM = L.HM + du * L.MM;
      c.L.MH = L.MH + du * L.MM;
    }
    compare(simulate(shifted, t_final, fixed, dynamics), du, "energy reference shift");
  }
  r.max_violation = worst;
  return finish(r);
}

CheckResult equilibrium_audit(const NetworkModel& model, const Trajectory& traj, double tol) {
  if (!model.isolated()) {
    throw PreconditionError("equilibrium audit needs an isolated model (no port, source or external force)");
  }
  need_samples(traj, 2, "equilibrium");
  CheckResult r{"equilibrium", 0.0, traj.samples.back().t, tol, false, {}};

  auto spreads = [](const Sample& s) {
    double tmin = INFINITY, tmax = -INFINITY, mmin = INFINITY, mmax = -INFINITY;
    for (const auto& c : s.diagnostics.compartments) {
      tmin = std::min(tmin, c.state.T);
      tmax = std::max(tmax, c.state.T);
      mmin = std::min(mmin, c.state.mu);
      mmax = std::max(mmax, c.state.mu);
    }
    return std::pair{tmax - tmin, mmax - mmin};
  };
  const auto [T0, mu0] = spreads(traj.samples.front());
  const auto [T1, mu1] = spreads(traj.samples.back());

  bool channel = false;
  for (const auto& c : model.couplings) {
    if (c.kind == CouplingKind::diffusion_G ? c.G > 0.0 : (c.L.HH > 0.0 || c.L.MM > 0.0)) channel = true;
  }

  double S_scale = 1.0, S_drop = 0.0;
  for (const auto& s : traj.samples) S_scale = std::max(S_scale, std::abs(s.diagnostics.S_total));
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    S_drop = std::max(S_drop, traj.samples[i - 1].diagnostics.S_total - traj.samples[i].diagnostics.S_total);
  }
  S_drop /= S_scale;

  if (!channel) {
    r.note = "no relaxation channel";
    r.max_violation = S_drop > 1e-10 ? S_drop : 0.0;
    r.passed = S_drop <= 1e-10;
    return r;
  }
  // Spreads that start at zero must stay at rounding level.
  const double T_scale = traj.samples.front().diagnostics.compartments.front().state.T;
  const double mu_scale = std::max(1.0, std::abs(traj.samples.front().diagnostics.compartments.front().state.mu));
  const double rT = T0 > 1e-9 * T_scale ? T1 / T0 : T1 / T_scale;
  const double rmu = mu0 > 1e-9 * mu_scale ? mu1 / mu0 : mu1 / mu_scale;
  r.max_violation = std::max(rT, rmu);
  r.note = "T spread " + std::to_string(T0) + " -> " + std::to_string(T1);
  if (S_drop > 1e-10) {
    r.note += "; total entropy decreased";
    r.max_violation = std::max(r.max_violation, S_drop);
    r.passed = false;
    return r;
  }
  return finish(r);
}

bool supports_cross_validation(const NetworkModel& model) {
  return model.system_class == SystemClass::simple_single ||
         model.system_class == SystemClass::simple_mechanical;
}

CheckResult cross_validation_audit(const NetworkModel& model, const CrossValidationOptions& o,
                                   double tol) {
  if (!supports_cross_validation(model)) {
    throw PreconditionError("cross-validation supports simple_single and simple_mechanical models");
  }
  CheckResult r{"cross_validation", 0.0, 0.0, tol, false, {}};
  IntegrationOptions io;
  io.method = Method::rk4;
  io.h0 = o.h;
  io.h_min = std::min(1e-12, o.h);
  io.h_max = std::max(1.0, o.h);
  io.sample_dt = o.sample_dt;
  const Trajectory direct = simulate(model, o.t_final, io, o.dynamics);

  const EmbeddedSystem es = embed_open_system(model, o.embed);
  const SystemState s0 = initial_state(model);
  AbstractOptions ao;
  ao.h = o.h;
  ao.sample_dt = o.sample_dt;
  AbstractTrajectory at;
  try {
    at = integrate_abstract(es.system, {s0.t, es.configuration(s0.y), es.velocity_guess(s0.y)},
                            o.t_final, ao);
  } catch (const SolverError& e) {
    r.max_violation = std::numeric_limits<double>::infinity();
    r.note = std::string("abstract solver failed: ") + e.what();
    return r;
  } catch (const DomainError& e) {
    r.max_violation = std::numeric_limits<double>::infinity();
    r.note = std::string("abstract solver left the domain: ") + e.what();
    return r;
  }
  if (at.samples.size() != direct.samples.size()) {
    r.max_violation = std::numeric_limits<double>::infinity();
    r.note = "sample grids differ";
    return r;
  }
  const std::size_t n = direct.layout->size();
  std::vector<double> scale(n, 1.0);
  for (const auto& s : direct.samples) {
    for (std::size_t j = 0; j < n; ++j) scale[j] = std::max(scale[j], std::abs(s.y[j]));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < direct.samples.size(); ++i) {
    const auto y = es.to_state(at.samples[i].q, at.samples[i].v);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::abs(y[j] - direct.samples[i].y[j]) / scale[j];
      if (!(d <= worst)) {
        worst = d;
        r.t = direct.samples[i].t;
        r.note = "worst component " + direct.layout->slots()[j].label;
      }
    }
  }
  r.max_violation = worst;
  return finish(r);
}

AuditReport run_audits(const NetworkModel& model, double t_final, const IntegrationOptions& options,
                       const DynamicsOptions& dynamics, const AuditTolerances& tol) {
  AuditReport rep;
  const Trajectory traj = simulate(model, t_final, options, dynamics);
  if (!traj.completed()) {
    rep.checks.push_back({"integration", 1.0, traj.termination.t, 0.0, false,
                          std::string(to_string(traj.termination.kind)) + ": " + traj.termination.reason});
  }
  if (traj.samples.size() >= 3) {
    rep.checks.push_back(first_law_audit(model, traj, tol.first_law));
    rep.checks.push_back(entropy_bookkeeping_audit(model, traj, tol.entropy_bookkeeping));
  }
  rep.checks.push_back(second_law_audit(model, traj, tol.second_law));
  rep.checks.push_back(mole_balance_audit(model, traj, tol.mole_balance));
  rep.checks.push_back(gauge_invariance_audit(model, traj.samples.back().t, options, dynamics, tol.gauge));
  if (model.isolated()) rep.checks.push_back(equilibrium_audit(model, traj, tol.equilibrium));
  if (supports_cross_validation(model)) {
    CrossValidationOptions co;
    co.dynamics = dynamics;
    co.t_final = std::min(1.0, t_final);
    rep.checks.push_back(cross_validation_audit(model, co, tol.cross_validation));
  }
  return rep;
}

}  // namespace openthermo
