#include "openthermo/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "openthermo/errors.hpp"

namespace openthermo {

std::string_view to_string(Method m) { return m == Method::rk4 ? "rk4" : "rk45"; }

std::optional<Method> parse_method(std::string_view name) {
  if (name == "rk4") return Method::rk4;
  if (name == "rk45") return Method::rk45;
  return std::nullopt;
}

std::string_view to_string(Termination::Kind k) {
  switch (k) {
    case Termination::Kind::completed: return "completed";
    case Termination::Kind::guard_stop: return "guard_stop";
    case Termination::Kind::step_underflow: return "step_underflow";
  }
  return "unknown";
}

std::vector<std::string> IntegrationOptions::violations() const {
  std::vector<std::string> out;
  auto pos = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!pos(h_min) || !pos(h0) || !pos(h_max) || !(h_min <= h0 && h0 <= h_max)) {
    out.push_back("run: steps must satisfy 0 < h_min <= h0 <= h_max");
  }
  if (!pos(abs_tol) || !pos(rel_tol)) out.push_back("run: tolerances must be positive");
  if (!pos(sample_dt)) out.push_back("run: sample_dt must be positive");
  return out;
}

namespace {

using Vec = std::vector<double>;

void check_finite(const Vec& v, double t, std::span<const double> y, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw IntegrityError(std::string("non-finite ") + what, t, {y.begin(), y.end()});
  }
}

Vec axpy(std::span<const double> y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out(y.begin(), y.end());
  for (const auto& [c, k] : terms) {
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * c * (*k)[i];
  }
  return out;
}

struct StepResult {
  Vec y;
  double err = 0.0;  ///< scaled error norm (rk45 only)
};

StepResult rk4_step(const RhsFunction& f, double t, const Vec& y, double h) {
  const Vec k1 = f(t, y);
  const Vec k2 = f(t + h / 2, axpy(y, h, {{0.5, &k1}}));
  const Vec k3 = f(t + h / 2, axpy(y, h, {{0.5, &k2}}));
  const Vec k4 = f(t + h, axpy(y, h, {{1.0, &k3}}));
  StepResult r;
  r.y = y;
  for (std::size_t i = 0; i < y.size(); ++i) {
    r.y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return r;
}

// Only k1 is evaluated at an accepted state; `f` is unchecked, so overflow in
// a trial stage shows up as an infinite error norm and the step is retried.
StepResult dopri_step(const RhsFunction& checked, const RhsFunction& f, double t, const Vec& y,
                      double h, const IntegrationOptions& o) {
  const Vec k1 = checked(t, y);
  const Vec k2 = f(t + h / 5, axpy(y, h, {{1.0 / 5, &k1}}));
  const Vec k3 = f(t + 3 * h / 10, axpy(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
  const Vec k4 = f(t + 4 * h / 5, axpy(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
  const Vec k5 = f(t + 8 * h / 9, axpy(y, h, {{19372.0 / 6561, &k1}, {-25360.0 / 2187, &k2},
                                             {64448.0 / 6561, &k3}, {-212.0 / 729, &k4}}));
  const Vec k6 = f(t + h, axpy(y, h, {{9017.0 / 3168, &k1}, {-355.0 / 33, &k2}, {46732.0 / 5247, &k3},
                                      {49.0 / 176, &k4}, {-5103.0 / 18656, &k5}}));
  StepResult r;
  r.y = axpy(y, h, {{35.0 / 384, &k1}, {500.0 / 1113, &k3}, {125.0 / 192, &k4},
                    {-2187.0 / 6784, &k5}, {11.0 / 84, &k6}});
  const Vec k7 = f(t + h, r.y);
  static constexpr double e[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                                  -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
  double norm = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double err = h * (e[0] * k1[i] + e[2] * k3[i] + e[3] * k4[i] + e[4] * k5[i] +
                            e[5] * k6[i] + e[6] * k7[i]);
    const double scale = o.abs_tol + o.rel_tol * std::max(std::abs(y[i]), std::abs(r.y[i]));
    const double ratio = std::abs(err) / scale;
    norm = std::isfinite(ratio) && std::isfinite(r.y[i]) ? std::max(norm, ratio)
                                                         : std::numeric_limits<double>::infinity();
  }
  r.err = norm;
  return r;
}

}  // namespace

IntegrationResult integrate(const RhsFunction& f, double t0, Vec y0, double t_final,
                            const IntegrationOptions& o, const GuardFunction& guard) {
  if (auto v = o.violations(); !v.empty()) throw ValidationError(std::move(v));
  if (!(t_final >= t0)) throw DomainError("t_final must not precede the start time");
  check_finite(y0, t0, y0, "initial state");

  IntegrationResult res;
  res.times.push_back(t0);
  res.states.push_back(y0);

  // Checked wrapper: non-finite derivatives are integrity failures.
  auto F = [&](double t, std::span<const double> y) {
    Vec d = f(t, y);
    check_finite(d, t, y, "state derivative");
    return d;
  };

  double t = t0;
  Vec y = std::move(y0);
  double h = std::min(o.h0, o.h_max);
  std::size_t next_sample = 1;
  auto sample_time = [&](std::size_t i) { return std::min(t0 + double(i) * o.sample_dt, t_final); };
  const double eps_t = 1e-12 * std::max(1.0, std::abs(t_final));

  while (t < t_final - eps_t) {
    const double target = sample_time(next_sample);
    double h_try = std::min(h, target - t);
    const bool clipped = h_try < h;
    if (target - (t + h_try) < eps_t) h_try = target - t;

    StepResult step;
    std::optional<std::string> guard_reason;
    try {
      step = o.method == Method::rk4 ? rk4_step(F, t, y, h_try) : dopri_step(F, f, t, y, h_try, o);
      if (std::isfinite(step.err)) check_finite(step.y, t + h_try, y, "state after step");
      if (guard && std::isfinite(step.err)) guard_reason = guard(t + h_try, step.y);
    } catch (const DomainError& e) {
      guard_reason = e.what();
    }

    if (guard_reason) {
      ++res.rejected_steps;
      h = h_try / 2;
      if (h < o.h_min) {
        res.termination = {Termination::Kind::guard_stop, t, *guard_reason};
        return res;
      }
      continue;
    }

    if (o.method == Method::rk45 && step.err > 1.0) {
      ++res.rejected_steps;
      const double factor = std::clamp(0.9 * std::pow(step.err, -0.2), 0.2, 1.0);
      h = h_try * factor;  // factor is 0.2 for a non-finite error norm
      if (h < o.h_min) {
        res.termination = {Termination::Kind::step_underflow, t,
                           "step size fell below h_min = " + std::to_string(o.h_min)};
        return res;
      }
      continue;
    }

    ++res.accepted_steps;
    const bool landed = (h_try == target - t);
    t = landed ? target : t + h_try;
    y = std::move(step.y);
    if (o.method == Method::rk45) {
      const double factor =
          step.err > 0.0 ? std::clamp(0.9 * std::pow(step.err, -0.2), 0.2, 5.0) : 5.0;
      const double h_next = std::min(h_try * factor, o.h_max);
      // A step shortened only to hit a sample keeps the previous proposal.
      h = clipped ? std::max(h, h_next) : h_next;
      h = std::min(h, o.h_max);
    } else {
      h = o.h0;
    }
    if (landed) {
      res.times.push_back(t);
      res.states.push_back(y);
      ++next_sample;
    }
  }
  res.termination = {Termination::Kind::completed, t, {}};
  return res;
}

}  // namespace openthermo
