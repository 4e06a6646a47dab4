#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace openthermo {

enum class Method { rk4, rk45 };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct IntegrationOptions {
  Method method = Method::rk45;
  double h0 = 1e-3;      ///< initial step (the fixed step for rk4)
  double h_min = 1e-12;
  double h_max = 1.0;
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double sample_dt = 0.1;  ///< output interval; steps are clipped to land on samples

  /// Empty when 0 < h_min <= h0 <= h_max, tolerances > 0 and sample_dt > 0.
  std::vector<std::string> violations() const;
};

struct Termination {
  enum class Kind { completed, guard_stop, step_underflow };
  Kind kind = Kind::completed;
  double t = 0.0;
  std::string reason;
};

std::string_view to_string(Termination::Kind k);

using RhsFunction = std::function<std::vector<double>(double t, std::span<const double> y)>;
/// Returns a reason when y is outside the admissible region.
using GuardFunction = std::function<std::optional<std::string>(double t, std::span<const double> y)>;

struct IntegrationResult {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  Termination termination;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

/// Explicit RK4 / Dormand-Prince 5(4) integration from t0 to t_final with
/// output at t0 + i*sample_dt and at t_final. A step whose stages throw
/// DomainError or whose end state fails `guard` is halved; below h_min the
/// run stops with guard_stop. Non-finite values raise IntegrityError.
IntegrationResult integrate(const RhsFunction& f, double t0, std::vector<double> y0, double t_final,
                            const IntegrationOptions& options, const GuardFunction& guard = {});

}  // namespace openthermo
