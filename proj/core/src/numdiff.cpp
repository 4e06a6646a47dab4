#include "openthermo/numdiff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "openthermo/errors.hpp"

namespace openthermo::numdiff {

namespace {
constexpr double kShrink = 1.4;
constexpr int kLevels = 10;
constexpr double kSafe = 2.0;
}  // namespace

Estimate extrapolate(const std::function<double(double)>& estimator, double h0) {
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw DomainError("derivative step must be positive");
  for (int attempt = 0; attempt < 40; ++attempt, h0 *= 0.5) {
    try {
      std::array<std::array<double, kLevels>, kLevels> a{};
      double h = h0;
      a[0][0] = estimator(h);
      if (!std::isfinite(a[0][0])) continue;
      Estimate best{a[0][0], std::numeric_limits<double>::max()};
      bool finite = true;
      for (int i = 1; i < kLevels; ++i) {
        h /= kShrink;
        a[0][i] = estimator(h);
        if (!std::isfinite(a[0][i])) {
          finite = false;
          break;
        }
        double fac = kShrink * kShrink;
        for (int j = 1; j <= i; ++j) {
          a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
          fac *= kShrink * kShrink;
          const double err = std::max(std::abs(a[j][i] - a[j - 1][i]),
                                      std::abs(a[j][i] - a[j - 1][i - 1]));
          if (err <= best.error) {
            best = {a[j][i], err};
          }
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= kSafe * best.error) break;
      }
      if (!finite && best.error == std::numeric_limits<double>::max()) continue;
      return best;
    } catch (const DomainError&) {
      // Stepped outside the domain; retry from a smaller start.
    }
  }
  throw DomainError("numerical derivative: no admissible step found");
}

Estimate derivative(const std::function<double(double)>& f, double x, double h0) {
  return extrapolate([&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }, h0);
}

Estimate second_derivative(const std::function<double(double)>& f, double x, double h0) {
  const double f0 = f(x);
  return extrapolate([&](double h) { return (f(x + h) - 2.0 * f0 + f(x - h)) / (h * h); }, h0);
}

Estimate mixed_derivative(const std::function<double(double, double)>& f, double hx0, double hy0) {
  const double ratio = hy0 / hx0;
  return extrapolate(
      [&](double h) {
        const double k = h * ratio;
        return (f(h, k) - f(h, -k) - f(-h, k) + f(-h, -k)) / (4.0 * h * k);
      },
      hx0);
}

double start_step(double z) { return 1e-3 * std::max(1.0, std::abs(z)); }

}  // namespace openthermo::numdiff
