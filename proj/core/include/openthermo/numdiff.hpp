#pragma once

#include <functional>

namespace openthermo::numdiff {

struct Estimate {
  double value = 0.0;
  double error = 0.0;  ///< extrapolation error estimate
};

/// Richardson (Ridders) extrapolation of an estimator A(h) whose error is an
/// even power series in h, from h0 down by a factor 1.4 per level. If A throws
/// DomainError the starting step is halved and the table restarted.
Estimate extrapolate(const std::function<double(double)>& estimator, double h0);

/// df/dx at x by extrapolated central differences.
Estimate derivative(const std::function<double(double)>& f, double x, double h0);

/// d2f/dx2 at x.
Estimate second_derivative(const std::function<double(double)>& f, double x, double h0);

/// d2f/(dx dy) at (0, 0) for f(dx, dy), steps scaled as (hx0, hy0).
Estimate mixed_derivative(const std::function<double(double, double)>& f, double hx0, double hy0);

/// Default starting step for a coordinate of magnitude z.
double start_step(double z);

}  // namespace openthermo::numdiff
