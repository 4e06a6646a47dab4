#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "openthermo/errors.hpp"
#include "openthermo/integrator.hpp"

using namespace openthermo;

namespace {

std::vector<double> decay(double, std::span<const double> y) { return {-y[0]}; }

// y1' = y2, y2' = -y1
std::vector<double> oscillator(double, std::span<const double> y) { return {y[1], -y[0]}; }

IntegrationOptions rk4(double h, double sample_dt = 1.0) {
  IntegrationOptions o;
  o.method = Method::rk4;
  o.h0 = h;
  o.h_max = h;
  o.sample_dt = sample_dt;
  return o;
}

}  // namespace

TEST(Integrator, Rk45MeetsTolerance) {
  IntegrationOptions o;
  o.abs_tol = o.rel_tol = 1e-11;
  const auto r = integrate(decay, 0.0, {1.0}, 5.0, o);
  ASSERT_EQ(r.termination.kind, Termination::Kind::completed);
  EXPECT_NEAR(r.states.back()[0], std::exp(-5.0), 1e-10);
  for (std::size_t i = 0; i < r.times.size(); ++i) EXPECT_NEAR(r.states[i][0], std::exp(-r.times[i]), 1e-10);
}

TEST(Integrator, Rk4IsFourthOrder) {
  auto error = [](double h) {
    const auto r = integrate(oscillator, 0.0, {1.0, 0.0}, 2.0, rk4(h));
    return std::hypot(r.states.back()[0] - std::cos(2.0), r.states.back()[1] + std::sin(2.0));
  };
  for (double h : {0.1, 0.05, 0.025}) {
    const double ratio = error(h) / error(h / 2);
    EXPECT_GT(ratio, 14.0);
    EXPECT_LT(ratio, 18.0);
  }
}

TEST(Integrator, SamplesLandOnTheGridAndTheEnd) {
  IntegrationOptions o;
  o.sample_dt = 0.3;
  const auto r = integrate(decay, 1.0, {1.0}, 2.0, o);
  ASSERT_EQ(r.times.size(), 5u);
  EXPECT_EQ(r.times[0], 1.0);
  EXPECT_DOUBLE_EQ(r.times[1], 1.3);
  EXPECT_DOUBLE_EQ(r.times[3], 1.9);
  EXPECT_EQ(r.times.back(), 2.0);
  EXPECT_EQ(r.states.size(), r.times.size());
}

TEST(Integrator, FixedStepCountForRk4) {
  const auto r = integrate(decay, 0.0, {1.0}, 1.0, rk4(0.01, 0.5));
  EXPECT_EQ(r.accepted_steps, 100u);
  EXPECT_EQ(r.rejected_steps, 0u);
}

TEST(Integrator, GuardStopsTheRun) {
  IntegrationOptions o;
  o.h_min = 1e-9;
  auto guard = [](double, std::span<const double> y) -> std::optional<std::string> {
    if (y[0] < 0.5) return "below one half";
    return std::nullopt;
  };
  const auto r = integrate(decay, 0.0, {1.0}, 5.0, o, guard);
  EXPECT_EQ(r.termination.kind, Termination::Kind::guard_stop);
  EXPECT_EQ(r.termination.reason, "below one half");
  EXPECT_NEAR(r.termination.t, std::log(2.0), 1e-7);
  EXPECT_GE(r.states.back()[0], 0.5);
}

TEST(Integrator, DomainErrorsInTheRhsShrinkTheStep) {
  // Depletion at rate 1: the rhs refuses negative amounts.
  auto f = [](double, std::span<const double> y) -> std::vector<double> {
    if (y[0] <= 0.0) throw DomainError("empty");
    return {-1.0};
  };
  IntegrationOptions o = rk4(0.3, 0.3);
  o.h_min = 1e-6;
  const auto r = integrate(f, 0.0, {1.0}, 2.0, o);
  EXPECT_EQ(r.termination.kind, Termination::Kind::guard_stop);
  EXPECT_NEAR(r.termination.t, 1.0, 1e-5);
  EXPECT_GT(r.rejected_steps, 0u);
}

TEST(Integrator, BlowUpUnderflowsTheAdaptiveStep) {
  auto f = [](double, std::span<const double> y) { return std::vector<double>{y[0] * y[0]}; };
  IntegrationOptions o;
  o.h_min = 1e-8;
  const auto r = integrate(f, 0.0, {1.0}, 2.0, o);
  EXPECT_EQ(r.termination.kind, Termination::Kind::step_underflow);
  EXPECT_LT(r.termination.t, 1.0);
  EXPECT_GT(r.termination.t, 0.99);
}

TEST(Integrator, NonFiniteValuesAreIntegrityErrors) {
  auto f = [](double t, std::span<const double>) {
    return std::vector<double>{t > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0};
  };
  EXPECT_THROW(integrate(f, 0.0, {1.0}, 1.0, rk4(0.1)), IntegrityError);
  EXPECT_THROW(integrate(decay, 0.0, {std::numeric_limits<double>::infinity()}, 1.0, rk4(0.1)), IntegrityError);
}

TEST(Integrator, OptionsAreValidated) {
  IntegrationOptions o;
  EXPECT_TRUE(o.violations().empty());
  o.h_min = 2.0;
  EXPECT_FALSE(o.violations().empty());
  EXPECT_THROW(integrate(decay, 0.0, {1.0}, 1.0, o), ValidationError);
  IntegrationOptions p;
  p.sample_dt = 0.0;
  EXPECT_FALSE(p.violations().empty());
  EXPECT_THROW(integrate(decay, 1.0, {1.0}, 0.0, IntegrationOptions{}), DomainError);
}

TEST(Integrator, MethodNames) {
  EXPECT_EQ(parse_method("rk4"), Method::rk4);
  EXPECT_EQ(parse_method("rk45"), Method::rk45);
  EXPECT_FALSE(parse_method("euler").has_value());
  EXPECT_EQ(to_string(Method::rk45), "rk45");
}
