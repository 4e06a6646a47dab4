#include <gtest/gtest.h>

#include <cmath>

#include "openthermo/errors.hpp"
#include "openthermo/ldav.hpp"

using namespace openthermo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Knife edge (skate) on a plane: q = (x, y, theta), no sideways slip.
LagrangianSystem knife_edge(double m = 2.0, double I = 0.5) {
  LagrangianSystem s;
  s.n = 3;
  s.m = 1;
  s.L = [m, I](double, const VectorXd&, const VectorXd& v) {
    return 0.5 * m * (v[0] * v[0] + v[1] * v[1]) + 0.5 * I * v[2] * v[2];
  };
  s.A = [](double, const VectorXd& q, const VectorXd&) {
    MatrixXd A(1, 3);
    A << -std::sin(q[2]), std::cos(q[2]), 0.0;
    return A;
  };
  s.B = [](double, const VectorXd&, const VectorXd&) { return VectorXd::Zero(1); };
  return s;
}

// Unit masses, spring on q1, affine constraint v2 = c v1 - b.
LagrangianSystem affine_pair(double k, double c, double b) {
  LagrangianSystem s;
  s.n = 2;
  s.m = 1;
  s.L = [k](double, const VectorXd& q, const VectorXd& v) {
    return 0.5 * (v[0] * v[0] + v[1] * v[1]) - 0.5 * k * q[0] * q[0];
  };
  s.A = [c](double, const VectorXd&, const VectorXd&) {
    MatrixXd A(1, 2);
    A << -c, 1.0;
    return A;
  };
  s.B = [b](double, const VectorXd&, const VectorXd&) { return VectorXd::Constant(1, b); };
  return s;
}

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(Eigen::Index(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(Ldav, EnergyAndMassMatrixOfAQuadraticLagrangian) {
  LagrangianSystem s;
  s.n = 2;
  s.m = 0;
  s.L = [](double, const VectorXd& q, const VectorXd& v) {
    return 0.5 * (2.0 * v[0] * v[0] + v[0] * v[1] + v[1] * v[1]) - 3.0 * q[0] * q[1];
  };
  s.A = [](double, const VectorXd&, const VectorXd&) { return MatrixXd(0, 2); };
  s.B = [](double, const VectorXd&, const VectorXd&) { return VectorXd(0); };
  const VectorXd q = vec({0.4, -1.2}), v = vec({0.3, 2.0});
  const MatrixXd M = mass_matrix(s, 0.0, q, v);
  EXPECT_NEAR(M(0, 0), 2.0, 1e-8);
  EXPECT_NEAR(M(0, 1), 0.5, 1e-8);
  EXPECT_NEAR(M(1, 1), 1.0, 1e-8);
  const double kinetic = 0.5 * (2.0 * 0.09 + 0.6 + 4.0);
  EXPECT_NEAR(energy(s, 0.0, q, v), kinetic + 3.0 * q[0] * q[1], 1e-9);
}

TEST(Ldav, LinearConstraintHandOracle) {
  const double k = 3.0, c = 0.7;
  const auto s = affine_pair(k, c, 0.0);
  const VectorXd q = vec({0.8, 0.1}), v = vec({0.5, 0.35});
  const auto r = solve_accel(s, 0.0, q, v);
  const double a1 = -k * q[0] / (1 + c * c);
  EXPECT_NEAR(r.a[0], a1, 1e-8);
  EXPECT_NEAR(r.a[1], c * a1, 1e-8);
  EXPECT_NEAR(r.lambda[0], c * a1, 1e-8);
  EXPECT_LT(euler_lagrange_residual(s, 0.0, q, v, r.a, r.lambda).norm(), 1e-7);
}

TEST(Ldav, KnifeEdgeMultiplierOracle) {
  const double m = 2.0;
  const auto s = knife_edge(m);
  const double th = 0.6, u = 1.3, w = 0.9;
  const VectorXd q = vec({0.0, 0.0, th}), v = vec({u * std::cos(th), u * std::sin(th), w});
  const auto r = solve_accel(s, 0.0, q, v);
  EXPECT_NEAR(r.lambda[0], m * w * u, 1e-8);
  EXPECT_NEAR(r.a[0], -std::sin(th) * w * u, 1e-8);
  EXPECT_NEAR(r.a[1], std::cos(th) * w * u, 1e-8);
  EXPECT_NEAR(r.a[2], 0.0, 1e-8);
}

// Heading turns uniformly, speed along the heading is conserved: the
// contact point runs on a circle of radius u / w.
TEST(Ldav, KnifeEdgeTrajectoryFollowsTheCircle) {
  const auto s = knife_edge();
  const double th0 = 0.2, u = 1.1, w = 0.8;
  AbstractState start{0.0, vec({0.0, 0.0, th0}), vec({u * std::cos(th0), u * std::sin(th0), w})};
  AbstractOptions o;
  o.h = 1e-3;
  o.sample_dt = 0.5;
  const auto traj = integrate_abstract(s, start, 3.0, o);
  ASSERT_EQ(traj.samples.size(), 7u);
  for (const auto& st : traj.samples) {
    const double th = th0 + w * st.t;
    EXPECT_NEAR(st.q[0], (u / w) * (std::sin(th) - std::sin(th0)), 1e-9);
    EXPECT_NEAR(st.q[1], -(u / w) * (std::cos(th) - std::cos(th0)), 1e-9);
    EXPECT_NEAR(st.q[2], th, 1e-9);
  }
  EXPECT_LE(traj.max_constraint_residual, 1e-10);
  const double E0 = energy(s, 0.0, traj.samples.front().q, traj.samples.front().v);
  const double E1 = energy(s, 3.0, traj.samples.back().q, traj.samples.back().v);
  EXPECT_NEAR(E1, E0, 1e-9 * E0);
}

// With an affine constraint the multiplier does work: dE/dt = lambda . A v = -lambda . B.
TEST(Ldav, AffineConstraintEnergyBalance) {
  const double b = 0.4;
  const auto s = affine_pair(2.0, 0.5, b);
  AbstractState start{0.0, vec({1.0, 0.0}), vec({0.2, 0.1 - b})};
  AbstractOptions o;
  o.h = 1e-3;
  const auto traj = integrate_abstract(s, start, 2.0, o);
  ASSERT_GT(traj.samples.size(), 100u);
  double work = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const double dt = traj.samples[i].t - traj.samples[i - 1].t;
    work += 0.5 * dt * (-traj.multipliers[i][0] * b - traj.multipliers[i - 1][0] * b);
  }
  const double dE = energy(s, 2.0, traj.samples.back().q, traj.samples.back().v) -
                    energy(s, 0.0, traj.samples.front().q, traj.samples.front().v);
  EXPECT_NEAR(dE, work, 1e-6 * std::max(1.0, std::abs(work)));
  EXPECT_LE(traj.max_constraint_residual, 1e-10);
}

TEST(Ldav, ProjectionRestoresTheConstraint) {
  const auto s = affine_pair(1.0, 0.5, 0.3);
  const VectorXd q = vec({0.1, 0.2}), v = vec({1.0, 1.0});
  const VectorXd p = project_velocity(s, 0.0, q, v);
  EXPECT_LT(constraint_residual(s, 0.0, q, p).norm(), 1e-12);
  // Minimum-norm correction: the change is along A^T.
  const VectorXd d = p - v;
  EXPECT_NEAR(d[0] / d[1], -0.5, 1e-9);
}

TEST(Ldav, SingularSaddleIsASolverError) {
  LagrangianSystem s = affine_pair(1.0, 0.0, 1.0);
  s.A = [](double, const VectorXd&, const VectorXd&) { return MatrixXd::Zero(1, 2); };
  EXPECT_THROW(solve_accel(s, 0.0, vec({0.0, 0.0}), vec({0.0, 0.0})), SolverError);
}
