#include "openthermo/ldav.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "openthermo/errors.hpp"
#include "openthermo/numdiff.hpp"

namespace openthermo {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kStepFraction = 0.05;

double q_step(const LagrangianSystem& s, const VectorXd& q, Eigen::Index j) {
  const double scale = s.q_scale.size() == q.size() ? s.q_scale[j] : std::max(1.0, std::abs(q[j]));
  return kStepFraction * scale;
}

double v_step(const LagrangianSystem& s, const VectorXd& v, Eigen::Index j) {
  const double scale = s.v_scale.size() == v.size() ? s.v_scale[j] : std::max(1.0, std::abs(v[j]));
  return kStepFraction * scale;
}

double t_step(double t) { return kStepFraction * std::max(1.0, std::abs(t)); }

VectorXd unit_shift(const VectorXd& x, Eigen::Index i, double d) {
  VectorXd y = x;
  y[i] += d;
  return y;
}

double dL_dv(const LagrangianSystem& s, double t, const VectorXd& q, const VectorXd& v,
             Eigen::Index i) {
  return numdiff::derivative([&](double vi) {
    VectorXd w = v;
    w[i] = vi;
    return s.L(t, q, w);
  }, v[i], v_step(s, v, i)).value;
}

double dL_dq(const LagrangianSystem& s, double t, const VectorXd& q, const VectorXd& v,
             Eigen::Index i) {
  return numdiff::derivative([&](double qi) {
    VectorXd p = q;
    p[i] = qi;
    return s.L(t, p, v);
  }, q[i], q_step(s, q, i)).value;
}

VectorXd grad_q(const LagrangianSystem& s, double t, const VectorXd& q, const VectorXd& v) {
  VectorXd g(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) g[i] = dL_dq(s, t, q, v, i);
  return g;
}

VectorXd force(const LagrangianSystem& s, double t, const VectorXd& q, const VectorXd& v) {
  if (!s.F_ext) return VectorXd::Zero(Eigen::Index(s.n));
  return s.F_ext(t, q, v);
}

VectorXd kinematic(const LagrangianSystem& s, double t, const VectorXd& q, const VectorXd& v) {
  return s.A(t, q, v) * v + s.B(t, q, v);
}

/// Mixed second derivatives d2L/(dv_i dq_j) and d2L/(dv_i dt) for the rows in `rows`.
struct VelocityGradientRates {
  MatrixXd C;     ///< rows x n
  VectorXd C_t;   ///< rows
};

VelocityGradientRates velocity_gradient_rates(const LagrangianSystem& s, double t,
                                              const VectorXd& q, const VectorXd& v,
                                              const std::vector<Eigen::Index>& rows) {
  const Eigen::Index n = q.size();
  VelocityGradientRates r;
  r.C.resize(Eigen::Index(rows.size()), n);
  r.C_t.resize(Eigen::Index(rows.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const Eigen::Index i = rows[a];
    for (Eigen::Index j = 0; j < n; ++j) {
      r.C(Eigen::Index(a), j) = numdiff::mixed_derivative(
          [&](double dq, double dv) {
            return s.L(t, unit_shift(q, j, dq), unit_shift(v, i, dv));
          },
          q_step(s, q, j), v_step(s, v, i)).value;
    }
    r.C_t[Eigen::Index(a)] = numdiff::mixed_derivative(
        [&](double dt, double dv) { return s.L(t + dt, q, unit_shift(v, i, dv)); }, t_step(t),
        v_step(s, v, i)).value;
  }
  return r;
}

std::vector<std::vector<double>> null_directions(const Eigen::JacobiSVD<MatrixXd>& svd,
                                                 double rel) {
  std::vector<std::vector<double>> out;
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] <= rel * smax) {
      VectorXd col = svd.matrixV().col(k);
      out.emplace_back(col.data(), col.data() + col.size());
    }
  }
  return out;
}

void check_conditioning(const MatrixXd& J, const std::string& what) {
  Eigen::JacobiSVD<MatrixXd> svd(J, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(smax > 0.0) || !(cond < 1e13)) {
    throw SolverError(what + " is singular (condition estimate " + std::to_string(cond) + ")", cond,
                      null_directions(svd, 1e-13));
  }
}

bool all_finite(const VectorXd& x) { return x.allFinite(); }

/// Velocity-determined components and multipliers from the vanishing mass
/// rows plus the kinematic constraint.
struct NullSolve {
  VectorXd v, lambda;
  int iterations = 0;
};

NullSolve solve_null_velocities(const LagrangianSystem& s, double t, const VectorXd& q,
                                const VectorXd& v0, const std::vector<Eigen::Index>& null_rows,
                                const VelocityGradientRates& rates, const SolveOptions& o) {
  const Eigen::Index k = Eigen::Index(null_rows.size());
  const Eigen::Index m = Eigen::Index(s.m);
  auto G = [&](const VectorXd& u) {
    VectorXd v = v0;
    for (Eigen::Index a = 0; a < k; ++a) v[null_rows[std::size_t(a)]] = u[a];
    const VectorXd lambda = u.tail(m);
    const MatrixXd A = s.A(t, q, v);
    const VectorXd F = force(s, t, q, v);
    VectorXd g(k + m);
    for (Eigen::Index a = 0; a < k; ++a) {
      const Eigen::Index i = null_rows[std::size_t(a)];
      g[a] = rates.C.row(a).dot(v) + rates.C_t[a] - dL_dq(s, t, q, v, i) -
             A.col(i).dot(lambda) - F[i];
    }
    g.tail(m) = A * v + s.B(t, q, v);
    return g;
  };

  VectorXd u(k + m);
  for (Eigen::Index a = 0; a < k; ++a) u[a] = v0[null_rows[std::size_t(a)]];
  u.tail(m).setOnes();

  NullSolve out;
  for (int it = 1; it <= o.newton_max_iter; ++it) {
    const VectorXd g = G(u);
    if (!all_finite(g)) throw SolverError("non-finite residual in the velocity solve");
    MatrixXd J(k + m, k + m);
    for (Eigen::Index c = 0; c < k + m; ++c) {
      const double d = 1e-6 * std::max(1.0, std::abs(u[c]));
      J.col(c) = (G(unit_shift(u, c, d)) - G(unit_shift(u, c, -d))) / (2.0 * d);
    }
    check_conditioning(J, "velocity/multiplier system");
    const VectorXd du = J.colPivHouseholderQr().solve(-g);
    u += du;
    bool small = true;
    for (Eigen::Index c = 0; c < u.size(); ++c) {
      if (std::abs(du[c]) > o.newton_tol * std::max(1.0, std::abs(u[c]))) small = false;
    }
    out.iterations = it;
    if (small) {
      out.v = v0;
      for (Eigen::Index a = 0; a < k; ++a) out.v[null_rows[std::size_t(a)]] = u[a];
      out.lambda = u.tail(m);
      return out;
    }
  }
  throw SolverError("Newton iteration did not converge in " + std::to_string(o.newton_max_iter) +
                    " iterations");
}

struct Classification {
  MatrixXd M;
  std::vector<Eigen::Index> regular, null;
};

Classification classify(const LagrangianSystem& s, double t, const VectorXd& q, const VectorXd& v,
                        double tol) {
  const Eigen::Index n = q.size();
  Classification c;
  c.M.resize(n, n);
  MatrixXd err(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      numdiff::Estimate e;
      if (i == j) {
        e = numdiff::second_derivative([&](double vi) {
          VectorXd w = v;
          w[i] = vi;
          return s.L(t, q, w);
        }, v[i], v_step(s, v, i));
      } else {
        e = numdiff::mixed_derivative(
            [&](double a, double b) {
              VectorXd w = v;
              w[i] += a;
              w[j] += b;
              return s.L(t, q, w);
            },
            v_step(s, v, i), v_step(s, v, j));
      }
      c.M(i, j) = c.M(j, i) = e.value;
      err(i, j) = err(j, i) = e.error;
    }
  }
  const double scale = std::max(1.0, c.M.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    bool zero = true;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(c.M(i, j)) > tol * scale + 100.0 * err(i, j)) zero = false;
    }
    (zero ? c.null : c.regular).push_back(i);
  }
  return c;
}

void check_shapes(const LagrangianSystem& s, const VectorXd& q, const VectorXd& v) {
  if (Eigen::Index(s.n) != q.size() || Eigen::Index(s.n) != v.size()) {
    throw StructuralError("configuration/velocity length does not match the system dimension");
  }
  if (!(s.m < s.n)) throw StructuralError("constraint count must be smaller than the dimension");
  if (!s.L || !s.A || !s.B) throw StructuralError("Lagrangian system needs L, A and B");
}

AccelResult solve_impl(const LagrangianSystem& s, double t, const VectorXd& q, const VectorXd& v,
                       const SolveOptions& o) {
  check_shapes(s, q, v);
  const Eigen::Index n = q.size();
  const Eigen::Index m = Eigen::Index(s.m);
  Classification cls = classify(s, t, q, v, o.mass_null_tol);

  AccelResult r;
  r.velocity_determined.assign(std::size_t(n), false);
  for (auto i : cls.null) r.velocity_determined[std::size_t(i)] = true;
  r.a = VectorXd::Zero(n);

  if (cls.null.empty()) {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) all[std::size_t(i)] = i;
    const auto rates = velocity_gradient_rates(s, t, q, v, all);
    const VectorXd rhs_el = grad_q(s, t, q, v) + force(s, t, q, v) - rates.C * v - rates.C_t;
    const MatrixXd A = s.A(t, q, v);
    // Differentiated constraint: dK/dv a + (dK/dt + dK/dq v) = 0.
    MatrixXd Kv(m, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double h = v_step(s, v, j);
      for (Eigen::Index r_ = 0; r_ < m; ++r_) {
        Kv(r_, j) = numdiff::derivative([&](double x) {
          return kinematic(s, t, q, unit_shift(v, j, x - v[j]))[r_];
        }, v[j], h).value;
      }
    }
    VectorXd Kflow(m);
    double hs = t_step(t);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (v[j] != 0.0) hs = std::min(hs, q_step(s, q, j) / std::abs(v[j]));
    }
    for (Eigen::Index r_ = 0; r_ < m; ++r_) {
      Kflow[r_] = numdiff::derivative([&](double x) {
        return kinematic(s, t + x, q + x * v, v)[r_];
      }, 0.0, hs).value;
    }
    MatrixXd S = MatrixXd::Zero(n + m, n + m);
    S.topLeftCorner(n, n) = cls.M;
    S.topRightCorner(n, m) = -A.transpose();
    S.bottomLeftCorner(m, n) = Kv;
    VectorXd b(n + m);
    b.head(n) = rhs_el;
    b.tail(m) = -Kflow;
    check_conditioning(S, "saddle-point matrix");
    const VectorXd x = S.colPivHouseholderQr().solve(b);
    r.a = x.head(n);
    r.lambda = x.tail(m);
    r.v = v;
    return r;
  }

  const auto null_rates = velocity_gradient_rates(s, t, q, v, cls.null);
  NullSolve ns = solve_null_velocities(s, t, q, v, cls.null, null_rates, o);
  r.v = ns.v;
  r.lambda = ns.lambda;
  r.newton_iterations = ns.iterations;

  if (!cls.regular.empty()) {
    const auto rates = velocity_gradient_rates(s, t, q, r.v, cls.regular);
    const MatrixXd A = s.A(t, q, r.v);
    const VectorXd F = force(s, t, q, r.v);
    const Eigen::Index k = Eigen::Index(cls.regular.size());
    MatrixXd Mrr(k, k);
    VectorXd b(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      const Eigen::Index i = cls.regular[std::size_t(a)];
      for (Eigen::Index c = 0; c < k; ++c) Mrr(a, c) = cls.M(i, cls.regular[std::size_t(c)]);
      b[a] = dL_dq(s, t, q, r.v, i) + A.col(i).dot(r.lambda) + F[i] - rates.C.row(a).dot(r.v) -
             rates.C_t[a];
    }
    check_conditioning(Mrr, "regular mass block");
    const VectorXd ar = Mrr.colPivHouseholderQr().solve(b);
    for (Eigen::Index a = 0; a < k; ++a) r.a[cls.regular[std::size_t(a)]] = ar[a];
  }
  return r;
}

}  // namespace

double energy(const LagrangianSystem& sys, double t, const VectorXd& q, const VectorXd& v) {
  check_shapes(sys, q, v);
  double pv = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) pv += dL_dv(sys, t, q, v, i) * v[i];
  return pv - sys.L(t, q, v);
}

VectorXd constraint_residual(const LagrangianSystem& sys, double t, const VectorXd& q,
                             const VectorXd& v) {
  check_shapes(sys, q, v);
  return kinematic(sys, t, q, v);
}

MatrixXd mass_matrix(const LagrangianSystem& sys, double t, const VectorXd& q, const VectorXd& v) {
  check_shapes(sys, q, v);
  return classify(sys, t, q, v, 0.0).M;
}

VectorXd euler_lagrange_residual(const LagrangianSystem& sys, double t, const VectorXd& q,
                                 const VectorXd& v, const VectorXd& a, const VectorXd& lambda) {
  check_shapes(sys, q, v);
  const Eigen::Index n = q.size();
  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) all[std::size_t(i)] = i;
  const auto rates = velocity_gradient_rates(sys, t, q, v, all);
  const MatrixXd M = mass_matrix(sys, t, q, v);
  return M * a + rates.C * v + rates.C_t - grad_q(sys, t, q, v) -
         sys.A(t, q, v).transpose() * lambda - force(sys, t, q, v);
}

AccelResult solve_accel(const LagrangianSystem& sys, double t, const VectorXd& q,
                        const VectorXd& v, const SolveOptions& options) {
  AccelResult r = solve_impl(sys, t, q, v, options);
  const bool any_null =
      std::any_of(r.velocity_determined.begin(), r.velocity_determined.end(), [](bool b) { return b; });
  if (options.null_accelerations && any_null) {
    // Differentiate the consistent velocity along the flow.
    const double d = 1e-4;
    SolveOptions inner = options;
    inner.null_accelerations = false;
    const AccelResult plus = solve_impl(sys, t + d, q + d * r.v, r.v + d * r.a, inner);
    const AccelResult minus = solve_impl(sys, t - d, q - d * r.v, r.v - d * r.a, inner);
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (r.velocity_determined[std::size_t(i)]) r.a[i] = (plus.v[i] - minus.v[i]) / (2.0 * d);
    }
  }
  return r;
}

VectorXd project_velocity(const LagrangianSystem& sys, double t, const VectorXd& q,
                          const VectorXd& v, const SolveOptions& options) {
  check_shapes(sys, q, v);
  Classification cls = classify(sys, t, q, v, options.mass_null_tol);
  if (!cls.null.empty()) {
    const auto rates = velocity_gradient_rates(sys, t, q, v, cls.null);
    return solve_null_velocities(sys, t, q, v, cls.null, rates, options).v;
  }
  VectorXd w = v;
  for (int it = 0; it < 5; ++it) {
    const MatrixXd A = sys.A(t, q, w);
    const VectorXd K = A * w + sys.B(t, q, w);
    if (K.norm() <= 1e-14 * std::max(1.0, w.norm())) break;
    const MatrixXd AAt = A * A.transpose();
    w += A.transpose() * AAt.ldlt().solve(-K);
  }
  return w;
}

AbstractTrajectory integrate_abstract(const LagrangianSystem& sys, const AbstractState& start,
                                      double t_final, const AbstractOptions& o) {
  if (!(o.h > 0.0)) throw DomainError("abstract integration step must be positive");
  if (!(t_final >= start.t)) throw DomainError("t_final must not precede the start time");
  check_shapes(sys, start.q, start.v);
  const double span = t_final - start.t;
  const long steps = std::max(1L, static_cast<long>(std::ceil(span / o.h - 1e-9)));
  const double h = span / double(steps);
  const long stride =
      o.sample_dt > 0.0 ? std::max(1L, static_cast<long>(std::llround(o.sample_dt / h))) : 1L;

  AbstractTrajectory traj;
  double t = start.t;
  VectorXd q = start.q;
  VectorXd v = project_velocity(sys, t, q, start.v, o.solve);

  auto record = [&](const VectorXd& lambda) {
    traj.samples.push_back({t, q, v});
    traj.multipliers.push_back(lambda);
    traj.max_constraint_residual =
        std::max(traj.max_constraint_residual, kinematic(sys, t, q, v).cwiseAbs().maxCoeff());
  };
  AccelResult first = solve_accel(sys, t, q, v, o.solve);
  record(first.lambda);

  struct Rate {
    VectorXd dq, dv;
  };
  auto f = [&](double tt, const VectorXd& qq, const VectorXd& vv) {
    AccelResult r = solve_accel(sys, tt, qq, vv, o.solve);
    return Rate{r.v, r.a};
  };

  for (long s = 1; s <= steps; ++s) {
    const Rate k1 = f(t, q, v);
    const Rate k2 = f(t + h / 2, q + h / 2 * k1.dq, v + h / 2 * k1.dv);
    const Rate k3 = f(t + h / 2, q + h / 2 * k2.dq, v + h / 2 * k2.dv);
    const Rate k4 = f(t + h, q + h * k3.dq, v + h * k3.dv);
    q += h / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
    v += h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    t = start.t + double(s) * h;
    v = project_velocity(sys, t, q, v, o.solve);
    if (!q.allFinite() || !v.allFinite()) {
      std::vector<double> snap(q.data(), q.data() + q.size());
      throw IntegrityError("non-finite abstract state", t, snap);
    }
    ++traj.steps;
    const double res = kinematic(sys, t, q, v).cwiseAbs().maxCoeff();
    traj.max_constraint_residual = std::max(traj.max_constraint_residual, res);
    if (s % stride == 0 || s == steps) {
      record(solve_accel(sys, t, q, v, o.solve).lambda);
    }
  }
  return traj;
}

}  // namespace openthermo
