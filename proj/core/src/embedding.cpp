#include "openthermo/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "openthermo/dynamics.hpp"
#include "openthermo/errors.hpp"
#include "openthermo/gas.hpp"

namespace openthermo {

namespace {

// Coordinate offsets inside the abstract configuration.
struct Index {
  bool mech;
  Eigen::Index q() const { return 0; }
  Eigen::Index x() const { return 1; }
  Eigen::Index S() const { return mech ? 2 : 0; }
  Eigen::Index N() const { return S() + 1; }
  Eigen::Index Gamma() const { return S() + 2; }
  Eigen::Index W() const { return S() + 3; }
  Eigen::Index Sigma() const { return S() + 4; }
  Eigen::Index n() const { return mech ? 7 : 5; }
};

}  // namespace

Eigen::VectorXd EmbeddedSystem::configuration(std::span<const double> y) const {
  const StateLayout& L = *layout;
  Index ix{L.has_mechanics()};
  Eigen::VectorXd z(ix.n());
  if (ix.mech) {
    z[ix.q()] = y[L.q()];
    z[ix.x()] = y[L.x()];
  }
  z[ix.S()] = y[L.S()];
  z[ix.N()] = y[L.N(0)];
  z[ix.Gamma()] = y[L.Gamma()];
  z[ix.W()] = y[L.W(0)];
  z[ix.Sigma()] = y[L.Sigma()];
  return z;
}

Eigen::VectorXd EmbeddedSystem::velocity_guess(std::span<const double> y) const {
  const StateLayout& L = *layout;
  Index ix{L.has_mechanics()};
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ix.n());
  if (ix.mech) {
    v[ix.q()] = y[L.qdot()];
    v[ix.x()] = y[L.xdot()];
  }
  return v;
}

std::vector<double> EmbeddedSystem::to_state(const Eigen::VectorXd& z, const Eigen::VectorXd& v) const {
  const StateLayout& L = *layout;
  Index ix{L.has_mechanics()};
  if (z.size() != ix.n() || v.size() != ix.n()) {
    throw StructuralError("abstract state has the wrong dimension");
  }
  std::vector<double> y(L.size(), 0.0);
  if (ix.mech) {
    y[L.q()] = z[ix.q()];
    y[L.qdot()] = v[ix.q()];
    y[L.x()] = z[ix.x()];
    y[L.xdot()] = v[ix.x()];
  }
  y[L.S()] = z[ix.S()];
  y[L.N(0)] = z[ix.N()];
  y[L.Gamma()] = z[ix.Gamma()];
  y[L.W(0)] = z[ix.W()];
  y[L.Sigma()] = z[ix.Sigma()];
  return y;
}

EmbeddedSystem embed_open_system(const NetworkModel& model_in, const EmbedOptions& options) {
  if (model_in.system_class != SystemClass::simple_single &&
      model_in.system_class != SystemClass::simple_mechanical) {
    throw PreconditionError("embedding supports simple_single and simple_mechanical models, got " +
                            std::string(to_string(model_in.system_class)));
  }
  require_valid(model_in);

  EmbeddedSystem es;
  es.model = std::make_shared<const NetworkModel>(model_in);
  es.layout = std::make_shared<const StateLayout>(StateLayout::for_model(model_in));
  const auto model = es.model;
  const auto layout = es.layout;
  const bool mech = layout->has_mechanics();
  const Index ix{mech};
  const double flip = options.flip_B ? -1.0 : 1.0;

  es.labels = mech ? std::vector<std::string>{"q", "x", "S", "N", "Gamma", "W", "Sigma"}
                   : std::vector<std::string>{"S", "N", "Gamma", "W", "Sigma"};

  auto volume = [model, ix](const Eigen::VectorXd& z) {
    if (!ix.mech) return model->compartments[0].V;
    const double q = z[ix.q()];
    if (!(q > 0.0)) throw DomainError("piston position q must be positive");
    return model->mechanics->A_section * q;
  };
  auto state_of = [es_copy = EmbeddedSystem{{}, {}, es.model, es.layout}](
                      const Eigen::VectorXd& z, const Eigen::VectorXd& v) {
    return es_copy.to_state(z, v);
  };

  LagrangianSystem& sys = es.system;
  sys.n = std::size_t(ix.n());
  sys.m = 1;

  sys.L = [model, ix, volume](double, const Eigen::VectorXd& z, const Eigen::VectorXd& v) {
    const GasSpec& gas = model->gas;
    const double N = z[ix.N()];
    double L = -internal_energy_total(gas, z[ix.S()], N, volume(z));
    if (ix.mech) {
      const auto& m = *model->mechanics;
      L += 0.5 * m.M * v[ix.q()] * v[ix.q()] + 0.5 * gas.molar_mass * N * v[ix.x()] * v[ix.x()];
    }
    return L + v[ix.W()] * N + (z[ix.S()] - z[ix.Sigma()]) * v[ix.Gamma()];
  };

  sys.A = [model, layout, ix, volume, state_of](double t, const Eigen::VectorXd& z,
                                                 const Eigen::VectorXd& v) {
    const std::vector<double> y = state_of(z, v);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, ix.n());
    const MolarState m = intensive_from_extensive(model->gas, z[ix.S()], z[ix.N()], volume(z));
    A(0, ix.Sigma()) = m.T;
    double J = 0.0, J_S = 0.0, momentum = 0.0;
    for (std::size_t a = 0; a < model->ports.size(); ++a) {
      const PortResolution p = resolve_port(*model, *layout, y, t, a);
      J += p.J;
      J_S += p.J_S;
      momentum += model->gas.molar_mass * p.J * p.v_a;
    }
    A(0, ix.W()) = J;
    A(0, ix.Gamma()) = J_S;
    if (ix.mech) {
      const double F_fr = -model->mechanics->lambda_fr * (v[ix.q()] - v[ix.x()]);
      A(0, ix.q()) = F_fr;
      A(0, ix.x()) = -F_fr + momentum;
    }
    return A;
  };

  sys.B = [model, layout, flip, state_of](double t, const Eigen::VectorXd& z,
                                          const Eigen::VectorXd& v) {
    const std::vector<double> y = state_of(z, v);
    const double M0 = model->gas.molar_mass;
    double B = 0.0;
    for (std::size_t a = 0; a < model->ports.size(); ++a) {
      const PortResolution p = resolve_port(*model, *layout, y, t, a);
      const double kinetic = 0.5 * M0 * p.v_a * p.v_a;
      B -= M0 * p.J * p.v_a * p.v_a + p.J * (p.mu_a - kinetic) + p.J_S * p.T_a;
    }
    return Eigen::VectorXd::Constant(1, flip * B);
  };

  if (mech) {
    sys.F_ext = [model, ix](double t, const Eigen::VectorXd&, const Eigen::VectorXd&) {
      Eigen::VectorXd F = Eigen::VectorXd::Zero(ix.n());
      F[ix.q()] = model->mechanics->F_ext_q(t);
      F[ix.x()] = model->mechanics->F_ext_x(t);
      return F;
    };
  }

  // Step scales from the initial state.
  const auto& c = model->compartments[0];
  const double V0 = c.V;
  const MolarState m0 = intensive_from_extensive(model->gas, c.S0, c.N0, V0);
  const double s_scale = c.N0 * model->gas.c_v;
  sys.q_scale = Eigen::VectorXd::Ones(ix.n());
  sys.v_scale = Eigen::VectorXd::Ones(ix.n());
  sys.q_scale[ix.S()] = sys.q_scale[ix.Sigma()] = s_scale;
  sys.q_scale[ix.N()] = c.N0;
  sys.q_scale[ix.Gamma()] = m0.T;
  sys.q_scale[ix.W()] = std::max(1.0, std::abs(m0.mu));
  sys.v_scale[ix.S()] = sys.v_scale[ix.Sigma()] = s_scale;
  sys.v_scale[ix.N()] = c.N0;
  sys.v_scale[ix.Gamma()] = m0.T;
  sys.v_scale[ix.W()] = std::max(1.0, std::abs(m0.mu));
  if (mech) {
    sys.q_scale[ix.q()] = model->mechanics->q0;
    sys.q_scale[ix.x()] = std::max(1.0, std::abs(model->mechanics->x0));
  }
  return es;
}

}  // namespace openthermo
