#include "openthermo/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "openthermo/errors.hpp"

namespace openthermo {

namespace {

std::string join_lines(const std::vector<std::string>& items) {
  std::string out = "model validation failed";
  for (const auto& s : items) out += "\n  " + s;
  return out;
}

bool finite(double v) { return std::isfinite(v); }

bool finite_fn(const TimeFunction& f) {
  return finite(f.min_value()) && finite(f.max_value());
}

double norm(const OnsagerMatrix& L) {
  return std::sqrt(L.HH * L.HH + L.HM * L.HM + L.MH * L.MH + L.MM * L.MM);
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::invalid_argument(join_lines(violations)), violations_(std::move(violations)) {}

std::string_view to_string(SystemClass c) {
  switch (c) {
    case SystemClass::simple_single: return "simple_single";
    case SystemClass::simple_mechanical: return "simple_mechanical";
    case SystemClass::simple_diffusion: return "simple_diffusion";
    case SystemClass::non_simple: return "non_simple";
  }
  return "unknown";
}

std::optional<SystemClass> parse_system_class(std::string_view name) {
  for (auto c : {SystemClass::simple_single, SystemClass::simple_mechanical,
                 SystemClass::simple_diffusion, SystemClass::non_simple}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

bool onsager_symmetric(const OnsagerMatrix& L, double rel_tol) {
  return std::abs(L.HM - L.MH) <= rel_tol * std::max(norm(L), 1e-300);
}

bool onsager_psd(const OnsagerMatrix& L, double rel_tol) {
  // Eigenvalues of the symmetric part; the antisymmetric part does not
  // contribute to the quadratic form.
  const double a = L.HH, d = L.MM, b = 0.5 * (L.HM + L.MH);
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), b);
  const double lo = mean - rad;
  return lo >= -rel_tol * std::max(norm(L), 1e-300);
}

const TimeFunction* MechanicsSpec::velocity_of(std::string_view port_id) const {
  for (const auto& [id, f] : port_velocities) {
    if (id == port_id) return &f;
  }
  return nullptr;
}

std::optional<std::size_t> NetworkModel::compartment_index(std::string_view id) const {
  for (std::size_t k = 0; k < compartments.size(); ++k) {
    if (compartments[k].id == id) return k;
  }
  return std::nullopt;
}

bool NetworkModel::isolated() const {
  auto zero = [](const TimeFunction& f) { return f.min_value() == 0.0 && f.max_value() == 0.0; };
  for (const auto& p : ports) {
    if (!zero(p.J)) return false;
  }
  for (const auto& s : sources) {
    if (!zero(s.J_S)) return false;
  }
  if (mechanics && (!zero(mechanics->F_ext_q) || !zero(mechanics->F_ext_x))) return false;
  return true;
}

std::vector<Violation> validate(const NetworkModel& model) {
  std::vector<Violation> out;
  auto add = [&](std::string entity, std::string rule) {
    out.push_back({std::move(entity), std::move(rule)});
  };

  for (const auto& v : model.gas.violations()) add("gas", v);

  const auto cls = model.system_class;
  const std::size_t K = model.compartments.size();
  if (K == 0) add("model", "at least one compartment is required");
  if ((cls == SystemClass::simple_single || cls == SystemClass::simple_mechanical) && K > 1) {
    add("model", std::string(to_string(cls)) + " takes exactly one compartment, got " +
                     std::to_string(K));
  }

  std::set<std::string> ids;
  auto check_id = [&](const std::string& kind, const std::string& id) {
    if (id.empty()) add(kind, "empty id");
    else if (!ids.insert(id).second) add(kind + " " + id, "duplicate id");
  };

  for (const auto& c : model.compartments) {
    const std::string e = "compartment " + c.id;
    check_id("compartment", c.id);
    if (!(finite(c.V) && c.V > 0)) add(e, "volume V must be positive and finite");
    if (!(finite(c.N0) && c.N0 > 0)) add(e, "initial amount N0 must be positive and finite");
    if (!finite(c.S0)) add(e, "initial entropy S0 must be finite");
  }

  for (const auto& p : model.ports) {
    const std::string e = "port " + p.id;
    check_id("port", p.id);
    if (!model.compartment_index(p.compartment)) {
      add(e, "unknown compartment '" + p.compartment + "'");
    }
    if (!finite_fn(p.J)) add(e, "flux J must be finite");
    if (!finite_fn(p.T_in)) add(e, "inflow temperature T_in must be finite");
    if (!finite_fn(p.p_in)) add(e, "inflow pressure p_in must be finite");
    if (p.J.max_value() > 0.0) {
      if (!(p.T_in.min_value() > 0)) add(e, "inflow temperature T_in must stay positive");
      if (!(p.p_in.min_value() > 0)) add(e, "inflow pressure p_in must stay positive");
    }
  }

  for (const auto& s : model.sources) {
    const std::string e = "source " + s.id;
    check_id("source", s.id);
    if (cls != SystemClass::non_simple) {
      add(e, "heat sources need a non_simple system (one temperature per compartment)");
    }
    if (!model.compartment_index(s.compartment)) {
      add(e, "unknown compartment '" + s.compartment + "'");
    }
    if (!finite_fn(s.J_S)) add(e, "entropy flux J_S must be finite");
    if (!(finite_fn(s.T_H) && s.T_H.min_value() > 0)) {
      add(e, "source temperature T_H must stay positive and finite");
    }
  }

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& c : model.couplings) {
    const std::string e = "coupling " + c.id;
    check_id("coupling", c.id);
    auto a = model.compartment_index(c.first);
    auto b = model.compartment_index(c.second);
    if (!a) add(e, "unknown compartment '" + c.first + "'");
    if (!b) add(e, "unknown compartment '" + c.second + "'");
    if (a && b) {
      if (*a == *b) {
        add(e, "a coupling joins two distinct compartments");
      } else if (!pairs.insert({std::min(*a, *b), std::max(*a, *b)}).second) {
        add(e, "compartments " + c.first + " and " + c.second + " are already coupled");
      }
    }
    if (cls == SystemClass::simple_single || cls == SystemClass::simple_mechanical) {
      add(e, "couplings need a multi-compartment system class");
    }
    if (c.kind == CouplingKind::diffusion_G) {
      if (!(finite(c.G) && c.G >= 0)) add(e, "conductance G must be non-negative and finite");
    } else {
      if (cls != SystemClass::non_simple) {
        add(e, "onsager_2x2 couplings need a non_simple system (distinct temperatures)");
      }
      const auto& L = c.L;
      if (!(finite(L.HH) && finite(L.HM) && finite(L.MH) && finite(L.MM))) {
        add(e, "Onsager coefficients must be finite");
      } else {
        if (!onsager_symmetric(L)) add(e, "Onsager symmetry violated: L_HM != L_MH");
        if (!onsager_psd(L)) add(e, "Onsager matrix is not positive semi-definite");
      }
    }
  }

  if (cls == SystemClass::simple_mechanical) {
    if (!model.mechanics) {
      add("mechanics", "simple_mechanical needs a [mechanics] section");
    } else {
      const auto& m = *model.mechanics;
      if (!(finite(m.M) && m.M > 0)) add("mechanics", "piston mass M must be positive");
      if (!(finite(m.A_section) && m.A_section > 0)) {
        add("mechanics", "cross-section A_section must be positive");
      }
      if (!(finite(m.lambda_fr) && m.lambda_fr >= 0)) {
        add("mechanics", "friction coefficient lambda_fr must be non-negative");
      }
      if (!(finite(m.q0) && m.q0 > 0)) add("mechanics", "piston position q0 must be positive");
      if (!(finite(m.qdot0) && finite(m.x0) && finite(m.xdot0))) {
        add("mechanics", "initial velocities and x0 must be finite");
      }
      if (!finite_fn(m.F_ext_q) || !finite_fn(m.F_ext_x)) {
        add("mechanics", "external forces must be finite");
      }
      if (K == 1 && finite(m.q0) && m.A_section > 0) {
        const double V = model.compartments[0].V;
        if (std::abs(m.A_section * m.q0 - V) > 1e-12 * std::max(1.0, std::abs(V))) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "slaving rule V = A_section * q0 broken: V = " << V
              << ", A_section * q0 = " << m.A_section * m.q0;
          add("mechanics", msg.str());
        }
      }
      for (const auto& [id, f] : m.port_velocities) {
        bool found = std::any_of(model.ports.begin(), model.ports.end(),
                                 [&](const PortSpec& p) { return p.id == id; });
        if (!found) add("mechanics", "velocity given for unknown port '" + id + "'");
        if (!finite_fn(f)) add("mechanics", "velocity of port '" + id + "' must be finite");
      }
    }
  } else if (model.mechanics) {
    add("mechanics", "a [mechanics] section needs the simple_mechanical class");
  }
  return out;
}

void require_valid(const NetworkModel& model) {
  auto v = validate(model);
  if (v.empty()) return;
  std::vector<std::string> msgs;
  msgs.reserve(v.size());
  for (const auto& x : v) msgs.push_back(x.message());
  throw ValidationError(std::move(msgs));
}

StateLayout StateLayout::for_model(const NetworkModel& model) {
  StateLayout L;
  const std::size_t K = model.compartments.size();
  L.K_ = K;
  const bool ns = model.system_class == SystemClass::non_simple;
  L.entropies_ = ns ? K : 1;
  L.mech_ = model.system_class == SystemClass::simple_mechanical;
  const bool single = model.system_class == SystemClass::simple_single || L.mech_;

  auto push = [&](SlotKind kind, int k, std::string label) {
    L.slots_.push_back({kind, k, std::move(label)});
  };
  auto idx = [](std::size_t k) { return std::to_string(k + 1); };

  L.s_off_ = L.slots_.size();
  if (ns) {
    for (std::size_t k = 0; k < K; ++k) push(SlotKind::S, int(k), "S_" + idx(k));
  } else {
    push(SlotKind::S, -1, "S");
  }
  L.n_off_ = L.slots_.size();
  for (std::size_t k = 0; k < K; ++k) push(SlotKind::N, int(k), single ? "N" : "N^" + idx(k));
  L.mech_off_ = L.slots_.size();
  if (L.mech_) {
    push(SlotKind::q, -1, "q");
    push(SlotKind::qdot, -1, "qdot");
    push(SlotKind::x, -1, "x");
    push(SlotKind::xdot, -1, "xdot");
  }
  L.sigma_off_ = L.slots_.size();
  for (std::size_t i = 0; i < L.entropies_; ++i) {
    push(SlotKind::Sigma, ns ? int(i) : -1, ns ? "Sigma_" + idx(i) : "Sigma");
  }
  L.gamma_off_ = L.slots_.size();
  for (std::size_t i = 0; i < L.entropies_; ++i) {
    push(SlotKind::Gamma, ns ? int(i) : -1, ns ? "Gamma^" + idx(i) : "Gamma");
  }
  L.w_off_ = L.slots_.size();
  for (std::size_t k = 0; k < K; ++k) push(SlotKind::W, int(k), single ? "W" : "W_" + idx(k));
  return L;
}

std::optional<std::size_t> StateLayout::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].label == label) return i;
  }
  return std::nullopt;
}

bool StateLayout::operator==(const StateLayout& other) const {
  if (slots_.size() != other.slots_.size()) return false;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].label != other.slots_[i].label) return false;
  }
  return true;
}

StateView unpack(const StateLayout& layout, std::span<const double> y) {
  if (y.size() != layout.size()) {
    throw StructuralError("state vector has " + std::to_string(y.size()) +
                          " entries, layout expects " + std::to_string(layout.size()));
  }
  StateView v;
  const std::size_t E = layout.entropy_count(), K = layout.compartments();
  for (std::size_t i = 0; i < E; ++i) {
    v.S.push_back(y[layout.S(i)]);
    v.Sigma.push_back(y[layout.Sigma(i)]);
    v.Gamma.push_back(y[layout.Gamma(i)]);
  }
  for (std::size_t k = 0; k < K; ++k) {
    v.N.push_back(y[layout.N(k)]);
    v.W.push_back(y[layout.W(k)]);
  }
  if (layout.has_mechanics()) {
    v.mech = MechanicalState{y[layout.q()], y[layout.qdot()], y[layout.x()], y[layout.xdot()]};
  }
  return v;
}

std::vector<double> pack(const StateLayout& layout, const StateView& v) {
  const std::size_t E = layout.entropy_count(), K = layout.compartments();
  if (v.S.size() != E || v.Sigma.size() != E || v.Gamma.size() != E || v.N.size() != K ||
      v.W.size() != K || v.mech.has_value() != layout.has_mechanics()) {
    throw StructuralError("state view does not match the layout");
  }
  std::vector<double> y(layout.size());
  for (std::size_t i = 0; i < E; ++i) {
    y[layout.S(i)] = v.S[i];
    y[layout.Sigma(i)] = v.Sigma[i];
    y[layout.Gamma(i)] = v.Gamma[i];
  }
  for (std::size_t k = 0; k < K; ++k) {
    y[layout.N(k)] = v.N[k];
    y[layout.W(k)] = v.W[k];
  }
  if (v.mech) {
    y[layout.q()] = v.mech->q;
    y[layout.qdot()] = v.mech->qdot;
    y[layout.x()] = v.mech->x;
    y[layout.xdot()] = v.mech->xdot;
  }
  return y;
}

SystemState initial_state(const NetworkModel& model) {
  require_valid(model);
  auto layout = std::make_shared<const StateLayout>(StateLayout::for_model(model));
  SystemState st;
  st.t = 0.0;
  st.y.assign(layout->size(), 0.0);
  const std::size_t K = model.compartments.size();
  if (model.system_class == SystemClass::non_simple) {
    for (std::size_t k = 0; k < K; ++k) st.y[layout->S(k)] = model.compartments[k].S0;
  } else {
    double S = 0.0;
    for (const auto& c : model.compartments) S += c.S0;
    st.y[layout->S()] = S;
  }
  for (std::size_t k = 0; k < K; ++k) st.y[layout->N(k)] = model.compartments[k].N0;
  if (layout->has_mechanics()) {
    const auto& m = *model.mechanics;
    st.y[layout->q()] = m.q0;
    st.y[layout->qdot()] = m.qdot0;
    st.y[layout->x()] = m.x0;
    st.y[layout->xdot()] = m.xdot0;
  }
  st.layout = std::move(layout);
  return st;
}

}  // namespace openthermo
