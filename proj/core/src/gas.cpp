#include "openthermo/gas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "openthermo/errors.hpp"

namespace openthermo {
namespace {

bool close_rel(double a, double b, double rel, double scale) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), scale});
}

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << field << " must be positive and finite (got " << value << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

GasSpec GasSpec::make(double R, double c_v, double T_ref, double p_ref, double u_ref,
                      double s_ref, double molar_mass) {
  GasSpec g;
  g.R = R;
  g.c_v = c_v;
  g.c_p = c_v + R;
  g.T_ref = T_ref;
  g.p_ref = p_ref;
  g.u_ref = u_ref;
  g.h_ref = u_ref + R * T_ref;
  g.s_ref = s_ref;
  g.mu_ref = g.h_ref - T_ref * s_ref;
  g.molar_mass = molar_mass;
  return g;
}

std::vector<std::string> GasSpec::violations() const {
  std::vector<std::string> out;
  auto positive = [&](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) out.push_back(std::string("gas: ") + name + " must be > 0");
  };
  positive(R, "R");
  positive(c_v, "c_v");
  positive(T_ref, "T_ref");
  positive(p_ref, "p_ref");
  positive(molar_mass, "molar_mass");
  for (double x : {c_p, u_ref, h_ref, s_ref, mu_ref}) {
    if (!std::isfinite(x)) {
      out.push_back("gas: reference constants must be finite");
      break;
    }
  }
  if (!out.empty()) return out;
  if (!close_rel(c_p, c_v + R, 1e-12, 0.0)) out.push_back("gas: c_p must equal c_v + R (ideal gas)");
  const double rt = R * T_ref;
  if (!close_rel(h_ref, u_ref + rt, 1e-12, rt))
    out.push_back("gas: h_ref must equal u_ref + R*T_ref");
  if (!close_rel(mu_ref, h_ref - T_ref * s_ref, 1e-12, rt))
    out.push_back("gas: mu_ref must equal h_ref - T_ref*s_ref");
  return out;
}

void GasSpec::check() const {
  auto v = violations();
  if (!v.empty()) throw ValidationError(std::move(v));
}

double molar_entropy(const GasSpec& gas, double T, double p) {
  return -gas.R * std::log(p / gas.p_ref) + gas.c_p * std::log(T / gas.T_ref) + gas.s_ref;
}

MolarState molar_state_from_Tp(const GasSpec& gas, double T, double p) {
  require_positive(T, "T");
  require_positive(p, "p");
  const double dT = T - gas.T_ref;
  const double ln_T = std::log(T / gas.T_ref);
  const double ln_p = std::log(p / gas.p_ref);
  MolarState m;
  m.T = T;
  m.p = p;
  m.v = gas.R * T / p;
  m.u = gas.c_v * dT + gas.u_ref;
  m.s = -gas.R * ln_p + gas.c_p * ln_T + gas.s_ref;
  m.h = gas.c_p * dT + gas.h_ref;
  m.mu = gas.c_p * dT + gas.R * T * ln_p - T * gas.c_p * ln_T - dT * gas.s_ref + gas.mu_ref;
  return m;
}

double temperature_from_extensive(const GasSpec& gas, double S, double N, double V) {
  require_positive(N, "N");
  require_positive(V, "V");
  // N s(T, NRT/V) = S is affine in ln T with slope N c_v.
  const double offset = gas.s_ref - gas.R * std::log(N * gas.R * gas.T_ref / (V * gas.p_ref));
  const double T = gas.T_ref * std::exp((S / N - offset) / gas.c_v);
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw DomainError("temperature out of range for S/N = " + std::to_string(S / N));
  }
  return T;
}

double entropy_from_TNV(const GasSpec& gas, double T, double N, double V) {
  require_positive(T, "T");
  require_positive(N, "N");
  require_positive(V, "V");
  return N * molar_entropy(gas, T, N * gas.R * T / V);
}

double temperature_by_bracketing(const GasSpec& gas, double S, double N, double V, double T_lo,
                                 double T_hi) {
  require_positive(N, "N");
  require_positive(V, "V");
  auto residual = [&](double lnT) {
    const double T = std::exp(lnT);
    return N * molar_entropy(gas, T, N * gas.R * T / V) - S;
  };
  double a = std::log(T_lo);
  double b = std::log(T_hi);
  double fa = residual(a);
  double fb = residual(b);
  if (fa > 0.0 || fb < 0.0) throw DomainError("entropy outside bracketing interval");
  for (int i = 0; i < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
    const double m = 0.5 * (a + b);
    const double fm = residual(m);
    if (fm < 0.0) {
      a = m;
    } else {
      b = m;
    }
  }
  return std::exp(0.5 * (a + b));
}

MolarState intensive_from_extensive(const GasSpec& gas, double S, double N, double V) {
  const double T = temperature_from_extensive(gas, S, N, V);
  return molar_state_from_Tp(gas, T, N * gas.R * T / V);
}

double shared_temperature(const GasSpec& gas, double S, std::span<const double> N,
                          std::span<const double> V) {
  if (N.size() != V.size() || N.empty()) {
    throw DomainError("shared_temperature: N and V must be non-empty and of equal length");
  }
  double N_total = 0.0, offset = 0.0;
  for (std::size_t k = 0; k < N.size(); ++k) {
    require_positive(N[k], "N");
    require_positive(V[k], "V");
    N_total += N[k];
    offset += N[k] * (gas.s_ref - gas.R * std::log(N[k] * gas.R * gas.T_ref / (V[k] * gas.p_ref)));
  }
  const double T = gas.T_ref * std::exp((S - offset) / (N_total * gas.c_v));
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("shared temperature out of range");
  return T;
}

double internal_energy_total(const GasSpec& gas, double S, double N, double V) {
  const double T = temperature_from_extensive(gas, S, N, V);
  return N * (gas.c_v * (T - gas.T_ref) + gas.u_ref);
}

}  // namespace openthermo
