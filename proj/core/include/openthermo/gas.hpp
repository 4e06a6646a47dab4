#pragma once

#include <span>
#include <string>
#include <vector>

namespace openthermo {

/// Ideal-gas constants and the reference state every property formula is
/// measured from. Units: J, K, Pa, mol, kg.
struct GasSpec {
  double R = 8.314462618;
  double c_v = 2.5 * 8.314462618;
  double c_p = 3.5 * 8.314462618;
  double T_ref = 298.15;
  double p_ref = 1.0e5;
  double u_ref = 0.0;
  double h_ref = 8.314462618 * 298.15;
  double s_ref = 0.0;
  double mu_ref = 8.314462618 * 298.15;
  double molar_mass = 0.028;

  /// Builds a spec whose derived constants (c_p, h_ref, mu_ref) are
  /// consistent with pV = RT at the reference point.
  static GasSpec make(double R, double c_v, double T_ref, double p_ref, double u_ref,
                      double s_ref, double molar_mass);

  /// Empty when every invariant holds; otherwise one message per broken rule.
  std::vector<std::string> violations() const;
  /// Throws ValidationError if violations() is non-empty.
  void check() const;

  bool operator==(const GasSpec&) const = default;
};

/// Molar (intensive) state of the gas.
struct MolarState {
  double T = 0.0;   ///< temperature, K
  double p = 0.0;   ///< pressure, Pa
  double v = 0.0;   ///< molar volume, m^3/mol
  double u = 0.0;   ///< molar internal energy, J/mol
  double s = 0.0;   ///< molar entropy, J/(K mol)
  double h = 0.0;   ///< molar enthalpy, J/mol
  double mu = 0.0;  ///< chemical potential, J/mol
};

MolarState molar_state_from_Tp(const GasSpec& gas, double T, double p);

/// Molar entropy s(T, p).
double molar_entropy(const GasSpec& gas, double T, double p);

/// Unique T with N * s(T, N R T / V) = S. Closed form.
double temperature_from_extensive(const GasSpec& gas, double S, double N, double V);

/// Same root found by bisection on ln T over [T_lo, T_hi]; used as an
/// independent check of the closed form.
double temperature_by_bracketing(const GasSpec& gas, double S, double N, double V,
                                 double T_lo = 1e-3, double T_hi = 1e6);

MolarState intensive_from_extensive(const GasSpec& gas, double S, double N, double V);

/// U(S, V, N) = N u(T(S, N, V)).
double internal_energy_total(const GasSpec& gas, double S, double N, double V);

/// Entropy of N moles in volume V at temperature T.
double entropy_from_TNV(const GasSpec& gas, double T, double N, double V);

/// Common temperature of several sub-volumes sharing one entropy:
/// the T with sum_k N_k s(T, N_k R T / V_k) = S.
double shared_temperature(const GasSpec& gas, double S, std::span<const double> N,
                          std::span<const double> V);

}  // namespace openthermo
