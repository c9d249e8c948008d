#pragma once
#include <complex>

// Analytic sequential three-event estimate (scatter -> wall reflection ->
// rescatter) for the lateral-to-pushing force ratio, and the energy-transfer /
// desorption bookkeeping for the heavy adsorbed scatterer.

namespace mw {

struct SequentialEstimate {
  double R = 0;                        // wall reflection magnitude
  std::complex<double> f_half{0, 0};   // scattering amplitude at right angle, Angstrom
  double epsilon_A = 1.0;              // offset length in the spreading factor
  double spreading = 1.0;              // optional geometric-spreading multiplier
  double ratio = 0;                    // predicted F_lateral / F_z
};

struct EnergyWindow {
  double low_mev = 0;
  double high_mev = 0;
};

struct TransferResult {
  double e_max_mev = 0;
  EnergyWindow binding;
  bool desorbs = false;
  double margin_mev = 0;  // e_max - threshold used for the verdict
};

// (R |f_half|)^2 x spreading. The printed formula divides by |x - epsilon|,
// but the number it is quoted to produce treats that factor as exactly 1;
// the spreading multiplier reproduces that convention by default.
double sequential_lateral_ratio(double R, std::complex<double> f_half,
                                double epsilon_A = 1.0, double spreading = 1.0);
SequentialEstimate make_sequential_estimate(double R, std::complex<double> f_half,
                                            double epsilon_A = 1.0, double spreading = 1.0);

// Hard-sphere kinematic bound 4 (m_inc / m_sc) E from momentum transfer <= 2 hbar k.
double max_energy_transfer(double e_mev, double m_inc_amu, double m_sc_amu);

// Strict comparison against the window's low (default) or high bound.
TransferResult desorption_verdict(double e_max_mev, const EnergyWindow& binding,
                                  bool against_high = false);

// Default binding windows quoted for the paper-adjacent systems.
inline EnergyWindow xe_cu111_binding() { return {173.0, 200.0}; }
inline EnergyWindow he_cu_binding() { return {4.0, 4.0}; }

}  // namespace mw
