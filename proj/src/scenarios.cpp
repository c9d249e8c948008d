#include "mw/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace mw {

double sequential_lateral_ratio(double R, std::complex<double> f_half, double epsilon_A,
                                double spreading) {
  if (R < 0.0 || R > 1.0)
    throw std::invalid_argument("reflection magnitude must lie in [0, 1]");
  if (epsilon_A <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (spreading < 0.0) throw std::invalid_argument("spreading factor must be >= 0");
  const double rf = R * std::abs(f_half);
  return rf * rf * spreading;
}

SequentialEstimate make_sequential_estimate(double R, std::complex<double> f_half,
                                            double epsilon_A, double spreading) {
  SequentialEstimate est;
  est.R = R;
  est.f_half = f_half;
  est.epsilon_A = epsilon_A;
  est.spreading = spreading;
  est.ratio = sequential_lateral_ratio(R, f_half, epsilon_A, spreading);
  return est;
}

double max_energy_transfer(double e_mev, double m_inc_amu, double m_sc_amu) {
  if (m_inc_amu <= 0.0 || m_sc_amu <= 0.0) throw std::invalid_argument("masses must be positive");
  if (e_mev < 0.0) throw std::invalid_argument("energy must be >= 0");
  return 4.0 * (m_inc_amu / m_sc_amu) * e_mev;
}

TransferResult desorption_verdict(double e_max_mev, const EnergyWindow& binding,
                                  bool against_high) {
  if (binding.low_mev > binding.high_mev)
    throw std::invalid_argument("binding window low bound exceeds high bound");
  TransferResult out;
  out.e_max_mev = e_max_mev;
  out.binding = binding;
  const double threshold = against_high ? binding.high_mev : binding.low_mev;
  out.desorbs = e_max_mev > threshold;  // strict: equality does not desorb
  out.margin_mev = e_max_mev - threshold;
  return out;
}

}  // namespace mw
