#pragma once
#include <complex>
#include <vector>

#include "mw/potentials.hpp"
#include "mw/quantities.hpp"

// Phase shifts and scattering amplitudes for the hard-core + square-well
// scatterer, plus an independent radial-ODE oracle and the cross sections
// derived from the shifts.

namespace mw {

struct PhaseShiftSet {
  double k = 0;       // exterior wavenumber, 1/A
  double kprime = 0;  // interior wavenumber, 1/A
  std::vector<double> deltas;  // delta_l, principal branch (-pi/2, pi/2]
  int l_max = 0;
};

// Default truncation: ceil(k a) + 8 (margin over the l <~ k a cutoff).
int default_l_max(const ScattererPotential& pot, double E_mev, double m_amu);

// Interior solution alpha j_l(k'r) + beta y_l(k'r) with R_l(b) = 0; delta_l
// from continuity of R_l and R_l' at r = a. l_max < 0 means use the default.
PhaseShiftSet phase_shifts(const ScattererPotential& pot, double E_mev, double m_amu,
                           int l_max = -1);

// Independent oracle: adaptive RK integration of
// u'' = [l(l+1)/r^2 + (V - E)/h2] u outward from u(b) = 0, with delta_l from
// matching u, u'/u against j_l/y_l at two radii in the free region (their
// agreement is the convergence diagnostic).
double radial_ode_phase_shift(const ScattererPotential& pot, double E_mev, double m_amu, int l);

// Partial amplitude a_l = (e^{2i delta}-1)/(2ik) = e^{i delta} sin(delta)/k.
std::complex<double> partial_amplitude(const PhaseShiftSet& ps, int l);

// Single-beam amplitude f(theta) = sum (2l+1) a_l P_l(cos theta).
std::complex<double> f_single(const PhaseShiftSet& ps, double theta);

// Two counter-propagating beams: f(theta) + f(pi - theta).
std::complex<double> f_overall(const PhaseShiftSet& ps, double theta);

// Diagnostic variant with each term rotated by an extra e^{i delta_l}
// (i.e. built from e^{2i delta} sin(delta)/k instead of the unitary a_l).
// Not used by the physics pipeline; kept for convention comparisons.
std::complex<double> f_overall_rotated(const PhaseShiftSet& ps, double theta);

// Convenience composition at theta = pi/2 with the default l_max.
std::complex<double> f_pi_half(const ScattererPotential& pot, double E_mev, double m_amu);

// sigma_tr = (4 pi / k^2) sum (l+1) sin^2(delta_{l+1} - delta_l).
double transport_cross_section(const PhaseShiftSet& ps);

// sigma_tot = (4 pi / k^2) sum (2l+1) sin^2(delta_l).
double total_cross_section(const PhaseShiftSet& ps);

// Single-beam pushing force (hbar^2 k^2 / m) |A|^2 sigma_tr in meV/A for the
// density-normalized amplitude A.
double pushing_force_prediction(const PhaseShiftSet& ps, double m_amu, double amplitude = 1.0);

}  // namespace mw
