#include "mw/onedim.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace mw {

void Steps1D::validate() const {
  const size_t nb = boundaries.size();
  if (hard_left) {
    if (nb < 1) throw std::domain_error("Steps1D: hard wall needs its position");
    if (values_mev.size() != nb) throw std::domain_error("Steps1D: need one value per interval");
  } else {
    if (values_mev.size() != nb + 1)
      throw std::domain_error("Steps1D: need boundaries+1 values");
  }
  for (size_t i = 1; i < nb; ++i)
    if (boundaries[i] <= boundaries[i - 1])
      throw std::domain_error("Steps1D: boundaries must strictly increase");
  if (!values_mev.empty() && values_mev.back() != 0.0)
    throw std::domain_error("Steps1D: rightmost region must be free (0)");
}

ReflectionResult reflect(const Steps1D& steps, double E_mev, double m_amu) {
  steps.validate();
  if (E_mev <= 0) throw std::domain_error("reflect: E must be > 0");
  const double h2 = hbar2_over_2m(m_amu);
  using cd = std::complex<double>;

  // psi_j = A_j e^{-i q x} + B_j e^{+i q x}; principal sqrt gives q = i kappa
  // in evanescent regions, so e^{-iqx} grows toward +x there.
  auto q_of = [&](double v) { return std::sqrt(cd(E_mev - v, 0.0) / h2); };

  // Seed the solution in the leftmost region, then push interface matching to
  // the right; |r| and |t| come out of the rightmost coefficients. A running
  // rescale keeps deeply evanescent stacks from overflowing.
  cd A, B;
  size_t first_region;
  double tscale = 1.0;  // accumulated rescaling applied to (A, B)
  if (steps.hard_left) {
    const double x0 = steps.boundaries[0];
    const cd q0 = q_of(steps.values_mev[0]);
    A = std::exp(cd(0, 1) * q0 * x0);   // psi(x0) = 0 combination
    B = -std::exp(-cd(0, 1) * q0 * x0);
    first_region = 0;
  } else {
    A = 1.0;  // pure transmitted wave moving -x in the leftmost region
    B = 0.0;
    first_region = 0;
  }

  const size_t nreg = steps.values_mev.size();
  for (size_t j = first_region; j + 1 < nreg; ++j) {
    // interface position between region j and j+1
    const double xb = steps.hard_left ? steps.boundaries[j + 1] : steps.boundaries[j];
    const cd q1 = q_of(steps.values_mev[j]);
    const cd q2 = q_of(steps.values_mev[j + 1]);
    const cd i1(0, 1);
    const cd e1m = std::exp(-i1 * q1 * xb), e1p = std::exp(i1 * q1 * xb);
    const cd e2m = std::exp(-i1 * q2 * xb), e2p = std::exp(i1 * q2 * xb);
    const cd psi = A * e1m + B * e1p;
    const cd dpsi = -i1 * q1 * A * e1m + i1 * q1 * B * e1p;
    A = (psi - dpsi / (i1 * q2)) / (2.0 * e2m);
    B = (psi + dpsi / (i1 * q2)) / (2.0 * e2p);
    const double m = std::max(std::abs(A), std::abs(B));
    if (m > 1e100) {  // rescale, tracked so |t| stays meaningful
      A /= m;
      B /= m;
      tscale /= m;
    }
  }

  ReflectionResult out;
  const cd r = B / A;
  out.R = std::abs(r);
  out.phase = std::arg(r);
  if (steps.hard_left) {
    out.T = 0.0;
  } else {
    const cd t = tscale / A;
    out.T = std::abs(t);
  }
  return out;
}

Steps1D make_wall_steps(double d_A, double zpb_offset, double well_depth_mev,
                        double well_width_A) {
  Steps1D s;
  s.hard_left = true;
  const double zpb = -d_A + zpb_offset;
  if (well_depth_mev != 0.0 && well_width_A > 0.0) {
    s.boundaries = {zpb, zpb + well_width_A};
    s.values_mev = {-well_depth_mev, 0.0};
  } else {
    s.boundaries = {zpb};
    s.values_mev = {0.0};
  }
  return s;
}

Steps1D make_barrier_steps(double d_A, double barrier_height_mev, double barrier_width_A,
                           double zpb_offset, double well_depth_mev, double well_width_A) {
  Steps1D s;
  s.hard_left = false;
  const double zpb = -d_A + zpb_offset;
  // free | barrier | well | free, scanned left to right
  s.boundaries = {zpb - barrier_width_A, zpb, zpb + well_width_A};
  s.values_mev = {0.0, barrier_height_mev, -well_depth_mev, 0.0};
  return s;
}

}  // namespace mw
