#include "mw/partialwave.hpp"

#include <cmath>

#include "mw/errors.hpp"
#include "mw/specfun.hpp"

namespace mw {

namespace {
constexpr double kPi = 3.14159265358979323846;

double principal_branch(double d) {
  while (d > kPi / 2) d -= kPi;
  while (d <= -kPi / 2) d += kPi;
  return d;
}
}  // namespace

int default_l_max(const ScattererPotential& pot, double E_mev, double m_amu) {
  const double ka = wavenumber_A(E_mev, m_amu) * pot.a_A;
  return static_cast<int>(std::ceil(ka)) + 8;
}

PhaseShiftSet phase_shifts(const ScattererPotential& pot, double E_mev, double m_amu,
                           int l_max) {
  pot.validate();
  if (E_mev <= 0) throw std::domain_error("phase_shifts: E must be > 0");
  if (l_max < 0) l_max = default_l_max(pot, E_mev, m_amu);

  PhaseShiftSet ps;
  ps.k = wavenumber_A(E_mev, m_amu);
  ps.kprime = kprime_A(E_mev, pot.v0_mev, m_amu);
  ps.l_max = l_max;
  ps.deltas.resize(l_max + 1);

  const double k = ps.k, kp = ps.kprime, a = pot.a_A, b = pot.b_A;
  for (int l = 0; l <= l_max; ++l) {
    // interior combination vanishing at the hard core:
    //   R_l(r) = y_l(k'b) j_l(k'r) - j_l(k'b) y_l(k'r)
    const double jb = sph_j(l, kp * b), yb = sph_y(l, kp * b);
    const double Ra = yb * sph_j(l, kp * a) - jb * sph_y(l, kp * a);
    const double Rpa = kp * (yb * sph_jp(l, kp * a) - jb * sph_yp(l, kp * a));
    // exterior R = j cos(delta) - y sin(delta); log-derivative continuity at a
    const double jka = sph_j(l, k * a), yka = sph_y(l, k * a);
    const double jpka = sph_jp(l, k * a), ypka = sph_yp(l, k * a);
    const double num = Rpa * jka - k * Ra * jpka;
    const double den = Rpa * yka - k * Ra * ypka;
    ps.deltas[l] = principal_branch(std::atan2(num, den));
  }
  return ps;
}

namespace {

// One adaptive Dormand-Prince (RK45) step for the 2-component radial system.
struct RadialRhs {
  double W0;  // (V - E)/h2 on the current piece (piecewise constant potential)
  double ll1;
  void operator()(double r, const double y[2], double dy[2]) const {
    dy[0] = y[1];
    dy[1] = (ll1 / (r * r) + W0) * y[0];
  }
};

// Integrate u'' = W(r) u over [r0, r1] with fixed potential piece, adaptive
// steps, returning (u, u') with occasional renormalization (the log-derivative
// is scale-invariant).
void integrate_piece(double W0, double ll1, double r0, double r1, double y[2]) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  RadialRhs f{W0, ll1};
  const double tol = 1e-12;
  double r = r0;
  double hstep = (r1 - r0) / 64.0;
  int guard = 0;
  while (r < r1) {
    if (++guard > 2000000) throw numerical_error("radial_ode: step budget exhausted");
    if (r + hstep > r1) hstep = r1 - r;
    double k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], yt[2], y5[2];
    f(r, y, k1);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + hstep * a21 * k1[i];
    f(r + c2 * hstep, yt, k2);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + hstep * (a31 * k1[i] + a32 * k2[i]);
    f(r + c3 * hstep, yt, k3);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + hstep * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(r + c4 * hstep, yt, k4);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + hstep * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(r + c5 * hstep, yt, k5);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + hstep * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(r + hstep, yt, k6);
    for (int i = 0; i < 2; ++i)
      y5[i] = y[i] + hstep * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(r + hstep, y5, k7);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double ei = hstep * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                 e6 * k6[i] + e7 * k7[i]);
      err += ei * ei;
      const double s = std::abs(y[i]) + std::abs(hstep * k1[i]) + 1e-30;
      scale += s * s;
    }
    err = std::sqrt(err / scale);
    if (err <= tol) {
      r += hstep;
      y[0] = y5[0];
      y[1] = y5[1];
      const double m = std::max(std::abs(y[0]), std::abs(y[1]));
      if (m > 1e200) { y[0] /= m; y[1] /= m; }
    }
    double fac = 0.9 * std::pow(err > 0 ? tol / err : 10.0, 0.2);
    fac = std::min(5.0, std::max(0.2, fac));
    hstep *= fac;
  }
}

// delta from (u, u') at radius r in the free region.
double match_delta(int l, double k, double r, const double y[2]) {
  const double g = y[1] / y[0];
  const double num = k * sph_jp(l, k * r) - g * sph_j(l, k * r);
  const double den = k * sph_yp(l, k * r) - g * sph_y(l, k * r);
  double d = std::atan2(num, den);
  return principal_branch(d);
}

}  // namespace

double radial_ode_phase_shift(const ScattererPotential& pot, double E_mev, double m_amu, int l) {
  pot.validate();
  if (E_mev <= 0) throw std::domain_error("radial_ode_phase_shift: E must be > 0");
  const double h2 = hbar2_over_2m(m_amu);
  const double k = wavenumber_A(E_mev, m_amu);
  const double ll1 = double(l) * (l + 1);
  double y[2] = {0.0, 1.0};  // u(b) = 0, arbitrary slope
  // well piece [b, a], then a stretch of free space to the first matching radius
  integrate_piece((-pot.v0_mev - E_mev) / h2, ll1, pot.b_A, pot.a_A, y);
  const double r1 = pot.a_A;
  const double r2 = 1.5 * pot.a_A;
  const double d1 = match_delta(l, k, r1, y);
  integrate_piece((0.0 - E_mev) / h2, ll1, r1, r2, y);
  const double d2 = match_delta(l, k, r2, y);
  if (std::abs(principal_branch(d1 - d2)) > 1e-7)
    throw numerical_error("radial_ode_phase_shift: matching radii disagree by " +
                          std::to_string(std::abs(d1 - d2)));
  return principal_branch(d1 + 0.5 * principal_branch(d2 - d1));
}

std::complex<double> partial_amplitude(const PhaseShiftSet& ps, int l) {
  const double d = ps.deltas.at(l);
  return std::exp(std::complex<double>(0, d)) * std::sin(d) / ps.k;
}

std::complex<double> f_single(const PhaseShiftSet& ps, double theta) {
  const double u = std::cos(theta);
  std::complex<double> f = 0;
  for (int l = 0; l <= ps.l_max; ++l)
    f += (2.0 * l + 1.0) * partial_amplitude(ps, l) * legendre_p(l, u);
  return f;
}

std::complex<double> f_overall(const PhaseShiftSet& ps, double theta) {
  return f_single(ps, theta) + f_single(ps, kPi - theta);
}

std::complex<double> f_overall_rotated(const PhaseShiftSet& ps, double theta) {
  std::complex<double> f = 0;
  const double u1 = std::cos(theta), u2 = std::cos(kPi - theta);
  for (int l = 0; l <= ps.l_max; ++l) {
    const double d = ps.deltas[l];
    const std::complex<double> al = std::exp(std::complex<double>(0, 2 * d)) * std::sin(d) / ps.k;
    f += (2.0 * l + 1.0) * al * (legendre_p(l, u1) + legendre_p(l, u2));
  }
  return f;
}

std::complex<double> f_pi_half(const ScattererPotential& pot, double E_mev, double m_amu) {
  return f_overall(phase_shifts(pot, E_mev, m_amu), kPi / 2);
}

double transport_cross_section(const PhaseShiftSet& ps) {
  double s = 0.0;
  for (int l = 0; l + 1 <= ps.l_max; ++l) {
    const double sd = std::sin(ps.deltas[l + 1] - ps.deltas[l]);
    s += (l + 1.0) * sd * sd;
  }
  return 4.0 * kPi / (ps.k * ps.k) * s;
}

double total_cross_section(const PhaseShiftSet& ps) {
  double s = 0.0;
  for (int l = 0; l <= ps.l_max; ++l) {
    const double sd = std::sin(ps.deltas[l]);
    s += (2.0 * l + 1.0) * sd * sd;
  }
  return 4.0 * kPi / (ps.k * ps.k) * s;
}

double pushing_force_prediction(const PhaseShiftSet& ps, double m_amu, double amplitude) {
  // (hbar^2 k^2 / m) |A|^2 sigma_tr = 2 h2 k^2 |A|^2 sigma_tr, meV/A
  return 2.0 * hbar2_over_2m(m_amu) * ps.k * ps.k * amplitude * amplitude *
         transport_cross_section(ps);
}

}  // namespace mw
