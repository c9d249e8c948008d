#include "mw/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mw {

namespace {

// j_0..j_l at x > 0 by downward (Miller) recurrence, normalized against the
// closed-form j_0 (or j_1 when j_0 sits near a zero). Upward recurrence for j
// is unstable once l exceeds x, downward is stable everywhere.
void sph_j_table(int l, double x, std::vector<double>& out) {
  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  out.assign(l + 1, 0.0);
  if (l == 0) { out[0] = j0; return; }
  const int lstart = l + 24 + static_cast<int>(x);
  std::vector<double> f(lstart + 2, 0.0);
  f[lstart + 1] = 0.0;
  f[lstart] = 1e-280;  // arbitrary seed; normalization fixes the scale
  for (int n = lstart; n >= 1; --n) {
    f[n - 1] = (2.0 * n + 1.0) / x * f[n] - f[n + 1];
    if (std::abs(f[n - 1]) > 1e250)  // rescale to dodge overflow on long descents
      for (int m = n - 1; m <= lstart + 1; ++m) f[m] *= 1e-250;
  }
  // normalize by whichever reference is better conditioned
  const double scale = std::abs(j0) >= std::abs(j1) ? j0 / f[0] : j1 / f[1];
  for (int n = 0; n <= l; ++n) out[n] = f[n] * scale;
}

}  // namespace

double sph_j(int l, double x) {
  if (l < 0) throw std::domain_error("sph_j: l must be >= 0");
  if (x == 0.0) return l == 0 ? 1.0 : 0.0;
  const double ax = std::abs(x);
  const double parity = (x < 0 && (l % 2 == 1)) ? -1.0 : 1.0;  // j_l(-x) = (-1)^l j_l(x)
  if (l == 0) return parity * std::sin(ax) / ax;
  if (l == 1) return parity * (std::sin(ax) / (ax * ax) - std::cos(ax) / ax);
  std::vector<double> tab;
  sph_j_table(l, ax, tab);
  return parity * tab[l];
}

double sph_y(int l, double x) {
  if (l < 0) throw std::domain_error("sph_y: l must be >= 0");
  if (x <= 0.0) throw std::domain_error("sph_y: x must be > 0");
  double ym = std::sin(x) / x;           // y_{-1} = j_0-like companion
  double yc = -std::cos(x) / x;          // y_0
  if (l == 0) return yc;
  for (int n = 0; n < l; ++n) {          // upward recurrence, stable for y
    const double yp = (2.0 * n + 1.0) / x * yc - ym;
    ym = yc;
    yc = yp;
  }
  return yc;
}

double sph_jp(int l, double x) {
  if (l < 0) throw std::domain_error("sph_jp: l must be >= 0");
  if (x == 0.0) return l == 1 ? 1.0 / 3.0 : 0.0;
  if (l == 0) return -sph_j(1, x);
  // f'_l = f_{l-1} - ((l+1)/x) f_l
  return sph_j(l - 1, x) - (l + 1.0) / x * sph_j(l, x);
}

double sph_yp(int l, double x) {
  if (l < 0) throw std::domain_error("sph_yp: l must be >= 0");
  if (x <= 0.0) throw std::domain_error("sph_yp: x must be > 0");
  if (l == 0) return -sph_y(1, x);
  return sph_y(l - 1, x) - (l + 1.0) / x * sph_y(l, x);
}

std::complex<double> sph_h1(int l, double x) {
  return {sph_j(l, x), sph_y(l, x)};
}

std::complex<double> sph_h2(int l, double x) {
  return {sph_j(l, x), -sph_y(l, x)};
}

double legendre_p(int l, double u) {
  if (l < 0) throw std::domain_error("legendre_p: l must be >= 0");
  if (u < -1.0 || u > 1.0) throw std::domain_error("legendre_p: |u| must be <= 1");
  if (l == 0) return 1.0;
  double pm = 1.0;  // P_0
  double pc = u;    // P_1
  for (int n = 1; n < l; ++n) {
    const double pp = ((2.0 * n + 1.0) * u * pc - n * pm) / (n + 1.0);
    pm = pc;
    pc = pp;
  }
  return pc;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::domain_error("gauss_legendre: n must be >= 1");
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess, Newton on P_n
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  return {std::move(x), std::move(w)};
}

}  // namespace mw
