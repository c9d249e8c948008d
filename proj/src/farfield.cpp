#include <cmath>
#include <stdexcept>
#include <vector>

#include "mw/fieldsolver.hpp"
#include "mw/gridops.hpp"
#include "mw/specfun.hpp"

namespace mw {

namespace {

using cd = std::complex<double>;

constexpr double two_pi = 6.283185307179586476925286766559;

// Normalized associated Legendre table Pbar[l][m] at u = cos(theta), with
// the normalization int |Pbar_l^m e^{im phi}|^2 dOmega = 1.
std::vector<double> nlegp(int l_max, int m_max, double u) {
  std::vector<double> P(std::size_t((l_max + 1) * (m_max + 1)), 0.0);
  auto at = [&](int l, int m) -> double& { return P[std::size_t(l * (m_max + 1) + m)]; };
  const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
  at(0, 0) = std::sqrt(1.0 / (4.0 * M_PI));
  for (int m = 1; m <= m_max; ++m)
    at(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * at(m - 1, m - 1);
  for (int m = 0; m <= m_max; ++m) {
    if (m + 1 <= l_max) at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * u * at(m, m);
    for (int l = m + 2; l <= l_max; ++l) {
      const double alm = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double alm1 =
          std::sqrt((4.0 * double(l - 1) * (l - 1) - 1.0) / (double(l - 1) * (l - 1) - double(m) * m));
      at(l, m) = alm * (u * at(l - 1, m) - at(l - 2, m) / alm1);
    }
  }
  return P;
}

cd ipow_minus(int n) {  // (-i)^n
  switch (((n % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, -1};
    case 2: return {-1, 0};
    default: return {0, 1};
  }
}

}  // namespace

std::complex<double> FarFieldExpansion::eval(double theta, double phi) const {
  const auto P = nlegp(l_max, m_max, std::cos(theta));
  cd out = 0;
  for (int m = -m_max; m <= m_max; ++m) {
    const cd e = std::exp(cd(0.0, m * phi));
    for (int l = std::abs(m); l <= l_max; ++l)
      out += coef[std::size_t(l * (2 * m_max + 1) + m + m_max)] *
             P[std::size_t(l * (m_max + 1) + std::abs(m))] * e;
  }
  return out;
}

FarFieldExpansion far_field_expand(const ComplexField& field, const PhysicalConfig& config,
                                   const FarFieldOptions& opts) {
  const GridSpec& g = field.grid;
  if (g.rank != 3)
    throw std::invalid_argument("far-field extraction needs a 3D field");
  if (config.geometry.wall_present)
    throw std::invalid_argument("far-field extraction requires free asymptotics (no wall)");
  const double k = config.k_A();
  const double rmax = std::max(opts.r0, opts.r1);
  for (int ax = 0; ax < 3; ++ax) {
    const double lo = g.coord(ax, g.pml_cells);
    const double hi = g.coord(ax, g.n[ax] - 1 - g.pml_cells);
    if (-rmax < lo - 1e-9 || rmax > hi + 1e-9)
      throw std::invalid_argument("far-field extraction sphere overlaps the absorber region");
  }

  const std::int64_t N = g.count();
  std::vector<cd> psi_s{};
  psi_s.resize(std::size_t(N));
  {
    std::array<std::int64_t, 3> id{0, 0, 0};
    for (std::int64_t f = 0; f < N; ++f) {
      std::int64_t rem = f;
      std::array<double, 3> p{0, 0, 0};
      for (int ax = 0; ax < 3; ++ax) {
        id[ax] = rem / g.stride(ax);
        rem %= g.stride(ax);
        p[ax] = g.coord(ax, id[ax]);
      }
      psi_s[std::size_t(f)] = field.values[std::size_t(f)] - incident_field(config.beam, k, p);
    }
  }

  auto corners_clear = [&](const std::array<double, 3>& p) {
    std::array<std::int64_t, 3> i0{0, 0, 0};
    for (int ax = 0; ax < 3; ++ax) {
      const double f = (p[ax] - g.origin[ax]) / g.spacing[ax];
      std::int64_t i = std::int64_t(std::floor(f));
      if (i < 0 || i > g.n[ax] - 2) return false;
      i0[ax] = i;
    }
    for (int c = 0; c < 8; ++c) {
      std::int64_t f = 0;
      for (int ax = 0; ax < 3; ++ax) f += (i0[ax] + ((c >> ax) & 1)) * g.stride(ax);
      if (field.mask[std::size_t(f)]) return false;
    }
    return true;
  };

  const int L = opts.l_max, M = opts.m_max;
  FarFieldExpansion out;
  out.k = k;
  out.l_max = L;
  out.m_max = M;
  out.coef.assign(std::size_t((L + 1) * (2 * M + 1)), cd(0));

  auto [gu, gw] = gauss_legendre(opts.n_theta);
  for (double r : {opts.r0, opts.r1}) {
    std::vector<cd> c(std::size_t((L + 1) * (2 * M + 1)), cd(0));
    for (int iu = 0; iu < opts.n_theta; ++iu) {
      const double u = gu[std::size_t(iu)];
      const double st = std::sqrt(std::max(0.0, 1.0 - u * u));
      const auto P = nlegp(L, M, u);
      for (int ip = 0; ip < opts.n_phi; ++ip) {
        const double ph = (ip + 0.5) * two_pi / opts.n_phi;
        const std::array<double, 3> p = {r * st * std::cos(ph), r * st * std::sin(ph), r * u};
        if (!corners_clear(p))
          throw std::invalid_argument("far-field extraction sphere overlaps forbidden cells");
        const cd ps = interp_grid(g, psi_s, p) * gw[std::size_t(iu)] * (two_pi / opts.n_phi);
        for (int m = -M; m <= M; ++m) {
          const cd e = std::exp(cd(0.0, -m * ph));
          for (int l = std::abs(m); l <= L; ++l)
            c[std::size_t(l * (2 * M + 1) + m + M)] +=
                ps * P[std::size_t(l * (M + 1) + std::abs(m))] * e;
        }
      }
    }
    // divide out the outgoing radial factor mode by mode; the two radii
    // contribute with equal weight
    for (int l = 0; l <= L; ++l) {
      const cd hl = sph_h1(l, k * r);
      const cd fac = ipow_minus(l + 1) / (hl * k) * 0.5;
      for (int m = -M; m <= M; ++m)
        if (std::abs(m) <= l)
          out.coef[std::size_t(l * (2 * M + 1) + m + M)] +=
              c[std::size_t(l * (2 * M + 1) + m + M)] * fac;
    }
  }
  return out;
}

std::complex<double> far_field_amplitude(const ComplexField& field,
                                         const PhysicalConfig& config, double theta,
                                         double phi, const FarFieldOptions& opts) {
  return far_field_expand(field, config, opts).eval(theta, phi);
}

}  // namespace mw
