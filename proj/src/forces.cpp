#include "mw/forces.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mw/errors.hpp"
#include "mw/fieldsolver.hpp"
#include "mw/gridops.hpp"
#include "mw/specfun.hpp"

namespace mw {

namespace {

using cd = std::complex<double>;
using V3 = std::array<double, 3>;
using T33 = std::array<std::array<double, 3>, 3>;

constexpr double two_pi = 6.283185307179586476925286766559;

V3 add(const V3& a, const V3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

int z_axis_of(int rank) { return rank == 2 ? 1 : 2; }

// -T.n . dS accumulated into f
void accumulate_minus_Tn(V3& f, const T33& T, const V3& n, double dS) {
  for (int i = 0; i < 3; ++i) {
    double tn = 0;
    for (int j = 0; j < 3; ++j) tn += T[i][j] * n[j];
    f[i] -= tn * dS;
  }
}

}  // namespace

GridSampler::GridSampler(const ComplexField& field, const PhysicalConfig& config,
                         const CompositePotential& pot)
    : grid_(field.grid), pot_(pot), beam_(config.beam), k_(config.k_A()) {
  const std::int64_t N = grid_.count();
  if (std::int64_t(field.values.size()) != N || std::int64_t(field.mask.size()) != N)
    throw std::invalid_argument("field arrays disagree with the grid");
  psi_s_.resize(std::size_t(N));
  std::array<std::int64_t, 3> id{0, 0, 0};
  std::vector<std::array<double, 3>> pts;  // node points needed twice below
  pts.resize(std::size_t(N));
  for (std::int64_t f = 0; f < N; ++f) {
    std::int64_t rem = f;
    std::array<double, 3> p{0, 0, 0};
    for (int ax = 0; ax < grid_.rank; ++ax) {
      id[ax] = rem / grid_.stride(ax);
      rem %= grid_.stride(ax);
      p[(grid_.rank == 2 && ax == 1) ? 2 : ax] = grid_.coord(ax, id[ax]);
    }
    pts[std::size_t(f)] = p;
    psi_s_[std::size_t(f)] = field.values[std::size_t(f)] - incident_field(beam_, k_, p);
  }
  g_ = gradient_arrays(grid_, psi_s_, field.mask);
  // Masked nodes: the total field is identically 0 in the forbidden region,
  // so seed the scattered-gradient arrays with -grad(psi_inc) there; sampled
  // total gradients then vanish inside instead of leaking the incident term.
  const int zax = z_axis_of(grid_.rank);
  for (std::int64_t f = 0; f < N; ++f) {
    if (!field.mask[std::size_t(f)]) continue;
    const auto gi = incident_gradient(beam_, k_, pts[std::size_t(f)]);
    g_[zax][std::size_t(f)] = -gi[2];
  }
}

std::complex<double> GridSampler::psi(const std::array<double, 3>& p) const {
  return interp_grid(grid_, psi_s_, p) + incident_field(beam_, k_, p);
}

std::array<std::complex<double>, 3> GridSampler::grad_psi(const std::array<double, 3>& p) const {
  std::array<cd, 3> g{cd(0), cd(0), cd(0)};
  for (int ax = 0; ax < grid_.rank; ++ax)
    g[(grid_.rank == 2 && ax == 1) ? 2 : ax] = interp_grid(grid_, g_[ax], p);
  const auto gi = incident_gradient(beam_, k_, p);
  for (int i = 0; i < 3; ++i) g[i] += gi[i];
  return g;
}

double GridSampler::potential_mev(const std::array<double, 3>& p) const {
  auto u = sample(pot_, p);
  return u ? *u : 0.0;
}

double GridSampler::step_hint() const {
  double h = 0;
  for (int ax = 0; ax < grid_.rank; ++ax) h = std::max(h, grid_.spacing[ax]);
  return h;
}

void IntegrationSurface::validate(double a_A) const {
  if (radius <= a_A) throw std::invalid_argument("integration radius must exceed the well edge");
  if (n_theta < 4 || n_phi < 4) throw std::invalid_argument("quadrature node counts too small");
  if (kind == SurfaceKind::truncated_cap && cap_mode == CapMode::generic && !cap_x)
    throw std::invalid_argument("generic truncated surface needs an explicit cap position");
}

std::array<double, 3> ForceVector::newtons() const {
  const double c = constants::mev_per_A_to_newton;
  return {Fx * c, Fy * c, Fz * c};
}

std::array<std::array<double, 3>, 3> stress_tensor_from(std::complex<double> psi,
                                                        const std::array<cd, 3>& grad,
                                                        double e_mev, double u_mev,
                                                        double h2m) {
  T33 T{};
  double g2 = 0;
  for (int i = 0; i < 3; ++i) g2 += std::norm(grad[i]);
  const double tr = (e_mev - u_mev) * std::norm(psi) - h2m * g2;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      T[i][j] = 2.0 * h2m * std::real(grad[i] * std::conj(grad[j]));
    T[i][i] += tr;
  }
  return T;
}

std::array<std::array<double, 3>, 3> stress_tensor_at(const ComplexField& field,
                                                      const std::array<double, 3>& point,
                                                      double e_mev, double u_at_point_mev,
                                                      double h2m) {
  const GridSpec& g = field.grid;
  const int rank = g.rank;
  std::array<std::int64_t, 3> i0{0, 0, 0};
  std::array<double, 3> t{0, 0, 0};
  for (int ax = 0; ax < rank; ++ax) {
    const int ax3 = (rank == 2 && ax == 1) ? 2 : ax;
    const double f = (point[ax3] - g.origin[ax]) / g.spacing[ax];
    std::int64_t i = std::int64_t(std::floor(f));
    i = std::clamp(i, std::int64_t(0), g.n[ax] - 2);
    i0[ax] = i;
    t[ax] = std::clamp(f - double(i), 0.0, 1.0);
  }
  cd psi = 0;
  std::array<cd, 3> grad{cd(0), cd(0), cd(0)};
  const int corners = 1 << rank;
  for (int c = 0; c < corners; ++c) {
    double w = 1;
    std::int64_t f = 0;
    std::array<std::int64_t, 3> id{0, 0, 0};
    for (int ax = 0; ax < rank; ++ax) {
      const int d = (c >> ax) & 1;
      w *= d ? t[ax] : 1.0 - t[ax];
      id[ax] = i0[ax] + d;
      f += id[ax] * g.stride(ax);
    }
    if (field.mask[std::size_t(f)])
      throw numerical_error(
          "stress tensor stencil touches forbidden cells; use the truncated-surface cap handling");
    psi += w * field.values[std::size_t(f)];
    for (int ax = 0; ax < rank; ++ax) {
      const std::int64_t sd = g.stride(ax);
      if (id[ax] < 1 || id[ax] > g.n[ax] - 2 || field.mask[std::size_t(f + sd)] ||
          field.mask[std::size_t(f - sd)])
        throw numerical_error(
            "stress tensor stencil touches forbidden or boundary cells; use the truncated-surface "
            "cap handling");
      const cd d2 =
          (field.values[std::size_t(f + sd)] - field.values[std::size_t(f - sd)]) /
          (2.0 * g.spacing[ax]);
      grad[(rank == 2 && ax == 1) ? 2 : ax] += w * d2;
    }
  }
  return stress_tensor_from(psi, grad, e_mev, u_at_point_mev, h2m);
}

namespace {

struct SphereCapParts {
  V3 sphere{0, 0, 0};
  V3 cap{0, 0, 0};
};

SphereCapParts run_surface(const FieldSampler& s, const IntegrationSurface& surf,
                           double e_mev, double h2m, double step, bool have_cap,
                           double cap_x, int nth, int nph) {
  SphereCapParts out;
  const double r0 = surf.radius;
  const V3& c = surf.center;
  auto [gx, gw] = gauss_legendre(nth);

  for (int iu = 0; iu < nth; ++iu) {
    double u, wu;
    if (have_cap) {
      // polar axis along +x so the truncation boundary is a coordinate line
      const double ulo = (cap_x - c[0]) / r0;
      u = 0.5 * (gx[iu] + 1.0) * (1.0 - ulo) + ulo;
      wu = gw[iu] * 0.5 * (1.0 - ulo);
    } else {
      u = gx[iu];
      wu = gw[iu];
    }
    const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (int ip = 0; ip < nph; ++ip) {
      const double ph = (ip + 0.5) * two_pi / nph;
      V3 n;
      if (have_cap)
        n = {u, su * std::sin(ph), su * std::cos(ph)};
      else
        n = {su * std::cos(ph), su * std::sin(ph), u};
      const V3 p = add(c, {r0 * n[0], r0 * n[1], r0 * n[2]});
      const T33 T = stress_tensor_from(s.psi(p), s.grad_psi(p), e_mev,
                                       s.potential_mev(p), h2m);
      accumulate_minus_Tn(out.sphere, T, n, wu * (two_pi / nph) * r0 * r0);
    }
  }

  if (have_cap) {
    const double dx = cap_x - c[0];
    const double rc = std::sqrt(std::max(0.0, r0 * r0 - dx * dx));
    const int nr = std::max(8, nth / 2);
    auto [rx, rw] = gauss_legendre(nr);
    for (int ir = 0; ir < nr; ++ir) {
      const double rho = 0.5 * (rx[ir] + 1.0) * rc;
      const double wr = rw[ir] * 0.5 * rc;
      for (int ip = 0; ip < nph; ++ip) {
        const double ph = (ip + 0.5) * two_pi / nph;
        const V3 p = {cap_x, c[1] + rho * std::sin(ph), c[2] + rho * std::cos(ph)};
        const double dA = wr * rho * (two_pi / nph);
        if (surf.cap_mode == CapMode::zero_boundary) {
          // psi = 0 on the plane: only T.(-x) = -h2m |dpsi/dx|^2 x survives,
          // with the derivative one-sided from the allowed side.
          const cd p1 = s.psi({p[0] + step, p[1], p[2]});
          const cd p2 = s.psi({p[0] + 2.0 * step, p[1], p[2]});
          const cd dpsi = (4.0 * p1 - p2) / (2.0 * step);
          out.cap[0] += h2m * std::norm(dpsi) * dA;
        } else {
          const T33 T = stress_tensor_from(s.psi(p), s.grad_psi(p), e_mev,
                                           s.potential_mev(p), h2m);
          accumulate_minus_Tn(out.cap, T, {-1, 0, 0}, dA);
        }
      }
    }
  }
  return out;
}

}  // namespace

ForceVector integrate_force_sampler(const FieldSampler& s, const IntegrationSurface& surf,
                                    double e_mev, double h2m, double step_hint) {
  const double r0 = surf.radius;
  bool have_cap = false;
  double cap_x = 0;
  if (surf.kind == SurfaceKind::truncated_cap) {
    if (!surf.cap_x) throw std::invalid_argument("truncated surface needs cap_x");
    cap_x = *surf.cap_x;
    const double cc = (cap_x - surf.center[0]) / r0;
    if (cc >= 1.0)
      throw std::invalid_argument("cap plane lies beyond the integration sphere");
    have_cap = cc > -1.0;  // otherwise the plane misses the sphere: plain sphere
  }
  if (surf.cap_mode == CapMode::zero_boundary && have_cap && step_hint <= 0)
    throw std::invalid_argument("zero-boundary cap needs a positive step hint");

  const auto parts = run_surface(s, surf, e_mev, h2m, step_hint, have_cap, cap_x,
                                 surf.n_theta, surf.n_phi);
  ForceVector out;
  out.Fx = parts.sphere[0] + parts.cap[0];
  out.Fy = parts.sphere[1] + parts.cap[1];
  out.Fz = parts.sphere[2] + parts.cap[2];
  out.patches.push_back({"sphere", parts.sphere[0], parts.sphere[1], parts.sphere[2]});
  if (have_cap) {
    out.patches.push_back({"cap", parts.cap[0], parts.cap[1], parts.cap[2]});
    if (surf.cap_mode == CapMode::zero_boundary) {
      // sensitivity diagnostic: same closed surface moved one stencil inward,
      // evaluated with the full tensor (no boundary limit involved)
      IntegrationSurface ins = surf;
      ins.cap_x = cap_x + 2.0 * step_hint;
      ins.cap_mode = CapMode::generic;
      ins.doubling_check = false;
      const auto alt = integrate_force_sampler(s, ins, e_mev, h2m, step_hint);
      out.patches.push_back({"inset_total", alt.Fx, alt.Fy, alt.Fz});
    }
  }
  if (surf.doubling_check) {
    const auto fine = run_surface(s, surf, e_mev, h2m, step_hint, have_cap, cap_x,
                                  2 * surf.n_theta, 2 * surf.n_phi);
    const double dx = std::abs(fine.sphere[0] + fine.cap[0] - out.Fx);
    const double dy = std::abs(fine.sphere[1] + fine.cap[1] - out.Fy);
    const double dz = std::abs(fine.sphere[2] + fine.cap[2] - out.Fz);
    out.quad_delta = std::max({dx, dy, dz});
  }
  return out;
}

ForceVector integrate_force(const ComplexField& field, const IntegrationSurface& surf,
                            const PhysicalConfig& config, const CompositePotential& pot) {
  surf.validate(pot.scatterer.a_A);
  if (field.grid.rank != 3)
    throw std::invalid_argument("integrate_force needs a 3D field; use force_2d for 2D grids");

  IntegrationSurface su = surf;
  if (su.kind == SurfaceKind::truncated_cap && !su.cap_x) {
    if (!pot.wall)
      throw std::invalid_argument("truncated surface requires a wall or an explicit cap position");
    su.cap_x = pot.wall->zpb_x();
  }
  if (su.kind == SurfaceKind::truncated_cap && su.cap_mode == CapMode::zero_boundary) {
    if (!pot.wall || std::abs(*su.cap_x - pot.wall->zpb_x()) > 1e-9)
      throw std::invalid_argument(
          "zero-boundary cap must coincide with the wall zero-probability plane");
  }

  // surface must sit inside the solved non-absorber region
  const GridSpec& g = field.grid;
  for (int ax = 0; ax < 3; ++ax) {
    const double lo = g.coord(ax, g.pml_cells);
    const double hi = g.coord(ax, g.n[ax] - 1 - g.pml_cells);
    double need_lo = su.center[ax] - su.radius;
    if (ax == 0 && su.kind == SurfaceKind::truncated_cap)
      need_lo = std::max(need_lo, *su.cap_x);
    if (need_lo < lo - 1e-9 || su.center[ax] + su.radius > hi + 1e-9)
      throw std::invalid_argument("integration surface leaves the solved non-absorber region");
  }
  if (su.kind == SurfaceKind::sphere) {
    // the closed sphere must not cross into the forbidden region
    const int nchk = 48;
    for (int iu = 0; iu <= nchk; ++iu) {
      const double u = -1.0 + 2.0 * iu / nchk;
      const double sv = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (int ip = 0; ip < nchk; ++ip) {
        const double ph = ip * two_pi / nchk;
        const V3 p = add(su.center,
                         {su.radius * sv * std::cos(ph), su.radius * sv * std::sin(ph),
                          su.radius * u});
        if (is_forbidden(pot, p))
          throw std::invalid_argument(
              "integration sphere intersects the forbidden region; use the truncated kind");
      }
    }
  }

  GridSampler s(field, config, pot);
  return integrate_force_sampler(s, su, config.beam.energy_mev, config.h2(), s.step_hint());
}

ForceVector integrate_force_kinetic(const FieldSampler& s, const IntegrationSurface& surf,
                                    double e_mev, double h2m) {
  if (surf.kind != SurfaceKind::sphere)
    throw std::invalid_argument("kinetic-form integral is defined for full spheres only");
  const double r0 = surf.radius;
  const double k0sq = e_mev / h2m;
  auto [gx, gw] = gauss_legendre(surf.n_theta);
  V3 f{0, 0, 0};
  for (int iu = 0; iu < surf.n_theta; ++iu) {
    const double u = gx[iu];
    const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (int ip = 0; ip < surf.n_phi; ++ip) {
      const double ph = (ip + 0.5) * two_pi / surf.n_phi;
      const V3 n = {su * std::cos(ph), su * std::sin(ph), u};
      const V3 p = add(surf.center, {r0 * n[0], r0 * n[1], r0 * n[2]});
      const cd q = s.psi(p);
      const auto g = s.grad_psi(p);
      cd gn = 0;
      double g2 = 0;
      for (int i = 0; i < 3; ++i) {
        gn += std::conj(g[i]) * n[i];
        g2 += std::norm(g[i]);
      }
      const double dOm = gw[iu] * (two_pi / surf.n_phi);
      for (int i = 0; i < 3; ++i)
        f[i] -= h2m * r0 * r0 *
                (2.0 * std::real(g[i] * gn) + n[i] * (k0sq * std::norm(q) - g2)) * dOm;
    }
  }
  ForceVector out;
  out.Fx = f[0];
  out.Fy = f[1];
  out.Fz = f[2];
  out.patches.push_back({"sphere", f[0], f[1], f[2]});
  return out;
}

ForceVector surface_delta_force(const ComplexField& field, const ScattererPotential& pot,
                                double h2m, int n_theta, int n_phi) {
  const GridSpec& g = field.grid;
  if (g.rank != 3) throw std::invalid_argument("surface_delta_force needs a 3D field");
  double h = 0;
  for (int ax = 0; ax < 3; ++ax) h = std::max(h, g.spacing[ax]);

  auto corners_clear = [&](const V3& p) {
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

  auto [gx, gw] = gauss_legendre(n_theta);
  V3 well{0, 0, 0}, core{0, 0, 0};
  for (int iu = 0; iu < n_theta; ++iu) {
    const double u = gx[iu];
    const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (int ip = 0; ip < n_phi; ++ip) {
      const double ph = (ip + 0.5) * two_pi / n_phi;
      const V3 n = {su * std::cos(ph), su * std::sin(ph), u};
      const double dOm = gw[iu] * (two_pi / n_phi);
      // well edge: the potential steps by -V0 across r = a
      {
        const V3 p = {pot.a_A * n[0], pot.a_A * n[1], pot.a_A * n[2]};
        if (corners_clear(p)) {
          const double d = std::norm(interp_grid(g, field.values, p));
          for (int i = 0; i < 3; ++i)
            well[i] += pot.v0_mev * d * n[i] * dOm * pot.a_A * pot.a_A;
        }
      }
      // hard core: pressure h2m |dpsi/dn|^2 with psi(b) = 0 exactly
      {
        const V3 p1 = {(pot.b_A + h) * n[0], (pot.b_A + h) * n[1], (pot.b_A + h) * n[2]};
        const V3 p2 = {(pot.b_A + 2 * h) * n[0], (pot.b_A + 2 * h) * n[1],
                       (pot.b_A + 2 * h) * n[2]};
        if (corners_clear(p1) && corners_clear(p2)) {
          const cd dpsi =
              (4.0 * interp_grid(g, field.values, p1) - interp_grid(g, field.values, p2)) /
              (2.0 * h);
          for (int i = 0; i < 3; ++i)
            core[i] -= h2m * std::norm(dpsi) * n[i] * dOm * pot.b_A * pot.b_A;
        }
      }
    }
  }
  ForceVector out;
  out.Fx = well[0] + core[0];
  out.Fy = well[1] + core[1];
  out.Fz = well[2] + core[2];
  out.patches.push_back({"well_edge", well[0], well[1], well[2]});
  out.patches.push_back({"core", core[0], core[1], core[2]});
  return out;
}

ForceVector force_2d(const ComplexField& field, const PhysicalConfig& config,
                     const CompositePotential& pot, double radius, int n_nodes) {
  if (field.grid.rank != 2) throw std::invalid_argument("force_2d needs a 2D field");
  if (radius <= pot.scatterer.a_A)
    throw std::invalid_argument("integration radius must exceed the well edge");
  GridSampler s(field, config, pot);
  const double e = config.beam.energy_mev;
  const double h2m = config.h2();
  V3 f{0, 0, 0};
  for (int i = 0; i < n_nodes; ++i) {
    const double ph = (i + 0.5) * two_pi / n_nodes;
    const V3 n = {std::sin(ph), 0, std::cos(ph)};
    const V3 p = {radius * n[0], 0, radius * n[2]};
    const T33 T = stress_tensor_from(s.psi(p), s.grad_psi(p), e, s.potential_mev(p), h2m);
    accumulate_minus_Tn(f, T, n, radius * two_pi / n_nodes);
  }
  ForceVector out;
  out.Fx = f[0];
  out.Fy = 0;
  out.Fz = f[2];
  out.patches.push_back({"circle", f[0], 0, f[2]});
  return out;
}

}  // namespace mw
