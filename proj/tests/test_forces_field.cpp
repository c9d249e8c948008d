#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <filesystem>

#include "mw/errors.hpp"
#include "mw/fieldsolver.hpp"
#include "mw/forces.hpp"
#include "mw/partialwave.hpp"
#include "mw/sweep.hpp"

using namespace mw;

namespace {

// Shared cache so repeated test runs (and the acceptance harness, which uses
// identical run descriptions) pay for each solve only once.
const char* kCache = "mw_test_cache";

SweepSpec base_spec() {
  SweepSpec spec;
  spec.no_wall = true;
  spec.run.points_per_wavelength = 12;
  spec.run.solver.tol = 1e-10;
  std::filesystem::create_directories(kCache);
  spec.cache_dir = kCache;
  return spec;
}

struct Solved {
  PhysicalConfig cfg;
  CompositePotential pot;
  SolveResult res;
};

Solved solve_open(BeamMode beams) {
  SweepSpec spec = base_spec();
  Solved s;
  s.cfg = build_config(1.0, std::nullopt, beams, spec);
  s.pot = build_potential(std::nullopt, spec);
  const GridSpec grid = build_grid(s.cfg, s.pot, spec.run);
  s.res = cached_solve(s.cfg, s.pot, grid, spec.run.solver, spec.cache_dir);
  return s;
}

}  // namespace

TEST_CASE("single beam: stress-tensor force reproduces the transport-cross-section prediction") {
  Solved s = solve_open(BeamMode::single);
  REQUIRE(s.res.info.converged);

  const PhaseShiftSet ps = phase_shifts(s.pot.scatterer, 1.0, s.cfg.mass_amu);
  const double pred = pushing_force_prediction(ps, s.cfg.mass_amu);

  IntegrationSurface surf;
  const ForceVector f = integrate_force(s.res.field, surf, s.cfg, s.pot);
  CHECK(f.Fz == doctest::Approx(pred).epsilon(0.05));
  CHECK(std::abs(f.Fx) < 0.01 * pred);
  CHECK(std::abs(f.Fy) < 0.01 * pred);

  // Same force from a larger sphere: surface independence.
  IntegrationSurface wide = surf;
  wide.radius = 11.0 * constants::bohr_radius_A;
  const ForceVector fw = integrate_force(s.res.field, wide, s.cfg, s.pot);
  CHECK(fw.Fz == doctest::Approx(f.Fz).epsilon(0.02));

  // Independent bookkeeping: potential-step integrals instead of the tensor.
  const ForceVector fd = surface_delta_force(s.res.field, s.pot.scatterer, s.cfg.h2());
  CHECK(fd.Fz == doctest::Approx(f.Fz).epsilon(0.10));

  // Expanded zero-potential form of the same integral, same quadrature nodes.
  GridSampler sampler(s.res.field, s.cfg, s.pot);
  const ForceVector fk = integrate_force_kinetic(sampler, surf, 1.0, s.cfg.h2());
  CHECK(fk.Fz == doctest::Approx(f.Fz).epsilon(1e-8));

  // Doubled quadrature moves the result by a negligible amount.
  IntegrationSurface checked = surf;
  checked.doubling_check = true;
  const ForceVector fc = integrate_force(s.res.field, checked, s.cfg, s.pot);
  CHECK(fc.quad_delta < 0.01 * pred);
}

TEST_CASE("counter-propagating beams: every force component sits on the null floor") {
  Solved s = solve_open(BeamMode::counter);
  REQUIRE(s.res.info.converged);

  const PhaseShiftSet ps = phase_shifts(s.pot.scatterer, 1.0, s.cfg.mass_amu);
  const double pred = pushing_force_prediction(ps, s.cfg.mass_amu);

  const ForceVector f = integrate_force(s.res.field, IntegrationSurface{}, s.cfg, s.pot);
  CHECK(std::abs(f.Fx) < 0.01 * pred);
  CHECK(std::abs(f.Fy) < 0.01 * pred);
  CHECK(std::abs(f.Fz) < 0.01 * pred);
}

TEST_CASE("doubling the amplitude quadruples every force component") {
  Solved s = solve_open(BeamMode::single);
  const ForceVector f1 = integrate_force(s.res.field, IntegrationSurface{}, s.cfg, s.pot);

  // The solve is linear, so the doubled-amplitude field is exactly twice the
  // base field; the force functional is quadratic in it.
  Solved d = s;
  d.cfg.beam.amplitude *= 2.0;
  for (auto& v : d.res.field.values) v *= 2.0;
  const ForceVector f2 = integrate_force(d.res.field, IntegrationSurface{}, d.cfg, d.pot);
  CHECK(f2.Fz == doctest::Approx(4.0 * f1.Fz).epsilon(1e-10));
  CHECK(f2.Fx - 4.0 * f1.Fx == doctest::Approx(0.0).scale(std::abs(f1.Fz)).epsilon(1e-10));
  CHECK(f2.Fy - 4.0 * f1.Fy == doctest::Approx(0.0).scale(std::abs(f1.Fz)).epsilon(1e-10));
}

TEST_CASE("stress_tensor_at: symmetric in the open region, refuses masked stencils") {
  Solved s = solve_open(BeamMode::single);
  const double e = s.cfg.beam.energy_mev, h2m = s.cfg.h2();

  const std::array<double, 3> open_p{0.0, 0.0, 5.2};
  const auto T = stress_tensor_at(s.res.field, open_p, e, 0.0, h2m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(std::isfinite(T[i][j]));
      CHECK(T[i][j] == doctest::Approx(T[j][i]).epsilon(1e-12));
    }

  // Inside the hard core the field is masked; the centered stencil must
  // refuse rather than silently differencing zeros.
  CHECK_THROWS_AS(stress_tensor_at(s.res.field, {0.0, 0.0, 0.0}, e, 0.0, h2m),
                  numerical_error);
}
