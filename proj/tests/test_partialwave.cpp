#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "mw/partialwave.hpp"
#include "mw/potentials.hpp"
#include "mw/quantities.hpp"

using namespace mw;

namespace {
const ScattererPotential kPot{};  // defaults: V0 = 2.458, a = 9 BR, b = 6.697 BR
const double kHe = constants::m_he_amu;
}  // namespace

TEST_CASE("phase shifts match the analytic matching formula (frozen values)") {
  // Frozen from an independent evaluation of the hard-core + square-well
  // matching condition with library Bessel functions.
  const std::vector<double> d25 = {
      1.0378335263884386,   -0.57302506057783287, 0.91756235508845618,
      -0.77376129914062985, 0.6359242946384599,   -1.1369327847957038,
      0.19037425825499055,  1.4756515492421682,   -0.423426429405936,
      0.7754581458414439,   -1.2118728122803013};
  const PhaseShiftSet ps25 = phase_shifts(kPot, 25.0, kHe, 20);
  REQUIRE(ps25.l_max >= 10);
  for (int l = 0; l <= 10; ++l)
    CHECK(ps25.deltas[size_t(l)] == doctest::Approx(d25[size_t(l)]).epsilon(1e-10));

  const std::vector<double> d1 = {
      -0.31046616604133392, 1.0950796935928113, -0.80818134108477546,
      0.25882336003025486,  1.1480025071949465, -1.2909992849917962,
      -0.78519957461332979};
  const PhaseShiftSet ps1 = phase_shifts(kPot, 1.0, kHe, 12);
  for (int l = 0; l <= 6; ++l)
    CHECK(ps1.deltas[size_t(l)] == doctest::Approx(d1[size_t(l)]).epsilon(1e-10));
}

TEST_CASE("phase shifts agree with the radial-ODE integration") {
  for (double E : {1.0, 25.0})
    for (int l : {0, 1, 2, 5, 9}) {
      const PhaseShiftSet ps = phase_shifts(kPot, E, kHe, 12);
      const double ode = radial_ode_phase_shift(kPot, E, kHe, l);
      // compare modulo pi (both report principal values)
      double diff = ps.deltas[size_t(l)] - ode;
      diff -= M_PI * std::round(diff / M_PI);
      CHECK(std::abs(diff) < 1e-6);
    }
}

TEST_CASE("phase shifts lie on the principal branch") {
  const PhaseShiftSet ps = phase_shifts(kPot, 25.0, kHe, 41);
  for (double d : ps.deltas) {
    CHECK(d > -M_PI / 2);
    CHECK(d <= M_PI / 2);
  }
}

TEST_CASE("unitarity of partial amplitudes: Im a_l = k |a_l|^2") {
  for (double E : {1.0, 25.0}) {
    const PhaseShiftSet ps = phase_shifts(kPot, E, kHe, 30);
    for (int l = 0; l <= ps.l_max; ++l) {
      const std::complex<double> a = partial_amplitude(ps, l);
      CHECK(std::abs(a.imag() - ps.k * std::norm(a)) < 1e-12);
    }
  }
}

TEST_CASE("optical theorem: sigma_tot = 4 pi / k Im f(0)") {
  for (double E : {1.0, 25.0}) {
    const PhaseShiftSet ps = phase_shifts(kPot, E, kHe, 41);
    const double lhs = total_cross_section(ps);
    const double rhs = 4.0 * M_PI / ps.k * f_single(ps, 0.0).imag();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("cross sections at 25 meV (frozen values)") {
  const PhaseShiftSet ps = phase_shifts(kPot, 25.0, kHe, 41);
  CHECK(total_cross_section(ps) == doctest::Approx(115.48200835444889).epsilon(1e-9));
  CHECK(transport_cross_section(ps) == doctest::Approx(43.622613847088154).epsilon(1e-9));
}

TEST_CASE("two-beam amplitude at right angles (frozen value)") {
  const PhaseShiftSet ps = phase_shifts(kPot, 25.0, kHe, 41);
  CHECK(std::abs(f_overall(ps, M_PI / 2)) ==
        doctest::Approx(3.6845331064909108).epsilon(1e-9));
  // converged in l by 41: adding terms changes nothing at the 1e-6 level
  const PhaseShiftSet ps60 = phase_shifts(kPot, 25.0, kHe, 60);
  CHECK(std::abs(f_overall(ps60, M_PI / 2)) ==
        doctest::Approx(std::abs(f_overall(ps, M_PI / 2))).epsilon(1e-6));
}

TEST_CASE("overall amplitude symmetry f(theta) = f(pi - theta)") {
  const PhaseShiftSet ps = phase_shifts(kPot, 25.0, kHe, 41);
  for (double th : {0.3, 0.9, 1.4}) {
    const std::complex<double> fp = f_overall(ps, th);
    const std::complex<double> fm = f_overall(ps, M_PI - th);
    CHECK(std::abs(fp - fm) < 1e-12);
  }
}

TEST_CASE("single-beam amplitude reduces to the partial-wave sum") {
  const PhaseShiftSet ps = phase_shifts(kPot, 1.0, kHe, 12);
  // f(0) by direct sum
  std::complex<double> f0(0, 0);
  for (int l = 0; l <= ps.l_max; ++l) {
    const double d = ps.deltas[size_t(l)];
    f0 += (2.0 * l + 1.0) * std::exp(std::complex<double>(0, d)) * std::sin(d) / ps.k;
  }
  CHECK(std::abs(f_single(ps, 0.0) - f0) < 1e-12);
}

TEST_CASE("default l_max grows with ka") {
  CHECK(default_l_max(kPot, 1.0, kHe) >= int(std::ceil(wavenumber_A(1.0, kHe) * kPot.a_A)) + 8);
  CHECK(default_l_max(kPot, 25.0, kHe) > default_l_max(kPot, 1.0, kHe));
}

TEST_CASE("pushing-force prediction (frozen value at 1 meV)") {
  const PhaseShiftSet ps = phase_shifts(kPot, 1.0, kHe, 14);
  const double f = pushing_force_prediction(ps, kHe, 1.0);
  CHECK(f == doctest::Approx(339.60993865172179).epsilon(1e-9));
  // amplitude scaling is exactly quadratic
  CHECK(pushing_force_prediction(ps, kHe, 2.0) == doctest::Approx(4.0 * f).epsilon(1e-14));
}

TEST_CASE("f_pi_half helper matches the assembled set") {
  const PhaseShiftSet ps = phase_shifts(kPot, 25.0, kHe, -1);
  const std::complex<double> a = f_pi_half(kPot, 25.0, kHe);
  const std::complex<double> b = f_overall(ps, M_PI / 2);
  CHECK(std::abs(a - b) < 1e-12);
}

TEST_CASE("rotated-convention diagnostic (frozen value)") {
  // per-term phase e^{2i delta} instead of e^{i delta}; frozen from the same
  // independent matching-formula evaluation
  const PhaseShiftSet ps = phase_shifts(kPot, 25.0, kHe, 33);
  CHECK(std::abs(f_overall_rotated(ps, M_PI / 2)) ==
        doctest::Approx(0.84425375933015079).epsilon(1e-9));
}
