#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "mw/onedim.hpp"
#include "mw/quantities.hpp"

using namespace mw;

namespace {
const double kHe = constants::m_he_amu;
}

TEST_CASE("bare hard wall: R = 1 exactly, phase = pi - 2 k x0") {
  Steps1D s;
  s.boundaries = {-8.0};
  s.values_mev = {0.0};
  s.hard_left = true;
  const ReflectionResult r = reflect(s, 25.0, kHe);
  CHECK(r.R == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.T == doctest::Approx(0.0));
  CHECK(r.phase == doctest::Approx(0.7524530425950).epsilon(1e-10));  // frozen
  // analytic form of the same number
  const double k = wavenumber_A(25.0, kHe);
  double ph = M_PI - 2.0 * k * (-8.0);
  ph = std::remainder(ph, 2.0 * M_PI);
  CHECK(r.phase == doctest::Approx(ph).epsilon(1e-10));
}

TEST_CASE("hard wall keeps R = 1 through any finite step stack") {
  const Steps1D s = make_wall_steps(10.0);
  for (double E : {0.5, 1.0, 4.0, 25.0}) {
    const ReflectionResult r = reflect(s, E, kHe);
    CHECK(r.R == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.T == doctest::Approx(0.0));
  }
  // frozen phases with the default -4 meV x 2 A step in front (d = 10)
  CHECK(reflect(s, 25.0, kHe).phase == doctest::Approx(2.9586910272541083).epsilon(1e-10));
  CHECK(reflect(s, 1.0, kHe).phase == doctest::Approx(0.81362292583349782).epsilon(1e-10));
}

TEST_CASE("wall phase shifts by -2k when the wall moves one angstrom closer") {
  // moving the reflector changes the round-trip path; convention-independent
  // check via the absolute phase increment mod 2 pi
  const double E = 1.0;
  const double k = wavenumber_A(E, kHe);
  Steps1D a, b;
  a.boundaries = {-8.0};
  a.values_mev = {0.0};
  a.hard_left = true;
  b = a;
  b.boundaries = {-7.0};
  const double dphi =
      std::remainder(reflect(b, E, kHe).phase - reflect(a, E, kHe).phase, 2.0 * M_PI);
  CHECK(std::abs(std::remainder(dphi + 2.0 * k, 2.0 * M_PI)) < 1e-10);
}

TEST_CASE("free-standing slab (frozen values) and flux conservation") {
  Steps1D s;
  s.boundaries = {-1.5, 1.5};
  s.values_mev = {0.0, -2.458, 0.0};
  s.hard_left = false;
  const ReflectionResult r = reflect(s, 1.0, kHe);
  CHECK(r.R == doctest::Approx(0.5479207755447708).epsilon(1e-12));
  CHECK(r.T == doctest::Approx(0.8365302288180728).epsilon(1e-12));
  CHECK(r.phase == doctest::Approx(-1.121850757639583).epsilon(1e-10));
  CHECK(r.R * r.R + r.T * r.T == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("flux conservation across random step stacks") {
  // equal outer levels, so |r|^2 + |t|^2 = 1 holds exactly
  Steps1D s;
  s.boundaries = {-4.0, -2.5, -0.5, 1.0};
  s.values_mev = {0.0, -3.0, 2.0, -1.0, 0.0};
  s.hard_left = false;
  for (double E : {0.7, 1.0, 5.0, 25.0}) {
    const ReflectionResult r = reflect(s, E, kHe);
    CHECK(r.R * r.R + r.T * r.T == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("calibrated barrier reproduces the high-reflectivity working point") {
  // finite barrier stand-in for the wall: height tuned so R(25 meV) = 0.99813
  const Steps1D s = make_barrier_steps(10.0, 25.70870725543876, 2.0);
  const ReflectionResult r = reflect(s, 25.0, kHe);
  CHECK(r.R == doctest::Approx(0.99813).epsilon(1e-10));
  CHECK(r.R * r.R + r.T * r.T == doctest::Approx(1.0).epsilon(1e-10));
  // neighboring height, frozen regression point
  const Steps1D s26 = make_barrier_steps(10.0, 26.0, 2.0);
  CHECK(reflect(s26, 25.0, kHe).R == doctest::Approx(0.998938).epsilon(1e-5));
}

TEST_CASE("sub-barrier incidence reflects fully") {
  const Steps1D s = make_barrier_steps(10.0, 25.0, 2.0);
  const ReflectionResult r = reflect(s, 1.0, kHe);  // far below the barrier top
  CHECK(r.R > 0.999);
  CHECK(r.R * r.R + r.T * r.T == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("validation") {
  Steps1D s;
  s.boundaries = {-2.0, -3.0};  // not increasing
  s.values_mev = {0.0, 0.0};
  s.hard_left = true;
  CHECK_THROWS(s.validate());
  Steps1D t;
  t.boundaries = {-2.0};
  t.values_mev = {0.0, 0.0, 0.0};  // wrong count
  t.hard_left = true;
  CHECK_THROWS(t.validate());
  Steps1D u;
  u.boundaries = {-2.0};
  u.values_mev = {1.0};  // asymptotic region must be free
  u.hard_left = true;
  CHECK_THROWS(u.validate());
}
