#include "doctest.h"

#include <array>
#include <cmath>

#include "mw/potentials.hpp"

using namespace mw;

namespace {
CompositePotential bare() {
  CompositePotential p;
  return p;
}
CompositePotential with_wall(double d) {
  CompositePotential p;
  p.wall = make_wall(d);
  return p;
}
}  // namespace

TEST_CASE("scatterer regions: core forbidden, well negative, outside zero") {
  const CompositePotential p = bare();
  const double a = p.scatterer.a_A;
  const double b = p.scatterer.b_A;
  CHECK(a == doctest::Approx(9.0 * constants::bohr_radius_A));
  CHECK(b == doctest::Approx(6.697 * constants::bohr_radius_A));

  CHECK(!sample(p, {0, 0, 0}).has_value());                    // deep in the core
  CHECK(!sample(p, {0.99 * b, 0, 0}).has_value());             // just inside the core
  CHECK(is_forbidden(p, {0, 0.5 * b, 0}));
  REQUIRE(sample(p, {0.5 * (a + b), 0, 0}).has_value());       // in the well
  CHECK(*sample(p, {0.5 * (a + b), 0, 0}) == doctest::Approx(-p.scatterer.v0_mev));
  REQUIRE(sample(p, {0, 0, 1.01 * a}).has_value());            // outside
  CHECK(*sample(p, {0, 0, 1.01 * a}) == doctest::Approx(0.0));
  // radial symmetry: same radius along an oblique direction
  const double r = 0.5 * (a + b) / std::sqrt(3.0);
  CHECK(*sample(p, {r, r, r}) == doctest::Approx(-p.scatterer.v0_mev));
}

TEST_CASE("wall model: forbidden half-space plus physisorption step") {
  const double d = 10.0;
  const CompositePotential p = with_wall(d);
  REQUIRE(p.wall.has_value());
  CHECK(p.wall->surface_x == doctest::Approx(-d));
  CHECK(p.wall->zpb_x() == doctest::Approx(-d + 2.0));

  const double zpb = p.wall->zpb_x();
  CHECK(!sample(p, {zpb - 0.01, 0, 0}).has_value());           // behind the ZPB
  CHECK(is_forbidden(p, {zpb - 1.0, 3.0, -2.0}));
  REQUIRE(sample(p, {zpb + 0.01, 0, 0}).has_value());          // inside the step
  CHECK(*sample(p, {zpb + 0.01, 0, 0}) == doctest::Approx(-4.0));
  CHECK(*sample(p, {zpb + 1.99, 0, 0}) == doctest::Approx(-4.0));
  CHECK(*sample(p, {zpb + 2.01, 0, 0}) == doctest::Approx(0.0));  // past the step
}

TEST_CASE("well and wall sum where they overlap") {
  // d chosen so the step region reaches into the well shell
  const double d = 5.0;
  const CompositePotential p = with_wall(d);
  const double a = p.scatterer.a_A;
  const double b = p.scatterer.b_A;
  const double zpb = p.wall->zpb_x();  // -3
  // a point in the well shell and inside the step interval
  const double x = 0.5 * (zpb + -b);   // between ZPB and core edge on the -x side
  REQUIRE(std::abs(x) > b);
  REQUIRE(std::abs(x) < a);
  REQUIRE(x > zpb);
  REQUIRE(x < zpb + 2.0);
  CHECK(*sample(p, {x, 0, 0}) == doctest::Approx(-p.scatterer.v0_mev - 4.0));
}

TEST_CASE("regime classification against the ZPB position") {
  SetupGeometry g;
  g.wall_present = true;
  const double a = ScattererPotential{}.a_A;

  g.d_A = 10.0;  // zpb = -8 <= -a
  CHECK(classify_regime(g, with_wall(g.d_A)) == Regime::A);
  g.d_A = a + 2.0;  // zpb = -a exactly: boundary belongs to A
  CHECK(classify_regime(g, with_wall(g.d_A)) == Regime::A);
  g.d_A = 3.6;  // zpb = -1.6 in (-a, 0]
  CHECK(classify_regime(g, with_wall(g.d_A)) == Regime::B);
  g.d_A = 2.0;  // zpb = 0: B/C boundary belongs to B
  CHECK(classify_regime(g, with_wall(g.d_A)) == Regime::B);
  g.d_A = 1.0;  // zpb = +1 > 0
  CHECK(classify_regime(g, with_wall(g.d_A)) == Regime::C);

  CHECK(regime_letter(Regime::A) == 'A');
  CHECK(regime_letter(Regime::B) == 'B');
  CHECK(regime_letter(Regime::C) == 'C');
}

TEST_CASE("validation rejects malformed parameters") {
  ScattererPotential s;
  CHECK_NOTHROW(s.validate());
  s.b_A = s.a_A;
  CHECK_THROWS_AS(s.validate(), std::domain_error);
  s = ScattererPotential{};
  s.v0_mev = -1.0;
  CHECK_THROWS_AS(s.validate(), std::domain_error);

  WallPotential w = make_wall(10.0);
  CHECK_NOTHROW(w.validate());
  w.steps.push_back({w.zpb_x() - 1.0, 0.0});  // non-increasing boundary
  CHECK_THROWS_AS(w.validate(), std::domain_error);
}

TEST_CASE("cell averages recover uniform values away from edges") {
  const CompositePotential p = with_wall(10.0);
  const std::array<double, 3> h{0.1, 0.1, 0.1};
  // deep in vacuum
  CHECK(*cell_average(p, {3.0, 3.0, 3.0}, h) == doctest::Approx(0.0));
  // well interior, away from r = a and r = b by more than h
  const double rmid = 0.5 * (p.scatterer.a_A + p.scatterer.b_A);
  CHECK(*cell_average(p, {0, 0, rmid}, h) == doctest::Approx(-p.scatterer.v0_mev));
  // forbidden center
  CHECK(!cell_average(p, {0, 0, 0}, h).has_value());
}

TEST_CASE("cell average across the well edge lies between the two levels") {
  const CompositePotential p = bare();
  const double a = p.scatterer.a_A;
  const std::array<double, 3> h{0.2, 0.2, 0.2};
  const auto v = cell_average(p, {0, 0, a}, h);  // centered exactly on the edge
  REQUIRE(v.has_value());
  CHECK(*v < 0.0);
  CHECK(*v > -p.scatterer.v0_mev);
  // roughly half-in, half-out
  CHECK(*v == doctest::Approx(-0.5 * p.scatterer.v0_mev).epsilon(0.2));
}

TEST_CASE("cell average across a wall-step boundary uses the 1D overlap") {
  const CompositePotential p = with_wall(10.0);
  const double edge = p.wall->zpb_x() + 2.0;  // step-to-vacuum boundary at -6
  const std::array<double, 3> h{0.2, 0.2, 0.2};
  const auto v = cell_average(p, {edge, 4.0, 4.0}, h);
  REQUIRE(v.has_value());
  // half the cell at -4 meV, half at 0
  CHECK(*v == doctest::Approx(-2.0).epsilon(1e-9));
}
