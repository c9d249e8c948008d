#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "mw/quantities.hpp"
#include "mw/scenarios.hpp"

using namespace mw;

TEST_CASE("sequential lateral ratio reference point") {
  const double r = sequential_lateral_ratio(0.99813, {0.824716, 0.0});
  CHECK(r == doctest::Approx(0.6777).epsilon(5e-4));
  CHECK(r == doctest::Approx(std::pow(0.99813 * 0.824716, 2)).epsilon(1e-14));
  // only |f| matters
  const double rc = sequential_lateral_ratio(0.99813, {0.0, 0.824716});
  CHECK(rc == doctest::Approx(r).epsilon(1e-14));
}

TEST_CASE("sequential lateral ratio edge and scaling cases") {
  CHECK(sequential_lateral_ratio(0.0, {0.8, 0.0}) == doctest::Approx(0.0));
  CHECK(sequential_lateral_ratio(1.0, {1.0, 0.0}) == doctest::Approx(1.0));
  // spreading multiplies through
  CHECK(sequential_lateral_ratio(0.5, {0.5, 0.0}, 1.0, 2.0) ==
        doctest::Approx(2.0 * sequential_lateral_ratio(0.5, {0.5, 0.0})).epsilon(1e-14));
  // monotone in R and |f|
  double prev = -1;
  for (double R : {0.1, 0.4, 0.8, 1.0}) {
    const double v = sequential_lateral_ratio(R, {0.7, 0.0});
    CHECK(v > prev);
    prev = v;
  }
  prev = -1;
  for (double f : {0.1, 0.4, 0.8, 1.2}) {
    const double v = sequential_lateral_ratio(0.9, {f, 0.0});
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("make_sequential_estimate records inputs and ratio") {
  const SequentialEstimate e = make_sequential_estimate(0.99813, {0.824716, 0.0});
  CHECK(e.R == doctest::Approx(0.99813));
  CHECK(std::abs(e.f_half) == doctest::Approx(0.824716));
  CHECK(e.spreading == doctest::Approx(1.0));
  CHECK(e.ratio == doctest::Approx(0.6777).epsilon(5e-4));
}

TEST_CASE("max energy transfer: paper arithmetic and precise masses") {
  // with the rounded masses the printed 16/131 arithmetic appears
  CHECK(max_energy_transfer(25.0, 4.0, 131.0) == doctest::Approx(3.053).epsilon(2e-4));
  // precise isotopic-average masses land within 0.2% of that
  const double em = max_energy_transfer(25.0, constants::m_he_amu, constants::m_xe_amu);
  CHECK(em == doctest::Approx(3.053).epsilon(2e-3));
  CHECK(em == doctest::Approx(4.0 * (constants::m_he_amu / constants::m_xe_amu) * 25.0)
                  .epsilon(1e-14));
  // 2 eV beam
  const double em2 = max_energy_transfer(2000.0, constants::m_he_amu, constants::m_xe_amu);
  CHECK(std::abs(em2 - 244.0) < 2.0);
  CHECK(max_energy_transfer(0.0, 4.0, 131.0) == doctest::Approx(0.0));
}

TEST_CASE("max energy transfer scaling properties") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uE(0.1, 100.0), um(1.0, 200.0);
  for (int i = 0; i < 10; ++i) {
    const double E = uE(rng), mi = um(rng), ms = um(rng), c = 1.0 + uE(rng) / 50.0;
    CHECK(max_energy_transfer(c * E, mi, ms) ==
          doctest::Approx(c * max_energy_transfer(E, mi, ms)).epsilon(1e-12));
    CHECK(max_energy_transfer(E, c * mi, ms) ==
          doctest::Approx(c * max_energy_transfer(E, mi, ms)).epsilon(1e-12));
    CHECK(max_energy_transfer(E, mi, c * ms) ==
          doctest::Approx(max_energy_transfer(E, mi, ms) / c).epsilon(1e-12));
  }
}

TEST_CASE("desorption verdicts") {
  const EnergyWindow xe = xe_cu111_binding();
  CHECK(xe.low_mev == doctest::Approx(173.0));
  CHECK(xe.high_mev == doctest::Approx(200.0));

  // 25 meV He beam cannot desorb Xe
  const TransferResult low = desorption_verdict(
      max_energy_transfer(25.0, constants::m_he_amu, constants::m_xe_amu), xe);
  CHECK(!low.desorbs);
  CHECK(low.margin_mev < 0);

  // 2 eV He beam can (against the low edge)
  const TransferResult high = desorption_verdict(
      max_energy_transfer(2000.0, constants::m_he_amu, constants::m_xe_amu), xe);
  CHECK(high.desorbs);
  CHECK(high.margin_mev > 0);
  CHECK(high.margin_mev == doctest::Approx(high.e_max_mev - 173.0).epsilon(1e-12));

  // 244 meV does NOT clear the high edge
  const TransferResult vs_high = desorption_verdict(high.e_max_mev, xe, true);
  CHECK(vs_high.desorbs == (high.e_max_mev > 200.0));
  CHECK(vs_high.margin_mev == doctest::Approx(high.e_max_mev - 200.0).epsilon(1e-12));

  // strict inequality at the threshold
  const TransferResult edge = desorption_verdict(173.0, xe);
  CHECK(!edge.desorbs);
  CHECK(edge.margin_mev == doctest::Approx(0.0));
}

TEST_CASE("He itself is not bound against a 25 meV kick") {
  const TransferResult t = desorption_verdict(25.0, he_cu_binding());
  CHECK(t.desorbs);
}
