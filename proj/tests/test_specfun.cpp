#include "doctest.h"

#include <cmath>
#include <vector>

#include "mw/specfun.hpp"

using namespace mw;

TEST_CASE("spherical Bessel closed forms at low order") {
  for (double x : {0.3, 1.0, 2.7, 10.0, 41.5}) {
    CHECK(sph_j(0, x) == doctest::Approx(std::sin(x) / x).epsilon(1e-12));
    CHECK(sph_j(1, x) ==
          doctest::Approx(std::sin(x) / (x * x) - std::cos(x) / x).epsilon(1e-11));
    CHECK(sph_y(0, x) == doctest::Approx(-std::cos(x) / x).epsilon(1e-12));
    CHECK(sph_y(1, x) ==
          doctest::Approx(-std::cos(x) / (x * x) - std::sin(x) / x).epsilon(1e-11));
  }
  // j_l(0): 1 for l = 0, 0 otherwise
  CHECK(sph_j(0, 0.0) == doctest::Approx(1.0));
  CHECK(sph_j(3, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("Wronskian j_l y_l' - j_l' y_l = 1/x^2") {
  for (int l = 0; l <= 40; ++l)
    for (double x : {0.2, 1.0, 3.5, 12.0, 60.0, 100.0}) {
      const double w = sph_j(l, x) * sph_yp(l, x) - sph_jp(l, x) * sph_y(l, x);
      CHECK(w * x * x == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("three-term recurrence f_{l-1} + f_{l+1} = (2l+1)/x f_l") {
  for (int l = 1; l <= 39; ++l)
    for (double x : {0.7, 4.2, 25.0, 90.0}) {
      const double lhs_j = sph_j(l - 1, x) + sph_j(l + 1, x);
      const double rhs_j = (2.0 * l + 1.0) / x * sph_j(l, x);
      const double scale_j = std::max({std::abs(lhs_j), std::abs(rhs_j), 1e-300});
      CHECK(std::abs(lhs_j - rhs_j) / scale_j < 1e-10);
      const double lhs_y = sph_y(l - 1, x) + sph_y(l + 1, x);
      const double rhs_y = (2.0 * l + 1.0) / x * sph_y(l, x);
      const double scale_y = std::max({std::abs(lhs_y), std::abs(rhs_y), 1e-300});
      CHECK(std::abs(lhs_y - rhs_y) / scale_y < 1e-10);
    }
}

TEST_CASE("derivative identity f' = f_{l-1} - (l+1)/x f_l") {
  for (int l = 1; l <= 30; ++l)
    for (double x : {1.3, 8.0, 55.0}) {
      CHECK(sph_jp(l, x) ==
            doctest::Approx(sph_j(l - 1, x) - (l + 1) / x * sph_j(l, x)).epsilon(1e-9));
      CHECK(sph_yp(l, x) ==
            doctest::Approx(sph_y(l - 1, x) - (l + 1) / x * sph_y(l, x)).epsilon(1e-9));
    }
}

TEST_CASE("parity of j_l") {
  for (int l = 0; l <= 6; ++l)
    for (double x : {0.4, 2.2}) {
      const double sign = (l % 2 == 0) ? 1.0 : -1.0;
      CHECK(sph_j(l, -x) == doctest::Approx(sign * sph_j(l, x)).epsilon(1e-12));
    }
}

TEST_CASE("Hankel functions combine j and y") {
  for (int l : {0, 3, 11})
    for (double x : {0.9, 17.0}) {
      const auto h1 = sph_h1(l, x);
      CHECK(h1.real() == doctest::Approx(sph_j(l, x)).epsilon(1e-12));
      CHECK(h1.imag() == doctest::Approx(sph_y(l, x)).epsilon(1e-12));
      const auto h2 = sph_h2(l, x);
      CHECK(h2.real() == doctest::Approx(sph_j(l, x)).epsilon(1e-12));
      CHECK(h2.imag() == doctest::Approx(-sph_y(l, x)).epsilon(1e-12));
    }
}

TEST_CASE("Legendre polynomials") {
  for (double u : {-1.0, -0.37, 0.0, 0.5, 1.0}) {
    CHECK(legendre_p(0, u) == doctest::Approx(1.0));
    CHECK(legendre_p(1, u) == doctest::Approx(u));
    CHECK(legendre_p(2, u) == doctest::Approx(0.5 * (3 * u * u - 1)).epsilon(1e-13));
    CHECK(legendre_p(3, u) ==
          doctest::Approx(0.5 * (5 * u * u * u - 3 * u)).epsilon(1e-13));
  }
  // P_l(1) = 1, P_l(-1) = (-1)^l
  for (int l = 0; l <= 25; ++l) {
    CHECK(legendre_p(l, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(legendre_p(l, -1.0) ==
          doctest::Approx(l % 2 == 0 ? 1.0 : -1.0).epsilon(1e-12));
  }
}

TEST_CASE("Gauss-Legendre weights sum to 2 and integrate polynomials exactly") {
  for (int n : {1, 2, 5, 16, 48, 64}) {
    const auto [x, w] = gauss_legendre(n);
    REQUIRE(int(x.size()) == n);
    REQUIRE(int(w.size()) == n);
    double s = 0;
    for (double wi : w) s += wi;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
    // nodes sorted, inside (-1, 1), symmetric
    for (int i = 1; i < n; ++i) CHECK(x[size_t(i)] > x[size_t(i - 1)]);
    CHECK(x.front() > -1.0);
    CHECK(x.back() < 1.0);
    for (int i = 0; i < n; ++i) {
      CHECK(x[size_t(i)] == doctest::Approx(-x[size_t(n - 1 - i)]).epsilon(1e-13));
      CHECK(w[size_t(i)] == doctest::Approx(w[size_t(n - 1 - i)]).epsilon(1e-13));
    }
    // exact for monomials up to degree 2n-1
    for (int p = 1; p < 2 * n && p < 12; ++p) {
      double q = 0;
      for (int i = 0; i < n; ++i) q += w[size_t(i)] * std::pow(x[size_t(i)], p);
      const double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
      CHECK(q == doctest::Approx(exact).epsilon(5e-13));
    }
  }
}

TEST_CASE("Legendre orthogonality via Gauss-Legendre quadrature") {
  const auto [x, w] = gauss_legendre(48);
  for (int l = 0; l <= 12; ++l)
    for (int m = l; m <= 12; ++m) {
      double s = 0;
      for (size_t i = 0; i < x.size(); ++i)
        s += w[i] * legendre_p(l, x[i]) * legendre_p(m, x[i]);
      const double exact = (l == m) ? 2.0 / (2 * l + 1) : 0.0;
      CHECK(std::abs(s - exact) < 1e-12);
    }
}
