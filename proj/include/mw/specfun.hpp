#pragma once
#include <complex>
#include <utility>
#include <vector>

// Spherical Bessel functions of the first/second kind, spherical Hankel
// functions, Legendre polynomials, and the derivatives needed by the
// wave-matching conditions. Accuracy target: 1e-10 relative for l <= 40,
// |x| <= 100.

namespace mw {

double sph_j(int l, double x);   // first kind; defined for all real x (parity)
double sph_y(int l, double x);   // second kind; requires x > 0
double sph_jp(int l, double x);  // d/dx sph_j
double sph_yp(int l, double x);  // d/dx sph_y
std::complex<double> sph_h1(int l, double x);  // j + i y, x > 0
std::complex<double> sph_h2(int l, double x);  // j - i y, x > 0
double legendre_p(int l, double u);            // |u| <= 1

// Gauss-Legendre nodes and weights on [-1, 1], n >= 1.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

}  // namespace mw
