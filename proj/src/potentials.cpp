#include "mw/potentials.hpp"

#include <algorithm>
#include <cmath>

namespace mw {

char regime_letter(Regime r) {
  switch (r) {
    case Regime::A: return 'A';
    case Regime::B: return 'B';
    default: return 'C';
  }
}

WallPotential make_wall(double d_A, double zpb_offset, double well_depth_mev,
                        double well_width_A) {
  WallPotential w;
  w.surface_x = -d_A;
  w.zpb_offset = zpb_offset;
  if (well_depth_mev != 0.0 && well_width_A > 0.0)
    w.steps.push_back({w.zpb_x() + well_width_A, -well_depth_mev});
  w.validate();
  return w;
}

namespace {

// Finite wall value at x (assumes x >= zpb); 0 beyond the last step.
double wall_value(const WallPotential& w, double x) {
  double lo = w.zpb_x();
  for (const auto& s : w.steps) {
    if (x < s.x_to && x >= lo) return s.value_mev;
    lo = s.x_to;
  }
  return 0.0;
}

// Mean of the finite wall value over [x0, x1] clipped to the allowed side.
double wall_avg(const WallPotential& w, double x0, double x1) {
  x0 = std::max(x0, w.zpb_x());
  if (x1 <= x0) return 0.0;
  double acc = 0.0;
  double lo = w.zpb_x();
  for (const auto& s : w.steps) {
    const double ov = std::max(0.0, std::min(x1, s.x_to) - std::max(x0, lo));
    acc += ov * s.value_mev;
    lo = s.x_to;
  }
  return acc / (x1 - x0);
}

}  // namespace

std::optional<double> sample(const CompositePotential& pot, const std::array<double, 3>& p) {
  const auto& sc = pot.scatterer;
  const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  if (r < sc.b_A) return std::nullopt;  // hard core
  double v = (r <= sc.a_A) ? -sc.v0_mev : 0.0;
  if (pot.wall) {
    if (p[0] < pot.wall->zpb_x()) return std::nullopt;  // behind the ZPB
    v += wall_value(*pot.wall, p[0]);
  }
  return v;
}

bool is_forbidden(const CompositePotential& pot, const std::array<double, 3>& p) {
  return !sample(pot, p).has_value();
}

Regime classify_regime(const SetupGeometry& geom, const CompositePotential& pot) {
  if (!geom.wall_present || !pot.wall)
    throw std::domain_error("classify_regime: wall absent");
  const double zpb = pot.wall->zpb_x();
  const double a = pot.scatterer.a_A;
  if (zpb <= -a) return Regime::A;
  if (zpb <= 0.0) return Regime::B;
  return Regime::C;
}

std::optional<double> cell_average(const CompositePotential& pot, const std::array<double, 3>& p,
                                   const std::array<double, 3>& h) {
  if (is_forbidden(pot, p)) return std::nullopt;
  const auto& sc = pot.scatterer;
  const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  const double hmax = std::max({h[0], h[1], h[2]});

  double v;
  if (std::abs(r - sc.a_A) < 0.9 * hmax) {
    // straddles the well edge: volume-fraction average by 4^3 subsampling
    const int ns = 4;
    int inside = 0;
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < ns; ++j)
        for (int k = 0; k < ns; ++k) {
          const double x = p[0] + ((i + 0.5) / ns - 0.5) * h[0];
          const double y = p[1] + ((j + 0.5) / ns - 0.5) * h[1];
          const double z = p[2] + ((k + 0.5) / ns - 0.5) * h[2];
          if (x * x + y * y + z * z <= sc.a_A * sc.a_A) ++inside;
        }
    v = -sc.v0_mev * inside / double(ns * ns * ns);
  } else {
    v = (r <= sc.a_A) ? -sc.v0_mev : 0.0;
  }
  if (pot.wall)
    v += wall_avg(*pot.wall, p[0] - 0.5 * h[0], p[0] + 0.5 * h[0]);
  return v;
}

}  // namespace mw
