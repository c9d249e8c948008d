#pragma once
#include <array>
#include <optional>
#include <vector>

#include "mw/quantities.hpp"

// Piecewise-constant potential-energy models. The scatterer is a hard core of
// radius b inside an attractive square well of outer radius a; the wall is an
// impenetrable half-space behind a zero-probability boundary (ZPB) fronted by
// a configurable step well. Forbidden regions are represented by an absent
// optional, never by a large finite number, so |psi|^2-weighted integrands
// stay well-defined through the psi = 0 boundary condition.

namespace mw {

struct ScattererPotential {
  double v0_mev = 2.458;                          // well depth, stored positive
  double a_A = 9.0 * constants::bohr_radius_A;    // outer radius
  double b_A = 6.697 * constants::bohr_radius_A;  // hard-core radius

  void validate() const {
    if (!(0 < b_A && b_A < a_A)) throw std::domain_error("ScattererPotential: need 0 < b < a");
    if (v0_mev < 0) throw std::domain_error("ScattererPotential: V0 must be >= 0");
  }
};

// Wall in scatterer-centered coordinates: outermost metal layer at
// x = surface_x (= -d), forbidden for x < surface_x + zpb_offset, then an
// ordered list of finite steps, each valid up to its x_to boundary; beyond the
// last boundary the potential is 0.
struct WallPotential {
  struct Step {
    double x_to;       // right edge of this step's interval
    double value_mev;  // potential on the interval
  };
  double surface_x = -10.0;
  double zpb_offset = 2.0;
  std::vector<Step> steps;  // boundaries strictly increasing, start at the ZPB

  double zpb_x() const { return surface_x + zpb_offset; }
  void validate() const {
    double prev = zpb_x();
    for (const auto& s : steps) {
      if (s.x_to <= prev) throw std::domain_error("WallPotential: step boundaries must increase");
      prev = s.x_to;
    }
  }
};

struct CompositePotential {
  ScattererPotential scatterer;
  std::optional<WallPotential> wall;
};

enum class Regime { A, B, C };  // no / partial / deep overlap of ZPB with the well
char regime_letter(Regime r);

// Default wall model: ZPB at -d + zpb_offset, one physisorption step of the
// given depth and width in front of it.
WallPotential make_wall(double d_A, double zpb_offset = 2.0, double well_depth_mev = 4.0,
                        double well_width_A = 2.0);

// Potential at a point: nullopt marks a forbidden (infinite) region,
// otherwise the sum of the finite constituents.
std::optional<double> sample(const CompositePotential& pot, const std::array<double, 3>& p);

bool is_forbidden(const CompositePotential& pot, const std::array<double, 3>& p);

Regime classify_regime(const SetupGeometry& geom, const CompositePotential& pot);

// Average of the finite part of the potential over a cell of extents h
// centered at p, used by the discretized solver: cells straddling the well
// edge r = a get a volume-fraction average (via subsampling), cells straddling
// wall-step boundaries get an exact 1D overlap average restricted to the
// allowed side of the ZPB. Returns nullopt when the cell center is forbidden.
std::optional<double> cell_average(const CompositePotential& pot, const std::array<double, 3>& p,
                                   const std::array<double, 3>& h);

}  // namespace mw
