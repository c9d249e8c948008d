#pragma once
#include <vector>

#include "mw/quantities.hpp"

// 1D piecewise-constant-potential solver for the reflection amplitude of a
// wave incident from the free right side moving toward -x. Supports an exact
// hard wall on the left (R = 1 analytically) and finite-step stacks
// (transmission into the leftmost region).

namespace mw {

// Regions between consecutive boundaries. With hard_left, boundaries[0] is the
// wall position and values[j] lives on [boundaries[j], boundaries[j+1]) with
// the last value on [boundaries.back(), inf) — it must be 0 (free asymptotic
// region). Without hard_left there is one more value than boundaries, with
// values.front() on (-inf, boundaries[0]).
struct Steps1D {
  std::vector<double> boundaries;
  std::vector<double> values_mev;
  bool hard_left = false;

  void validate() const;
};

struct ReflectionResult {
  double R = 0;      // |r|
  double phase = 0;  // arg r
  double T = 0;      // |t| (0 with a hard wall)
};

ReflectionResult reflect(const Steps1D& steps, double E_mev, double m_amu);

// Hard wall at -d + zpb_offset fronted by the physisorption step well.
Steps1D make_wall_steps(double d_A, double zpb_offset = 2.0, double well_depth_mev = 4.0,
                        double well_width_A = 2.0);

// Finite-barrier variant of the same geometry: barrier of the given height and
// width in place of the hard wall, then the step well, then free space.
Steps1D make_barrier_steps(double d_A, double barrier_height_mev, double barrier_width_A,
                           double zpb_offset = 2.0, double well_depth_mev = 4.0,
                           double well_width_A = 2.0);

}  // namespace mw
