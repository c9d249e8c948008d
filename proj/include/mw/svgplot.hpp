#pragma once
#include <string>
#include <vector>

#include "mw/sweep.hpp"

// Self-contained SVG renderings of sweep results. Two kinds:
//   force_vs_d  - Fx, Fy, Fz polylines against d, one line set per energy,
//                 markers on every converged point, hollow markers where the
//                 point failed;
//   force_map   - Fx sign/magnitude cells over the (d, E) plane with the
//                 zero-crossing contour drawn on top.
// Axis ranges cover the data with a 5% margin; output is deterministic for
// identical input rows.

namespace mw {

enum class PlotKind { force_vs_d, force_map };

std::string render_plot(const std::vector<SweepRow>& rows, PlotKind kind);
void emit_plot(const std::vector<SweepRow>& rows, PlotKind kind, const std::string& path);

}  // namespace mw
