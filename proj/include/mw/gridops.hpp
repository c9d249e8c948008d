#pragma once
#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "mw/field.hpp"

namespace mw {

// Multilinear interpolation of a node array at a spatial point. 2D grids map
// their axes to spatial (x, z); the y coordinate of p is then ignored.
std::complex<double> interp_grid(const GridSpec& g,
                                 const std::vector<std::complex<double>>& a,
                                 const std::array<double, 3>& p);

// First derivative of a node array along each grid axis at every node:
// 4th-order centered where the stencil avoids masked nodes and edges,
// lower-order centered/one-sided fallbacks that never read masked nodes,
// 0 on masked nodes. Entries beyond the grid rank stay empty.
std::array<std::vector<std::complex<double>>, 3> gradient_arrays(
    const GridSpec& g, const std::vector<std::complex<double>>& a,
    const std::vector<std::uint8_t>& mask);

}  // namespace mw
