#pragma once
#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

// Discretized complex wavefunction on a regular node-centered grid with a
// forbidden-region mask, plus its binary file format:
//   magic "MWFLD1", u32 version, u8 rank, per-axis u64 dims,
//   f64 spacing triple, f64 origin triple,
//   row-major (last axis fastest) interleaved f64 (re, im) pairs,
//   forbidden mask as packed bits (LSB first), all little-endian.

namespace mw {

struct GridSpec {
  int rank = 3;                                   // 2 (x,z plane) or 3
  std::array<std::int64_t, 3> n = {0, 0, 0};      // nodes per axis (rank entries)
  std::array<double, 3> spacing = {0, 0, 0};      // A per axis
  std::array<double, 3> origin = {0, 0, 0};       // corner node, scatterer-centered
  int pml_cells = 10;                             // absorbing-layer thickness (not persisted)
  double pml_ln_inv_r = 13.8;                     // absorber strength ln(1/R0) (not persisted)

  std::int64_t count() const {
    std::int64_t c = 1;
    for (int a = 0; a < rank; ++a) c *= n[a];
    return c;
  }
  std::int64_t stride(int axis) const {
    std::int64_t s = 1;
    for (int a = axis + 1; a < rank; ++a) s *= n[a];
    return s;
  }
  double coord(int axis, std::int64_t i) const { return origin[axis] + i * spacing[axis]; }
  void validate(double k_A) const;  // spacing/absorber sanity (throws on hard violations)
};

// Uniform-spacing grid whose nodes include the scatterer center (coordinate 0
// on every axis). lo/hi are the desired half-extents of the *non-absorbing*
// region per axis (both positive); the absorbing layer is appended outside.
GridSpec make_grid(int rank, double spacing, const std::array<double, 3>& lo,
                   const std::array<double, 3>& hi, int pml_cells, double pml_ln_inv_r = 13.8);

struct ComplexField {
  GridSpec grid;
  std::vector<std::complex<double>> values;  // total wavefunction, 0 on forbidden cells
  std::vector<std::uint8_t> mask;            // 1 = forbidden

  std::int64_t index(std::int64_t i, std::int64_t j, std::int64_t k = 0) const {
    return (grid.rank == 3) ? (i * grid.n[1] + j) * grid.n[2] + k : i * grid.n[1] + j;
  }
};

void save_field(const std::string& path, const ComplexField& f);
ComplexField load_field(const std::string& path);

}  // namespace mw
