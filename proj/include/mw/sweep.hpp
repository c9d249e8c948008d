#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mw/fieldsolver.hpp"
#include "mw/forces.hpp"
#include "mw/potentials.hpp"
#include "mw/quantities.hpp"

// Parameter sweeps over (d, E): solve, integrate the force, classify the
// regime, and emit CSV rows in deterministic d-major / E-minor order.
// Fx_over_Fz_single is referenced to a no-wall single-beam solve at the same
// energy and resolution (computed once per energy).

namespace mw {

enum class BeamMode { single, counter };

// Numerical knobs shared by sweep points and one-off solves.
struct RunParams {
  int points_per_wavelength = 16;      // used when spacing_A is not set
  std::optional<double> spacing_A;
  double half_extent_A = 6.8;          // no-wall half extent per axis
  double lateral_factor = 3.0;         // wall runs: lateral half extent in wavelengths
  double lateral_min_A = 6.8;
  int pml_cells = 10;
  double pml_ln_inv_r = 13.8;
  int rank = 3;
  SolverOptions solver;
  double force_radius_A = 9.0 * constants::bohr_radius_A + 0.55;
  int force_n_theta = 64;
  int force_n_phi = 128;
};

struct SweepSpec {
  std::vector<double> d_values;  // Angstrom; empty list means no wall
  std::vector<double> e_values;  // meV
  double amplitude = 1.0;        // incident amplitude, simulation units
  BeamMode beams = BeamMode::counter;
  bool no_wall = false;          // force the wall off even with d values
  bool scaled = false;           // solve at the base energy with geometry fixed,
                                 // shrinking every k*length product uniformly
  double scaled_base_e_mev = 1.0;
  bool no_timing = false;        // write seconds = 0 for byte-stable output
  int workers = 1;
  RunParams run;
  ScattererPotential scatterer;
  double wall_zpb_offset_A = 2.0;
  double wall_depth_mev = 4.0;
  double wall_width_A = 2.0;
  double mass_amu = constants::m_he_amu;
  std::string cache_dir;         // empty: no field caching
  void validate() const;
};

struct SweepRow {
  double d_A = 0;
  double e_mev = 0;
  char regime = '-';
  double Fx = 0, Fy = 0, Fz = 0;
  double fx_over_fz_single = 0;
  double residual = 0;
  double seconds = 0;
  std::string flags;  // semicolon-separated tokens; "failed" marks bad rows
  bool ok() const { return flags.find("failed") == std::string::npos; }
};

// Builders shared by the sweep and the one-off CLI paths.
PhysicalConfig build_config(double e_mev, std::optional<double> d_A, BeamMode beams,
                            const SweepSpec& spec);
CompositePotential build_potential(std::optional<double> d_A, const SweepSpec& spec);
GridSpec build_grid(const PhysicalConfig& config, const CompositePotential& pot,
                    const RunParams& run);

// Content-addressed field cache (FNV-1a over the run description).
std::string cache_key(const PhysicalConfig& config, const CompositePotential& pot,
                      const GridSpec& grid, const SolverOptions& opts);
SolveResult cached_solve(const PhysicalConfig& config, const CompositePotential& pot,
                         const GridSpec& grid, const SolverOptions& opts,
                         const std::string& cache_dir);

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// CSV schema: header exactly
//   d_angstrom,E_meV,regime,Fx,Fy,Fz,Fx_over_Fz_single,residual,seconds,flags
// with %.17g round-trip numeric formatting.
extern const char* const kSweepCsvHeader;
std::string format_sweep_csv(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed = 14695981039346656037ull);

}  // namespace mw
