#pragma once
#include <cmath>
#include <stdexcept>
#include <vector>

// Units and shared configuration types. Interface units everywhere in this
// toolkit: lengths in angstrom, energies in meV, masses in unified atomic mass
// units. The single derived constant almost every module needs is
// hbar^2/(2m) expressed in meV*A^2, precomputed from SI values once.

namespace mw {

namespace constants {
inline constexpr double hbar_js = 1.054571817e-34;        // J s
inline constexpr double amu_kg = 1.66053906660e-27;       // kg per u
inline constexpr double mev_to_joule = 1.602176634e-22;   // J per meV
inline constexpr double m_he_amu = 4.002602;
inline constexpr double m_xe_amu = 131.293;
inline constexpr double bohr_radius_A = 0.529177;
inline constexpr double angstrom_m = 1e-10;
inline constexpr double mev_per_A_to_newton = mev_to_joule / angstrom_m;
}  // namespace constants

// hbar^2/(2m) in meV*A^2 for a mass given in u.
inline double hbar2_over_2m(double m_amu) {
  if (m_amu <= 0) throw std::domain_error("hbar2_over_2m: mass must be positive");
  using namespace constants;
  const double m_kg = m_amu * amu_kg;
  return hbar_js * hbar_js / (2.0 * m_kg) / mev_to_joule / (angstrom_m * angstrom_m);
}

// k = sqrt(2mE)/hbar in 1/m (SI).
inline double wavenumber(double E_mev, double m_amu) {
  if (E_mev < 0) throw std::domain_error("wavenumber: E must be >= 0");
  if (m_amu <= 0) throw std::domain_error("wavenumber: mass must be positive");
  using namespace constants;
  return std::sqrt(2.0 * m_amu * amu_kg * E_mev * mev_to_joule) / hbar_js;
}

// Same wavenumber in 1/A (the unit used internally).
inline double wavenumber_A(double E_mev, double m_amu) {
  return wavenumber(E_mev, m_amu) * constants::angstrom_m;
}

// Interior wavenumber k' = sqrt(2m(E+V0))/hbar in 1/A.
inline double kprime_A(double E_mev, double V0_mev, double m_amu) {
  if (E_mev + V0_mev < 0)
    throw std::domain_error("kprime: E+V0 < 0 (classically forbidden interior)");
  return wavenumber_A(E_mev + V0_mev, m_amu);
}

// Incident beam(s): energy, amplitude, propagation directions along z.
struct BeamSpec {
  double energy_mev = 1.0;
  double amplitude = 1.0;               // simulation units, default 1
  std::vector<int> directions = {+1};   // each +1 (+z) or -1 (-z), no duplicates

  void validate() const {
    if (energy_mev < 0) throw std::domain_error("BeamSpec: E must be >= 0");
    if (directions.empty()) throw std::domain_error("BeamSpec: no beam directions");
    int plus = 0, minus = 0;
    for (int d : directions) {
      if (d == +1) ++plus;
      else if (d == -1) ++minus;
      else throw std::domain_error("BeamSpec: directions must be +1 or -1");
    }
    if (plus > 1 || minus > 1) throw std::domain_error("BeamSpec: duplicate direction");
  }
};

// Scatterer-to-surface distance; coordinates are scatterer-centered with the
// metal surface (outermost Cu layer) at x = -d.
struct SetupGeometry {
  double d_A = 10.0;
  bool wall_present = false;

  void validate() const {
    if (wall_present && d_A <= 0) throw std::domain_error("SetupGeometry: d must be > 0");
  }
};

struct PhysicalConfig {
  BeamSpec beam;
  SetupGeometry geometry;
  double mass_amu = constants::m_he_amu;  // incident-particle mass

  double k_A() const { return wavenumber_A(beam.energy_mev, mass_amu); }
  double h2() const { return hbar2_over_2m(mass_amu); }
  void validate() const {
    beam.validate();
    geometry.validate();
    if (mass_amu <= 0) throw std::domain_error("PhysicalConfig: mass must be positive");
  }
};

}  // namespace mw
