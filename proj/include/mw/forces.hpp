#pragma once
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mw/field.hpp"
#include "mw/potentials.hpp"
#include "mw/quantities.hpp"

// Time-averaged force on the scatterer from the quantum stress tensor
//   T = (h2m)(grad psi (x) grad psi* + c.c.) + I[(E - U)|psi|^2 - h2m |grad psi|^2]
// integrated as F = -closed-surface integral of T . n dS, plus an independent
// surface-delta check that integrates |psi|^2 and |dpsi/dn|^2 directly over
// the potential steps. Forces are in meV/Angstrom; newtons() converts.

namespace mw {

// Point samples of the total wavefunction, its gradient, and the potential.
// Implementations: GridSampler (solved fields) and test-side analytic fields.
struct FieldSampler {
  virtual ~FieldSampler() = default;
  virtual std::complex<double> psi(const std::array<double, 3>& p) const = 0;
  virtual std::array<std::complex<double>, 3> grad_psi(const std::array<double, 3>& p) const = 0;
  virtual double potential_mev(const std::array<double, 3>& p) const = 0;
};

// Samples a solved field: the scattered part is interpolated multilinearly
// (gradients from high-order node stencils), the incident part is added
// analytically at the sample point.
class GridSampler : public FieldSampler {
 public:
  GridSampler(const ComplexField& field, const PhysicalConfig& config,
              const CompositePotential& pot);
  std::complex<double> psi(const std::array<double, 3>& p) const override;
  std::array<std::complex<double>, 3> grad_psi(const std::array<double, 3>& p) const override;
  double potential_mev(const std::array<double, 3>& p) const override;
  double step_hint() const;  // max grid spacing, for one-sided surface stencils
  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
  CompositePotential pot_;
  BeamSpec beam_;
  double k_;
  std::vector<std::complex<double>> psi_s_;
  std::array<std::vector<std::complex<double>>, 3> g_;
};

enum class SurfaceKind { sphere, truncated_cap };
enum class CapMode { zero_boundary, generic };

struct IntegrationSurface {
  SurfaceKind kind = SurfaceKind::sphere;
  double radius = 9.0 * constants::bohr_radius_A + 0.55;
  std::array<double, 3> center{0, 0, 0};
  int n_theta = 64;
  int n_phi = 128;
  // truncated kind: the sphere is cut at x = cap_x and closed by a planar
  // disk there. In zero_boundary mode the disk lies on the wall's
  // zero-probability plane (psi = 0; only the one-sided normal-derivative
  // pressure survives); generic mode evaluates the full tensor on the disk.
  std::optional<double> cap_x;
  CapMode cap_mode = CapMode::zero_boundary;
  bool doubling_check = false;  // re-integrate at twice the node counts
  void validate(double a_A) const;
};

struct PatchForce {
  std::string name;
  double Fx = 0, Fy = 0, Fz = 0;
};

struct ForceVector {
  double Fx = 0, Fy = 0, Fz = 0;  // meV/Angstrom
  std::vector<PatchForce> patches;
  double quad_delta = 0;  // doubling-check spread (max component), meV/Angstrom
  std::array<double, 3> newtons() const;
};

// The tensor itself from point values; real-symmetric by construction.
std::array<std::array<double, 3>, 3> stress_tensor_from(
    std::complex<double> psi, const std::array<std::complex<double>, 3>& grad,
    double e_mev, double u_mev, double h2m);

// Tensor at a point of a solved field, gradients by centered differences on
// unmasked node stencils; throws when the stencil touches forbidden cells
// (use the truncated-surface cap handling there).
std::array<std::array<double, 3>, 3> stress_tensor_at(const ComplexField& field,
                                                      const std::array<double, 3>& point,
                                                      double e_mev, double u_at_point_mev,
                                                      double h2m);

// Closed-surface quadrature of -T.n over a sphere or truncated sphere+cap.
ForceVector integrate_force_sampler(const FieldSampler& s, const IntegrationSurface& surf,
                                    double e_mev, double h2m, double step_hint);
ForceVector integrate_force(const ComplexField& field, const IntegrationSurface& surf,
                            const PhysicalConfig& config, const CompositePotential& pot);

// Same surface integral written in its expanded zero-potential form
//   F = -h2m r^2 closed-integral[ 2 Re(grad psi (grad psi* . n)) + n (k0^2 |psi|^2 - |grad psi|^2) ] dOmega
// with k0^2 = E/h2m; full spheres in U = 0 regions only.
ForceVector integrate_force_kinetic(const FieldSampler& s, const IntegrationSurface& surf,
                                    double e_mev, double h2m);

// Independent check: F = +V0 int_{r=a} |psi|^2 n dS  -  h2m int_{r=b} |dpsi/dn|^2 n dS,
// the two potential steps integrated directly (one-sided derivative at the
// hard core using psi(b) = 0). Patches crossing forbidden cells are skipped.
ForceVector surface_delta_force(const ComplexField& field, const ScattererPotential& pot,
                                double h2m, int n_theta = 64, int n_phi = 128);

// 2D (x,z) variant: line integral around a circle; force per unit length.
ForceVector force_2d(const ComplexField& field, const PhysicalConfig& config,
                     const CompositePotential& pot, double radius, int n_nodes = 256);

}  // namespace mw
