#include "mw/fieldsolver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <vector>

#include "mw/errors.hpp"

namespace mw {

namespace {

using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd, Eigen::RowMajor>;

// Incomplete-LU preconditioner built from the complex-shifted operator
// A + i s I: the shift rotates the indefinite spectrum off the negative real
// axis, which stabilizes the factorization and clusters the preconditioned
// eigenvalues away from zero.
class ShiftedIluPreconditioner {
 public:
  using Scalar = cd;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  ShiftedIluPreconditioner() = default;
  void set_params(double shift, double drop_tol, int fill) {
    shift_ = shift;
    ilu_.setDroptol(drop_tol);
    ilu_.setFillfactor(fill);
  }
  Eigen::Index rows() const { return ilu_.rows(); }
  Eigen::Index cols() const { return ilu_.cols(); }
  template <typename MatType>
  ShiftedIluPreconditioner& analyzePattern(const MatType&) { return *this; }
  template <typename MatType>
  ShiftedIluPreconditioner& factorize(const MatType& A) {
    if (shift_ == 0.0) {
      ilu_.compute(A);
    } else {
      SpMat M = A;
      for (Eigen::Index i = 0; i < M.rows(); ++i) M.coeffRef(i, i) += cd(0.0, shift_);
      ilu_.compute(M);
    }
    return *this;
  }
  template <typename MatType>
  ShiftedIluPreconditioner& compute(const MatType& A) { return factorize(A); }
  template <typename Rhs>
  const Eigen::Solve<Eigen::IncompleteLUT<cd>, Rhs> solve(const Rhs& b) const {
    return ilu_.solve(b);
  }
  Eigen::ComputationInfo info() { return ilu_.info(); }

 private:
  Eigen::IncompleteLUT<cd> ilu_;
  double shift_ = 0;
};

// Grid axes map to spatial axes (x,y,z) in 3D and (x,z) in 2D.
int axis3_of(int rank, int axis) { return (rank == 2 && axis == 1) ? 2 : axis; }

struct AxisStretch {
  std::vector<double> sig_node;  // absorber profile at node index
  std::vector<cd> s_node;        // 1 + i sigma/k at node
  std::vector<cd> s_half;        // 1 + i sigma/k at node + 1/2
};

AxisStretch make_axis_stretch(std::int64_t n, int pml, double h, double ln_inv_r, double k) {
  const double length = pml * h;
  const double smax = 4.0 * ln_inv_r / (2.0 * length);
  auto sigma = [&](double idx) {
    double t = std::min(idx, double(n - 1) - idx);  // distance to nearest edge
    double d = pml - t;                             // depth into the absorber
    return d > 0 ? smax * std::pow(d / pml, 3) : 0.0;
  };
  AxisStretch st;
  st.sig_node.resize(std::size_t(n));
  st.s_node.resize(std::size_t(n));
  st.s_half.resize(std::size_t(n));
  for (std::int64_t i = 0; i < n; ++i) {
    st.sig_node[std::size_t(i)] = sigma(double(i));
    st.s_node[std::size_t(i)] = cd(1.0, sigma(double(i)) / k);
    st.s_half[std::size_t(i)] = cd(1.0, sigma(double(i) + 0.5) / k);
  }
  return st;
}

// Fractional distance (in cells) from p to the nearest analytic hard surface
// along +/-axis, searched over the scatterer core sphere and the wall plane.
// Falls back to half a cell when the masked neighbor has no analytic surface
// on the segment (staircase corner cases).
double boundary_frac(const CompositePotential& pot, const std::array<double, 3>& p,
                     int ax3, double sgn, double h) {
  double best = std::numeric_limits<double>::infinity();
  const double b = pot.scatterer.b_A;
  const double pe = p[ax3] * sgn * h;
  const double c2 = h * h;
  const double c1 = 2.0 * pe;
  const double c0 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - b * b;
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc >= 0) {
    const double sq = std::sqrt(disc);
    const double r1 = (-c1 - sq) / (2.0 * c2);
    const double r2 = (-c1 + sq) / (2.0 * c2);
    for (double t : {std::min(r1, r2), std::max(r1, r2)}) {
      if (t > 1e-9 && t <= 1.0 + 1e-12) {
        best = std::min(best, std::min(t, 1.0));
        break;
      }
    }
  }
  if (pot.wall && ax3 == 0) {
    double t = (pot.wall->zpb_x() - p[0]) / (sgn * h);
    if (t > 1e-9 && t <= 1.0 + 1e-12) best = std::min(best, std::min(t, 1.0));
  }
  return std::isfinite(best) ? best : 0.5;
}

struct Discretization {
  SpMat A;
  Eigen::VectorXcd rhs;
  std::vector<std::uint8_t> mask;    // forbidden node
  std::vector<std::uint8_t> in_pml;  // node lies in the absorber on some axis
  std::vector<cd> inc;               // incident field at nodes
};

Discretization assemble(const PhysicalConfig& config, const CompositePotential& pot,
                        const GridSpec& grid, const SolverOptions& opts) {
  const int rank = grid.rank;
  const double k = config.k_A();
  const double h2m = config.h2();
  const std::int64_t N = grid.count();
  const int pml = grid.pml_cells;

  std::array<std::int64_t, 3> n{1, 1, 1};
  std::array<double, 3> h{1, 1, 1};
  std::array<std::int64_t, 3> stride{0, 0, 0};
  for (int ax = 0; ax < rank; ++ax) {
    n[ax] = grid.n[ax];
    h[ax] = grid.spacing[ax];
    stride[ax] = grid.stride(ax);
  }
  std::array<double, 3> h3{0, 0, 0};
  for (int ax = 0; ax < rank; ++ax) h3[axis3_of(rank, ax)] = h[ax];

  std::vector<AxisStretch> st;
  st.reserve(std::size_t(rank));
  for (int ax = 0; ax < rank; ++ax)
    st.push_back(make_axis_stretch(n[ax], pml, h[ax], grid.pml_ln_inv_r, k));

  auto decode = [&](std::int64_t f, std::array<std::int64_t, 3>& id) {
    std::int64_t rem = f;
    for (int ax = 0; ax < rank; ++ax) {
      id[ax] = rem / stride[ax];
      rem %= stride[ax];
    }
  };
  auto point_of = [&](const std::array<std::int64_t, 3>& id) {
    std::array<double, 3> p{0, 0, 0};
    for (int ax = 0; ax < rank; ++ax) p[axis3_of(rank, ax)] = grid.coord(ax, id[ax]);
    return p;
  };

  Discretization D;
  D.mask.assign(std::size_t(N), 0);
  D.in_pml.assign(std::size_t(N), 0);
  D.inc.assign(std::size_t(N), cd(0));
  std::vector<double> V(std::size_t(N), 0.0);  // U / h2m, 1/Angstrom^2
  std::vector<cd> diag(std::size_t(N), cd(0));

  std::array<std::int64_t, 3> id{0, 0, 0};
  for (std::int64_t f = 0; f < N; ++f) {
    decode(f, id);
    const auto p = point_of(id);
    bool forb;
    double u = 0;
    if (opts.sample_override) {
      auto s = opts.sample_override(p);
      forb = !s.has_value();
      if (!forb) u = *s;
    } else if (opts.subcell_boundaries) {
      auto s = cell_average(pot, p, h3);
      forb = !s.has_value();
      if (!forb) u = *s;
    } else {
      auto s = sample(pot, p);
      forb = !s.has_value();
      if (!forb) u = *s;
    }
    D.mask[std::size_t(f)] = forb ? 1 : 0;
    V[std::size_t(f)] = u / h2m;
    D.inc[std::size_t(f)] = incident_field(config.beam, k, p);
    bool pm = false;
    for (int ax = 0; ax < rank; ++ax)
      pm = pm || st[std::size_t(ax)].sig_node[std::size_t(id[ax])] > 0;
    D.in_pml[std::size_t(f)] = pm ? 1 : 0;
  }

  // Dilate the mask by two cells along every axis: high-order rows must not
  // reach a forbidden node.
  std::vector<std::uint8_t> near_mask(D.mask);
  for (std::int64_t f = 0; f < N; ++f) {
    if (near_mask[std::size_t(f)]) continue;
    decode(f, id);
    bool near = false;
    for (int ax = 0; ax < rank && !near; ++ax)
      for (std::int64_t o : {std::int64_t(-2), std::int64_t(-1), std::int64_t(1), std::int64_t(2)}) {
        std::int64_t q = id[ax] + o;
        if (q >= 0 && q < n[ax] && D.mask[std::size_t(f + o * stride[ax])]) {
          near = true;
          break;
        }
      }
    if (near) near_mask[std::size_t(f)] = 1;
  }

  std::vector<Eigen::Triplet<cd>> trips;
  trips.reserve(std::size_t(N) * std::size_t(1 + 4 * rank));
  D.rhs = Eigen::VectorXcd::Zero(N);
  const double kk = k * k;

  for (std::int64_t f = 0; f < N; ++f) {
    if (D.mask[std::size_t(f)]) {
      trips.emplace_back(int(f), int(f), cd(1));
      D.rhs[f] = -D.inc[std::size_t(f)];
      continue;
    }
    decode(f, id);
    const auto p = point_of(id);
    diag[std::size_t(f)] = cd(kk - V[std::size_t(f)], 0);
    D.rhs[f] = V[std::size_t(f)] * D.inc[std::size_t(f)];

    bool o4 = opts.fourth_order && !near_mask[std::size_t(f)];
    for (int ax = 0; ax < rank && o4; ++ax)
      o4 = id[ax] >= pml + 2 && id[ax] <= n[ax] - pml - 3;

    for (int ax = 0; ax < rank; ++ax) {
      const double hh = h[ax];
      const std::int64_t i = id[ax];
      const std::int64_t sd = stride[ax];
      if (o4) {
        const double b1 = 16.0 / (12.0 * hh * hh);
        const double b2 = -1.0 / (12.0 * hh * hh);
        trips.emplace_back(int(f), int(f + sd), cd(b1));
        trips.emplace_back(int(f), int(f - sd), cd(b1));
        trips.emplace_back(int(f), int(f + 2 * sd), cd(b2));
        trips.emplace_back(int(f), int(f - 2 * sd), cd(b2));
        diag[std::size_t(f)] += -30.0 / (12.0 * hh * hh);
        continue;
      }
      const bool has_p = i < n[ax] - 1;
      const bool has_m = i > 0;
      const bool masked_p = has_p && D.mask[std::size_t(f + sd)];
      const bool masked_m = has_m && D.mask[std::size_t(f - sd)];
      if (!masked_p && !masked_m) {
        const auto& s = st[std::size_t(ax)];
        if (has_p) {
          cd cp = 1.0 / (hh * hh * s.s_node[std::size_t(i)] * s.s_half[std::size_t(i)]);
          trips.emplace_back(int(f), int(f + sd), cp);
          diag[std::size_t(f)] -= cp;
        }
        if (has_m) {
          cd cm = 1.0 / (hh * hh * s.s_node[std::size_t(i)] * s.s_half[std::size_t(i - 1)]);
          trips.emplace_back(int(f), int(f - sd), cm);
          diag[std::size_t(f)] -= cm;
        }
        continue;
      }
      // Boundary-adjacent row: unequal-leg difference with Dirichlet data
      // -psi_inc at the analytic surface intersection.
      const int ax3 = axis3_of(rank, ax);
      double ap = 1.0, am = 1.0;
      if (masked_p && opts.subcell_boundaries && !opts.sample_override)
        ap = std::max(boundary_frac(pot, p, ax3, +1.0, hh), 0.05);
      else if (masked_p)
        ap = opts.sample_override ? 0.5 : 1.0;
      if (masked_m && opts.subcell_boundaries && !opts.sample_override)
        am = std::max(boundary_frac(pot, p, ax3, -1.0, hh), 0.05);
      else if (masked_m)
        am = opts.sample_override ? 0.5 : 1.0;
      const double c_p = 2.0 / (ap * (ap + am) * hh * hh);
      const double c_m = 2.0 / (am * (ap + am) * hh * hh);
      diag[std::size_t(f)] += -2.0 / (ap * am * hh * hh);
      if (masked_p) {
        auto pb = p;
        pb[ax3] += ap * hh;
        D.rhs[f] -= c_p * (-incident_field(config.beam, k, pb));
      } else if (has_p) {
        trips.emplace_back(int(f), int(f + sd), cd(c_p));
      }
      if (masked_m) {
        auto pb = p;
        pb[ax3] -= am * hh;
        D.rhs[f] -= c_m * (-incident_field(config.beam, k, pb));
      } else if (has_m) {
        trips.emplace_back(int(f), int(f - sd), cd(c_m));
      }
    }
    trips.emplace_back(int(f), int(f), diag[std::size_t(f)]);
  }

  D.A.resize(Eigen::Index(N), Eigen::Index(N));
  D.A.setFromTriplets(trips.begin(), trips.end());
  return D;
}

void check_coverage(const PhysicalConfig& config, const CompositePotential& pot,
                    const GridSpec& grid) {
  const int rank = grid.rank;
  const int pml = grid.pml_cells;
  const double need = pot.scatterer.a_A + 2.0;
  for (int ax = 0; ax < rank; ++ax) {
    const double lo = grid.coord(ax, pml);
    const double hi = grid.coord(ax, grid.n[ax] - 1 - pml);
    double need_lo = -need;
    if (pot.wall && axis3_of(rank, ax) == 0)
      need_lo = pot.wall->zpb_x() - 2.0 * grid.spacing[ax];
    if (lo > need_lo + 1e-9 || hi < need - 1e-9) {
      std::ostringstream os;
      os << "grid interior does not cover the scatterer with 2 A margin on axis " << ax
         << ": [" << lo << ", " << hi << "] vs required [" << need_lo << ", " << need << "]";
      throw std::invalid_argument(os.str());
    }
  }
  (void)config;
}

}  // namespace

std::complex<double> incident_field(const BeamSpec& beam, double k_A,
                                    const std::array<double, 3>& p) {
  cd v = 0;
  for (int d : beam.directions)
    v += beam.amplitude * std::exp(cd(0.0, d * k_A * p[2]));
  return v;
}

std::array<std::complex<double>, 3> incident_gradient(const BeamSpec& beam, double k_A,
                                                      const std::array<double, 3>& p) {
  std::array<cd, 3> g{cd(0), cd(0), cd(0)};
  for (int d : beam.directions)
    g[2] += cd(0.0, d * k_A) * beam.amplitude * std::exp(cd(0.0, d * k_A * p[2]));
  return g;
}

SolveResult solve_scattering(const PhysicalConfig& config, const CompositePotential& pot,
                             const GridSpec& grid, const SolverOptions& opts) {
  config.validate();
  pot.scatterer.validate();
  if (pot.wall) pot.wall->validate();
  if (bool(pot.wall) != config.geometry.wall_present)
    throw std::invalid_argument("wall presence disagrees between potential and geometry");
  const double k = config.k_A();
  grid.validate(k);
  if (!opts.sample_override) check_coverage(config, pot, grid);
  if (opts.threads > 0) Eigen::setNbThreads(opts.threads);

  const auto t0 = std::chrono::steady_clock::now();
  Discretization D = assemble(config, pot, grid, opts);

  Eigen::VectorXcd x;
  SolveInfo info;
  const double bn = D.rhs.norm();
  auto record = [&](int iters, bool reported_ok) {
    const double relres = bn > 0 ? (D.A * x - D.rhs).norm() / bn : 0.0;
    info.iterations = iters;
    info.relative_residual = relres;
    info.converged = std::isfinite(relres) && (reported_ok || relres <= opts.tol);
  };
  auto attempt_jacobi = [&] {
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<cd>> solver;
    solver.setTolerance(opts.tol);
    solver.setMaxIterations(opts.max_iter);
    solver.compute(D.A);
    x = solver.solve(D.rhs);
    record(int(solver.iterations()), solver.info() == Eigen::Success);
  };
  auto attempt_ilu = [&] {
    Eigen::BiCGSTAB<SpMat, ShiftedIluPreconditioner> solver;
    solver.preconditioner().set_params(opts.shift_beta * k * k, opts.ilu_drop_tol,
                                       opts.ilu_fill);
    solver.setTolerance(opts.tol);
    solver.setMaxIterations(opts.max_iter);
    solver.compute(D.A);
    x = solver.solve(D.rhs);
    record(int(solver.iterations()), solver.info() == Eigen::Success);
  };
  const bool prefer_ilu = bool(pot.wall) && !opts.sample_override;
  if (prefer_ilu) {
    attempt_ilu();
  } else {
    attempt_jacobi();
    if (!info.converged) attempt_ilu();
  }
  info.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!info.converged) {
    std::ostringstream os;
    os << "scattering solve did not converge: " << info.iterations
       << " iterations, relative residual " << info.relative_residual << " (tolerance "
       << opts.tol << ")";
    throw numerical_error(os.str());
  }

  ComplexField out;
  out.grid = grid;
  const std::int64_t N = grid.count();
  out.values.resize(std::size_t(N));
  out.mask.resize(std::size_t(N));
  for (std::int64_t f = 0; f < N; ++f) {
    out.mask[std::size_t(f)] = D.mask[std::size_t(f)];
    out.values[std::size_t(f)] =
        D.mask[std::size_t(f)] ? cd(0) : cd(x[f] + D.inc[std::size_t(f)]);
  }
  return SolveResult{std::move(out), info};
}

double pde_residual(const ComplexField& field, const PhysicalConfig& config,
                    const CompositePotential& pot, const SolverOptions& opts) {
  const GridSpec& grid = field.grid;
  const std::int64_t N = grid.count();
  if (std::int64_t(field.values.size()) != N)
    throw std::invalid_argument("field size disagrees with its grid");
  Discretization D = assemble(config, pot, grid, opts);

  Eigen::VectorXcd psi_s(N);
  for (std::int64_t f = 0; f < N; ++f)
    psi_s[f] = field.values[std::size_t(f)] - D.inc[std::size_t(f)];
  Eigen::VectorXcd r = D.A * psi_s - D.rhs;

  const double kk = config.k_A() * config.k_A();
  double num = 0, den = 0;
  for (std::int64_t f = 0; f < N; ++f) {
    if (D.mask[std::size_t(f)] || D.in_pml[std::size_t(f)]) continue;
    num += std::norm(r[f]);
    den += std::norm(field.values[std::size_t(f)]);
  }
  num = std::sqrt(num);
  den = kk * std::sqrt(den);
  return den > 0 ? num / den : num;
}

}  // namespace mw
