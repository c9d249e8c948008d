// mwforce: matter-wave scattering force toolkit CLI.
//
// Subcommands: phase-shifts, amplitude, reflect1d, solve, force, sweep,
// estimate-lateral, energy-transfer, desorb-check, export-potential, plot.
// Exit codes: 0 ok, 1 usage/config error, 2 numerical failure, 3 I/O error.
//
// Configuration file (JSON, all keys optional; CLI flags override):
//   energy_meV, amplitude, beams ("single"|"counter"), d_angstrom, mass_amu
//   scatterer: { v0_meV, a_angstrom, b_angstrom }
//   wall:      { zpb_offset_angstrom, well_depth_meV, well_width_angstrom }
//   grid:      { rank, points_per_wavelength, spacing_angstrom,
//                half_extent_angstrom, lateral_factor, lateral_min_angstrom,
//                pml_cells, pml_ln_inv_r }
//   solver:    { tol, max_iter, fourth_order, subcell_boundaries, threads,
//                ilu_drop_tol, ilu_fill, shift_beta }
//   force:     { radius_angstrom, n_theta, n_phi }
//   sweep:     { d_values, e_values }

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mw/errors.hpp"
#include "mw/fieldsolver.hpp"
#include "mw/forces.hpp"
#include "mw/onedim.hpp"
#include "mw/partialwave.hpp"
#include "mw/potentials.hpp"
#include "mw/scenarios.hpp"
#include "mw/svgplot.hpp"
#include "mw/sweep.hpp"

using nlohmann::json;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw std::invalid_argument("config: unknown key \"" + it.key() + "\" in " + where);
  }
}

struct FileConfig {
  mw::SweepSpec spec;  // physics + numerics knobs shared by every subcommand
  double energy_mev = 1.0;
  std::optional<double> d_A;
  std::string beams = "counter";
};

mw::BeamMode beam_mode(const std::string& s) {
  if (s == "single") return mw::BeamMode::single;
  if (s == "counter") return mw::BeamMode::counter;
  throw std::invalid_argument("beams must be \"single\" or \"counter\", got \"" + s + "\"");
}

FileConfig load_config(const std::string& path) {
  FileConfig fc;
  if (path.empty()) return fc;
  std::ifstream in(path);
  if (!in) throw mw::io_error("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config parse error in " + path + ": " + e.what());
  }
  check_keys(j, {"energy_meV", "amplitude", "beams", "d_angstrom", "mass_amu", "scatterer",
                 "wall", "grid", "solver", "force", "sweep"},
             "top level");
  if (j.contains("energy_meV")) fc.energy_mev = j["energy_meV"].get<double>();
  if (j.contains("amplitude")) fc.spec.amplitude = j["amplitude"].get<double>();
  if (j.contains("beams")) fc.beams = j["beams"].get<std::string>();
  if (j.contains("d_angstrom") && !j["d_angstrom"].is_null())
    fc.d_A = j["d_angstrom"].get<double>();
  if (j.contains("mass_amu")) fc.spec.mass_amu = j["mass_amu"].get<double>();
  if (j.contains("scatterer")) {
    const json& s = j["scatterer"];
    check_keys(s, {"v0_meV", "a_angstrom", "b_angstrom"}, "scatterer");
    if (s.contains("v0_meV")) fc.spec.scatterer.v0_mev = s["v0_meV"].get<double>();
    if (s.contains("a_angstrom")) fc.spec.scatterer.a_A = s["a_angstrom"].get<double>();
    if (s.contains("b_angstrom")) fc.spec.scatterer.b_A = s["b_angstrom"].get<double>();
  }
  if (j.contains("wall")) {
    const json& w = j["wall"];
    check_keys(w, {"zpb_offset_angstrom", "well_depth_meV", "well_width_angstrom"}, "wall");
    if (w.contains("zpb_offset_angstrom"))
      fc.spec.wall_zpb_offset_A = w["zpb_offset_angstrom"].get<double>();
    if (w.contains("well_depth_meV")) fc.spec.wall_depth_mev = w["well_depth_meV"].get<double>();
    if (w.contains("well_width_angstrom"))
      fc.spec.wall_width_A = w["well_width_angstrom"].get<double>();
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    check_keys(g,
               {"rank", "points_per_wavelength", "spacing_angstrom", "half_extent_angstrom",
                "lateral_factor", "lateral_min_angstrom", "pml_cells", "pml_ln_inv_r"},
               "grid");
    if (g.contains("rank")) fc.spec.run.rank = g["rank"].get<int>();
    if (g.contains("points_per_wavelength"))
      fc.spec.run.points_per_wavelength = g["points_per_wavelength"].get<int>();
    if (g.contains("spacing_angstrom") && !g["spacing_angstrom"].is_null())
      fc.spec.run.spacing_A = g["spacing_angstrom"].get<double>();
    if (g.contains("half_extent_angstrom"))
      fc.spec.run.half_extent_A = g["half_extent_angstrom"].get<double>();
    if (g.contains("lateral_factor")) fc.spec.run.lateral_factor = g["lateral_factor"].get<double>();
    if (g.contains("lateral_min_angstrom"))
      fc.spec.run.lateral_min_A = g["lateral_min_angstrom"].get<double>();
    if (g.contains("pml_cells")) fc.spec.run.pml_cells = g["pml_cells"].get<int>();
    if (g.contains("pml_ln_inv_r")) fc.spec.run.pml_ln_inv_r = g["pml_ln_inv_r"].get<double>();
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s,
               {"tol", "max_iter", "fourth_order", "subcell_boundaries", "threads",
                "ilu_drop_tol", "ilu_fill", "shift_beta"},
               "solver");
    if (s.contains("tol")) fc.spec.run.solver.tol = s["tol"].get<double>();
    if (s.contains("max_iter")) fc.spec.run.solver.max_iter = s["max_iter"].get<int>();
    if (s.contains("fourth_order")) fc.spec.run.solver.fourth_order = s["fourth_order"].get<bool>();
    if (s.contains("subcell_boundaries"))
      fc.spec.run.solver.subcell_boundaries = s["subcell_boundaries"].get<bool>();
    if (s.contains("threads")) fc.spec.run.solver.threads = s["threads"].get<int>();
    if (s.contains("ilu_drop_tol")) fc.spec.run.solver.ilu_drop_tol = s["ilu_drop_tol"].get<double>();
    if (s.contains("ilu_fill")) fc.spec.run.solver.ilu_fill = s["ilu_fill"].get<int>();
    if (s.contains("shift_beta")) fc.spec.run.solver.shift_beta = s["shift_beta"].get<double>();
  }
  if (j.contains("force")) {
    const json& f = j["force"];
    check_keys(f, {"radius_angstrom", "n_theta", "n_phi"}, "force");
    if (f.contains("radius_angstrom")) fc.spec.run.force_radius_A = f["radius_angstrom"].get<double>();
    if (f.contains("n_theta")) fc.spec.run.force_n_theta = f["n_theta"].get<int>();
    if (f.contains("n_phi")) fc.spec.run.force_n_phi = f["n_phi"].get<int>();
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, {"d_values", "e_values"}, "sweep");
    if (s.contains("d_values")) fc.spec.d_values = s["d_values"].get<std::vector<double>>();
    if (s.contains("e_values")) fc.spec.e_values = s["e_values"].get<std::vector<double>>();
  }
  return fc;
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw mw::io_error("cannot open output file " + out_path);
  out << text;
  out.flush();
  if (!out) throw mw::io_error("write failed on " + out_path);
}

// Shared flags filled by CLI11 before each subcommand runs.
struct CommonArgs {
  std::string config_path;
  std::optional<double> energy;
  std::optional<double> d;
  std::optional<std::string> beams;
  bool no_wall = false;
  std::string cache_dir;
  bool no_timing = false;
  std::string out_path;

  FileConfig resolve() const {
    FileConfig fc = load_config(config_path);
    if (energy) fc.energy_mev = *energy;
    if (d) fc.d_A = *d;
    if (beams) fc.beams = *beams;
    if (no_wall) fc.spec.no_wall = true;
    if (!cache_dir.empty()) fc.spec.cache_dir = cache_dir;
    if (no_timing) fc.spec.no_timing = true;
    return fc;
  }
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_solver_flags = true) {
  cmd->add_option("--config", a.config_path, "JSON configuration file");
  cmd->add_option("--energy", a.energy, "incident energy in meV");
  if (with_solver_flags) {
    cmd->add_option("--d", a.d, "scatterer-to-surface distance in Angstrom");
    cmd->add_option("--beams", a.beams, "beam mode: single or counter");
    cmd->add_flag("--no-wall", a.no_wall, "drop the wall regardless of d");
    cmd->add_option("--cache", a.cache_dir, "field cache directory");
    cmd->add_flag("--no-timing", a.no_timing, "write zero timings for byte-stable output");
  }
  cmd->add_option("--out", a.out_path, "output file (default: stdout)");
}

int run_phase_shifts(const CommonArgs& args, int lmax) {
  const FileConfig fc = args.resolve();
  const mw::PhaseShiftSet ps =
      mw::phase_shifts(fc.spec.scatterer, fc.energy_mev, fc.spec.mass_amu, lmax);
  std::ostringstream os;
  os << "# E_meV=" << g17(fc.energy_mev) << " k_invA=" << g17(ps.k)
     << " kprime_invA=" << g17(ps.kprime) << " l_max=" << ps.l_max << "\n";
  os << "# sigma_tot_A2=" << g17(mw::total_cross_section(ps))
     << " sigma_tr_A2=" << g17(mw::transport_cross_section(ps)) << " Fz_single_pred_meV_A="
     << g17(mw::pushing_force_prediction(ps, fc.spec.mass_amu, fc.spec.amplitude)) << "\n";
  os << "l,delta_rad,re_a_l,im_a_l\n";
  for (int l = 0; l <= ps.l_max; ++l) {
    const std::complex<double> a = mw::partial_amplitude(ps, l);
    os << l << "," << g17(ps.deltas[std::size_t(l)]) << "," << g17(a.real()) << ","
       << g17(a.imag()) << "\n";
  }
  emit_text(os.str(), args.out_path);
  return 0;
}

int run_amplitude(const CommonArgs& args, std::vector<double> theta_deg, int lmax) {
  const FileConfig fc = args.resolve();
  const mw::PhaseShiftSet ps =
      mw::phase_shifts(fc.spec.scatterer, fc.energy_mev, fc.spec.mass_amu, lmax);
  if (theta_deg.empty()) theta_deg = {90.0};
  std::ostringstream os;
  const std::complex<double> f90 = mw::f_overall(ps, M_PI / 2);
  const std::complex<double> f90r = mw::f_overall_rotated(ps, M_PI / 2);
  os << "# E_meV=" << g17(fc.energy_mev) << " l_max=" << ps.l_max << " abs_f_overall_90="
     << g17(std::abs(f90)) << " abs_f_overall_rotated_90=" << g17(std::abs(f90r)) << "\n";
  os << "theta_deg,re_f_single,im_f_single,abs_f_single,re_f_overall,im_f_overall,abs_f_overall\n";
  for (double td : theta_deg) {
    const double th = td * M_PI / 180.0;
    const std::complex<double> fs = mw::f_single(ps, th);
    const std::complex<double> fo = mw::f_overall(ps, th);
    os << g17(td) << "," << g17(fs.real()) << "," << g17(fs.imag()) << "," << g17(std::abs(fs))
       << "," << g17(fo.real()) << "," << g17(fo.imag()) << "," << g17(std::abs(fo)) << "\n";
  }
  emit_text(os.str(), args.out_path);
  return 0;
}

int run_reflect1d(const CommonArgs& args, std::optional<double> barrier_height,
                  double barrier_width) {
  const FileConfig fc = args.resolve();
  const double d = fc.d_A.value_or(10.0);
  mw::Steps1D steps =
      barrier_height
          ? mw::make_barrier_steps(d, *barrier_height, barrier_width, fc.spec.wall_zpb_offset_A,
                                   fc.spec.wall_depth_mev, fc.spec.wall_width_A)
          : mw::make_wall_steps(d, fc.spec.wall_zpb_offset_A, fc.spec.wall_depth_mev,
                                fc.spec.wall_width_A);
  const mw::ReflectionResult r = mw::reflect(steps, fc.energy_mev, fc.spec.mass_amu);
  std::ostringstream os;
  os << "# E_meV=" << g17(fc.energy_mev) << " d_angstrom=" << g17(d) << " hard_wall="
     << (barrier_height ? 0 : 1) << "\n";
  os << "R,phase_rad,T\n";
  os << g17(r.R) << "," << g17(r.phase) << "," << g17(r.T) << "\n";
  emit_text(os.str(), args.out_path);
  return 0;
}

int run_solve(const CommonArgs& args, const std::string& field_out, bool check) {
  const FileConfig fc = args.resolve();
  const mw::PhysicalConfig cfg =
      mw::build_config(fc.energy_mev, fc.d_A, beam_mode(fc.beams), fc.spec);
  const mw::CompositePotential pot = mw::build_potential(fc.d_A, fc.spec);
  const mw::GridSpec grid = mw::build_grid(cfg, pot, fc.spec.run);
  mw::SolverOptions solver = fc.spec.run.solver;
  // Same policy as the sweep: wall systems need a tight algebraic tolerance
  // or conditioning error breaks the +-z symmetry of the solution.
  if (pot.wall && solver.tol > 1e-12) solver.tol = 1e-12;
  mw::SolveResult res = mw::cached_solve(cfg, pot, grid, solver, fc.spec.cache_dir);
  std::ostringstream os;
  os << "# dims=";
  for (int a = 0; a < grid.rank; ++a) os << (a ? "x" : "") << grid.n[a];
  os << " spacing_A=" << g17(grid.spacing[0]) << " nodes=" << grid.count() << "\n";
  os << "converged,iterations,relative_residual,seconds";
  if (check) os << ",pde_residual";
  os << "\n";
  os << int(res.info.converged) << "," << res.info.iterations << ","
     << g17(res.info.relative_residual) << "," << g17(fc.spec.no_timing ? 0.0 : res.info.seconds);
  if (check) os << "," << g17(mw::pde_residual(res.field, cfg, pot, solver));
  os << "\n";
  if (!field_out.empty()) mw::save_field(field_out, res.field);
  emit_text(os.str(), args.out_path);
  return 0;
}

int run_force(const CommonArgs& args, const std::string& field_in, const std::string& surface,
              const std::string& cap_mode, bool doubling, bool patches) {
  const FileConfig fc = args.resolve();
  const mw::PhysicalConfig cfg =
      mw::build_config(fc.energy_mev, fc.d_A, beam_mode(fc.beams), fc.spec);
  const mw::CompositePotential pot = mw::build_potential(fc.d_A, fc.spec);

  mw::ComplexField field;
  double residual = 0;
  if (!field_in.empty()) {
    field = mw::load_field(field_in);
  } else {
    const mw::GridSpec grid = mw::build_grid(cfg, pot, fc.spec.run);
    mw::SolverOptions solver = fc.spec.run.solver;
    // Same policy as the sweep: wall systems need a tight algebraic tolerance
    // or conditioning error breaks the +-z symmetry of the solution.
    if (pot.wall && solver.tol > 1e-12) solver.tol = 1e-12;
    mw::SolveResult res = mw::cached_solve(cfg, pot, grid, solver, fc.spec.cache_dir);
    field = std::move(res.field);
    residual = res.info.relative_residual;
  }

  mw::ForceVector f;
  std::string surf_name = "circle2d";
  if (field.grid.rank == 2) {
    f = mw::force_2d(field, cfg, pot, fc.spec.run.force_radius_A);
  } else {
    mw::IntegrationSurface surf;
    surf.radius = fc.spec.run.force_radius_A;
    surf.n_theta = fc.spec.run.force_n_theta;
    surf.n_phi = fc.spec.run.force_n_phi;
    surf.doubling_check = doubling;
    const double hmax = std::max(field.grid.spacing[0],
                                 std::max(field.grid.spacing[1], field.grid.spacing[2]));
    const bool overlap =
        pot.wall && pot.wall->zpb_x() > -(surf.radius + 3.0 * hmax);
    // auto: stress-tensor sphere in the clear, scatterer-edge integrals when a
    // closed sphere would also enclose wall material
    std::string chosen = surface == "auto" ? (overlap ? "delta" : "sphere") : surface;
    if (chosen == "delta") {
      f = mw::surface_delta_force(field, pot.scatterer, cfg.h2(), surf.n_theta, surf.n_phi);
    } else {
      if (chosen == "truncated") {
        if (!pot.wall) throw std::invalid_argument("truncated surface requires a wall");
        surf.kind = mw::SurfaceKind::truncated_cap;
        surf.cap_x = pot.wall->zpb_x();
        surf.cap_mode = cap_mode == "generic" ? mw::CapMode::generic : mw::CapMode::zero_boundary;
      }
      f = mw::integrate_force(field, surf, cfg, pot);
    }
    surf_name = chosen == "truncated" ? "truncated_cap" : chosen;
  }
  const std::array<double, 3> fn = f.newtons();
  std::ostringstream os;
  os << "# surface=" << surf_name << " radius_A=" << g17(fc.spec.run.force_radius_A)
     << " residual=" << g17(residual) << "\n";
  os << "Fx_meV_A,Fy_meV_A,Fz_meV_A,Fx_N,Fy_N,Fz_N,quad_delta_meV_A\n";
  os << g17(f.Fx) << "," << g17(f.Fy) << "," << g17(f.Fz) << "," << g17(fn[0]) << ","
     << g17(fn[1]) << "," << g17(fn[2]) << "," << g17(f.quad_delta) << "\n";
  if (patches && !f.patches.empty()) {
    os << "patch,Fx_meV_A,Fy_meV_A,Fz_meV_A\n";
    for (const auto& p : f.patches)
      os << p.name << "," << g17(p.Fx) << "," << g17(p.Fy) << "," << g17(p.Fz) << "\n";
  }
  emit_text(os.str(), args.out_path);
  return 0;
}

int run_sweep_cmd(const CommonArgs& args, const std::vector<double>& dvals,
                  const std::vector<double>& evals, int workers, bool scaled,
                  double scaled_base) {
  FileConfig fc = args.resolve();
  if (!dvals.empty()) fc.spec.d_values = dvals;
  if (!evals.empty()) fc.spec.e_values = evals;
  if (fc.spec.e_values.empty()) fc.spec.e_values = {fc.energy_mev};
  fc.spec.beams = beam_mode(fc.beams);
  fc.spec.workers = workers;
  fc.spec.scaled = scaled;
  fc.spec.scaled_base_e_mev = scaled_base;
  if (args.out_path.empty()) throw std::invalid_argument("sweep: --out CSV path is required");
  const std::vector<mw::SweepRow> rows = mw::run_sweep(fc.spec);
  mw::write_sweep_csv(args.out_path, rows);
  int ok = 0;
  for (const auto& r : rows) ok += r.ok();
  std::fprintf(stdout, "wrote %zu rows (%d converged) to %s\n", rows.size(), ok,
               args.out_path.c_str());
  return 0;
}

int run_estimate(const CommonArgs& args, std::optional<double> r_opt,
                 std::optional<double> f_half_opt, double epsilon, double spreading) {
  const FileConfig fc = args.resolve();
  double R = r_opt.value_or(0.99813);
  std::complex<double> f_half(f_half_opt.value_or(0.824716), 0.0);
  if (args.energy && !f_half_opt)
    f_half = mw::f_pi_half(fc.spec.scatterer, fc.energy_mev, fc.spec.mass_amu);
  const mw::SequentialEstimate est = mw::make_sequential_estimate(R, f_half, epsilon, spreading);
  std::ostringstream os;
  os << "# sequential scatter->reflect->rescatter estimate of F_lateral/F_z\n";
  os << "R,abs_f_half,epsilon_A,spreading,ratio\n";
  os << g17(est.R) << "," << g17(std::abs(est.f_half)) << "," << g17(est.epsilon_A) << ","
     << g17(est.spreading) << "," << g17(est.ratio) << "\n";
  emit_text(os.str(), args.out_path);
  return 0;
}

int run_energy_transfer(const CommonArgs& args, double m_inc, double m_sc) {
  const FileConfig fc = args.resolve();
  const double emax = mw::max_energy_transfer(fc.energy_mev, m_inc, m_sc);
  std::ostringstream os;
  os << "# hard-sphere kinematic bound E_max = 4 (m_inc/m_sc) E\n";
  os << "E_meV,m_inc_amu,m_sc_amu,E_max_meV\n";
  os << g17(fc.energy_mev) << "," << g17(m_inc) << "," << g17(m_sc) << "," << g17(emax) << "\n";
  emit_text(os.str(), args.out_path);
  return 0;
}

int run_desorb(const CommonArgs& args, double m_inc, double m_sc, const std::string& window,
               std::optional<double> lo, std::optional<double> hi, bool against_high) {
  const FileConfig fc = args.resolve();
  mw::EnergyWindow w = window == "he-cu" ? mw::he_cu_binding() : mw::xe_cu111_binding();
  if (lo) w.low_mev = *lo;
  if (hi) w.high_mev = *hi;
  const double emax = mw::max_energy_transfer(fc.energy_mev, m_inc, m_sc);
  const mw::TransferResult t = mw::desorption_verdict(emax, w, against_high);
  std::ostringstream os;
  os << "# desorbs iff E_max strictly exceeds the " << (against_high ? "high" : "low")
     << " edge of the binding window\n";
  os << "E_meV,E_max_meV,window_low_meV,window_high_meV,desorbs,margin_meV\n";
  os << g17(fc.energy_mev) << "," << g17(t.e_max_mev) << "," << g17(w.low_mev) << ","
     << g17(w.high_mev) << "," << int(t.desorbs) << "," << g17(t.margin_mev) << "\n";
  emit_text(os.str(), args.out_path);
  return 0;
}

int run_export_potential(const CommonArgs& args) {
  const FileConfig fc = args.resolve();
  if (args.out_path.empty())
    throw std::invalid_argument("export-potential: --out field path is required");
  const mw::PhysicalConfig cfg =
      mw::build_config(fc.energy_mev, fc.d_A, beam_mode(fc.beams), fc.spec);
  const mw::CompositePotential pot = mw::build_potential(fc.d_A, fc.spec);
  const mw::GridSpec grid = mw::build_grid(cfg, pot, fc.spec.run);
  mw::ComplexField f;
  f.grid = grid;
  const std::int64_t N = grid.count();
  f.values.resize(std::size_t(N));
  f.mask.resize(std::size_t(N));
  std::array<std::int64_t, 3> idx{0, 0, 0};
  for (std::int64_t fl = 0; fl < N; ++fl) {
    std::int64_t rem = fl;
    for (int a = grid.rank - 1; a >= 0; --a) {
      idx[std::size_t(a)] = rem % grid.n[a];
      rem /= grid.n[a];
    }
    std::array<double, 3> p{0, 0, 0};
    for (int a = 0; a < grid.rank; ++a) {
      const int a3 = (grid.rank == 2 && a == 1) ? 2 : a;
      p[std::size_t(a3)] = grid.coord(a, idx[std::size_t(a)]);
    }
    const std::optional<double> u = mw::sample(pot, p);
    f.mask[std::size_t(fl)] = u ? 0 : 1;
    f.values[std::size_t(fl)] = u ? std::complex<double>(*u, 0.0) : std::complex<double>(0, 0);
  }
  mw::save_field(args.out_path, f);
  std::fprintf(stdout, "wrote potential grid (%lld nodes) to %s\n",
               static_cast<long long>(N), args.out_path.c_str());
  return 0;
}

int run_plot(const std::string& csv_path, const std::string& kind, const std::string& out) {
  const std::vector<mw::SweepRow> rows = mw::read_sweep_csv(csv_path);
  mw::PlotKind k;
  if (kind == "force-vs-d")
    k = mw::PlotKind::force_vs_d;
  else if (kind == "force-map")
    k = mw::PlotKind::force_map;
  else
    throw std::invalid_argument("plot: kind must be force-vs-d or force-map");
  mw::emit_plot(rows, k, out);
  std::fprintf(stdout, "wrote %s plot of %zu rows to %s\n", kind.c_str(), rows.size(),
               out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matter-wave scattering forces: partial waves, field solves, sweeps"};
  app.require_subcommand(1);

  CommonArgs a_ps, a_amp, a_r1, a_solve, a_force, a_sweep, a_est, a_et, a_ds, a_exp;
  int lmax_ps = -1, lmax_amp = -1;
  std::vector<double> theta_deg;
  std::optional<double> barrier_height;
  double barrier_width = 2.0;
  std::string field_out, field_in;
  bool solve_check = false;
  std::string surface = "auto", cap_mode = "zero";
  bool doubling = false, patches = false;
  std::vector<double> sweep_d, sweep_e;
  int workers = 1;
  bool scaled = false;
  double scaled_base = 1.0;
  std::optional<double> est_r, est_f;
  double est_eps = 1.0, est_spread = 1.0;
  double m_inc = mw::constants::m_he_amu, m_sc = mw::constants::m_xe_amu;
  std::string window = "xe-cu111";
  std::optional<double> win_lo, win_hi;
  bool against_high = false;
  std::string plot_csv, plot_kind = "force-vs-d", plot_out;

  CLI::App* ps = app.add_subcommand("phase-shifts", "partial-wave phase shifts and cross sections");
  add_common(ps, a_ps, false);
  ps->add_option("--lmax", lmax_ps, "truncation l (default: ceil(ka)+8)");

  CLI::App* amp = app.add_subcommand("amplitude", "scattering amplitude f(theta)");
  add_common(amp, a_amp, false);
  amp->add_option("--theta-deg", theta_deg, "angles in degrees (default: 90)");
  amp->add_option("--lmax", lmax_amp, "truncation l (default: ceil(ka)+8)");

  CLI::App* r1 = app.add_subcommand("reflect1d", "1D wall reflection coefficient");
  add_common(r1, a_r1, false);
  r1->add_option("--d", a_r1.d, "wall distance in Angstrom (default 10)");
  r1->add_option("--barrier-height", barrier_height,
                 "finite barrier height in meV (default: hard wall)");
  r1->add_option("--barrier-width", barrier_width, "finite barrier width in Angstrom");

  CLI::App* sv = app.add_subcommand("solve", "solve the scattering field on a grid");
  add_common(sv, a_solve);
  sv->add_option("--field-out", field_out, "save the solved field (MWFLD1)");
  sv->add_flag("--check", solve_check, "also report the reassembled PDE residual");

  CLI::App* fo = app.add_subcommand("force", "stress-tensor force on the scatterer");
  add_common(fo, a_force);
  fo->add_option("--field", field_in, "integrate a previously saved field instead of solving");
  fo->add_option("--surface", surface,
                 "integration surface: auto, sphere, truncated, delta (potential edges)")
      ->check(CLI::IsMember({"auto", "sphere", "truncated", "delta"}));
  fo->add_option("--cap-mode", cap_mode, "truncated-cap treatment: zero or generic")
      ->check(CLI::IsMember({"zero", "generic"}));
  fo->add_flag("--doubling", doubling, "re-integrate at doubled quadrature order");
  fo->add_flag("--patches", patches, "print the per-patch breakdown");

  CLI::App* sw = app.add_subcommand("sweep", "force sweep over (d, E) with CSV output");
  add_common(sw, a_sweep);
  sw->add_option("--d-values", sweep_d, "wall distances in Angstrom");
  sw->add_option("--e-values", sweep_e, "energies in meV");
  sw->add_option("--workers", workers, "concurrent sweep points");
  sw->add_flag("--scaled", scaled, "solve every row at the base energy, geometry fixed");
  sw->add_option("--scaled-base", scaled_base, "base energy for --scaled in meV");

  CLI::App* es = app.add_subcommand("estimate-lateral", "sequential-event lateral force ratio");
  add_common(es, a_est, false);
  es->add_option("--r", est_r, "wall reflection magnitude (default 0.99813)");
  es->add_option("--f-half", est_f, "|f(pi/2)| in Angstrom (default 0.824716)");
  es->add_option("--epsilon", est_eps, "offset length in the spreading factor");
  es->add_option("--spreading", est_spread, "geometric spreading multiplier");

  CLI::App* et = app.add_subcommand("energy-transfer", "kinematic max energy transfer");
  add_common(et, a_et, false);
  et->add_option("--m-inc", m_inc, "incident mass in amu (default He)");
  et->add_option("--m-sc", m_sc, "scatterer mass in amu (default Xe)");

  CLI::App* ds = app.add_subcommand("desorb-check", "energy transfer vs binding window");
  add_common(ds, a_ds, false);
  ds->add_option("--m-inc", m_inc, "incident mass in amu (default He)");
  ds->add_option("--m-sc", m_sc, "scatterer mass in amu (default Xe)");
  ds->add_option("--window", window, "binding window: xe-cu111 or he-cu")
      ->check(CLI::IsMember({"xe-cu111", "he-cu"}));
  ds->add_option("--window-low", win_lo, "override window low edge, meV");
  ds->add_option("--window-high", win_hi, "override window high edge, meV");
  ds->add_flag("--against-high", against_high, "compare against the high edge");

  CLI::App* ex = app.add_subcommand("export-potential", "sample the potential onto a field file");
  add_common(ex, a_exp);

  CLI::App* pl = app.add_subcommand("plot", "render a sweep CSV as SVG");
  pl->add_option("--csv", plot_csv, "input sweep CSV")->required();
  pl->add_option("--kind", plot_kind, "force-vs-d or force-map");
  pl->add_option("--out", plot_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
    if (ps->parsed()) return run_phase_shifts(a_ps, lmax_ps);
    if (amp->parsed()) return run_amplitude(a_amp, theta_deg, lmax_amp);
    if (r1->parsed()) return run_reflect1d(a_r1, barrier_height, barrier_width);
    if (sv->parsed()) return run_solve(a_solve, field_out, solve_check);
    if (fo->parsed()) return run_force(a_force, field_in, surface, cap_mode, doubling, patches);
    if (sw->parsed()) return run_sweep_cmd(a_sweep, sweep_d, sweep_e, workers, scaled, scaled_base);
    if (es->parsed()) return run_estimate(a_est, est_r, est_f, est_eps, est_spread);
    if (et->parsed()) return run_energy_transfer(a_et, m_inc, m_sc);
    if (ds->parsed()) return run_desorb(a_ds, m_inc, m_sc, window, win_lo, win_hi, against_high);
    if (ex->parsed()) return run_export_potential(a_exp);
    if (pl->parsed()) return run_plot(plot_csv, plot_kind, plot_out);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const mw::io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const mw::numerical_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
