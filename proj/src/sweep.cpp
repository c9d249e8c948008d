#include "mw/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <sys/stat.h>
#include <thread>

#include "mw/errors.hpp"

namespace mw {

const char* const kSweepCsvHeader =
    "d_angstrom,E_meV,regime,Fx,Fy,Fz,Fx_over_Fz_single,residual,seconds,flags";

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void SweepSpec::validate() const {
  if (e_values.empty()) throw std::invalid_argument("sweep: no energies given");
  for (double e : e_values)
    if (!(e > 0)) throw std::invalid_argument("sweep: energies must be > 0");
  if (!no_wall && d_values.empty())
    throw std::invalid_argument("sweep: no d values; pass distances or disable the wall");
  for (double d : d_values)
    if (!(d > 0)) throw std::invalid_argument("sweep: d values must be > 0");
  if (!(amplitude > 0)) throw std::invalid_argument("sweep: amplitude must be > 0");
  if (scaled && !(scaled_base_e_mev > 0))
    throw std::invalid_argument("sweep: scaled base energy must be > 0");
  if (workers < 1) throw std::invalid_argument("sweep: workers must be >= 1");
  if (run.rank != 2 && run.rank != 3) throw std::invalid_argument("sweep: rank must be 2 or 3");
  if (run.points_per_wavelength < 4 && !run.spacing_A)
    throw std::invalid_argument("sweep: need at least 4 points per wavelength");
  scatterer.validate();
}

PhysicalConfig build_config(double e_mev, std::optional<double> d_A, BeamMode beams,
                            const SweepSpec& spec) {
  PhysicalConfig cfg;
  cfg.beam.energy_mev = e_mev;
  cfg.beam.amplitude = spec.amplitude;
  cfg.beam.directions =
      beams == BeamMode::counter ? std::vector<int>{+1, -1} : std::vector<int>{+1};
  cfg.mass_amu = spec.mass_amu;
  if (d_A && !spec.no_wall) {
    cfg.geometry.d_A = *d_A;
    cfg.geometry.wall_present = true;
  } else {
    cfg.geometry.wall_present = false;
    if (d_A) cfg.geometry.d_A = *d_A;
  }
  return cfg;
}

CompositePotential build_potential(std::optional<double> d_A, const SweepSpec& spec) {
  CompositePotential pot;
  pot.scatterer = spec.scatterer;
  if (d_A && !spec.no_wall)
    pot.wall = make_wall(*d_A, spec.wall_zpb_offset_A, spec.wall_depth_mev, spec.wall_width_A);
  return pot;
}

GridSpec build_grid(const PhysicalConfig& config, const CompositePotential& pot,
                    const RunParams& run) {
  const double k = config.k_A();
  if (!(k > 0)) throw std::invalid_argument("build_grid: zero wavenumber");
  const double lambda = 2.0 * M_PI / k;
  const double h = run.spacing_A ? *run.spacing_A : lambda / run.points_per_wavelength;
  std::array<double, 3> lo{run.half_extent_A, run.half_extent_A, run.half_extent_A};
  std::array<double, 3> hi = lo;
  if (pot.wall) {
    // Wall runs: trim the grid to start just below the zero-probability plane
    // and widen the open axes so the wall-induced sheet leaves through the
    // absorber instead of the corners.
    const double lat = std::max(run.lateral_factor * lambda + 0.2, run.lateral_min_A);
    lo[0] = -(pot.wall->zpb_x() - 2.0 * h);
    if (lo[0] < 0)
      throw std::invalid_argument("build_grid: zero-probability plane is on the far side");
    for (int a = 1; a < run.rank; ++a) {
      lo[a] = lat;
      hi[a] = lat;
    }
  }
  return make_grid(run.rank, h, lo, hi, run.pml_cells, run.pml_ln_inv_r);
}

std::string cache_key(const PhysicalConfig& config, const CompositePotential& pot,
                      const GridSpec& grid, const SolverOptions& opts) {
  std::ostringstream os;
  os << "E=" << g17(config.beam.energy_mev) << ";A=" << g17(config.beam.amplitude) << ";dir=";
  for (int d : config.beam.directions) os << (d > 0 ? '+' : '-');
  os << ";m=" << g17(config.mass_amu) << ";sc=" << g17(pot.scatterer.v0_mev) << ","
     << g17(pot.scatterer.a_A) << "," << g17(pot.scatterer.b_A);
  if (pot.wall) {
    os << ";wall=" << g17(pot.wall->surface_x) << "," << g17(pot.wall->zpb_offset);
    for (const auto& s : pot.wall->steps) os << "," << g17(s.x_to) << ":" << g17(s.value_mev);
  }
  os << ";grid=" << grid.rank;
  for (int a = 0; a < grid.rank; ++a)
    os << "," << grid.n[a] << "," << g17(grid.spacing[a]) << "," << g17(grid.origin[a]);
  os << ";pml=" << grid.pml_cells << "," << g17(grid.pml_ln_inv_r);
  os << ";solve=" << g17(opts.tol) << "," << opts.max_iter << "," << int(opts.fourth_order)
     << "," << int(opts.subcell_boundaries) << "," << g17(opts.ilu_drop_tol) << ","
     << opts.ilu_fill << "," << g17(opts.shift_beta);
  const std::string s = os.str();
  const std::uint64_t h = fnv1a64(s.data(), s.size());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SolveResult cached_solve(const PhysicalConfig& config, const CompositePotential& pot,
                         const GridSpec& grid, const SolverOptions& opts,
                         const std::string& cache_dir) {
  if (cache_dir.empty()) return solve_scattering(config, pot, grid, opts);
  const std::string key = cache_key(config, pot, grid, opts);
  const std::string fpath = cache_dir + "/" + key + ".mwfld";
  const std::string ipath = cache_dir + "/" + key + ".info";

  struct stat st{};
  if (stat(fpath.c_str(), &st) == 0) {
    try {
      SolveResult res;
      res.field = load_field(fpath);
      res.info.converged = true;
      if (std::FILE* f = std::fopen(ipath.c_str(), "r")) {
        int it = 0, conv = 1;
        double rr = 0, sec = 0;
        if (std::fscanf(f, "%d %lg %lg %d", &it, &rr, &sec, &conv) == 4) {
          res.info.iterations = it;
          res.info.relative_residual = rr;
          res.info.seconds = sec;
          res.info.converged = conv != 0;
        }
        std::fclose(f);
      }
      return res;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "warning: ignoring unreadable cached field %s: %s\n", fpath.c_str(),
                   e.what());
    }
  }

  SolveResult res = solve_scattering(config, pot, grid, opts);
  try {
    save_field(fpath, res.field);
    if (std::FILE* f = std::fopen(ipath.c_str(), "w")) {
      std::fprintf(f, "%d %.17g %.17g %d\n", res.info.iterations, res.info.relative_residual,
                   res.info.seconds, int(res.info.converged));
      std::fclose(f);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "warning: could not cache field in %s: %s\n", cache_dir.c_str(),
                 e.what());
  }
  return res;
}

namespace {

struct PointOutcome {
  ForceVector force;
  double residual = 0;
  bool truncated = false;
};

PointOutcome run_point(const SweepSpec& spec, std::optional<double> d_A, double e_solve) {
  PointOutcome out;
  const PhysicalConfig cfg = build_config(e_solve, d_A, spec.beams, spec);
  const CompositePotential pot = build_potential(d_A, spec);
  const GridSpec grid = build_grid(cfg, pot, spec.run);
  SolverOptions solver = spec.run.solver;
  // Beams grazing an extended hard boundary leave a near-degenerate mode in the
  // operator; solution error scales like cond * tol, so a loose tolerance lets
  // that mode leak in and break the +-z symmetry of the force.  Tighten it.
  if (pot.wall && solver.tol > 1e-12) solver.tol = 1e-12;
  SolveResult res = cached_solve(cfg, pot, grid, solver, spec.cache_dir);
  out.residual = res.info.relative_residual;

  if (spec.run.rank == 2) {
    out.force = force_2d(res.field, cfg, pot, spec.run.force_radius_A);
    return out;
  }
  IntegrationSurface surf;
  surf.radius = spec.run.force_radius_A;
  surf.n_theta = spec.run.force_n_theta;
  surf.n_phi = spec.run.force_n_phi;
  const double hmax = *std::max_element(grid.spacing.begin(), grid.spacing.begin() + grid.rank);
  if (pot.wall && pot.wall->zpb_x() > -(surf.radius + 3.0 * hmax)) {
    // Any closed surface here also encloses part of the wall plane and the
    // physisorption-step edge, so the stress integral mixes wall-plane flux
    // into the total.  Report the force attributed to the scatterer itself,
    // integrated over its own potential edges (clipped at the wall).
    out.truncated = true;
    out.force = surface_delta_force(res.field, pot.scatterer, cfg.h2(),
                                    spec.run.force_n_theta, spec.run.force_n_phi);
    return out;
  }
  out.force = integrate_force(res.field, surf, cfg, pot);
  return out;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();

  // Per-energy no-wall single-beam reference pushing force, shared by every
  // row at that solve energy; computed up front so worker threads only read.
  std::map<double, double> fz_single;
  std::vector<double> solve_energies;
  if (spec.scaled) {
    solve_energies.push_back(spec.scaled_base_e_mev);
  } else {
    solve_energies = spec.e_values;
    std::sort(solve_energies.begin(), solve_energies.end());
    solve_energies.erase(std::unique(solve_energies.begin(), solve_energies.end()),
                         solve_energies.end());
  }
  for (double e : solve_energies) {
    SweepSpec ref = spec;
    ref.no_wall = true;
    try {
      const PhysicalConfig cfg = build_config(e, std::nullopt, BeamMode::single, ref);
      const CompositePotential pot = build_potential(std::nullopt, ref);
      const GridSpec grid = build_grid(cfg, pot, ref.run);
      SolveResult res = cached_solve(cfg, pot, grid, ref.run.solver, ref.cache_dir);
      if (ref.run.rank == 2) {
        fz_single[e] = force_2d(res.field, cfg, pot, ref.run.force_radius_A).Fz;
      } else {
        IntegrationSurface surf;
        surf.radius = ref.run.force_radius_A;
        surf.n_theta = ref.run.force_n_theta;
        surf.n_phi = ref.run.force_n_phi;
        fz_single[e] = integrate_force(res.field, surf, cfg, pot).Fz;
      }
    } catch (const std::exception& ex) {
      std::fprintf(stderr, "warning: reference solve at E=%g meV failed: %s\n", e, ex.what());
    }
  }

  std::vector<std::optional<double>> ds;
  if (spec.d_values.empty())
    ds.push_back(std::nullopt);
  else
    for (double d : spec.d_values) ds.push_back(d);

  struct Task {
    std::optional<double> d;
    double e;
  };
  std::vector<Task> tasks;
  for (const auto& d : ds)
    for (double e : spec.e_values) tasks.push_back({d, e});

  std::vector<SweepRow> rows(tasks.size());
  std::mutex log_mutex;
  auto work = [&](std::size_t idx) {
    const Task& t = tasks[idx];
    const double e_solve = spec.scaled ? spec.scaled_base_e_mev : t.e;
    SweepRow row;
    row.d_A = t.d.value_or(0.0);
    row.e_mev = t.e;
    std::vector<std::string> flags;
    if (spec.scaled) flags.push_back("scaled");
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (t.d && !spec.no_wall) {
        const PhysicalConfig cfg = build_config(e_solve, t.d, spec.beams, spec);
        const CompositePotential pot = build_potential(t.d, spec);
        row.regime = regime_letter(classify_regime(cfg.geometry, pot));
      }
      PointOutcome out = run_point(spec, t.d, e_solve);
      if (out.truncated) flags.push_back("wall_overlap");
      row.Fx = out.force.Fx;
      row.Fy = out.force.Fy;
      row.Fz = out.force.Fz;
      row.residual = out.residual;
      auto ref = fz_single.find(e_solve);
      if (ref != fz_single.end() && ref->second != 0)
        row.fx_over_fz_single = row.Fx / ref->second;
      else
        flags.push_back("no_reference");
    } catch (const std::exception& ex) {
      flags.push_back("failed");
      row.Fx = row.Fy = row.Fz = 0;
      row.fx_over_fz_single = 0;
      row.residual = 0;
      std::lock_guard<std::mutex> lk(log_mutex);
      std::fprintf(stderr, "warning: sweep point d=%g E=%g failed: %s\n", row.d_A, row.e_mev,
                   ex.what());
    }
    row.seconds = spec.no_timing ? 0.0 : now_seconds(t0);
    std::string joined;
    for (const auto& f : flags) {
      if (!joined.empty()) joined += ';';
      joined += f;
    }
    row.flags = joined;
    rows[idx] = row;
  };

  if (spec.workers <= 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    const int nw = std::min<std::size_t>(spec.workers, tasks.size());
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) work(i);
      });
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kSweepCsvHeader << "\n";
  for (const auto& r : rows) {
    os << g17(r.d_A) << "," << g17(r.e_mev) << "," << r.regime << "," << g17(r.Fx) << ","
       << g17(r.Fy) << "," << g17(r.Fz) << "," << g17(r.fx_over_fz_single) << ","
       << g17(r.residual) << "," << g17(r.seconds) << "," << r.flags << "\n";
  }
  return os.str();
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw io_error("write_sweep_csv: cannot open " + path);
  out << format_sweep_csv(rows);
  out.flush();
  if (!out) throw io_error("write_sweep_csv: write failed on " + path);
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("read_sweep_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw io_error("read_sweep_csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepCsvHeader)
    throw io_error("read_sweep_csv: unexpected header in " + path + ": " + line);
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> parts;
    std::size_t pos = 0;
    for (int i = 0; i < 9; ++i) {
      std::size_t c = line.find(',', pos);
      if (c == std::string::npos) throw io_error("read_sweep_csv: short row in " + path);
      parts.push_back(line.substr(pos, c - pos));
      pos = c + 1;
    }
    parts.push_back(line.substr(pos));  // flags, may contain no commas by schema
    SweepRow r;
    r.d_A = std::stod(parts[0]);
    r.e_mev = std::stod(parts[1]);
    r.regime = parts[2].empty() ? '-' : parts[2][0];
    r.Fx = std::stod(parts[3]);
    r.Fy = std::stod(parts[4]);
    r.Fz = std::stod(parts[5]);
    r.fx_over_fz_single = std::stod(parts[6]);
    r.residual = std::stod(parts[7]);
    r.seconds = std::stod(parts[8]);
    r.flags = parts[9];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace mw
