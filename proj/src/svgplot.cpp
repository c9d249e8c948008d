#include "mw/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mw/errors.hpp"

namespace mw {

namespace {

constexpr double kW = 760, kH = 520;
constexpr double kLeft = 70, kRight = 24, kTop = 30, kBottom = 52;

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string g4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Range {
  double lo = 0, hi = 1;
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  static Range of(const std::vector<double>& vs) {
    Range r{vs.front(), vs.front()};
    for (double v : vs) r.include(v);
    return r;
  }
  // 5% margin on both sides; degenerate spans widened to stay plottable.
  void pad() {
    double span = hi - lo;
    if (span <= 0) span = std::max(1.0, std::abs(hi));
    lo -= 0.05 * span;
    hi += 0.05 * span;
  }
};

struct Axes {
  Range x, y;
  double px(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * (kW - kLeft - kRight); }
  double py(double v) const { return kH - kBottom - (v - y.lo) / (y.hi - y.lo) * (kH - kTop - kBottom); }
};

std::vector<double> ticks(const Range& r, int want = 6) {
  const double span = r.hi - r.lo;
  const double raw = span / want;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  std::vector<double> out;
  for (double t = std::ceil(r.lo / step) * step; t <= r.hi + 1e-12 * span; t += step)
    out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return out;
}

void draw_frame(std::ostringstream& os, const Axes& ax, const std::string& xlabel,
                const std::string& ylabel) {
  os << "<rect x='" << f2(kLeft) << "' y='" << f2(kTop) << "' width='"
     << f2(kW - kLeft - kRight) << "' height='" << f2(kH - kTop - kBottom)
     << "' fill='none' stroke='#404040' stroke-width='1'/>\n";
  for (double t : ticks(ax.x)) {
    const double p = ax.px(t);
    os << "<line x1='" << f2(p) << "' y1='" << f2(kH - kBottom) << "' x2='" << f2(p) << "' y2='"
       << f2(kH - kBottom + 5) << "' stroke='#404040'/>\n";
    os << "<text x='" << f2(p) << "' y='" << f2(kH - kBottom + 18)
       << "' font-size='11' text-anchor='middle'>" << g4(t) << "</text>\n";
  }
  for (double t : ticks(ax.y)) {
    const double p = ax.py(t);
    os << "<line x1='" << f2(kLeft - 5) << "' y1='" << f2(p) << "' x2='" << f2(kLeft) << "' y2='"
       << f2(p) << "' stroke='#404040'/>\n";
    os << "<text x='" << f2(kLeft - 8) << "' y='" << f2(p + 4)
       << "' font-size='11' text-anchor='end'>" << g4(t) << "</text>\n";
  }
  os << "<text x='" << f2((kLeft + kW - kRight) / 2) << "' y='" << f2(kH - 12)
     << "' font-size='13' text-anchor='middle'>" << xlabel << "</text>\n";
  os << "<text x='16' y='" << f2((kTop + kH - kBottom) / 2)
     << "' font-size='13' text-anchor='middle' transform='rotate(-90 16 "
     << f2((kTop + kH - kBottom) / 2) << ")'>" << ylabel << "</text>\n";
}

const char* kCompColor[3] = {"#d62728", "#2ca02c", "#1f77b4"};
const char* kCompName[3] = {"Fx", "Fy", "Fz"};
const char* kDash[4] = {"", "6,3", "2,3", "8,3,2,3"};

std::string render_force_vs_d(const std::vector<SweepRow>& rows) {
  std::vector<double> es;
  for (const auto& r : rows) es.push_back(r.e_mev);
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());

  Range rx{rows.front().d_A, rows.front().d_A};
  Range ry{0, 0};
  bool any_ok = false;
  for (const auto& r : rows) {
    rx.include(r.d_A);
    if (!r.ok()) continue;
    any_ok = true;
    ry.include(r.Fx);
    ry.include(r.Fy);
    ry.include(r.Fz);
  }
  if (!any_ok) throw std::invalid_argument("plot: no converged rows");
  rx.pad();
  ry.pad();
  Axes ax{rx, ry};

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
     << "' viewBox='0 0 " << kW << " " << kH << "'>\n";
  os << "<rect width='" << kW << "' height='" << kH << "' fill='white'/>\n";
  draw_frame(os, ax, "d (A)", "force (meV/A)");
  if (ry.lo < 0 && ry.hi > 0)
    os << "<line x1='" << f2(kLeft) << "' y1='" << f2(ax.py(0)) << "' x2='" << f2(kW - kRight)
       << "' y2='" << f2(ax.py(0)) << "' stroke='#b0b0b0' stroke-dasharray='3,3'/>\n";

  for (std::size_t ei = 0; ei < es.size(); ++ei) {
    std::vector<const SweepRow*> sel;
    for (const auto& r : rows)
      if (r.e_mev == es[ei]) sel.push_back(&r);
    std::sort(sel.begin(), sel.end(),
              [](const SweepRow* a, const SweepRow* b) { return a->d_A < b->d_A; });
    for (int c = 0; c < 3; ++c) {
      std::ostringstream pts;
      int n = 0;
      for (const SweepRow* r : sel) {
        if (!r->ok()) continue;
        const double v = c == 0 ? r->Fx : (c == 1 ? r->Fy : r->Fz);
        pts << (n++ ? " " : "") << f2(ax.px(r->d_A)) << "," << f2(ax.py(v));
      }
      if (n >= 2) {
        os << "<polyline points='" << pts.str() << "' fill='none' stroke='" << kCompColor[c]
           << "' stroke-width='1.6'";
        if (es.size() > 1 && !std::string(kDash[ei % 4]).empty())
          os << " stroke-dasharray='" << kDash[ei % 4] << "'";
        os << "/>\n";
      }
      for (const SweepRow* r : sel) {
        if (!r->ok()) continue;
        const double v = c == 0 ? r->Fx : (c == 1 ? r->Fy : r->Fz);
        os << "<circle cx='" << f2(ax.px(r->d_A)) << "' cy='" << f2(ax.py(v))
           << "' r='3' fill='" << kCompColor[c] << "'/>\n";
      }
    }
    for (const SweepRow* r : sel)
      if (!r->ok())
        os << "<circle cx='" << f2(ax.px(r->d_A)) << "' cy='"
           << f2(ax.py(std::clamp(0.0, ry.lo, ry.hi))) << "' r='4' fill='none' stroke='#808080'"
           << " stroke-width='1.5'/>\n";
  }

  double ly = kTop + 14;
  for (int c = 0; c < 3; ++c) {
    os << "<line x1='" << f2(kW - kRight - 120) << "' y1='" << f2(ly - 4) << "' x2='"
       << f2(kW - kRight - 96) << "' y2='" << f2(ly - 4) << "' stroke='" << kCompColor[c]
       << "' stroke-width='2'/>\n";
    os << "<text x='" << f2(kW - kRight - 90) << "' y='" << f2(ly) << "' font-size='12'>"
       << kCompName[c] << "</text>\n";
    ly += 16;
  }
  for (std::size_t ei = 0; ei < es.size() && es.size() > 1; ++ei) {
    os << "<text x='" << f2(kW - kRight - 120) << "' y='" << f2(ly) << "' font-size='11'>E="
       << g4(es[ei]) << " meV";
    if (!std::string(kDash[ei % 4]).empty()) os << " (dash " << kDash[ei % 4] << ")";
    os << "</text>\n";
    ly += 14;
  }
  os << "</svg>\n";
  return os.str();
}

// Cell shading for the signed map: white at zero through full color at the
// maximum magnitude; positive red, negative blue.
std::string cell_color(double v, double vmax) {
  if (vmax <= 0) return "#ffffff";
  const double t = std::min(1.0, std::abs(v) / vmax);
  const int ramp = int(std::lround(255 * (1.0 - t)));
  char buf[10];
  if (v >= 0)
    std::snprintf(buf, sizeof buf, "#ff%02x%02x", ramp, ramp);
  else
    std::snprintf(buf, sizeof buf, "#%02x%02xff", ramp, ramp);
  return buf;
}

std::string render_force_map(const std::vector<SweepRow>& rows) {
  std::vector<double> ds, es;
  for (const auto& r : rows) {
    ds.push_back(r.d_A);
    es.push_back(r.e_mev);
  }
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  const std::size_t nd = ds.size(), ne = es.size();

  auto di = [&](double d) {
    return std::size_t(std::lower_bound(ds.begin(), ds.end(), d) - ds.begin());
  };
  auto ej = [&](double e) {
    return std::size_t(std::lower_bound(es.begin(), es.end(), e) - es.begin());
  };
  std::vector<double> fx(nd * ne, 0.0);
  std::vector<char> okc(nd * ne, 0);
  double vmax = 0;
  bool any_ok = false;
  for (const auto& r : rows) {
    const std::size_t i = di(r.d_A), j = ej(r.e_mev);
    if (r.ok()) {
      fx[i * ne + j] = r.Fx;
      okc[i * ne + j] = 1;
      vmax = std::max(vmax, std::abs(r.Fx));
      any_ok = true;
    }
  }
  if (!any_ok) throw std::invalid_argument("plot: no converged rows");

  // Cell edges at midpoints between sample coordinates.
  auto edges = [](const std::vector<double>& c) {
    std::vector<double> e(c.size() + 1);
    if (c.size() == 1) {
      const double w = std::max(1.0, std::abs(c[0]) * 0.1);
      e[0] = c[0] - w;
      e[1] = c[0] + w;
      return e;
    }
    for (std::size_t i = 1; i < c.size(); ++i) e[i] = 0.5 * (c[i - 1] + c[i]);
    e[0] = c[0] - (e[1] - c[0]);
    e[c.size()] = c.back() + (c.back() - e[c.size() - 1]);
    return e;
  };
  const std::vector<double> dxe = edges(ds), eye = edges(es);
  Range rx{dxe.front(), dxe.back()}, ry{eye.front(), eye.back()};
  rx.pad();
  ry.pad();
  Axes ax{rx, ry};

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
     << "' viewBox='0 0 " << kW << " " << kH << "'>\n";
  os << "<rect width='" << kW << "' height='" << kH << "' fill='white'/>\n";

  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < ne; ++j) {
      const double x0 = ax.px(dxe[i]), x1 = ax.px(dxe[i + 1]);
      const double y0 = ax.py(eye[j + 1]), y1 = ax.py(eye[j]);
      const std::string col = okc[i * ne + j] ? cell_color(fx[i * ne + j], vmax) : "#d8d8d8";
      os << "<rect x='" << f2(x0) << "' y='" << f2(y0) << "' width='" << f2(x1 - x0)
         << "' height='" << f2(y1 - y0) << "' fill='" << col << "' stroke='#e8e8e8'"
         << " stroke-width='0.5'/>\n";
    }

  // Zero-crossing contour: marching squares on the sample lattice, skipping
  // squares with any unconverged corner.
  for (std::size_t i = 0; i + 1 < nd; ++i)
    for (std::size_t j = 0; j + 1 < ne; ++j) {
      const double f00 = fx[i * ne + j], f10 = fx[(i + 1) * ne + j];
      const double f01 = fx[i * ne + j + 1], f11 = fx[(i + 1) * ne + j + 1];
      if (!(okc[i * ne + j] && okc[(i + 1) * ne + j] && okc[i * ne + j + 1] &&
            okc[(i + 1) * ne + j + 1]))
        continue;
      auto cross = [](double a, double b) { return (a < 0) != (b < 0); };
      auto frac = [](double a, double b) { return a / (a - b); };
      std::vector<std::pair<double, double>> pts;  // (d, E) crossings
      if (cross(f00, f10))
        pts.push_back({ds[i] + frac(f00, f10) * (ds[i + 1] - ds[i]), es[j]});
      if (cross(f01, f11))
        pts.push_back({ds[i] + frac(f01, f11) * (ds[i + 1] - ds[i]), es[j + 1]});
      if (cross(f00, f01))
        pts.push_back({ds[i], es[j] + frac(f00, f01) * (es[j + 1] - es[j])});
      if (cross(f10, f11))
        pts.push_back({ds[i + 1], es[j] + frac(f10, f11) * (es[j + 1] - es[j])});
      auto seg = [&](const std::pair<double, double>& a, const std::pair<double, double>& b) {
        os << "<line x1='" << f2(ax.px(a.first)) << "' y1='" << f2(ax.py(a.second)) << "' x2='"
           << f2(ax.px(b.first)) << "' y2='" << f2(ax.py(b.second))
           << "' stroke='#101010' stroke-width='2'/>\n";
      };
      if (pts.size() == 2) {
        seg(pts[0], pts[1]);
      } else if (pts.size() == 4) {
        // Saddle cell: resolve by the sign of the center average. pts order
        // is bottom, top, left, right.
        const double c = 0.25 * (f00 + f10 + f01 + f11);
        if ((c < 0) == (f00 < 0)) {
          seg(pts[0], pts[3]);  // contour cuts off corners 10 and 01
          seg(pts[1], pts[2]);
        } else {
          seg(pts[0], pts[2]);
          seg(pts[1], pts[3]);
        }
      }
    }

  draw_frame(os, ax, "d (A)", "E (meV)");
  os << "<text x='" << f2(kLeft) << "' y='" << f2(kTop - 8) << "' font-size='12'>"
     << "Fx sign/magnitude (red +, blue -), max |Fx| = " << g4(vmax)
     << " meV/A; black: Fx = 0 contour</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::string render_plot(const std::vector<SweepRow>& rows, PlotKind kind) {
  if (rows.empty()) throw std::invalid_argument("plot: no rows");
  return kind == PlotKind::force_vs_d ? render_force_vs_d(rows) : render_force_map(rows);
}

void emit_plot(const std::vector<SweepRow>& rows, PlotKind kind, const std::string& path) {
  const std::string svg = render_plot(rows, kind);
  std::ofstream out(path);
  if (!out) throw io_error("emit_plot: cannot open " + path);
  out << svg;
  out.flush();
  if (!out) throw io_error("emit_plot: write failed on " + path);
}

}  // namespace mw
