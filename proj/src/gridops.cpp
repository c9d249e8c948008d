#include "mw/gridops.hpp"

#include <algorithm>
#include <cmath>

namespace mw {

namespace {
using cd = std::complex<double>;

int axis3_of(int rank, int axis) { return (rank == 2 && axis == 1) ? 2 : axis; }
}  // namespace

std::complex<double> interp_grid(const GridSpec& g, const std::vector<cd>& a,
                                 const std::array<double, 3>& p) {
  const int rank = g.rank;
  std::array<std::int64_t, 3> i0{0, 0, 0};
  std::array<double, 3> t{0, 0, 0};
  for (int ax = 0; ax < rank; ++ax) {
    const double f = (p[axis3_of(rank, ax)] - g.origin[ax]) / g.spacing[ax];
    std::int64_t i = std::int64_t(std::floor(f));
    i = std::clamp(i, std::int64_t(0), g.n[ax] - 2);
    i0[ax] = i;
    t[ax] = std::clamp(f - double(i), 0.0, 1.0);
  }
  cd out = 0;
  const int corners = 1 << rank;
  for (int c = 0; c < corners; ++c) {
    double w = 1;
    std::int64_t f = 0;
    for (int ax = 0; ax < rank; ++ax) {
      const int d = (c >> ax) & 1;
      w *= d ? t[ax] : 1.0 - t[ax];
      f += (i0[ax] + d) * g.stride(ax);
    }
    out += w * a[std::size_t(f)];
  }
  return out;
}

std::array<std::vector<std::complex<double>>, 3> gradient_arrays(
    const GridSpec& g, const std::vector<cd>& a, const std::vector<std::uint8_t>& mask) {
  const int rank = g.rank;
  const std::int64_t N = g.count();
  std::array<std::vector<cd>, 3> out;
  for (int ax = 0; ax < rank; ++ax) {
    out[ax].assign(std::size_t(N), cd(0));
    const std::int64_t sd = g.stride(ax);
    const double h = g.spacing[ax];
    std::array<std::int64_t, 3> id{0, 0, 0};
    for (std::int64_t f = 0; f < N; ++f) {
      std::int64_t rem = f;
      for (int q = 0; q < rank; ++q) {
        id[q] = rem / g.stride(q);
        rem %= g.stride(q);
      }
      if (mask[std::size_t(f)]) continue;
      const std::int64_t i = id[ax];
      auto ok = [&](std::int64_t o) {
        const std::int64_t q = i + o;
        return q >= 0 && q < g.n[ax] && !mask[std::size_t(f + o * sd)];
      };
      auto at = [&](std::int64_t o) { return a[std::size_t(f + o * sd)]; };
      cd v;
      if (ok(-2) && ok(-1) && ok(1) && ok(2))
        v = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
      else if (ok(-1) && ok(1))
        v = (at(1) - at(-1)) / (2.0 * h);
      else if (ok(1) && ok(2))
        v = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
      else if (ok(-1) && ok(-2))
        v = (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
      else if (ok(1))
        v = (at(1) - at(0)) / h;
      else if (ok(-1))
        v = (at(0) - at(-1)) / h;
      else
        v = 0;
      out[ax][std::size_t(f)] = v;
    }
  }
  return out;
}

}  // namespace mw
