#include "mw/field.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "mw/errors.hpp"

namespace mw {

namespace {
constexpr char kMagic[6] = {'M', 'W', 'F', 'L', 'D', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void GridSpec::validate(double k_A) const {
  if (rank != 2 && rank != 3) throw std::domain_error("GridSpec: rank must be 2 or 3");
  for (int a = 0; a < rank; ++a) {
    if (n[a] < 3) throw std::domain_error("GridSpec: too few nodes");
    if (spacing[a] <= 0) throw std::domain_error("GridSpec: spacing must be positive");
  }
  if (pml_cells < 8) throw std::domain_error("GridSpec: absorbing layer needs >= 8 cells");
  if (k_A > 0) {
    const double lambda = 2.0 * M_PI / k_A;
    for (int a = 0; a < rank; ++a) {
      if (spacing[a] > lambda / 4.0)
        throw std::domain_error("GridSpec: spacing coarser than lambda/4");
      if (spacing[a] > lambda / 10.0)
        std::fprintf(stderr, "warning: grid spacing %.3g A exceeds lambda/10 = %.3g A\n",
                     spacing[a], lambda / 10.0);
    }
  }
}

GridSpec make_grid(int rank, double spacing, const std::array<double, 3>& lo,
                   const std::array<double, 3>& hi, int pml_cells, double pml_ln_inv_r) {
  GridSpec g;
  g.rank = rank;
  g.pml_cells = pml_cells;
  g.pml_ln_inv_r = pml_ln_inv_r;
  for (int a = 0; a < rank; ++a) {
    const std::int64_t nlo = static_cast<std::int64_t>(std::ceil(lo[a] / spacing - 1e-9)) + pml_cells;
    const std::int64_t nhi = static_cast<std::int64_t>(std::ceil(hi[a] / spacing - 1e-9)) + pml_cells;
    g.n[a] = nlo + nhi + 1;  // node at coordinate 0 included
    g.spacing[a] = spacing;
    g.origin[a] = -double(nlo) * spacing;
  }
  return g;
}

void save_field(const std::string& path, const ComplexField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("save_field: cannot open " + path);
  out.write(kMagic, 6);
  auto put = [&](const void* p, size_t nbytes) { out.write(static_cast<const char*>(p), nbytes); };
  std::uint32_t ver = kVersion;
  put(&ver, 4);
  std::uint8_t rank = static_cast<std::uint8_t>(f.grid.rank);
  put(&rank, 1);
  for (int a = 0; a < f.grid.rank; ++a) {
    std::uint64_t d = static_cast<std::uint64_t>(f.grid.n[a]);
    put(&d, 8);
  }
  for (int a = 0; a < 3; ++a) put(&f.grid.spacing[a], 8);
  for (int a = 0; a < 3; ++a) put(&f.grid.origin[a], 8);
  const std::int64_t N = f.grid.count();
  if (static_cast<std::int64_t>(f.values.size()) != N ||
      static_cast<std::int64_t>(f.mask.size()) != N)
    throw io_error("save_field: field size mismatch");
  for (std::int64_t i = 0; i < N; ++i) {
    const double re = f.values[i].real(), im = f.values[i].imag();
    put(&re, 8);
    put(&im, 8);
  }
  std::vector<std::uint8_t> bits((N + 7) / 8, 0);
  for (std::int64_t i = 0; i < N; ++i)
    if (f.mask[i]) bits[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
  put(bits.data(), bits.size());
  if (!out) throw io_error("save_field: write failed for " + path);
}

ComplexField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("load_field: cannot open " + path);
  auto get = [&](void* p, size_t nbytes) {
    in.read(static_cast<char*>(p), nbytes);
    if (in.gcount() != static_cast<std::streamsize>(nbytes))
      throw io_error("load_field: truncated file " + path);
  };
  char magic[6];
  get(magic, 6);
  if (std::memcmp(magic, kMagic, 6) != 0) throw io_error("load_field: bad magic in " + path);
  std::uint32_t ver;
  get(&ver, 4);
  if (ver != kVersion)
    throw io_error("load_field: unsupported version " + std::to_string(ver) + " (reader supports " +
                   std::to_string(kVersion) + ")");
  std::uint8_t rank;
  get(&rank, 1);
  if (rank != 2 && rank != 3) throw io_error("load_field: bad rank");
  ComplexField f;
  f.grid.rank = rank;
  for (int a = 0; a < rank; ++a) {
    std::uint64_t d;
    get(&d, 8);
    if (d == 0 || d > (1ull << 32)) throw io_error("load_field: bad dimension");
    f.grid.n[a] = static_cast<std::int64_t>(d);
  }
  for (int a = 0; a < 3; ++a) get(&f.grid.spacing[a], 8);
  for (int a = 0; a < 3; ++a) get(&f.grid.origin[a], 8);
  const std::int64_t N = f.grid.count();
  f.values.resize(N);
  for (std::int64_t i = 0; i < N; ++i) {
    double re, im;
    get(&re, 8);
    get(&im, 8);
    f.values[i] = {re, im};
  }
  std::vector<std::uint8_t> bits((N + 7) / 8);
  get(bits.data(), bits.size());
  f.mask.resize(N);
  for (std::int64_t i = 0; i < N; ++i)
    f.mask[i] = (bits[i >> 3] >> (i & 7)) & 1u;
  return f;
}

}  // namespace mw
