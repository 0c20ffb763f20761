#include "dkpair/gridfile.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dkpair/errors.hpp"

namespace dkpair {

namespace {

constexpr char kTextMagic[] = "DKGRID";
constexpr char kBinaryMagic[8] = {'D', 'K', 'G', 'R', 'I', 'D', 'B', '1'};

static_assert(std::endian::native == std::endian::little,
              "binary grid files are little-endian; add byte swapping for this target");

std::size_t expected(const ContractionGrid& g) {
  return static_cast<std::size_t>(g.nt) * g.n1 * g.n2 * g.m * g.m;
}

void check_dims(const ContractionGrid& g, const std::string& where) {
  if (g.nt < 5 || g.nt % 2 == 0)
    throw ValidationError(where + ": nt must be odd and at least 5");
  if (g.n1 < 4 || g.n2 < 4 || g.n1 % 2 || g.n2 % 2)
    throw ValidationError(where + ": momentum sizes must be even and at least 4");
  if (g.m < 1) throw ValidationError(where + ": matrix size must be positive");
}

}  // namespace

cplx& ContractionGrid::at(int t, int i1, int i2, int r, int c) {
  return data[((((static_cast<std::size_t>(t) * n1 + i1) * n2 + i2) * m + r) * m) + c];
}

cplx ContractionGrid::at(int t, int i1, int i2, int r, int c) const {
  return data[((((static_cast<std::size_t>(t) * n1 + i1) * n2 + i2) * m + r) * m) + c];
}

ContractionGrid read_contraction_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open contraction grid " + path);
  char head[8] = {};
  in.read(head, 8);
  ContractionGrid g;
  if (in && std::memcmp(head, kBinaryMagic, 8) == 0) {
    std::uint32_t dims[4];
    in.read(reinterpret_cast<char*>(dims), sizeof dims);
    if (!in) throw ValidationError(path + ": truncated header");
    g.nt = static_cast<int>(dims[0]);
    g.n1 = static_cast<int>(dims[1]);
    g.n2 = static_cast<int>(dims[2]);
    g.m = static_cast<int>(dims[3]);
    check_dims(g, path);
    g.data.resize(expected(g));
    in.read(reinterpret_cast<char*>(g.data.data()),
            static_cast<std::streamsize>(g.data.size() * sizeof(cplx)));
    if (!in) throw ValidationError(path + ": truncated sample data");
    return g;
  }
  in.clear();
  in.seekg(0);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != kTextMagic || version != 1) throw ValidationError(path + ": not a DKGRID file");
  in >> g.nt >> g.n1 >> g.n2 >> g.m;
  if (!in) throw ValidationError(path + ": malformed header");
  check_dims(g, path);
  g.data.resize(expected(g));
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    double re = 0, im = 0;
    if (!(in >> re >> im))
      throw ValidationError(path + ": expected " + std::to_string(g.data.size()) +
                            " samples, found " + std::to_string(i));
    g.data[i] = {re, im};
  }
  return g;
}

void write_contraction_grid(const std::string& path, const ContractionGrid& g, GridFileMode mode) {
  if (g.data.size() != expected(g)) throw ShapeError("contraction grid data size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  if (mode == GridFileMode::Binary) {
    out.write(kBinaryMagic, 8);
    const std::uint32_t dims[4] = {static_cast<std::uint32_t>(g.nt), static_cast<std::uint32_t>(g.n1),
                                   static_cast<std::uint32_t>(g.n2), static_cast<std::uint32_t>(g.m)};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    out.write(reinterpret_cast<const char*>(g.data.data()),
              static_cast<std::streamsize>(g.data.size() * sizeof(cplx)));
    return;
  }
  out << kTextMagic << " 1\n" << g.nt << ' ' << g.n1 << ' ' << g.n2 << ' ' << g.m << '\n';
  out.precision(17);
  for (const cplx& z : g.data) out << z.real() << ' ' << z.imag() << '\n';
}

ContractionGrid to_contraction_grid(const std::vector<AlgElement>& samples) {
  if (samples.empty()) throw ValidationError("no samples");
  const TorusGrid& tg = samples.front().grid();
  if (tg.dims() != 2) throw ShapeError("contraction grids live on a 2-torus");
  ContractionGrid g;
  g.nt = static_cast<int>(samples.size());
  g.n1 = tg.axis(0).size;
  g.n2 = tg.axis(1).size;
  g.m = samples.front().m();
  g.data.resize(expected(g));
  for (int t = 0; t < g.nt; ++t) {
    const AlgElement& s = samples[static_cast<std::size_t>(t)];
    if (!s.same_shape(samples.front()) || s.k() != 0) throw ShapeError("inconsistent samples");
    for (int i1 = 0; i1 < g.n1; ++i1)
      for (int i2 = 0; i2 < g.n2; ++i2) {
        const auto B = s.block(static_cast<std::size_t>(i1) * g.n2 + i2, 0);
        for (int r = 0; r < g.m; ++r)
          for (int c = 0; c < g.m; ++c) g.at(t, i1, i2, r, c) = B(r, c);
      }
  }
  return g;
}

std::vector<AlgElement> from_contraction_grid(const ContractionGrid& g) {
  if (g.data.size() != expected(g)) throw ShapeError("contraction grid data size mismatch");
  const TorusGrid tg({{g.n1, AxisKind::Momentum}, {g.n2, AxisKind::Momentum}});
  std::vector<AlgElement> out;
  for (int t = 0; t < g.nt; ++t) {
    AlgElement a(tg, g.m, 0);
    for (int i1 = 0; i1 < g.n1; ++i1)
      for (int i2 = 0; i2 < g.n2; ++i2) {
        auto B = a.block(static_cast<std::size_t>(i1) * g.n2 + i2, 0);
        for (int r = 0; r < g.m; ++r)
          for (int c = 0; c < g.m; ++c) B(r, c) = g.at(t, i1, i2, r, c);
      }
    out.push_back(std::move(a));
  }
  return out;
}

LoopSegment contraction_segment(const ContractionGrid& g) {
  return uniform_segment(0.5, 1.0, from_contraction_grid(g));
}

}  // namespace dkpair
