#include "cli/config.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dkpair/errors.hpp"

namespace dkpair::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

cplx parse_complex(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  fail(where, "expected a number or an [re, im] pair");
}

Mat parse_matrix(const json& v, int m, const std::string& where) {
  if (!v.is_array()) fail(where, "matrix must be an array");
  Mat M(m, m);
  const auto um = static_cast<std::size_t>(m);
  const bool nested = v.size() == um && v[0].is_array() && v[0].size() == um;
  if (nested) {
    for (int r = 0; r < m; ++r) {
      const json& row = v[static_cast<std::size_t>(r)];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(m))
        fail(where + "[" + std::to_string(r) + "]", "expected " + std::to_string(m) + " entries");
      for (int c = 0; c < m; ++c)
        M(r, c) = parse_complex(row[static_cast<std::size_t>(c)],
                                where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return M;
  }
  if (v.size() != static_cast<std::size_t>(m) * m)
    fail(where, "expected " + std::to_string(m * m) + " row-major entries");
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      M(r, c) = parse_complex(v[static_cast<std::size_t>(r * m + c)],
                              where + "[" + std::to_string(r * m + c) + "]");
  return M;
}

TightBindingModel parse_hoppings(const json& v, int d, int m, const std::string& where) {
  if (!v.is_array()) fail(where, "hopping list must be an array");
  TightBindingModel model(d, m, {});
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const json& t = v[i];
    std::vector<int> off;
    if (t.contains("offset")) {
      const json& o = t.at("offset");
      if (!o.is_array()) fail(w + ".offset", "expected an integer array");
      for (const auto& x : o) {
        if (!x.is_number_integer()) fail(w + ".offset", "entries must be integers");
        off.push_back(x.get<int>());
      }
    } else {
      off.assign(static_cast<std::size_t>(d), 0);
    }
    if (static_cast<int>(off.size()) != d)
      fail(w + ".offset", "has " + std::to_string(off.size()) + " entries, dimension is " + std::to_string(d));
    model.add({off, parse_matrix(need(t, "matrix", w), m, w + ".matrix")});
  }
  return model;
}

void enforce_hermitian(TightBindingModel& model, const std::string& where,
                       std::vector<std::string>& warnings) {
  const double v = model.hermiticity_violation();
  if (v > 1e-12)
    fail(where, "hoppings violate M_{-n} = M_n^* by " + std::to_string(v));
  if (v > 0.0) {
    model.symmetrize();
    std::ostringstream os;
    os << where << ": symmetrized hoppings (violation " << std::scientific << v << ")";
    warnings.push_back(os.str());
  }
}

RealStructureSpec parse_real_structure(const json& v, const std::string& where) {
  RealStructureSpec rs;
  const std::string fiber = v.value("fiber", std::string("conjugation"));
  if (fiber == "conjugation")
    rs.fiber = FiberReal::Conjugation;
  else if (fiber == "quaternionic")
    rs.fiber = FiberReal::Quaternionic;
  else
    fail(where + ".fiber", "must be 'conjugation' or 'quaternionic'");
  rs.momentum_flip = v.value("momentum_flip", true);
  rs.time_flip = v.value("time_flip", false);
  if (v.contains("signature")) {
    const json& s = v.at("signature");
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
      fail(where + ".signature", "expected [r, s]");
    rs.clifford = {s[0].get<int>(), s[1].get<int>()};
    if (rs.clifford.r < 0 || rs.clifford.s < 0) fail(where + ".signature", "r and s must be non-negative");
  } else {
    rs.clifford = {1, 0};
  }
  return rs;
}

}  // namespace

TightBindingModel ModelConfig::full_model() const {
  TightBindingModel h = spin_doubling ? spin_double(hoppings) : hoppings;
  if (offdiagonal) h = h + *offdiagonal;
  return h;
}

TightBindingModel ModelConfig::segment_model(std::size_t j) const {
  const auto& s = drive.at(j);
  TightBindingModel h = spin_doubling ? spin_double(s.hoppings) : s.hoppings;
  if (s.offdiagonal) h = h + *s.offdiagonal;
  return h;
}

TorusGrid ModelConfig::make_grid(int n, int nt) const {
  std::vector<GridAxis> axes;
  for (int a = 0; a < dimension; ++a) {
    const AxisKind kind = axis_kinds[static_cast<std::size_t>(a)];
    axes.push_back({kind == AxisKind::Time ? nt : n, kind});
  }
  return TorusGrid(axes);
}

std::string digest(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

ModelConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");
  ModelConfig c;
  c.origin = origin;
  c.digest = digest(text);
  try {
    c.dimension = need(j, "dimension", origin).get<int>();
    c.matrix_size = need(j, "matrix_size", origin).get<int>();
    if (c.dimension < 0 || c.dimension > 3) fail(origin + ".dimension", "must be 0..3");
    if (c.matrix_size < 1) fail(origin + ".matrix_size", "must be positive");
    c.spin_doubling = j.value("spin_doubling", false);
    if (j.contains("pair")) {
      const json& p = j.at("pair");
      c.pair.cycle = p.value("cycle", c.pair.cycle);
      c.pair.cls = p.value("class", c.pair.cls);
      if (p.contains("axes")) c.pair.axes = p.at("axes").get<std::vector<int>>();
      if (c.pair.cls != "hamiltonian" && c.pair.cls != "unitary")
        fail(origin + ".pair.class", "must be 'hamiltonian' or 'unitary'");
    }
    const bool unitary = c.pair.cls == "unitary";
    c.axis_kinds.assign(static_cast<std::size_t>(c.dimension), unitary ? AxisKind::Time : AxisKind::Momentum);
    if (j.contains("axes")) {
      const auto kinds = j.at("axes").get<std::vector<std::string>>();
      if (static_cast<int>(kinds.size()) != c.dimension) fail(origin + ".axes", "needs one entry per dimension");
      for (std::size_t a = 0; a < kinds.size(); ++a) {
        if (kinds[a] == "momentum")
          c.axis_kinds[a] = AxisKind::Momentum;
        else if (kinds[a] == "time")
          c.axis_kinds[a] = AxisKind::Time;
        else
          fail(origin + ".axes[" + std::to_string(a) + "]", "must be 'momentum' or 'time'");
      }
    }
    c.hoppings = parse_hoppings(need(j, "hoppings", origin), c.dimension, c.matrix_size, origin + ".hoppings");
    if (!unitary) enforce_hermitian(c.hoppings, origin + ".hoppings", c.warnings);
    const int fm = c.full_matrix_size();
    if (j.contains("offdiagonal")) {
      c.offdiagonal = parse_hoppings(j.at("offdiagonal"), c.dimension, fm, origin + ".offdiagonal");
      enforce_hermitian(*c.offdiagonal, origin + ".offdiagonal", c.warnings);
    }
    if (j.contains("real_structure"))
      c.real_structure = parse_real_structure(j.at("real_structure"), origin + ".real_structure");
    if (j.contains("drive")) {
      const json& segs = need(j.at("drive"), "segments", origin + ".drive");
      if (!segs.is_array() || segs.empty()) fail(origin + ".drive.segments", "needs at least one segment");
      for (std::size_t i = 0; i < segs.size(); ++i) {
        const std::string w = origin + ".drive.segments[" + std::to_string(i) + "]";
        DriveSegmentConfig s;
        s.duration = need(segs[i], "duration", w).get<double>();
        if (!(s.duration > 0.0)) fail(w + ".duration", "must be positive");
        s.hoppings = parse_hoppings(need(segs[i], "hoppings", w), c.dimension, c.matrix_size, w + ".hoppings");
        enforce_hermitian(s.hoppings, w + ".hoppings", c.warnings);
        if (segs[i].contains("offdiagonal")) {
          s.offdiagonal = parse_hoppings(segs[i].at("offdiagonal"), c.dimension, fm, w + ".offdiagonal");
          enforce_hermitian(*s.offdiagonal, w + ".offdiagonal", c.warnings);
        }
        c.drive.push_back(std::move(s));
      }
    }
    if (j.contains("floquet")) {
      const json& f = j.at("floquet");
      if (f.contains("phase0")) c.floquet.phase0 = f.at("phase0").get<double>();
      if (f.contains("phase1")) c.floquet.phase1 = f.at("phase1").get<double>();
      c.floquet.strategy = f.value("strategy", c.floquet.strategy);
      if (c.floquet.strategy != "decoupled" && c.floquet.strategy != "user_supplied")
        fail(origin + ".floquet.strategy", "must be 'decoupled' or 'user_supplied'");
      if (f.contains("contractions")) c.floquet.contractions = f.at("contractions").get<std::vector<std::string>>();
    }
    if (j.contains("grid")) c.grid = j.at("grid").get<int>();
    if (j.contains("tgrid")) c.tgrid = j.at("tgrid").get<int>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(origin + ": " + e.what());
  } catch (const ShapeError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  return c;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace dkpair::cli
