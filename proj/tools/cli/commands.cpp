#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "cli/config.hpp"
#include "cli/verify.hpp"
#include "dkpair/errors.hpp"
#include "dkpair/floquet.hpp"
#include "dkpair/gridfile.hpp"
#include "dkpair/pairing.hpp"

namespace dkpair::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;
constexpr double kGapTol = 1e-8;

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const TorsionValue& v) {
  return {{"value", v.value}, {"modulus", v.modulus}, {"reduced", v.reduced()},
          {"imag_residual", v.imag_residual}};
}

const char* ray_name(Ray r) {
  switch (r) {
    case Ray::Real: return "real";
    case Ray::Imaginary: return "imaginary";
    case Ray::Zero: return "zero";
  }
  return "zero";
}

struct Settings {
  int grid;
  int tgrid;
  double tol;
};

Settings settings(const CommandOptions& o, const ModelConfig* c, int grid, int tgrid, double tol = 1e-6) {
  Settings s{grid, tgrid, tol};
  if (c && c->grid) s.grid = *c->grid;
  if (c && c->tgrid) s.tgrid = *c->tgrid;
  if (c && c->tol) s.tol = *c->tol;
  if (o.grid) s.grid = *o.grid;
  if (o.tgrid) s.tgrid = *o.tgrid;
  if (o.tol) s.tol = *o.tol;
  if (s.grid < 2 || s.tgrid < 4) throw ValidationError("--grid must be >= 2 and --tgrid >= 4");
  if (!(s.tol > 0.0)) throw ValidationError("--tol must be positive");
  return s;
}

ModelConfig need_config(const CommandOptions& o) {
  if (!o.config) throw ValidationError("this command needs --config FILE");
  return load_config(*o.config);
}

void describe_config(json& r, const ModelConfig& c, const Settings& s) {
  r["config"] = {{"path", c.origin}, {"digest", c.digest}};
  r["parameters"] = {{"grid", s.grid}, {"tgrid", s.tgrid}, {"tol", s.tol}};
  r["warnings"] = c.warnings;
}

CycleSpec make_cycle(const ModelConfig& c) {
  const auto& ax = c.pair.axes;
  auto axis = [&](std::size_t i, int dflt) {
    const int a = i < ax.size() ? ax[i] : dflt;
    if (a < 0 || a >= c.dimension) throw ValidationError("pair.axes entry " + std::to_string(a) + " out of range");
    return a;
  };
  if (c.pair.cycle == "ch0") return ch0();
  if (c.pair.cycle == "ch1") return ch1(axis(0, 0));
  if (c.pair.cycle == "ch2") {
    const int a1 = axis(0, 0), a2 = axis(1, 1);
    if (a1 == a2) throw ValidationError("ch2 needs two distinct axes");
    return ch2(a1, a2);
  }
  throw ValidationError("unknown cycle '" + c.pair.cycle + "' (expected ch0, ch1 or ch2)");
}

struct PairEval {
  cplx value;
  cplx quantized;
  OsuElement x;
};

PairEval evaluate_pair(const ModelConfig& c, const CycleSpec& cyc, const TorusGrid& g) {
  const AlgElement h = c.full_model().symbol(g);
  const int m = c.full_matrix_size();
  const bool unitary = c.pair.cls == "unitary";
  const OsuElement x = unitary ? osu_validate(unitary_class(h), 1e-9) : make_osu_from_hamiltonian(h, 1, kGapTol);
  const BasePoint e = unitary ? BasePoint::sigma_x(g, m) : BasePoint::standard_rho(g, m);
  const cplx v = pair(cyc, x, e).value;
  cplx q = v;
  if (cyc.n == 1)
    q = g.axis(cyc.axes[0]).kind == AxisKind::Time ? v / cplx(0, 2 * kPi) : v / cplx(0, 1);
  else if (cyc.n == 2)
    q = 2 * kPi * v;
  return {v, q, x};
}

double integer_residual(cplx q) { return std::abs(q - std::nearbyint(q.real())); }

void cmd_pair(const CommandOptions& o, json& r) {
  const ModelConfig c = need_config(o);
  const Settings s = settings(o, &c, 32, 256);
  describe_config(r, c, s);
  const CycleSpec cyc = make_cycle(c);
  if (cyc.n > c.dimension)
    throw ValidationError(cyc.name + " needs " + std::to_string(cyc.n) + " axes, the model has " +
                          std::to_string(c.dimension));
  const PairEval a = evaluate_pair(c, cyc, c.make_grid(s.grid, s.tgrid));
  json res = {{"cycle", cyc.name}, {"class", c.pair.cls}, {"value", to_json(a.value)},
              {"quantized", to_json(a.quantized)}, {"integer", std::nearbyint(a.quantized.real())},
              {"integer_residual", integer_residual(a.quantized)}};
  if (c.real_structure) {
    const RealStructureSpec& rs = *c.real_structure;
    const InvarianceCheck inv = check_invariance(rs, a.x.body(), 1e-8);
    const SelectionRule rule = selection_rule(cyc.n, cyc.sign, cyc.parity, rs.clifford);
    res["real_structure"] = {{"invariant", inv.ok}, {"residual", inv.residual}, {"may_pair", rule.may_pair},
                             {"ray", ray_name(rule.ray)}, {"reason", rule.reason}};
  }
  r["results"] = res;
  const PairEval b = evaluate_pair(c, cyc, c.make_grid(2 * s.grid, 2 * s.tgrid));
  const double drift = std::abs(b.quantized - a.quantized);
  r["results"]["refinement"] = {{"grid", 2 * s.grid}, {"tgrid", 2 * s.tgrid},
                                {"quantized", to_json(b.quantized)}, {"drift", drift}, {"stable", drift <= s.tol}};
  if (integer_residual(a.quantized) > s.tol)
    throw ConvergenceError("pairing is not within " + std::to_string(s.tol) + " of an integer");
  if (drift > s.tol) throw ConvergenceError("pairing changed under grid doubling by " + std::to_string(drift));
}

RealStructureSpec model_real_structure(const ModelConfig& c) {
  if (c.real_structure) return *c.real_structure;
  RealStructureSpec rs = kane_mele_real_structure();
  rs.clifford = {1, 0};
  return rs;
}

TorsionValue z2_delta(const ModelConfig& c, const RealStructureSpec& rs, const TorusGrid& g, json* out,
                      int tgrid) {
  const int m = c.full_matrix_size();
  const AlgElement h = c.full_model().symbol(g);
  const OsuElement x = make_osu_from_hamiltonian(h, 1, kGapTol);
  const InvarianceCheck inv = check_invariance(rs, x.body(), 1e-8);
  if (out) (*out)["time_reversal"] = {{"invariant", inv.ok}, {"residual", inv.residual}};
  if (!inv.ok)
    throw ValidationError("model is not time-reversal invariant (residual " + std::to_string(inv.residual) + ")");
  const BasePoint e = BasePoint::standard_rho(g, m);
  const AlgElement y = spin_y(g, m);
  const PropertyYCheck py = check_property_y(y, x.body(), e.body(), &rs);
  if (!py.ok(1e-8)) throw ValidationError("spin unitary y fails property Y: " + py.describe());
  const double alpha = kane_mele_modulus();
  const TorsionValue closed = torsion_pairing_closed_form(ch2(), x, e, y, alpha);
  if (out) {
    const TorsionValue loop = torsion_pairing_via_loop(
        ch2(), torsion_loop(x, e, y, std::max(8, tgrid / 8), &rs), e.body().lift(2), alpha);
    (*out)["delta"] = to_json(closed);
    (*out)["delta_loop"] = to_json(loop);
    (*out)["loop_vs_closed"] = closed.distance(loop);
  }
  return closed;
}

void cmd_z2(const CommandOptions& o, json& r) {
  const ModelConfig c = need_config(o);
  const Settings s = settings(o, &c, 32, 256);
  describe_config(r, c, s);
  if (c.dimension != 2) throw ValidationError("z2 needs a two-dimensional model");
  if (c.full_matrix_size() % 2) throw ValidationError("z2 needs an even matrix size");
  const RealStructureSpec rs = model_real_structure(c);
  const TorusGrid g = c.make_grid(s.grid, s.tgrid);
  json res;
  const TorsionValue d = z2_delta(c, rs, g, &res, s.tgrid);
  if (c.spin_doubling && !c.offdiagonal) {
    const double sc = spin_chern(c.hoppings.symbol(g), kGapTol);
    res["spin_chern"] = sc;
    const TorsionValue form{-sc / (2 * kPi), d.modulus, 0.0};
    res["chern_form_distance"] = d.distance(form);
  }
  res["order_two"] = d.has_order_two(s.tol);
  res["z2"] = d.z2_class();
  r["results"] = res;
  const TorsionValue d2 = z2_delta(c, rs, c.make_grid(2 * s.grid, s.tgrid), nullptr, s.tgrid);
  const double drift = d.distance(d2);
  r["results"]["refinement"] = {{"grid", 2 * s.grid}, {"delta", to_json(d2)}, {"drift", drift},
                                {"stable", drift <= s.tol}};
  if (!d.has_order_two(s.tol)) throw ConvergenceError("torsion value is not of order two");
  if (drift > s.tol) throw ConvergenceError("torsion value changed under grid doubling by " + std::to_string(drift));
}

FloquetDrive make_drive(const ModelConfig& c, const TorusGrid& g) {
  if (c.drive.empty()) throw ValidationError("floquet needs drive.segments in the config");
  std::vector<DriveSegment> segs;
  for (std::size_t j = 0; j < c.drive.size(); ++j) segs.push_back({c.drive[j].duration, c.segment_model(j).symbol(g)});
  return FloquetDrive(std::move(segs));
}

double lifted_phase1(double phase0, double phase1) {
  double l = std::fmod(phase1 - phase0, 2 * kPi);
  if (l <= 0.0) l += 2 * kPi;
  return phase0 + l;
}

void emit_contractions(const FloquetDrive& d, double phase0, double phase1, const FloquetOptions& fo,
                       const std::string& prefix, GridFileMode mode, json& out) {
  const AlgElement y = fo.y ? *fo.y : spin_y(d.grid(), d.m());
  const int nt = 2 * (fo.nodes / 8) + 1;
  json files = json::array();
  int i = 0;
  for (double ph : {phase0, lifted_phase1(phase0, phase1)}) {
    const BranchChoice b = BranchChoice::from_phase(ph, d.period());
    const AlgElement vh = periodized_evolution(d, b, fo.nodes, true, fo.gap_tol).end();
    const std::string path = prefix + std::to_string(i++) + ".dkgrid";
    write_contraction_grid(path, to_contraction_grid(involution_contraction_samples(vh, y, std::max(nt, 5))), mode);
    files.push_back(path);
  }
  out["emitted_contractions"] = files;
}

FloquetInvariant floquet_run(const ModelConfig& c, const CommandOptions& o, const Settings& s, int grid,
                             FloquetOptions& fo, double z0, double z1, json* out) {
  const FloquetDrive d = make_drive(c, c.make_grid(grid, s.tgrid));
  if (fo.strategy == ContractionStrategy::UserSupplied) {
    if (c.floquet.contractions.size() != 2)
      throw ValidationError("user_supplied strategy needs two floquet.contractions files");
    fo.contraction0 = contraction_segment(read_contraction_grid(c.floquet.contractions[0]));
    fo.contraction1 = contraction_segment(read_contraction_grid(c.floquet.contractions[1]));
  }
  if (out && o.emit_contractions)
    emit_contractions(d, z0, z1, fo, *o.emit_contractions, o.binary ? GridFileMode::Binary : GridFileMode::Text, *out);
  return kane_mele_floquet_invariant(d, z0, z1, fo);
}

json to_json(const FloquetInvariant& f) {
  json j = {{"K", to_json(f.K)},
            {"z2", f.z2},
            {"phase0", f.phase0},
            {"phase1", f.phase1},
            {"rank", f.rank},
            {"gap_margin", f.gap_margin},
            {"branch_identity_residual", f.branch_identity_residual},
            {"periodicity_residual", f.periodicity_residual},
            {"symmetry_residual", f.symmetry_residual},
            {"time_reversal_residual", f.time_reversal_residual}};
  if (f.spin_chern) j["spin_chern"] = *f.spin_chern;
  if (f.deg0) j["deg0"] = *f.deg0;
  if (f.deg1) j["deg1"] = *f.deg1;
  return j;
}

void cmd_floquet(const CommandOptions& o, json& r) {
  const ModelConfig c = need_config(o);
  const Settings s = settings(o, &c, 16, 256, 1e-3);
  describe_config(r, c, s);
  if (c.dimension != 2) throw ValidationError("floquet needs a two-dimensional model");
  const double z0 = o.z0 ? *o.z0 : c.floquet.phase0.value_or(0.0);
  const double z1 = o.z1 ? *o.z1 : c.floquet.phase1.value_or(kPi);
  const std::string strategy = o.strategy ? *o.strategy : c.floquet.strategy;
  FloquetOptions fo;
  if (strategy == "decoupled")
    fo.strategy = ContractionStrategy::Decoupled;
  else if (strategy == "user_supplied")
    fo.strategy = ContractionStrategy::UserSupplied;
  else
    throw ValidationError("unknown strategy '" + strategy + "' (expected decoupled or user_supplied)");
  fo.nodes = s.tgrid;
  json res;
  const FloquetInvariant f = floquet_run(c, o, s, s.grid, fo, z0, z1, &res);
  res.update(to_json(f));
  res["strategy"] = strategy;
  r["results"] = res;
  if (fo.strategy == ContractionStrategy::Decoupled) {
    FloquetOptions fo2 = fo;
    const FloquetInvariant f2 = floquet_run(c, o, s, 2 * s.grid, fo2, z0, z1, nullptr);
    const double drift = f.K.distance(f2.K);
    r["results"]["refinement"] = {{"grid", 2 * s.grid}, {"K", to_json(f2.K)}, {"drift", drift},
                                  {"stable", drift <= s.tol}};
    if (drift > s.tol) throw ConvergenceError("K changed under grid doubling by " + std::to_string(drift));
  } else {
    // Contraction files fix the momentum grid.
    r["results"]["refinement"] = {{"stable", nullptr}, {"unavailable", true}};
  }
}

void cmd_verify(const CommandOptions& o, json& r) {
  const Settings s = settings(o, nullptr, 32, 128);
  r["parameters"] = {{"grid", s.grid}, {"tgrid", s.tgrid}, {"suite", o.suite}};
  std::vector<std::string> suites = o.suite == "all" ? verify_suites() : std::vector<std::string>{o.suite};
  json out = json::object();
  int failed = 0;
  for (const auto& name : suites) {
    json list = json::array();
    for (const Check& ch : run_suite(name, s.grid, s.tgrid)) {
      failed += !ch.pass;
      json j = {{"name", ch.name}, {"pass", ch.pass}, {"residual", ch.residual}};
      if (!ch.detail.empty()) j["detail"] = ch.detail;
      list.push_back(j);
    }
    out[name] = list;
  }
  r["results"] = out;
  if (failed) throw ConvergenceError(std::to_string(failed) + " verify check(s) failed");
}

}  // namespace

CommandResult run_command(const std::string& command, const CommandOptions& opt) {
  CommandResult res;
  json& r = res.report;
  r["schema_version"] = kReportSchema;
  r["command"] = command;
  r["status"] = "ok";
  auto failure = [&](const char* status, int code, const std::string& msg) {
    r["status"] = status;
    r["error"] = msg;
    res.exit_code = code;
  };
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (command == "pair")
      cmd_pair(opt, r);
    else if (command == "z2")
      cmd_z2(opt, r);
    else if (command == "floquet")
      cmd_floquet(opt, r);
    else if (command == "verify")
      cmd_verify(opt, r);
    else
      throw ValidationError("unknown command '" + command + "'");
  } catch (const GapClosedError& e) {
    failure("gap_closed", 4, e.what());
    r["gap"] = {{"point", e.point()}, {"gap", e.gap()}};
  } catch (const ConvergenceError& e) {
    failure("convergence_error", 3, e.what());
  } catch (const ShapeError& e) {
    failure("shape_error", 2, e.what());
  } catch (const ValidationError& e) {
    failure("validation_error", 2, e.what());
  } catch (const std::exception& e) {
    failure("error", 1, e.what());
  }
  r["exit_code"] = res.exit_code;
  r["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace dkpair::cli
