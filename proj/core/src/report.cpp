#include "beamfold/report.hpp"

#include <bit>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "beamfold/spectral.hpp"

namespace beamfold {
namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "solutions.bin layout is little-endian");

std::string fmt17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void atomic_write(const std::filesystem::path& file, const std::string& payload) {
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

void append_u32(std::string& s, std::uint32_t v) {
  s.append(reinterpret_cast<const char*>(&v), 4);
}

void append_f64(std::string& s, double v) {
  s.append(reinterpret_cast<const char*>(&v), 8);
}

std::string iso_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json hypothesis_json(const HypothesisReport& rep) {
  json j;
  j["positivity_ok"] = rep.positivity_ok;
  j["increasing_ok"] = rep.increasing_ok;
  j["convex_ok"] = rep.convex_ok;
  j["min_f"] = rep.min_f;
  j["min_f1"] = rep.min_f1;
  j["min_f2"] = rep.min_f2;
  if (rep.a_estimate) {
    j["a_estimate"] = *rep.a_estimate;
    j["a_is_exact"] = rep.a_is_exact;
    j["liminf_ok"] = rep.liminf_ok;
  }
  j["notes"] = rep.notes;
  return j;
}

Nonlinearity model_from(const std::string& model, const std::map<std::string, double>& params) {
  return catalog_lookup(model, params);
}

int count_interior_sign_changes(const BifurcationCurve& curve) {
  int changes = 0, last = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    double dl = curve.points[i].lambda - curve.points[i - 1].lambda;
    if (std::abs(dl) <= 1e-10 * std::max(1.0, std::abs(curve.points[i].lambda))) continue;
    int sg = dl > 0.0 ? 1 : -1;
    if (last != 0 && sg != last) ++changes;
    last = sg;
  }
  return changes;
}

}  // namespace

std::filesystem::path resolve_output_dir(const std::filesystem::path& out) {
  if (out.is_absolute()) return out;
  if (const char* root = std::getenv("BEAMFOLD_SEED_DIR"); root && *root)
    return std::filesystem::path(root) / out;
  return out;
}

void write_curve_csv(const std::filesystem::path& file, const BifurcationCurve& curve) {
  std::string s = "index,p,lambda,smallest_eig,symmetry_err,inflection_count,energy_dev,d2_0\n";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const CurvePoint& pt = curve.points[i];
    s += std::to_string(i);
    s += ',';
    s += fmt17(pt.p);
    s += ',';
    s += fmt17(pt.lambda);
    s += ',';
    s += pt.smallest_eig ? fmt17(*pt.smallest_eig) : std::string("nan");
    s += ',';
    s += fmt17(pt.shape.symmetry_err);
    s += ',';
    s += std::to_string(pt.shape.inflection_count);
    s += ',';
    s += fmt17(pt.shape.energy_dev);
    s += ',';
    s += fmt17(pt.shape.d2_0);
    s += '\n';
  }
  atomic_write(file, s);
}

void write_solutions_bin(const std::filesystem::path& file, const BifurcationCurve& curve,
                         int n) {
  std::string s;
  s.reserve(16 + curve.points.size() * (n * 8 + 16));
  s += "BFLD";
  append_u32(s, kSchemaVersion);
  append_u32(s, static_cast<std::uint32_t>(n));
  append_u32(s, static_cast<std::uint32_t>(curve.points.size()));
  for (const CurvePoint& pt : curve.points) {
    append_f64(s, pt.lambda);
    append_f64(s, pt.p);
    for (double u : pt.solution.U) append_f64(s, u);
  }
  atomic_write(file, s);
}

void write_plot_script(const std::filesystem::path& file, const BifurcationCurve& curve,
                       const std::string& model) {
  std::ostringstream os;
  os << "# gnuplot script: bifurcation diagram for model '" << model << "'\n"
     << "set datafile separator ','\n"
     << "set xlabel 'lambda'\n"
     << "set ylabel 'p = u(1/2)'\n"
     << "set key left top\n";
  if (curve.fold.present) {
    os << "set label 1 'fold' at " << fmt17(curve.fold.lambda0) << ","
       << fmt17(curve.fold.p0) << " point pt 7 ps 1.5 offset 1,0\n";
  }
  os << "plot 'curve.csv' using 3:2 skip 1 with lines title '" << model << "'\n";
  atomic_write(file, os.str());
}

StoredRun read_solutions_bin(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  std::string all((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (all.size() < 16 || all.compare(0, 4, "BFLD") != 0)
    throw std::runtime_error("bad magic in " + file.string());
  StoredRun run;
  std::uint32_t ver, n, count;
  std::memcpy(&ver, all.data() + 4, 4);
  std::memcpy(&n, all.data() + 8, 4);
  std::memcpy(&count, all.data() + 12, 4);
  run.schema = ver;
  run.n = static_cast<int>(n);
  if (ver != kSchemaVersion) throw std::runtime_error("unsupported version in " + file.string());
  const std::size_t rec = 16 + (n - 2) * 8;
  if (all.size() != 16 + static_cast<std::size_t>(count) * rec)
    throw std::runtime_error("size mismatch in " + file.string());
  std::size_t off = 16;
  for (std::uint32_t i = 0; i < count; ++i) {
    double lam, p;
    std::memcpy(&lam, all.data() + off, 8);
    std::memcpy(&p, all.data() + off + 8, 8);
    std::vector<double> U(n - 2);
    std::memcpy(U.data(), all.data() + off + 16, (n - 2) * 8);
    run.lambdas.push_back(lam);
    run.ps.push_back(p);
    run.solutions.push_back(std::move(U));
    off += rec;
  }
  return run;
}

std::string fnv1a_digest(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  std::uint64_t h = 1469598103934665603ull;
  char buf[65536];
  while (is) {
    is.read(buf, sizeof buf);
    std::streamsize got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

int run_trace(const TraceOptions& opt, std::ostream& log) {
  Nonlinearity nl;
  try {
    nl = model_from(opt.model, opt.params);
  } catch (const std::exception& ex) {
    log << "error: " << ex.what() << "\n";
    return kExitHypothesis;
  }
  const std::string started = iso_now();
  HypothesisReport hyp = check_hypotheses(nl, 10000);
  if (!hyp.all_ok() && !opt.exploratory) {
    log << "hypothesis check failed for '" << opt.model << "':\n";
    for (const auto& note : hyp.notes) log << "  " << note << "\n";
    log << "rerun with --exploratory to trace anyway\n";
    return kExitHypothesis;
  }

  DiscreteProblem dp(nl, opt.n);
  ContinuationConfig cfg;
  cfg.exploratory = opt.exploratory || !hyp.all_ok();
  cfg.mode = (opt.mode == "arclength") ? TraceMode::Arclength : TraceMode::MaxValue;
  if (cfg.mode == TraceMode::Arclength && cfg.exploratory)
    cfg.lambda_cap = 500.0;  // past the re-rise of the known S-shaped cases

  BifurcationCurve curve;
  try {
    curve = trace_curve(dp, cfg);
  } catch (const std::exception& ex) {
    log << "trace failed: " << ex.what() << "\n";
    return kExitTrace;
  }
  if (!curve.fold.present && curve.termination == Termination::StepFailure) {
    log << "trace stalled before the fold (termination: "
        << to_string(curve.termination) << ")\n";
    return kExitTrace;
  }
  fill_spectra(dp, curve);

  const std::filesystem::path dir = resolve_output_dir(opt.out);
  std::filesystem::create_directories(dir);
  write_curve_csv(dir / "curve.csv", curve);
  write_solutions_bin(dir / "solutions.bin", curve, opt.n);
  write_plot_script(dir / "plot.gp", curve, opt.model);

  bool shapes_ok = true;
  double max_energy = 0.0, max_sym = 0.0;
  for (const CurvePoint& pt : curve.points) {
    if (!cfg.exploratory && !pt.shape.pass()) shapes_ok = false;
    max_energy = std::max(max_energy, pt.shape.energy_dev);
    max_sym = std::max(max_sym, pt.shape.symmetry_err);
  }
  const bool curve_shape_ok = cfg.exploratory || curve.single_interior_max();
  const bool gating_ok = shapes_ok && curve_shape_ok && curve.bound_ok;

  json man;
  man["schema_version"] = kSchemaVersion;
  man["tool_version"] = kToolVersion;
  man["model"] = opt.model;
  man["params"] = opt.params;
  man["n"] = opt.n;
  man["mode"] = opt.mode;
  man["exploratory"] = cfg.exploratory;
  man["started"] = started;
  man["finished"] = iso_now();
  man["termination"] = to_string(curve.termination);
  man["point_count"] = curve.points.size();
  man["fold_present"] = curve.fold.present;
  man["lambda0"] = curve.fold.lambda0;
  man["p0"] = curve.fold.p0;
  man["fold_index"] = curve.fold.index;
  if (cfg.exploratory) {
    // sign-change counts are only reported once the curve agrees with the
    // five-probe existence oracle
    bool consistent = sweep_consistency(dp, curve);
    man["sweep_consistent"] = consistent;
    if (consistent)
      man["interior_dlambda_sign_changes"] = count_interior_sign_changes(curve);
  } else {
    man["interior_dlambda_sign_changes"] = count_interior_sign_changes(curve);
  }
  man["hypothesis"] = hypothesis_json(hyp);
  man["verification"] = {{"shapes_pass", shapes_ok},
                         {"single_interior_max", curve_shape_ok},
                         {"lambda0_within_bound", curve.bound_ok},
                         {"max_energy_dev", max_energy},
                         {"max_symmetry_err", max_sym}};
  man["solutions_digest"] = fnv1a_digest(dir / "solutions.bin");
  atomic_write(dir / "manifest.json", man.dump(2) + "\n");

  log << "model " << opt.model << ", n = " << opt.n << ", " << curve.points.size()
      << " points, termination: " << to_string(curve.termination) << "\n";
  if (curve.fold.present)
    log << "fold lambda0 = " << fmt17(curve.fold.lambda0) << " at p0 = "
        << fmt17(curve.fold.p0) << "\n";
  else
    log << "no interior fold maximum (lambda largest at a curve edge)\n";
  log << "outputs in " << dir.string() << "\n";
  return gating_ok ? kExitOk : kExitTrace;
}

int run_verify(const std::filesystem::path& dir_in, const std::string& expected_model,
               std::ostream& log) {
  const std::filesystem::path dir = resolve_output_dir(dir_in);
  json man;
  StoredRun run;
  try {
    std::ifstream is(dir / "manifest.json");
    if (!is) throw std::runtime_error("missing manifest.json");
    is >> man;
    run = read_solutions_bin(dir / "solutions.bin");
    if (fnv1a_digest(dir / "solutions.bin") != man.at("solutions_digest").get<std::string>())
      throw std::runtime_error("solutions.bin digest mismatch");
    if (run.n != man.at("n").get<int>()) throw std::runtime_error("grid size mismatch");
    if (run.lambdas.size() != man.at("point_count").get<std::size_t>())
      throw std::runtime_error("point count mismatch");
    if (!expected_model.empty() && man.at("model").get<std::string>() != expected_model)
      throw std::runtime_error("model mismatch: stored '" +
                               man.at("model").get<std::string>() + "'");
  } catch (const std::exception& ex) {
    log << "verify: " << ex.what() << "\n";
    return kExitFile;
  }

  std::map<std::string, double> params =
      man.at("params").get<std::map<std::string, double>>();
  Nonlinearity nl;
  try {
    nl = model_from(man.at("model").get<std::string>(), params);
  } catch (const std::exception& ex) {
    log << "verify: " << ex.what() << "\n";
    return kExitFile;
  }
  DiscreteProblem dp(nl, run.n);
  const bool exploratory = man.value("exploratory", false);
  const bool max_mode = man.value("mode", std::string("max")) == "max";

  bool all_ok = true;
  auto check = [&](const std::string& name, bool ok) {
    log << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) all_ok = false;
  };

  // rebuild curve points from the stored nodal data
  BifurcationCurve curve;
  bool residual_ok = true, shape_ok = true, increasing_ok = true, stored_p_ok = true;
  double prev_p = -1.0;
  for (std::size_t i = 0; i < run.lambdas.size(); ++i) {
    BeamSolution sol;
    sol.lambda = run.lambdas[i];
    sol.U = run.solutions[i];
    sol.p = sol.U[dp.mid_index];
    auto [d2, d3] = derived_boundary_values(dp, sol.lambda, sol.U);
    sol.d2_0 = d2;
    sol.d3_0 = d3;
    std::vector<double> R = assemble_residual(dp, sol.lambda, sol.U);
    double rn = 0.0;
    for (double x : R) rn = std::max(rn, std::abs(x));
    sol.residual_norm = rn;
    double maxu = 0.0;
    for (double x : sol.U) maxu = std::max(maxu, std::abs(x));
    NewtonConfig ncfg;
    if (rn > newton_tolerance(dp, ncfg, sol.lambda, sol.p, maxu)) residual_ok = false;
    if (max_mode && !(sol.p > prev_p)) increasing_ok = false;
    if (!max_mode && i > 0) {
      double dist = 0.0;
      for (std::size_t q = 0; q < sol.U.size(); ++q)
        dist = std::max(dist, std::abs(sol.U[q] - run.solutions[i - 1][q]));
      if (!(dist > 0.0)) increasing_ok = false;
    }
    prev_p = sol.p;
    if (run.ps[i] != sol.p) stored_p_ok = false;
    CurvePoint pt;
    pt.p = sol.p;
    pt.lambda = sol.lambda;
    pt.shape = verify_solution_shape(dp, sol);
    if (!exploratory && !pt.shape.pass()) shape_ok = false;
    pt.solution = std::move(sol);
    curve.points.push_back(std::move(pt));
  }
  check("residuals within tolerance", residual_ok);
  check("stored p equals u(1/2)", stored_p_ok);
  check(max_mode ? "p strictly increasing" : "consecutive points distinct", increasing_ok);
  check("shape verifications", shape_ok);

  curve.fold = locate_fold(curve.points);
  double lam0_stored = man.at("lambda0").get<double>();
  check("fold refit matches manifest",
        std::abs(curve.fold.lambda0 - lam0_stored) <=
            1e-12 * std::max(1.0, std::abs(lam0_stored)) &&
            curve.fold.present == man.at("fold_present").get<bool>());
  check("single interior maximum", exploratory || curve.single_interior_max());

  return all_ok ? kExitOk : kExitTrace;
}

int run_endpoint(const TraceOptions& opt, std::ostream& log) {
  Nonlinearity nl;
  try {
    nl = model_from(opt.model, opt.params);
  } catch (const std::exception& ex) {
    log << "error: " << ex.what() << "\n";
    return kExitHypothesis;
  }
  if (!nl.finite_radius()) {
    log << "model '" << opt.model << "' has no finite singularity radius; no endpoint profile\n";
    return kExitTrace;
  }
  DiscreteProblem dp(nl, opt.n);
  BifurcationCurve curve;
  try {
    curve = trace_curve(dp, {});
  } catch (const std::exception& ex) {
    log << "trace failed: " << ex.what() << "\n";
    return kExitTrace;
  }
  if (curve.points.empty() || curve.points.back().p < 0.99 * nl.r) {
    log << "trace never reached p >= 0.99 r\n";
    return kExitTrace;
  }
  ConvergenceTable table;
  try {
    table = endpoint_convergence(curve, nl.r, dp);
  } catch (const std::exception& ex) {
    log << ex.what() << "\n";
    return kExitTrace;
  }
  log << "endpoint comparison against w(x) = -16 r x^3 + 12 r x^2 (r = " << nl.r << ")\n";
  log << "        p          lambda        e0          e1          e2       u''' (mid-)\n";
  for (const auto& row : table.rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%12.8f %13.6e %11.4e %11.4e %11.4e %12.4f\n", row.p,
                  row.lambda, row.e0, row.e1, row.e2, row.d3_mid_left);
    log << buf;
  }
  log << "e0 monotone: " << (table.e0_monotone ? "yes" : "no")
      << ", e1 monotone: " << (table.e1_monotone ? "yes" : "no")
      << ", e2 monotone: " << (table.e2_monotone ? "yes" : "no") << "\n";
  log << "final e0 = " << table.final_e0 << ", final one-sided u''' near mid- = "
      << table.final_d3_mid_left << " (limit -96 r = " << -96.0 * nl.r << ")\n";
  bool ok = table.e0_monotone && table.e1_monotone && table.e2_monotone;
  return ok ? kExitOk : kExitTrace;
}

int run_bound(const TraceOptions& opt, const std::filesystem::path& curve_dir,
              std::ostream& log) {
  Nonlinearity nl;
  try {
    nl = model_from(opt.model, opt.params);
  } catch (const std::exception& ex) {
    log << "error: " << ex.what() << "\n";
    return kExitHypothesis;
  }
  if (!nl.finite_radius()) {
    log << "model '" << opt.model << "' has r = infinity; the bound requires a finite radius\n";
    return kExitHypothesis;
  }
  HypothesisReport hyp = check_hypotheses(nl, 10000);
  if (!hyp.a_estimate || !(*hyp.a_estimate > 0.0)) {
    log << "no positive lower-bound constant a for '" << opt.model << "'\n";
    return kExitHypothesis;
  }
  auto [k1, mu1] = beam_principal_eigenvalue(1e-12);
  double bound = lambda_upper_bound(nl, *hyp.a_estimate);
  log << "a" << (hyp.a_is_exact ? " (exact)" : " (estimated)") << " = "
      << fmt17(*hyp.a_estimate) << "\n";
  log << "k1 = " << fmt17(k1) << ", mu1 = k1^4 = " << fmt17(mu1) << "\n";
  log << "bound r^2 mu1 / (4 a) = " << fmt17(bound) << "\n";
  if (!curve_dir.empty()) {
    try {
      std::ifstream is(resolve_output_dir(curve_dir) / "manifest.json");
      if (!is) throw std::runtime_error("missing manifest.json in " + curve_dir.string());
      json man;
      is >> man;
      double lam0 = man.at("lambda0").get<double>();
      log << "traced lambda0 = " << fmt17(lam0) << ", margin = " << fmt17(bound - lam0)
          << "\n";
      if (!(bound - lam0 >= 0.0)) return kExitTrace;
    } catch (const std::exception& ex) {
      log << "bound: " << ex.what() << "\n";
      return kExitFile;
    }
  }
  return kExitOk;
}

}  // namespace beamfold
