#include "roughpde/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "roughpde/experiments.hpp"
#include "roughpde/heat.hpp"
#include "roughpde/littlewood_paley.hpp"
#include "roughpde/paraproduct.hpp"
#include "roughpde/random_field.hpp"

namespace roughpde::cli {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "calibrate",          "solve",          "solve-u", "build-phi", "invert-phi", "study-schauder", "study-bony",
      "study-continuity-v", "study-continuity-phi", "study-bernstein-path", "besov-norm"};
  return names;
}

SpectralField make_field(const FieldSpec& spec, const TorusGrid& grid, std::uint64_t seed) {
  const int d = grid.d();
  const double k = spec.mode * grid.k0();
  auto along = [&](double (*fn)(double)) {
    return SpectralField::from_function(grid, 1, [&](const double* x, double* out) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += x[a];
      out[0] = spec.amplitude * fn(k * s);
    });
  };
  if (spec.kind == "zero") return SpectralField::zeros(grid);
  if (spec.kind == "sin") return along([](double s) { return std::sin(s); });
  if (spec.kind == "cos") return along([](double s) { return std::cos(s); });
  if (spec.kind == "dyadic-random") return random_dyadic_field(grid, spec.gamma, seed, 1, spec.amplitude);
  if (spec.kind == "file") {
    auto f = read_field(spec.path);
    if (f.grid() != grid)
      throw ValidationError("field file " + spec.path + " is on a different grid than grid.{d, n, L}");
    if (f.ncomp() != 1) throw DimensionMismatch(-1, 1, static_cast<std::size_t>(f.ncomp()));
    return spec.amplitude == 1.0 ? f : spec.amplitude * f;
  }
  throw ValidationError("field kind '" + spec.kind + "' cannot be generated here");
}

AffinePeriodicField make_terminal(const RunConfig& cfg) {
  auto grid = cfg.grid();
  if (cfg.terminal.kind == "linear") {
    auto v = AffinePeriodicField::periodic(SpectralField::zeros(grid));
    v.slope = cfg.terminal.slope;
    return v;
  }
  return AffinePeriodicField::periodic(
      make_field(cfg.terminal, grid, cfg.seed_for(cfg.terminal.seed, kTerminalSeedOffset)));
}

ScalarPath make_forcing(const RunConfig& cfg) {
  auto f = make_field(cfg.forcing, cfg.grid(), cfg.seed_for(cfg.forcing.seed, kForcingSeedOffset));
  ScalarPath g;
  g.times = cfg.times();
  g.slices.assign(g.times.size(), f);
  return g;
}

DriftSpec resolved_drift(const RunConfig& cfg) {
  DriftSpec d = cfg.drift;
  if (!cfg.drift_seed_set) d.seed = cfg.seed;
  if (d.base) {
    DriftSpec base = *d.base;
    base.seed = d.seed;
    d.base = std::make_shared<const DriftSpec>(base);
  }
  return d;
}

PDEData make_pde_data(const RunConfig& cfg) {
  PDEData data;
  data.b = gen_drift(resolved_drift(cfg), cfg.grid(), cfg.times());
  data.g = make_forcing(cfg);
  data.v_T = make_terminal(cfg);
  data.validate(cfg.solver);
  return data;
}

namespace {

json value_json(const ConfigValue& v) {
  switch (v.kind) {
    case ConfigValue::Kind::Number:
      if (v.number == std::floor(v.number) && std::abs(v.number) < 9.0e15) return static_cast<long long>(v.number);
      return v.number;
    case ConfigValue::Kind::Bool: return v.flag;
    case ConfigValue::Kind::String: return v.text;
    case ConfigValue::Kind::List: {
      json a = json::array();
      for (const auto& it : v.items) a.push_back(value_json(it));
      return a;
    }
  }
  return nullptr;
}

json config_json(const RunConfig& cfg) {
  json values = json::object();
  for (const auto& [k, v] : cfg.source) values[k] = value_json(v);
  return {{"file", cfg.config_file}, {"values", values}};
}

// Non-finite numbers become null in JSON; keep them readable as strings.
json num(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string csv_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir_);
  }

  void text(const std::string& rel, const std::string& kind, const std::string& content) {
    auto p = prepare(rel);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open " + p + " for writing");
    out << content;
    if (!out) throw IoError("write failed for " + p);
    record(rel, kind);
  }

  void json_file(const std::string& rel, const std::string& kind, const json& j) { text(rel, kind, j.dump(2) + "\n"); }

  void field(const std::string& rel, const std::string& kind, const SpectralField& f) {
    write_field(prepare(rel), f);
    record(rel, kind);
  }

  // One field file per mesh node under slices/.
  template <class Slice>
  void slices(const std::string& stem, const TimeField<Slice>& path, const std::function<SpectralField(const Slice&)>& pick) {
    for (std::size_t m = 0; m < path.slices.size(); ++m) {
      char name[64];
      std::snprintf(name, sizeof name, "slices/%s_%04zu.field", stem.c_str(), m);
      field(name, "slice", pick(path.slices[m]));
    }
  }

  const json& files() const { return files_; }
  const std::string& dir() const { return dir_; }

 private:
  std::string prepare(const std::string& rel) {
    fs::path p = fs::path(dir_) / rel;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + p.parent_path().string());
    return p.string();
  }
  void record(const std::string& rel, const std::string& kind) { files_.push_back({{"path", rel}, {"kind", kind}}); }

  std::string dir_;
  json files_ = json::array();
};

struct Context {
  const RunConfig& cfg;
  const Calibration* cal;
  Outputs& out;
  std::ostream& log;
  json summary = json::object();
};

const Calibration& require_cal(const Context& c, const std::string& why) {
  if (!c.cal)
    throw ValidationError(why + " needs a calibration file: run `calibrate` and pass --calibration or run.calibration");
  return *c.cal;
}

const Calibration* cal_if(const Context& c, bool needed, const std::string& why) {
  return needed ? &require_cal(c, why) : c.cal;
}

// Solver config with lambda resolved for the v equation.
SolverConfig solve_config(const Context& c, const VectorPath& b) {
  SolverConfig s = c.cfg.solver;
  if (c.cfg.lambda_auto) s.lambda = lambda_threshold(b, s, require_cal(c, "solver.lambda = auto"));
  return s;
}

// u and phi read phi.lambda, the threshold by default.
SolverConfig u_config(const Context& c, const VectorPath& b) {
  SolverConfig s = c.cfg.solver;
  s.lambda = c.cfg.phi_lambda_auto ? lambda_threshold(b, s, require_cal(c, "phi.lambda = auto"))
                                   : c.cfg.phi_lambda;
  return s;
}

json solve_json(const SolveResult& r) {
  double max_ratio = 0.0;
  for (double q : r.ratios) max_ratio = std::max(max_ratio, q);
  return {{"rho", num(r.rho)},
          {"iterations", r.iterations},
          {"weighted_converged_at", r.weighted_converged_at},
          {"monitor", r.monitor.name()},
          {"ratios", nums(r.ratios)},
          {"max_ratio", num(max_ratio)},
          {"increments", nums(r.increments)},
          {"log_weighted_increments", nums(r.log_weighted_increments)},
          {"final_increment", num(r.final_increment)},
          {"final_increment_unweighted", num(r.final_increment_unweighted)},
          {"weak_residual", num(r.weak_residual)}};
}

std::string increments_csv(const SolveResult& r) {
  std::string s = "iteration,increment,log_weighted_increment,ratio\n";
  for (std::size_t i = 0; i < r.increments.size(); ++i) {
    s += std::to_string(i + 1) + "," + csv_num(r.increments[i]) + ",";
    s += i < r.log_weighted_increments.size() ? csv_num(r.log_weighted_increments[i]) : "";
    s += ",";
    // ratios[k] compares iteration k + 2 with k + 1.
    if (i >= 1 && i - 1 < r.ratios.size()) s += csv_num(r.ratios[i - 1]);
    s += "\n";
  }
  return s;
}

double path_sup_grad(const AffinePath& v) {
  double s = 0.0;
  for (const auto& sl : v.slices) s = std::max(s, sup_norm(gradient(sl)));
  return s;
}

std::function<SpectralField(const AffinePeriodicField&)> periodic_part() {
  return [](const AffinePeriodicField& f) { return f.p; };
}

json slopes_json(const AffinePath& v) {
  json a = json::array();
  for (const auto& sl : v.slices) a.push_back(nums(sl.slope));
  return a;
}

void cmd_calibrate(Context& c) {
  const auto& cfg = c.cfg;
  const auto& s = cfg.solver;
  auto plan = CalibrationPlan::for_exponents(cfg.grid(), s.beta, s.epsilon, s.alpha_value(), cfg.seed_for(cfg.cal_seed, 0),
                                             s.T);
  plan.fields = cfg.cal_fields;
  plan.bony_pairs = cfg.cal_pairs;
  auto cal = calibrate(plan);
  c.out.text("calibration.json", "calibration", cal.to_json());
  c.summary = {{"c_rho", num(cal.c_rho(s.alpha_value(), s.beta))},
               {"c_lambda", num(cal.c_lambda(s.beta, s.epsilon))},
               {"seed", plan.seed}};
  c.log << "calibration written to " << (fs::path(c.out.dir()) / "calibration.json").string() << "\n";
}

void cmd_solve(Context& c) {
  auto data = make_pde_data(c.cfg);
  auto s = solve_config(c, data.b);
  auto r = solve_mild(data, s, cal_if(c, c.cfg.rho_auto, "solver.rho = auto"));
  json j = solve_json(r);
  j["lambda"] = num(s.lambda);
  j["times"] = r.v.times;
  j["slopes"] = slopes_json(r.v);
  j["config"] = config_json(c.cfg);
  c.out.json_file("result.json", "result", j);
  c.out.text("increments.csv", "increments", increments_csv(r));
  c.out.slices<AffinePeriodicField>("v", r.v, periodic_part());
  c.summary = {{"rho", num(r.rho)},
               {"lambda", num(s.lambda)},
               {"iterations", r.iterations},
               {"ratios", nums(r.ratios)},
               {"weak_residual", num(r.weak_residual)}};
  c.log << "solve: " << r.iterations << " iterations, weak residual " << r.weak_residual << "\n";
}

void cmd_solve_u(Context& c) {
  auto b = gen_drift(resolved_drift(c.cfg), c.cfg.grid(), c.cfg.times());
  auto s = u_config(c, b);
  auto r = solve_u(b, c.cfg.axis, s, cal_if(c, c.cfg.rho_auto, "solver.rho = auto"));
  double sup_grad = path_sup_grad(r.v);
  double ires = integral_form_residual(r.v, b, c.cfg.axis, s);
  json j = solve_json(r);
  j["lambda"] = num(s.lambda);
  j["axis"] = c.cfg.axis;
  j["sup_grad_u"] = num(sup_grad);
  j["integral_form_residual"] = num(ires);
  j["times"] = r.v.times;
  c.out.json_file("result.json", "result", j);
  c.out.text("increments.csv", "increments", increments_csv(r));
  c.out.slices<AffinePeriodicField>("u", r.v, periodic_part());
  c.summary = {{"lambda", num(s.lambda)},
               {"iterations", r.iterations},
               {"sup_grad_u", num(sup_grad)},
               {"gradient_bound_half", sup_grad <= 0.5 + 1e-3}};
  c.log << "solve-u: lambda " << s.lambda << ", sup |grad u| " << sup_grad << "\n";
}

PhiResult phi_for(const Context& c, const VectorPath& b, SolverConfig& s) {
  s = u_config(c, b);
  return build_phi(b, s, cal_if(c, c.cfg.rho_auto, "solver.rho = auto"));
}

json phi_json(const PhiResult& p) {
  json us = json::array();
  for (const auto& u : p.u) us.push_back(solve_json(u));
  return {{"lambda", num(p.lambda)},
          {"sup_grad_u", num(p.sup_grad_u)},
          {"sup_jacobian_defect", num(p.sup_jacobian_defect)},
          {"lipschitz_certificate", num(p.lipschitz_certificate)},
          {"weak_residuals", nums(p.weak_residuals)},
          {"id_residual", num(p.id_residual)},
          {"u", us}};
}

void cmd_build_phi(Context& c) {
  auto b = gen_drift(resolved_drift(c.cfg), c.cfg.grid(), c.cfg.times());
  SolverConfig s;
  auto p = phi_for(c, b, s);
  json j = phi_json(p);
  j["times"] = p.phi.times;
  c.out.json_file("result.json", "result", j);
  // Slope is the identity; only the periodic part u is stored.
  c.out.slices<AffinePeriodicField>("phi", p.phi, periodic_part());
  c.summary = {{"lambda", num(p.lambda)},
               {"sup_grad_u", num(p.sup_grad_u)},
               {"lipschitz_certificate", num(p.lipschitz_certificate)},
               {"lipschitz_le_2", p.lipschitz_certificate <= 2.0}};
  c.log << "build-phi: lambda " << p.lambda << ", Lipschitz certificate " << p.lipschitz_certificate << "\n";
}

void cmd_invert_phi(Context& c) {
  const auto& cfg = c.cfg;
  auto b = gen_drift(resolved_drift(cfg), cfg.grid(), cfg.times());
  SolverConfig s;
  auto p = phi_for(c, b, s);
  PhiMap map(p.phi, cfg.invert_t);
  auto ys = probe_points(cfg.grid(), cfg.probes);
  const int d = cfg.d;
  std::vector<std::vector<double>> xs;
  int max_steps = 0;
  double max_res = 0.0;
  std::string csv;
  for (int a = 0; a < d; ++a) csv += "y" + std::to_string(a) + ",";
  for (int a = 0; a < d; ++a) csv += "psi" + std::to_string(a) + ",";
  csv += "steps,residual\n";
  for (const auto& y : ys) {
    auto inv = invert_phi(map, y, cfg.newton_tol);
    auto back = map(inv.x);
    double res = 0.0;
    for (int a = 0; a < d; ++a) res = std::max(res, std::abs(back[a] - y[a]));
    max_steps = std::max(max_steps, inv.steps);
    max_res = std::max(max_res, res);
    for (double v : y) csv += csv_num(v) + ",";
    for (double v : inv.x) csv += csv_num(v) + ",";
    csv += std::to_string(inv.steps) + "," + csv_num(res) + "\n";
    xs.push_back(std::move(inv.x));
  }
  double lip = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i)
    for (std::size_t k = i + 1; k < ys.size(); ++k) {
      double dy = 0.0, dx = 0.0;
      for (int a = 0; a < d; ++a) {
        dy += (ys[i][a] - ys[k][a]) * (ys[i][a] - ys[k][a]);
        dx += (xs[i][a] - xs[k][a]) * (xs[i][a] - xs[k][a]);
      }
      lip = std::max(lip, std::sqrt(dx / dy));
    }
  c.out.text("inversion.csv", "inversion", csv);
  json j = phi_json(p);
  j["t"] = cfg.invert_t;
  j["probes"] = ys.size();
  j["max_newton_steps"] = max_steps;
  j["max_roundtrip_error"] = num(max_res);
  j["empirical_lipschitz"] = num(lip);
  c.out.json_file("result.json", "result", j);
  c.summary = {{"lambda", num(p.lambda)},
               {"max_newton_steps", max_steps},
               {"max_roundtrip_error", num(max_res)},
               {"empirical_lipschitz", num(lip)},
               {"lipschitz_certificate", num(p.lipschitz_certificate)},
               {"lipschitz_le_2", lip <= 2.0}};
  c.log << "invert-phi: " << ys.size() << " probes, max steps " << max_steps << ", Lipschitz " << lip << "\n";
}

std::vector<double> study_times(const RunConfig& cfg) {
  double lo = cfg.t_min > 0.0 ? cfg.t_min : std::pow(4.0, -6);
  if (!(lo < cfg.t_max)) throw ValidationError("study.t_max must exceed the default t_min 4^-6");
  return log_spaced(lo, cfg.t_max, cfg.t_count);
}

void cmd_study_schauder(Context& c) {
  const auto& cfg = c.cfg;
  auto grid = cfg.grid();
  auto ts = study_times(cfg);
  std::string csv = "gamma,theta,t,mean_log_ratio,min_log_ratio,max_log_ratio,samples\n";
  json fits = json::array();
  bool all_ok = true;
  for (std::size_t i = 0; i < cfg.gammas.size(); ++i) {
    double gamma = cfg.gammas[i], theta = cfg.thetas[i];
    RandomFieldGenerator gen{grid, gamma, cfg.seed_for(cfg.field.seed, kFieldSeedOffset) + 1000003ull * i};
    auto r = schauder_fit(gamma, theta, gen, cfg.fields, ts);
    for (double t : ts) {
      double lt = std::log(t), sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
      std::size_t cnt = 0;
      for (const auto& pt : r.points)
        if (std::abs(pt.x - lt) < 1e-12) {
          sum += pt.y;
          lo = std::min(lo, pt.y);
          hi = std::max(hi, pt.y);
          ++cnt;
        }
      csv += csv_num(gamma) + "," + csv_num(theta) + "," + csv_num(t) + ",";
      csv += cnt ? csv_num(sum / cnt) + "," + csv_num(lo) + "," + csv_num(hi) : ",,";
      csv += "," + std::to_string(cnt) + "\n";
    }
    bool ok = std::abs(r.slope + theta) <= 0.05;
    all_ok = all_ok && ok;
    fits.push_back({{"gamma", gamma},
                    {"theta", theta},
                    {"slope", num(r.slope)},
                    {"target", -theta},
                    {"within_0_05", ok},
                    {"c_max", num(r.c_max)},
                    {"constant", num(r.constant)},
                    {"residual", num(r.residual)},
                    {"samples", r.sample_count}});
    c.log << "schauder (" << gamma << ", " << theta << "): slope " << r.slope << "\n";
  }
  c.out.text("schauder.csv", "study-csv", csv);
  c.out.json_file("schauder.json", "study-json", {{"name", "schauder"}, {"fits", fits}, {"verdict", all_ok}});
  c.summary = {{"fits", fits}, {"verdict", all_ok}};
}

void cmd_study_bony(Context& c) {
  const auto& cfg = c.cfg;
  auto grid = cfg.grid();
  std::string csv = "alpha,beta,seed,max_ratio\n";
  json pairs = json::array();
  bool stable = true;
  for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
    double alpha = cfg.alphas[i], beta = cfg.betas[i];
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    json per = json::array();
    for (std::size_t k = 0; k < cfg.seed_count; ++k) {
      std::uint64_t seed = cfg.seed_for(cfg.field.seed, kFieldSeedOffset) + 1000003ull * k;
      double r = bony_max_ratio(grid, alpha, beta, seed, cfg.pairs);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      per.push_back({{"seed", seed}, {"max_ratio", num(r)}});
      csv += csv_num(alpha) + "," + csv_num(beta) + "," + std::to_string(seed) + "," + csv_num(r) + "\n";
    }
    double spread = hi / lo - 1.0;
    stable = stable && spread <= 0.2;
    pairs.push_back({{"alpha", alpha},
                     {"beta", beta},
                     {"seeds", per},
                     {"min", num(lo)},
                     {"max", num(hi)},
                     {"spread", num(spread)},
                     {"stable_within_20pct", spread <= 0.2}});
    c.log << "bony (" << alpha << ", " << beta << "): ratios in [" << lo << ", " << hi << "]\n";
  }
  // Smooth pair: the decomposition must add up to the plain product.
  auto f = make_field(FieldSpec::of("sin"), grid, 0) + 0.5 * make_field(FieldSpec::of("cos", 2), grid, 0);
  auto g = make_field(FieldSpec::of("cos", 3), grid, 0);
  auto bp = bony_product(f, cfg.alphas.front(), g, cfg.betas.front());
  double smooth_err = sup_norm(bp.total - product_dealiased(f, g));
  bool smooth_ok = smooth_err <= 1e-10;
  c.out.text("bony.csv", "study-csv", csv);
  json j = {{"name", "bony"},
            {"pairs", pairs},
            {"smooth_product_error", num(smooth_err)},
            {"smooth_product_ok", smooth_ok},
            {"verdict", stable && smooth_ok}};
  c.out.json_file("bony.json", "study-json", j);
  c.summary = j;
}

std::vector<double> ladder(const RunConfig& cfg) {
  if (!cfg.eps_list.empty()) return cfg.eps_list;
  std::vector<double> e;
  for (int k = 2; k <= 8; ++k) e.push_back(std::ldexp(1.0, -k));
  return e;
}

json study_summary(const ConvergenceStudy& s) {
  json cols = json::object();
  for (const auto& col : s.columns)
    if (col.checked) cols[col.name] = {{"final", num(col.values.empty() ? 0.0 : col.values.back())},
                                       {"inversions", col.inversions}};
  json checks = json::object();
  for (const auto& [k, v] : s.checks) checks[k] = v;
  return {{"verdict", s.verdict}, {"monotone", s.monotone}, {"checked_columns", cols}, {"checks", checks}};
}

void emit_study(Context& c, const std::string& stem, const ConvergenceStudy& s) {
  c.out.text(stem + ".csv", "study-csv", s.to_csv());
  c.out.text(stem + ".json", "study-json", s.to_json() + "\n");
  c.summary = study_summary(s);
}

template <class Run>
void run_study(Context& c, const std::string& stem, Run run) {
  try {
    auto s = run();
    emit_study(c, stem, s);
    c.log << stem << ": verdict " << (s.verdict ? "pass" : "fail") << "\n";
  } catch (const StudyAborted& e) {
    c.out.text(stem + "_partial.csv", "study-csv-partial", e.partial().to_csv());
    c.out.text(stem + "_partial.json", "study-json-partial", e.partial().to_json() + "\n");
    throw;
  }
}

void cmd_study_continuity_v(Context& c) {
  auto data = make_pde_data(c.cfg);
  auto s = solve_config(c, data.b);
  auto which = c.cfg.perturb == "forcing" ? Perturbation::Forcing : Perturbation::Drift;
  const auto* cal = cal_if(c, c.cfg.rho_auto, "solver.rho = auto");
  auto eps = ladder(c.cfg);
  run_study(c, "continuity_v", [&] { return continuity_study_v(data, s, eps, which, cal); });
}

void cmd_study_continuity_phi(Context& c) {
  const auto& cfg = c.cfg;
  auto b = gen_drift(resolved_drift(cfg), cfg.grid(), cfg.times());
  SolverConfig s = cfg.solver;
  s.lambda = cfg.phi_lambda_auto ? 0.0 : cfg.phi_lambda;
  const auto* cal = cal_if(c, cfg.rho_auto || cfg.phi_lambda_auto, "phi.lambda = auto or solver.rho = auto");
  auto eps = ladder(cfg);
  run_study(c, "continuity_phi", [&] { return continuity_study_phi(b, s, eps, cal); });
  if (auto it = c.summary.find("checks"); it != c.summary.end() && it->contains("lipschitz_le_2"))
    c.summary["lipschitz_le_2"] = (*it)["lipschitz_le_2"];
}

void cmd_study_bernstein(Context& c) {
  const auto& cfg = c.cfg;
  for (int n : cfg.degrees)
    if (cfg.solver.M % static_cast<std::size_t>(n) != 0)
      throw ValidationError("study-bernstein-path needs time.M divisible by every degree, got " + std::to_string(n));
  auto slice = make_field(cfg.field, cfg.grid(), cfg.seed_for(cfg.field.seed, kFieldSeedOffset));
  double sup = sup_norm(slice);
  if (!(sup > 0.0)) throw ValidationError("study-bernstein-path needs a nonzero field");
  slice = (1.0 / sup) * slice;
  const bool quad = cfg.path_kind == "quadratic";
  ScalarPath f;
  f.times = cfg.times();
  const double T = cfg.solver.T;
  for (double t : f.times) {
    double s = t / T;
    f.slices.push_back((quad ? s * s : std::abs(s - 0.5)) * slice);
  }
  auto study = bernstein_study(f, cfg.degrees);
  if (quad) {
    // B_n(s^2) - s^2 = s (1 - s) / n on every mesh node.
    double dev = 0.0;
    const auto& err = study.column("sup_error");
    for (std::size_t k = 0; k < cfg.degrees.size(); ++k) {
      double expected = 0.0;
      for (double t : f.times) expected = std::max(expected, (t / T) * (1.0 - t / T) / cfg.degrees[k]);
      dev = std::max(dev, std::abs(err.values[k] - expected));
    }
    study.scalars["closed_form_deviation"] = dev;
    study.checks["closed_form_1e-12"] = dev <= 1e-12;
    study.finalize(std::numeric_limits<double>::infinity());
  }
  emit_study(c, "bernstein", study);
  c.summary["slope"] = num(study.scalars["slope"]);
  c.log << "bernstein: slope " << study.scalars["slope"] << "\n";
}

void cmd_besov_norm(Context& c) {
  const auto& cfg = c.cfg;
  auto f = make_field(cfg.field, cfg.grid(), cfg.seed_for(cfg.field.seed, kFieldSeedOffset));
  std::vector<BesovNorm> norms;
  for (double g : cfg.gammas) norms.push_back(besov_norm(f, g));
  std::string csv = "j,block_sup";
  for (double g : cfg.gammas) csv += ",weighted_gamma_" + csv_num(g);
  csv += "\n";
  const auto& bs = norms.front().block_sup;
  for (std::size_t k = 0; k < bs.size(); ++k) {
    csv += std::to_string(static_cast<int>(k) - 1) + "," + csv_num(bs[k]);
    for (const auto& n : norms) csv += "," + csv_num(n.ledger[k]);
    csv += "\n";
  }
  json vals = json::array();
  for (const auto& n : norms) vals.push_back({{"gamma", n.gamma}, {"value", num(n.value)}, {"ledger", nums(n.ledger)}});
  c.out.text("besov.csv", "ledger", csv);
  json j = {{"norms", vals}, {"block_sup", nums(bs)}, {"sup", num(sup_norm(f))}};
  c.out.json_file("besov.json", "result", j);
  json short_vals = json::array();
  for (const auto& n : norms) short_vals.push_back({{"gamma", n.gamma}, {"value", num(n.value)}});
  c.summary = {{"norms", short_vals}};
  for (const auto& n : norms) c.log << "besov gamma " << n.gamma << ": " << n.value << "\n";
}

using Handler = void (*)(Context&);

const std::map<std::string, std::pair<Handler, const char*>>& handlers() {
  static const std::map<std::string, std::pair<Handler, const char*>> h{
      {"calibrate", {cmd_calibrate, "measure the functional-inequality constants and write calibration.json"}},
      {"solve", {cmd_solve, "solve the PDE for v by Picard iteration on the mild form"}},
      {"solve-u", {cmd_solve_u, "solve for u_i (g = -b_i, zero terminal data) on solver.axis"}},
      {"build-phi", {cmd_build_phi, "build phi = id + u at the lambda threshold"}},
      {"invert-phi", {cmd_invert_phi, "invert phi(t, .) by Newton at a lattice of probe points"}},
      {"study-schauder", {cmd_study_schauder, "fit the heat smoothing exponent for each (gamma, theta)"}},
      {"study-bony", {cmd_study_bony, "paraproduct ratio and seed stability for each (alpha, beta)"}},
      {"study-continuity-v", {cmd_study_continuity_v, "v error along a mollified data ladder"}},
      {"study-continuity-phi", {cmd_study_continuity_phi, "u, phi and psi errors along a mollified drift ladder"}},
      {"study-bernstein-path", {cmd_study_bernstein, "Bernstein interpolation of a field-valued path"}},
      {"besov-norm", {cmd_besov_norm, "Besov norms and block ledger of one field"}},
  };
  return h;
}

json error_json(const std::exception& e, int code) {
  json j = {{"message", e.what()}, {"exit_code", code}};
  if (auto* ce = dynamic_cast<const ConvergenceError*>(&e)) {
    j["type"] = "convergence";
    j["ratios"] = nums(ce->ratios());
    j["increments"] = nums(ce->increments());
  } else if (dynamic_cast<const IoError*>(&e)) {
    j["type"] = "io";
  } else if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const DimensionMismatch*>(&e)) {
    j["type"] = "validation";
  } else {
    j["type"] = "internal";
  }
  return j;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConvergenceError*>(&e)) return kConvergence;
  if (dynamic_cast<const IoError*>(&e)) return kIo;
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const DimensionMismatch*>(&e)) return kValidation;
  return kFailure;
}

}  // namespace

void run_command(const std::string& command, const RunConfig& cfg, const std::optional<Calibration>& cal,
                 std::ostream& log) {
  auto it = handlers().find(command);
  if (it == handlers().end()) throw ValidationError("unknown command '" + command + "'");
  cfg.validate();
  if (cal && command != "calibrate" && (cal->d != cfg.d || cal->n != cfg.n || cal->L != cfg.L))
    throw ValidationError("calibration was measured on a different grid (d = " + std::to_string(cal->d) +
                          ", n = " + std::to_string(cal->n) + ")");
  Outputs out(cfg.out);
  Context ctx{cfg, cal ? &*cal : nullptr, out, log};
  json manifest = {{"command", command},
                   {"seed", cfg.seed},
                   {"config", config_json(cfg)},
                   {"calibration", cfg.calibration_path.empty() ? json(nullptr) : json(cfg.calibration_path)}};
  auto write_manifest = [&] {
    manifest["files"] = out.files();
    std::ofstream m(fs::path(cfg.out) / "manifest.json", std::ios::binary);
    if (!m) throw IoError("cannot write manifest.json in " + cfg.out);
    m << manifest.dump(2) << "\n";
  };
  try {
    it->second.first(ctx);
  } catch (const std::exception& e) {
    manifest["status"] = "error";
    manifest["error"] = error_json(e, exit_code_for(e));
    try {
      write_manifest();
    } catch (const IoError&) {
    }
    throw;
  }
  manifest["status"] = "ok";
  manifest["summary"] = ctx.summary;
  write_manifest();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudospectral solver and estimate checks for parabolic PDEs with distributional drift"};
  app.name("roughpde");
  std::string config_path, out_dir, cal_path;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "TOML-like run configuration");
  auto* seed_opt = app.add_option("--seed", seed, "run seed (overrides run.seed)");
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides run.out)");
  auto* cal_opt = app.add_option("--calibration", cal_path, "calibration file (overrides run.calibration)");
  for (const auto& name : command_names()) app.add_subcommand(name, handlers().at(name).second)->fallthrough();
  app.require_subcommand(1, 1);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = config_path.empty() ? config_from_table({}) : load_config(config_path);
    if (seed_opt->count()) cfg.seed = seed;
    if (out_opt->count()) cfg.out = out_dir;
    if (cal_opt->count()) cfg.calibration_path = cal_path;
    std::optional<Calibration> cal;
    if (command != "calibrate" && !cfg.calibration_path.empty()) {
      cfg.validate();
      cal = Calibration::load(cfg.calibration_path);
    }
    run_command(command, cfg, cal, out);
    return kOk;
  } catch (const std::exception& e) {
    int code = exit_code_for(e);
    err << "roughpde " << command << ": " << error_json(e, code)["type"].get<std::string>() << " error: " << e.what()
        << "\n";
    if (auto* ce = dynamic_cast<const ConvergenceError*>(&e); ce && !ce->ratios().empty()) {
      err << "ratio history:";
      for (double r : ce->ratios()) err << " " << r;
      err << "\n";
    }
    return code;
  }
}

}  // namespace roughpde::cli
