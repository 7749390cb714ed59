#include <algorithm>
#include <cmath>
#include <limits>

#include "roughpde/mild_solver.hpp"
#include "roughpde/paraproduct.hpp"

namespace roughpde {

std::string to_string(QuadratureRule r) {
  return r == QuadratureRule::Exponential ? "exponential" : "graded-midpoint";
}

std::string to_string(OperatorForm f) { return f == OperatorForm::Absorbed ? "absorbed" : "plain"; }

QuadratureRule parse_quadrature_rule(const std::string& s) {
  if (s == "exponential") return QuadratureRule::Exponential;
  if (s == "graded-midpoint") return QuadratureRule::GradedMidpoint;
  throw ValidationError("unknown quadrature rule '" + s + "'");
}

OperatorForm parse_operator_form(const std::string& s) {
  if (s == "absorbed") return OperatorForm::Absorbed;
  if (s == "plain") return OperatorForm::Plain;
  throw ValidationError("unknown operator form '" + s + "'");
}

void SolverConfig::validate() const {
  if (!(beta > 0.0 && beta < 0.5)) throw ValidationError("beta must lie in (0, 1/2)");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (!(theta() > 0.0 && theta() < 1.0)) throw ValidationError("theta = (1 + 2 beta - epsilon) / 2 must lie in (0, 1)");
  const double a = alpha_value();
  if (!(a >= beta && a < 1.0 - beta)) throw ValidationError("alpha must lie in [beta, 1 - beta)");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be nonnegative");
  if (!(T > 0.0)) throw ValidationError("T must be positive");
  if (M < 2) throw ValidationError("time mesh needs M >= 2");
  if (!(tau_fix > 0.0)) throw ValidationError("Picard tolerance must be positive");
  if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
  if (rho && !(*rho >= 0.0)) throw ValidationError("rho must be nonnegative");
  if (!(quadrature_tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
}

void PDEData::validate(const SolverConfig& cfg) const {
  validate_time_field(b);
  validate_time_field(g);
  const auto& grid = v_T.grid();
  if (b.slices.front().grid() != grid || g.slices.front().grid() != grid)
    throw ValidationError("PDE data on different grids");
  if (b.slices.front().ncomp() != grid.d()) throw DimensionMismatch(-1, grid.d(), b.slices.front().ncomp());
  if (g.slices.front().ncomp() != 1) throw DimensionMismatch(-1, 1, g.slices.front().ncomp());
  if (v_T.ncomp() != 1) throw DimensionMismatch(-1, 1, v_T.ncomp());
  if (v_T.slope.size() != static_cast<std::size_t>(grid.d()))
    throw DimensionMismatch(-1, grid.d(), v_T.slope.size());
  if (b.times != g.times) throw ValidationError("drift and forcing use different time meshes");
  if (b.M() != cfg.M) throw ValidationError("time mesh size differs from config M");
  if (std::abs(b.T() - cfg.T) > 1e-12 * cfg.T) throw ValidationError("time horizon differs from config T");
}

PDEData PDEData::heat(const AffinePeriodicField& v_T, const std::vector<double>& times) {
  PDEData d;
  d.v_T = v_T;
  d.b.times = d.g.times = times;
  d.b.slices.assign(times.size(), SpectralField::zeros(v_T.grid(), v_T.grid().d()));
  d.g.slices.assign(times.size(), SpectralField::zeros(v_T.grid(), 1));
  return d;
}

double time_sup_besov(const VectorPath& b, double gamma) {
  double best = 0.0;
  for (const auto& s : b.slices) best = std::max(best, besov_norm(s, gamma).value);
  return best;
}

double select_rho(const SolverConfig& cfg, double b_norm, double c_cal) {
  const double a = cfg.alpha_value();
  if (!(a + cfg.beta < 1.0)) throw ValidationError("rho selection needs alpha + beta < 1");
  if (!(c_cal > 0.0) || !(b_norm >= 0.0)) throw ValidationError("rho selection needs c > 0 and a finite drift norm");
  return std::max(1.0, std::pow(2.0 * c_cal * (cfg.lambda + b_norm), 2.0 / (1.0 - a - cfg.beta)));
}

double lambda_threshold(double b_norm, const SolverConfig& cfg, double c_cal) {
  const double th = cfg.theta();
  if (!(th < 1.0)) throw ValidationError("lambda threshold needs theta < 1");
  if (!(b_norm >= 0.0) || !(c_cal > 0.0)) throw ValidationError("lambda threshold needs c > 0 and a finite norm");
  return std::pow(3.0 * c_cal * std::tgamma(1.0 - th) * b_norm, 1.0 / (1.0 - th));
}

double lambda_threshold(const VectorPath& b, const SolverConfig& cfg, const Calibration& cal) {
  return lambda_threshold(time_sup_besov(b, -cfg.beta + cfg.epsilon), cfg, cal.c_lambda(cfg.beta, cfg.epsilon));
}

namespace {

void require_finite(const SpectralField& f) {
  for (const auto& c : f.coefficients())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw Error("non-finite value in a solution slice");
}

AffinePath zero_path(const PDEData& data) {
  AffinePath v;
  v.times = data.b.times;
  v.slices.assign(v.times.size(),
                  AffinePeriodicField{std::vector<double>(data.grid().d(), 0.0), SpectralField::zeros(data.grid())});
  return v;
}

struct WeightedMax {
  bool found = false;
  std::size_t node = 0;
  double log_norm = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
};

WeightedMax weighted_max(const std::vector<double>& times, const std::vector<double>& norms, double rho) {
  WeightedMax best;
  const double T = times.back();
  for (std::size_t m = 0; m < times.size(); ++m) {
    if (!(norms[m] > 0.0)) continue;
    double ln = std::log(norms[m]);
    double val = -rho * (T - times[m]) + ln;
    if (!best.found || val > best.log_value || (val == best.log_value && m > best.node)) best = {true, m, ln, val};
  }
  return best;
}

}  // namespace

AffinePath apply_T(const AffinePath& v, const PDEData& data, const SolverConfig& cfg) {
  data.validate(cfg);
  if (v.times != data.b.times) throw ValidationError("iterate and data use different time meshes");
  for (const auto& s : v.slices) {
    if (s.grid() != data.grid()) throw ValidationError("iterate on a different grid");
    if (s.ncomp() != 1) throw DimensionMismatch(-1, 1, s.ncomp());
  }
  const std::size_t M = data.b.M();
  const double T = data.b.T(), lam = cfg.lambda;
  const double lam_kernel = cfg.form == OperatorForm::Absorbed ? lam : 0.0;
  const double alpha = cfg.alpha_value();

  ScalarPath h;
  h.times = data.b.times;
  h.slices.reserve(M + 1);
  for (std::size_t m = 0; m <= M; ++m) {
    auto hm = drift_term(gradient(v.slices[m]), data.b.slices[m], alpha, cfg.beta) - data.g.slices[m];
    if (cfg.form == OperatorForm::Plain && lam != 0.0) hm = hm - lam * v.slices[m].p;
    h.slices.push_back(std::move(hm));
  }
  auto I = duhamel_integral(h, lam_kernel, cfg.rule);

  const auto& grid = data.grid();
  AffinePath out;
  out.times = data.b.times;
  out.slices.reserve(M + 1);
  std::vector<double> w(grid.size());
  for (std::size_t m = 0; m <= M; ++m) {
    const double tau = T - out.times[m];
    for (std::size_t k = 0; k < grid.size(); ++k) w[k] = std::exp(-(lam_kernel + 0.5 * grid.k2(k)) * tau);
    AffinePeriodicField s;
    s.slope = data.v_T.slope;
    for (double& a : s.slope) a *= std::exp(-lam * tau);
    s.p = apply_multiplier(data.v_T.p, w) + I.slices[m];
    require_finite(s.p);
    out.slices.push_back(std::move(s));
  }
  return out;
}

SolveResult solve_mild(const PDEData& data, const SolverConfig& cfg, const Calibration* cal, const AffinePath* v0) {
  cfg.validate();
  data.validate(cfg);
  const double alpha = cfg.alpha_value();
  bool bounded = true;
  for (double a : data.v_T.slope) bounded = bounded && a == 0.0;

  SolveResult r;
  r.monitor = bounded ? NormSpec{NormKind::C1Plus, alpha} : NormSpec{NormKind::DC, alpha};
  if (cfg.rho) {
    r.rho = *cfg.rho;
  } else {
    if (!cal) throw ValidationError("rho = auto needs a calibration");
    r.rho = select_rho(cfg, time_sup_besov(data.b, -cfg.beta), cal->c_rho(alpha, cfg.beta));
  }

  AffinePath v = v0 ? *v0 : zero_path(data);
  if (v.times != data.b.times) throw ValidationError("initial guess uses a different time mesh");

  // Stops on the unweighted increment, which bounds the weighted one.
  // Node increments below this fraction of the iterate are rounding noise.
  constexpr double kNoise = 1e-12;
  WeightedMax prev;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    AffinePath w = apply_T(v, data, cfg);
    std::vector<double> inc(w.slices.size()), floored(w.slices.size());
    double unweighted = 0.0;
    for (std::size_t m = 0; m < w.slices.size(); ++m) {
      inc[m] = slice_norm(w.slices[m] - v.slices[m], r.monitor);
      double scale = slice_norm(w.slices[m], r.monitor);
      floored[m] = inc[m] > kNoise * scale ? inc[m] : 0.0;
      unweighted = std::max(unweighted, inc[m]);
    }
    WeightedMax cur = weighted_max(w.times, floored, r.rho);
    const double log_w = cur.log_value;
    if (it >= 2 && prev.found && cur.found) {
      // Exponent differences taken before adding: rho (T - t) can swamp log norms.
      double shift = r.rho * (w.times[cur.node] - w.times[prev.node]);
      r.ratios.push_back(std::exp(shift + cur.log_norm - prev.log_norm));
    }
    prev = cur;
    r.increments.push_back(unweighted);
    r.log_weighted_increments.push_back(log_w);
    v = std::move(w);
    r.iterations = it;
    r.final_increment_unweighted = unweighted;
    r.log_final_increment = log_w;
    r.final_increment = std::exp(log_w);
    if (r.weighted_converged_at == 0 && log_w <= std::log(cfg.tau_fix)) r.weighted_converged_at = it;
    if (unweighted <= cfg.tau_fix) {
      r.v = std::move(v);
      r.weak_residual = weak_residual(r.v, data, cfg);
      return r;
    }
  }
  throw ConvergenceError("Picard iteration did not reach tolerance in " + std::to_string(cfg.max_iterations) +
                             " iterations (last increment " + std::to_string(r.final_increment_unweighted) + ")",
                         r.ratios, r.increments);
}

SolveResult solve_u(const VectorPath& b, int axis, const SolverConfig& cfg, const Calibration* cal,
                    const AffinePath* v0) {
  validate_time_field(b);
  const auto& grid = b.slices.front().grid();
  if (axis < 0 || axis >= grid.d()) throw ValidationError("axis out of range");
  if (!(cfg.lambda > 0.0) && time_sup_besov(b, 0.0) > 0.0) throw ValidationError("u equation needs lambda > 0");
  PDEData data;
  data.b = b;
  data.g.times = b.times;
  for (const auto& s : b.slices) data.g.slices.push_back(-1.0 * s.component(axis));
  data.v_T = AffinePeriodicField{std::vector<double>(grid.d(), 0.0), SpectralField::zeros(grid)};
  return solve_mild(data, cfg, cal, v0);
}

}  // namespace roughpde
