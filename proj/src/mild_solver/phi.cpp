#include <algorithm>
#include <cmath>
#include <limits>

#include "roughpde/mild_solver.hpp"

namespace roughpde {

PhiResult build_phi(const VectorPath& b, const SolverConfig& cfg, const Calibration* cal, const PhiResult* warm) {
  validate_time_field(b);
  const auto& grid = b.slices.front().grid();
  const int d = grid.d();
  PhiResult r;
  if (cfg.lambda > 0.0) {
    r.lambda = cfg.lambda;
  } else {
    if (!cal) throw ValidationError("lambda threshold needs a calibration");
    r.lambda = lambda_threshold(b, cfg, *cal);
  }
  SolverConfig ucfg = cfg;
  ucfg.lambda = r.lambda;
  if (warm && warm->u.size() != static_cast<std::size_t>(d)) throw DimensionMismatch(-1, d, warm->u.size());
  for (int i = 0; i < d; ++i) {
    r.u.push_back(solve_u(b, i, ucfg, cal, warm ? &warm->u[i].v : nullptr));
    r.weak_residuals.push_back(r.u.back().weak_residual);
  }

  r.phi.times = b.times;
  for (std::size_t m = 0; m < b.times.size(); ++m) {
    std::vector<SpectralField> parts, grads;
    for (int i = 0; i < d; ++i) {
      parts.push_back(r.u[i].v.slices[m].p);
      grads.push_back(gradient(parts.back()));
      r.sup_grad_u = std::max(r.sup_grad_u, sup_norm_refined(grads.back()));
    }
    r.sup_jacobian_defect = std::max(r.sup_jacobian_defect, sup_norm_refined(SpectralField::stack(grads)));
    AffinePeriodicField s = AffinePeriodicField::identity(grid);
    s.p = SpectralField::stack(parts);
    r.phi.slices.push_back(std::move(s));
  }
  r.lipschitz_certificate = r.sup_jacobian_defect < 1.0 ? 1.0 / (1.0 - r.sup_jacobian_defect)
                                                        : std::numeric_limits<double>::infinity();

  // id_i solves L v = b_i with lambda = 0.
  SolverConfig idcfg = cfg;
  idcfg.lambda = 0.0;
  for (int i = 0; i < d; ++i) {
    PDEData data;
    data.b = b;
    data.g.times = b.times;
    for (const auto& s : b.slices) data.g.slices.push_back(s.component(i));
    data.v_T = AffinePeriodicField::periodic(SpectralField::zeros(grid));
    data.v_T.slope[i] = 1.0;
    AffinePath id;
    id.times = b.times;
    id.slices.assign(b.times.size(), data.v_T);
    r.id_residual = std::max(r.id_residual, weak_residual(id, data, idcfg));
  }
  return r;
}

PhiMap::PhiMap(const AffinePath& phi, double t) {
  validate_time_field(phi);
  if (t < phi.times.front() || t > phi.times.back()) throw ValidationError("time outside the mesh");
  d_ = phi.slices.front().grid().d();
  if (phi.slices.front().ncomp() != d_) throw DimensionMismatch(-1, d_, phi.slices.front().ncomp());
  std::size_t m = std::upper_bound(phi.times.begin(), phi.times.end(), t) - phi.times.begin();
  m = std::min(std::max<std::size_t>(m, 1), phi.times.size() - 1) - 1;
  double w = (t - phi.times[m]) / (phi.times[m + 1] - phi.times[m]);
  slice_ = w == 0.0 ? phi.slices[m] : (1.0 - w) * phi.slices[m] + w * phi.slices[m + 1];
  grad_ = gradient(slice_);
}

std::vector<double> PhiMap::operator()(const std::vector<double>& x) const { return evaluate_at(slice_, x); }

std::vector<double> PhiMap::jacobian(const std::vector<double>& x) const {
  // grad_ component i * d + j holds d_i phi_j.
  auto g = evaluate_at(grad_, x);
  std::vector<double> J(d_ * d_);
  for (int j = 0; j < d_; ++j)
    for (int k = 0; k < d_; ++k) J[j * d_ + k] = g[k * d_ + j];
  return J;
}

namespace {

// Gaussian elimination with partial pivoting, d <= 3.
std::vector<double> solve_small(std::vector<double> A, std::vector<double> rhs, int d) {
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::abs(A[r * d + c]) > std::abs(A[piv * d + c])) piv = r;
    if (A[piv * d + c] == 0.0) throw ConvergenceError("singular Jacobian in phi inversion", {}, {});
    if (piv != c) {
      for (int k = 0; k < d; ++k) std::swap(A[c * d + k], A[piv * d + k]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (int r = c + 1; r < d; ++r) {
      double f = A[r * d + c] / A[c * d + c];
      for (int k = c; k < d; ++k) A[r * d + k] -= f * A[c * d + k];
      rhs[r] -= f * rhs[c];
    }
  }
  for (int c = d; c-- > 0;) {
    for (int k = c + 1; k < d; ++k) rhs[c] -= A[c * d + k] * rhs[k];
    rhs[c] /= A[c * d + c];
  }
  return rhs;
}

double euclid(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

}  // namespace

InversionResult invert_phi(const PhiMap& phi, const std::vector<double>& y, double tol, int max_steps) {
  const int d = phi.d();
  if (y.size() != static_cast<std::size_t>(d)) throw DimensionMismatch(-1, d, y.size());
  if (!(tol > 0.0)) throw ValidationError("inversion tolerance must be positive");
  InversionResult r;
  r.x = y;
  std::vector<double> hist;
  for (;;) {
    auto f = phi(r.x);
    for (int i = 0; i < d; ++i) f[i] -= y[i];
    r.residual = euclid(f);
    hist.push_back(r.residual);
    if (r.residual <= tol) return r;
    if (r.steps >= max_steps)
      throw ConvergenceError("Newton inversion of phi did not converge in " + std::to_string(max_steps) + " steps", {},
                             hist);
    auto dx = solve_small(phi.jacobian(r.x), f, d);
    for (int i = 0; i < d; ++i) r.x[i] -= dx[i];
    ++r.steps;
  }
}

InversionResult invert_phi(const AffinePath& phi, double t, const std::vector<double>& y, double tol, int max_steps) {
  return invert_phi(PhiMap(phi, t), y, tol, max_steps);
}

double log_rlambda(double x, double lambda, double c, const SolverConfig& cfg) {
  const double a = cfg.alpha_value();
  const double th = (1.0 - a - cfg.beta) / 2.0;
  if (!(th > 0.0)) throw ValidationError("R_lambda needs alpha + beta < 1");
  if (!(lambda > 0.0)) throw ValidationError("R_lambda needs lambda > 0");
  return std::log(2.0) + std::pow(2.0 * c * (lambda + x), 1.0 / th) * cfg.T + std::log(std::max(1.0, 1.0 / lambda));
}

RLambdaReport rlambda_bound_check(const PDEData& data, const SolverConfig& cfg, const Calibration& cal,
                                  const SolveResult& solved) {
  const double a = cfg.alpha_value();
  RLambdaReport r;
  NormSpec top{NormKind::C1Plus, a};
  for (const auto& s : solved.v.slices) r.lhs = std::max(r.lhs, slice_norm(s, top));
  double b_norm = time_sup_besov(data.b, -cfg.beta);
  double g_norm = 0.0;
  for (const auto& s : data.g.slices) g_norm = std::max(g_norm, besov_norm(s, -cfg.beta).value);
  double data_norm = c1plus_norm(data.v_T, a) + g_norm;
  r.log_rhs = log_rlambda(b_norm, cfg.lambda, cal.c_rho(a, cfg.beta), cfg) + std::log(data_norm);
  r.log_slack = r.lhs > 0.0 ? r.log_rhs - std::log(r.lhs) : std::numeric_limits<double>::infinity();
  r.holds = r.log_slack >= 0.0;
  return r;
}

}  // namespace roughpde
