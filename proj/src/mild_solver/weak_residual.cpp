#include <algorithm>
#include <cmath>

#include "mild_solver/quadrature.hpp"
#include "roughpde/mild_solver.hpp"
#include "roughpde/paraproduct.hpp"

namespace roughpde {

std::vector<SpectralField> default_test_set(const TorusGrid& grid, double max_radius) {
  std::vector<SpectralField> out;
  out.push_back(SpectralField::constant(grid, {1.0}));
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (grid.radius(k) > max_radius + 1e-12 || grid.nyquist(k)) continue;
    std::size_t kc = grid.conj_index(k);
    if (kc < k) continue;
    std::vector<cplx> c(grid.size(), cplx(0.0)), s(grid.size(), cplx(0.0));
    c[k] = c[kc] = 0.5;
    s[k] = cplx(0.0, -0.5);
    s[kc] = cplx(0.0, 0.5);
    out.push_back(SpectralField::from_coefficients(grid, 1, std::move(c)));
    out.push_back(SpectralField::from_coefficients(grid, 1, std::move(s)));
  }
  return out;
}

namespace {

// S[m] = int_{t_m}^T X ds on a uniform mesh for X close to span{1, s, e^{mu s}}:
// three-node fitted rule on cell pairs, two-node fitted rule on the last cell when M - m is odd.
template <class V>
std::vector<V> fitted_cumulative(const std::vector<V>& X, double mu, double dt) {
  const std::size_t M = X.size() - 1;
  std::vector<V> S(M + 1, V(0.0));
  const double z = mu * dt;
  const double kap = detail::kappa(z), w = detail::pair_weight(z);
  S[M - 1] = dt * ((1.0 - kap) * X[M] + kap * X[M - 1]);
  for (std::size_t m = M - 1; m-- > 0;) S[m] = S[m + 2] + dt * (w * X[m] + (2.0 - 2.0 * w) * X[m + 1] + w * X[m + 2]);
  return S;
}

template <class V>
std::vector<V> trapezoid_cumulative(const std::vector<V>& X, double dt) {
  const std::size_t M = X.size() - 1;
  std::vector<V> S(M + 1, V(0.0));
  for (std::size_t m = M; m-- > 0;) S[m] = S[m + 1] + 0.5 * dt * (X[m] + X[m + 1]);
  return S;
}

}  // namespace

double weak_residual(const AffinePath& v, const PDEData& data, const SolverConfig& cfg,
                     const std::vector<SpectralField>& test_set) {
  data.validate(cfg);
  if (v.times != data.b.times) throw ValidationError("field and data use different time meshes");
  const auto& grid = data.grid();
  for (const auto& s : v.slices)
    if (s.grid() != grid || s.ncomp() != 1) throw ValidationError("weak residual needs a scalar field on the data grid");
  for (const auto& f : test_set)
    if (f.grid() != grid || f.ncomp() != 1) throw ValidationError("test fields must be scalar on the data grid");

  const std::size_t M = v.M();
  const double dt = v.dt(), lam = cfg.lambda;
  const double alpha = cfg.alpha_value();

  std::vector<SpectralField> h;
  h.reserve(M + 1);
  for (std::size_t m = 0; m <= M; ++m)
    h.push_back(drift_term(gradient(v.slices[m]), data.b.slices[m], alpha, cfg.beta) - data.g.slices[m]);

  std::vector<std::size_t> modes;
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (const auto& f : test_set)
      if (std::abs(f.coeff(0, k)) > 0.0) {
        modes.push_back(k);
        break;
      }

  // Per-mode defect series.
  std::vector<std::vector<cplx>> Rk(modes.size());
  for (std::size_t q = 0; q < modes.size(); ++q) {
    const std::size_t k = modes[q];
    const double mu = lam + 0.5 * grid.k2(k);
    std::vector<cplx> X(M + 1), H(M + 1);
    for (std::size_t m = 0; m <= M; ++m) {
      X[m] = v.slices[m].p.coeff(0, k);
      H[m] = h[m].coeff(0, k);
    }
    auto SX = fitted_cumulative(X, mu, dt);
    auto SH = trapezoid_cumulative(H, dt);
    const cplx XT = data.v_T.p.coeff(0, k);
    Rk[q].resize(M + 1);
    for (std::size_t m = 0; m <= M; ++m) Rk[q][m] = XT - X[m] - mu * SX[m] + SH[m];
  }

  const double vol = std::pow(grid.L(), grid.d());
  double worst = 0.0;
  for (const auto& f : test_set)
    for (std::size_t m = 0; m <= M; ++m) {
      cplx acc = 0.0;
      for (std::size_t q = 0; q < modes.size(); ++q) acc += std::conj(f.coeff(0, modes[q])) * Rk[q][m];
      worst = std::max(worst, std::abs(acc) * vol);
    }

  // Slope equation a_T - a(t) - lambda int a = 0.
  for (std::size_t c = 0; c < data.v_T.slope.size(); ++c) {
    std::vector<double> a(M + 1);
    for (std::size_t m = 0; m <= M; ++m) a[m] = v.slices[m].slope.at(c);
    auto Sa = fitted_cumulative(a, lam, dt);
    for (std::size_t m = 0; m <= M; ++m) worst = std::max(worst, std::abs(data.v_T.slope[c] - a[m] - lam * Sa[m]));
  }
  return worst;
}

double weak_residual(const AffinePath& v, const PDEData& data, const SolverConfig& cfg) {
  return weak_residual(v, data, cfg, default_test_set(data.grid()));
}

double integral_form_residual(const AffinePath& u, const VectorPath& b, int axis, const SolverConfig& cfg) {
  validate_time_field(u);
  validate_time_field(b);
  if (u.times != b.times) throw ValidationError("field and drift use different time meshes");
  const auto& grid = b.slices.front().grid();
  const std::size_t M = u.M(), N = grid.size();
  const double dt = u.dt(), lam = cfg.lambda;
  std::vector<std::vector<cplx>> h(M + 1);
  for (std::size_t m = 0; m <= M; ++m) {
    auto hm = drift_term(gradient(u.slices[m]), b.slices[m], cfg.alpha_value(), cfg.beta) + b.slices[m].component(axis);
    h[m] = hm.coefficients();
  }
  std::vector<std::vector<cplx>> I(M + 1, std::vector<cplx>(N, cplx(0.0)));
  // Quadratic interpolation of the forcing over cell pairs, linear on a leftover last cell.
  for (std::size_t k = 0; k < N; ++k) {
    const double mu = lam + 0.5 * grid.k2(k);
    auto lin = detail::exp_linear_weights(mu, dt);
    auto quad = detail::exp_quadratic_weights(mu, dt);
    I[M - 1][k] = lin.w0 * h[M - 1][k] + lin.w1 * h[M][k];
    for (std::size_t m = M - 1; m-- > 0;)
      I[m][k] = quad.decay2 * I[m + 2][k] + quad.W0 * h[m][k] + quad.W1 * h[m + 1][k] + quad.W2 * h[m + 2][k];
  }
  double worst = 0.0;
  for (std::size_t m = 0; m <= M; ++m) {
    auto Im = SpectralField::from_coefficients(grid, 1, I[m]);
    worst = std::max(worst, sup_norm(u.slices[m].p - Im));
  }
  return worst;
}

}  // namespace roughpde
