#include <algorithm>
#include <cmath>
#include <limits>

#include "roughpde/experiments.hpp"
#include "roughpde/littlewood_paley.hpp"

namespace roughpde {

namespace {

SpectralField interpolate(const ScalarPath& f, double t) {
  std::size_t m = std::upper_bound(f.times.begin(), f.times.end(), t) - f.times.begin();
  m = std::min(std::max<std::size_t>(m, 1), f.times.size() - 1) - 1;
  double w = (t - f.times[m]) / (f.times[m + 1] - f.times[m]);
  if (std::abs(w) < 1e-12) return f.slices[m];
  if (std::abs(w - 1.0) < 1e-12) return f.slices[m + 1];
  return (1.0 - w) * f.slices[m] + w * f.slices[m + 1];
}

}  // namespace

ScalarPath bernstein_path(const ScalarPath& f, int n) {
  validate_time_field(f);
  std::function<SpectralField(double)> at = [&](double t) { return interpolate(f, t); };
  return bernstein_path(at, n, f.times);
}

ConvergenceStudy bernstein_study(const ScalarPath& f, const std::vector<int>& degrees) {
  ConvergenceStudy s;
  s.name = "bernstein-path";
  s.parameter = "degree";
  auto& err = s.add_column("sup_error", true);
  std::vector<FitPoint> pts;
  for (int n : degrees) {
    auto B = bernstein_path(f, n);
    double e = 0.0;
    for (std::size_t m = 0; m < f.slices.size(); ++m) e = std::max(e, sup_norm(B.slices[m] - f.slices[m]));
    s.params.push_back(n);
    err.values.push_back(e);
    if (e > 0.0) pts.push_back({std::log(static_cast<double>(n)), std::log(e)});
  }
  s.scalars["slope"] = pts.size() >= 2 ? fit_line(pts).slope : 0.0;
  s.finalize(std::numeric_limits<double>::infinity());
  return s;
}

double cutoff_profile(double x) {
  if (x <= -1.0) return 1.0;
  if (x >= 0.0) return 0.0;
  auto psi = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  double a = psi(-x), b = psi(1.0 + x);
  return a / (a + b);
}

SpectralField cutoff_field(const TorusGrid& grid, double R) {
  if (!(R >= 0.0)) throw ValidationError("cutoff radius must be >= 0");
  const int d = grid.d();
  const double c = grid.L() / 2.0;
  return SpectralField::from_function(grid, 1, [&](const double* x, double* out) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += (x[a] - c) * (x[a] - c);
    out[0] = cutoff_profile(std::sqrt(r2) - (R + 1.0));
  });
}

SpectralField apply_cutoff(const SpectralField& f, double R) {
  auto chi = cutoff_field(f.grid(), R).samples();
  auto s = f.samples();
  const std::size_t N = f.grid().size();
  for (int c = 0; c < f.ncomp(); ++c)
    for (std::size_t m = 0; m < N; ++m) s[c * N + m] *= chi[m];
  return SpectralField::from_samples(f.grid(), f.ncomp(), std::move(s));
}

ConvergenceStudy mollification_density_check(const SpectralField& f, double gamma, const std::vector<double>& eps_list) {
  ConvergenceStudy s;
  s.name = "mollification-density";
  s.parameter = "eps";
  auto& err = s.add_column("besov_error", true);
  std::vector<FitPoint> pts;
  for (double e : eps_list) {
    if (!(e > 0.0)) throw ValidationError("mollification times must be positive");
    double v = besov_norm(apply_heat(e, f) - f, gamma).value;
    s.params.push_back(e);
    err.values.push_back(v);
    if (v > 0.0) pts.push_back({std::log(e), std::log(v)});
  }
  s.scalars["rate"] = pts.size() >= 2 ? fit_line(pts).slope : 0.0;
  s.scalars["gamma"] = gamma;
  // Errors should shrink as eps does, so read the ladder from large to small eps.
  auto vals = err.values;
  if (s.params.size() >= 2 && s.params.front() < s.params.back()) std::reverse(vals.begin(), vals.end());
  s.checks["decreasing"] = count_inversions(vals, 0.0) == 0;
  err.checked = false;
  s.finalize(std::numeric_limits<double>::infinity());
  return s;
}

}  // namespace roughpde
