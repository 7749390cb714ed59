#include <algorithm>
#include <cmath>
#include <numbers>

#include "roughpde/heat.hpp"

namespace roughpde {

LineFit fit_line(const std::vector<FitPoint>& pts) {
  if (pts.size() < 2) throw ValidationError("line fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    sx += p.x;
    sy += p.y;
    sxx += p.x * p.x;
    sxy += p.x * p.y;
  }
  LineFit f;
  double den = n * sxx - sx * sx;
  f.slope = den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0.0;
  for (const auto& p : pts) {
    double r = p.y - (f.intercept + f.slope * p.x);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 2) throw ValidationError("bad log-spaced range");
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i)
    t[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) / (count - 1));
  return t;
}

namespace {

void finish(EstimateReport& r) {
  r.sample_count = r.points.size();
  if (r.sample_count < 2) return;
  LineFit f = fit_line(r.points);
  r.slope = f.slope;
  r.constant = std::exp(f.intercept);
  r.residual = f.residual;
}

void require_nonzero(double norm, const char* what) {
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw ValidationError(std::string("degenerate field generator in ") + what);
}

}  // namespace

EstimateReport schauder_fit(double gamma, double theta, const FieldGen& gen, std::size_t count,
                            const std::vector<double>& t_samples) {
  if (theta < 0.0 || theta > 1.0) throw ValidationError("theta must lie in [0, 1]");
  EstimateReport r;
  r.name = "schauder";
  for (std::size_t i = 0; i < count; ++i) {
    SpectralField f = gen(i);
    double base = besov_norm(f, gamma).value;
    require_nonzero(base, "schauder_fit");
    for (double t : t_samples) {
      double ratio = besov_norm(apply_heat(t, f), gamma + 2.0 * theta).value / base;
      r.points.push_back({std::log(t), std::log(ratio)});
      r.c_max = std::max(r.c_max, std::pow(t, theta) * ratio);
    }
  }
  finish(r);
  return r;
}

EstimateReport heat_increment_fit(double gamma, double theta, const FieldGen& gen, std::size_t count,
                                  const std::vector<double>& t_samples) {
  if (!(theta > 0.0 && theta < 1.0)) throw ValidationError("theta must lie in (0, 1)");
  EstimateReport r;
  r.name = "heat_increment";
  for (std::size_t i = 0; i < count; ++i) {
    SpectralField f = gen(i);
    double base = besov_norm(f, gamma + 2.0 * theta).value;
    require_nonzero(base, "heat_increment_fit");
    for (double t : t_samples) {
      double num = besov_norm(apply_heat(t, f) - f, gamma).value;
      if (num <= 0.0) continue;
      double ratio = num / base;
      r.points.push_back({std::log(t), std::log(ratio)});
      r.c_max = std::max(r.c_max, std::pow(t, -theta) * ratio);
    }
  }
  finish(r);
  return r;
}

EstimateReport bernstein_check(double gamma, const FieldGen& gen, std::size_t count) {
  EstimateReport r;
  r.name = "bernstein";
  for (std::size_t i = 0; i < count; ++i) {
    SpectralField g = gen(i);
    double base = besov_norm(g, gamma + 1.0).value;
    double num = besov_norm(gradient(g), gamma).value;
    double ratio = base > 0.0 ? num / base : 0.0;
    r.c_max = std::max(r.c_max, ratio);
    r.points.push_back({static_cast<double>(i), ratio > 0.0 ? std::log(ratio) : -INFINITY});
  }
  r.sample_count = r.points.size();
  r.constant = r.c_max;
  return r;
}

EstimateReport grad_heat_fit(double gamma, double theta, const FieldGen& gen, std::size_t count,
                             const std::vector<double>& t_samples) {
  EstimateReport r;
  r.name = "grad_heat";
  for (std::size_t i = 0; i < count; ++i) {
    SpectralField g = gen(i);
    double base = besov_norm(g, gamma).value;
    require_nonzero(base, "grad_heat_fit");
    for (double t : t_samples) {
      double ratio = besov_norm(grad_heat(t, g), gamma + 2.0 * theta - 1.0).value / base;
      r.points.push_back({std::log(t), std::log(ratio)});
      r.c_max = std::max(r.c_max, std::pow(t, theta) * ratio);
    }
  }
  finish(r);
  return r;
}

double dc_stability_ratio(const AffinePeriodicField& h, double alpha, const std::vector<double>& s_samples) {
  double base = dc_norm(h, alpha);
  require_nonzero(base, "dc_stability_ratio");
  double worst = 0.0;
  for (double s : s_samples) worst = std::max(worst, dc_norm(apply_heat(s, h), alpha) / base);
  return worst;
}

EstimateReport dc_time_continuity_fit(const AffinePeriodicField& h, double alpha, double t,
                                      const std::vector<double>& eps_samples) {
  EstimateReport r;
  r.name = "dc_time_continuity";
  AffinePeriodicField pt = apply_heat(t, h);
  for (double e : eps_samples) {
    AffinePeriodicField diff = apply_heat(t + e, h) - pt;
    double v = dc_norm(diff, alpha);
    if (v <= 0.0) continue;
    r.points.push_back({std::log(e), std::log(v)});
  }
  finish(r);
  return r;
}

double trace_increment_ratio(const AffinePeriodicField& h, double t, const std::vector<double>& eps_samples) {
  const int d = h.grid().d();
  // E|W_e| for d-dimensional Brownian motion; sqrt(2 e / pi) when d = 1.
  const double mean_norm = std::sqrt(2.0) * std::tgamma(0.5 * (d + 1)) / std::tgamma(0.5 * d);
  double grad_sup = sup_norm_refined(gradient(h));
  double pt0 = evaluate_at(apply_heat(t, h), std::vector<double>(d, 0.0))[0];
  double worst = 0.0;
  for (double e : eps_samples) {
    double pe = evaluate_at(apply_heat(t + e, h), std::vector<double>(d, 0.0))[0];
    double bound = mean_norm * std::sqrt(e) * grad_sup;
    if (bound > 0.0) worst = std::max(worst, std::abs(pe - pt0) / bound);
  }
  return worst;
}

}  // namespace roughpde
