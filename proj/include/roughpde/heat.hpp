#pragma once

#include <functional>
#include <string>
#include <vector>

#include "roughpde/grid.hpp"
#include "roughpde/littlewood_paley.hpp"

namespace roughpde {

// Per-mode weights exp(-t |k|^2 / 2).
struct HeatMultiplier {
  double t = 0.0;
  TorusGrid grid;
  std::vector<double> weights;

  HeatMultiplier(const TorusGrid& grid, double t);
};

SpectralField apply_heat(double t, const SpectralField& f);
// The slope is untouched: the linear part is harmonic.
AffinePeriodicField apply_heat(double t, const AffinePeriodicField& f);

// grad P_t g computed as grad(P_t g); the commuted path P_t(grad g) is checked against it.
SpectralField grad_heat(double t, const SpectralField& g);
// Max discrepancy between the two orders.
double grad_heat_commutator(double t, const SpectralField& g);

struct FitPoint {
  double x = 0.0;
  double y = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};
LineFit fit_line(const std::vector<FitPoint>& pts);

struct EstimateReport {
  std::string name;
  double slope = 0.0;
  // exp(intercept) of the log-log fit.
  double constant = 0.0;
  // Largest normalized ratio seen, the calibrated worst case.
  double c_max = 0.0;
  std::size_t sample_count = 0;
  double residual = 0.0;
  // (log t, log ratio) pairs.
  std::vector<FitPoint> points;
};

using FieldGen = std::function<SpectralField(std::size_t)>;

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

// log ||P_t f||_{gamma+2 theta} / ||f||_gamma against log t; c_max = max t^theta * ratio.
EstimateReport schauder_fit(double gamma, double theta, const FieldGen& gen, std::size_t count,
                            const std::vector<double>& t_samples);
// log ||P_t f - f||_gamma / ||f||_{gamma+2 theta} against log t; c_max = max t^{-theta} * ratio.
EstimateReport heat_increment_fit(double gamma, double theta, const FieldGen& gen, std::size_t count,
                                  const std::vector<double>& t_samples);
// max ||grad g||_gamma / ||g||_{gamma+1}.
EstimateReport bernstein_check(double gamma, const FieldGen& gen, std::size_t count);
// log ||grad P_t g||_{gamma+2 theta-1} / ||g||_gamma against log t.
EstimateReport grad_heat_fit(double gamma, double theta, const FieldGen& gen, std::size_t count,
                             const std::vector<double>& t_samples);

// max over s of dc_norm(P_s h) / dc_norm(h).
double dc_stability_ratio(const AffinePeriodicField& h, double alpha, const std::vector<double>& s_samples);

// Time continuity in the D-norm: ||P_{t+e} h - P_t h||_{D alpha} against e.
EstimateReport dc_time_continuity_fit(const AffinePeriodicField& h, double alpha, double t,
                                      const std::vector<double>& eps_samples);
// max over e of |P_{t+e} h(0) - P_t h(0)| / (sqrt(2/pi) e^{1/2} sup|grad h|); bound holds when <= 1.
double trace_increment_ratio(const AffinePeriodicField& h, double t, const std::vector<double>& eps_samples);

}  // namespace roughpde
