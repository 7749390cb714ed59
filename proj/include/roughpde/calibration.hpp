#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "roughpde/grid.hpp"

namespace roughpde {

// What to measure; every constant is a max over seeded random fields.
struct CalibrationPlan {
  TorusGrid grid;
  std::uint64_t seed = 1;
  std::size_t fields = 32;
  std::size_t bony_pairs = 64;
  double T = 1.0;
  std::vector<std::pair<double, double>> schauder;     // (gamma, theta)
  std::vector<std::pair<double, double>> bony;         // (alpha, beta)
  std::vector<double> bernstein;                       // gamma
  std::vector<std::pair<double, double>> convolution;  // (alpha, beta)

  // Everything select_rho and lambda_threshold need for these exponents.
  static CalibrationPlan for_exponents(const TorusGrid& grid, double beta, double epsilon, double alpha,
                                       std::uint64_t seed = 1, double T = 1.0);
};

struct Calibration {
  int d = 0;
  int n = 0;
  double L = 0.0;
  std::uint64_t seed = 0;
  std::size_t fields = 0;
  std::size_t bony_pairs = 0;
  double T = 0.0;
  std::map<std::string, double> schauder;
  std::map<std::string, double> bony;
  std::map<std::string, double> bernstein_ineq;
  std::map<std::string, double> convolution;

  static std::string key(double a);
  static std::string key(double a, double b);

  double schauder_c(double gamma, double theta) const;
  double bony_c(double alpha, double beta) const;
  double bernstein_c(double gamma) const;
  double convolution_c(double alpha, double beta) const;

  // Constant of the contraction estimate in the rho-weighted norm.
  double c_rho(double alpha, double beta) const;
  // Constant c of C(beta, eps) = 3 c Gamma(1 - theta).
  double c_lambda(double beta, double epsilon) const;

  std::string to_json() const;
  static Calibration from_json(const std::string& text);
  void save(const std::string& path) const;
  static Calibration load(const std::string& path);
};

// ||G l||_{C^{1+alpha}} / (||l||_{-beta} rho^{(alpha+beta-1)/2}) with
// G = int_0^tau e^{-rho s} P_s ds, applied mode-wise in closed form.
double convolution_ratio(const SpectralField& l, double alpha, double beta, double rho, double tau);

Calibration calibrate(const CalibrationPlan& plan);

}  // namespace roughpde
