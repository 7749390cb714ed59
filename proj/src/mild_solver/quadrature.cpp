#include "mild_solver/quadrature.hpp"

#include <cmath>

namespace roughpde::detail {

double phi1(double z) {
  if (std::abs(z) < 0.1) {
    // sum (-z)^n / (n+1)!
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 12; ++n) {
      term *= -z / (n + 1);
      sum += term;
    }
    return sum;
  }
  return -std::expm1(-z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.1) {
    // sum (-z)^n / (n! (n+2))
    double fact = 1.0, sum = 0.5;
    for (int n = 1; n < 12; ++n) {
      fact *= -z / n;
      sum += fact / (n + 2);
    }
    return sum;
  }
  double e = std::exp(-z);
  return (-std::expm1(-z) - z * e) / (z * z);
}

ExpLinearWeights exp_linear_weights(double mu, double dt) {
  double z = mu * dt;
  double p1 = phi1(z), p2 = phi2(z);
  return {std::exp(-z), dt * (p1 - p2), dt * p2};
}

ExpQuadraticWeights exp_quadratic_weights(double mu, double dt) {
  const double z = mu * dt;
  // J_p = int_0^2 e^{-z u} u^p du.
  double J[3];
  if (z < 1.0) {
    for (int p = 0; p < 3; ++p) {
      double term = 1.0, sum = 0.0, pw = std::pow(2.0, p + 1);
      for (int n = 0; n < 40; ++n) {
        sum += term * pw / (n + p + 1);
        term *= -2.0 * z / (n + 1);
      }
      J[p] = sum;
    }
  } else {
    const double e2 = std::exp(-2.0 * z);
    J[0] = -std::expm1(-2.0 * z) / z;
    J[1] = (J[0] - 2.0 * e2) / z;
    J[2] = (2.0 * J[1] - 4.0 * e2) / z;
  }
  return {std::exp(-2.0 * z), dt * (J[2] - 3.0 * J[1] + 2.0 * J[0]) / 2.0, dt * (2.0 * J[1] - J[2]),
          dt * (J[2] - J[1]) / 2.0};
}

double kappa(double z) {
  if (std::abs(z) < 0.1) {
    double z2 = z * z;
    return 0.5 + z / 12.0 - z * z2 / 720.0 + z * z2 * z2 / 30240.0;
  }
  return 1.0 / (-std::expm1(-z)) - 1.0 / z;
}

double pair_weight(double z) {
  if (std::abs(z) < 0.1) {
    double z2 = z * z;
    return 1.0 / 3.0 - z2 / 90.0 + z2 * z2 / 2520.0 - z2 * z2 * z2 / 75600.0;
  }
  double e = std::exp(-z);
  double den = std::expm1(-z);
  return (-std::expm1(-2.0 * z) / z - 2.0 * e) / (den * den);
}

}  // namespace roughpde::detail
