#pragma once

// Per-mode weights for exponentially fitted time quadrature, z = mu * dt.

namespace roughpde::detail {

// (1 - e^{-z}) / z.
double phi1(double z);
// (1 - e^{-z} - z e^{-z}) / z^2 = int_0^1 e^{-z u} u du.
double phi2(double z);

// int_0^dt e^{-mu s} h(s) ds = w0 h(0) + w1 h(dt) for linear h.
struct ExpLinearWeights {
  double decay;  // e^{-z}
  double w0;
  double w1;
};
ExpLinearWeights exp_linear_weights(double mu, double dt);

// int_0^{2 dt} e^{-mu s} h(s) ds = W0 h(0) + W1 h(dt) + W2 h(2 dt) for quadratic h.
struct ExpQuadraticWeights {
  double decay2;  // e^{-2z}
  double W0;
  double W1;
  double W2;
};
ExpQuadraticWeights exp_quadratic_weights(double mu, double dt);

// Two-node rule int over a cell of X = dt [(1 - kappa) X_right + kappa X_left],
// exact for constants and e^{mu s}.
double kappa(double z);

// Three-node rule over two cells, dt [w X_0 + (2 - 2w) X_1 + w X_2], exact for 1, s, e^{mu s}.
double pair_weight(double z);

}  // namespace roughpde::detail
