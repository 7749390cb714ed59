#include <cmath>

#include "roughpde/heat.hpp"

namespace roughpde {

HeatMultiplier::HeatMultiplier(const TorusGrid& g, double t_) : t(t_), grid(g), weights(g.size()) {
  if (t_ < 0.0) throw ValidationError("heat time must be nonnegative");
  for (std::size_t m = 0; m < g.size(); ++m) weights[m] = std::exp(-0.5 * t_ * g.k2(m));
}

SpectralField apply_heat(double t, const SpectralField& f) {
  if (t < 0.0) throw ValidationError("heat time must be nonnegative");
  if (t == 0.0) return f;
  return apply_multiplier(f, HeatMultiplier(f.grid(), t).weights);
}

AffinePeriodicField apply_heat(double t, const AffinePeriodicField& f) {
  return AffinePeriodicField{f.slope, apply_heat(t, f.p)};
}

SpectralField grad_heat(double t, const SpectralField& g) {
  if (!(t > 0.0)) throw ValidationError("grad_heat needs t > 0");
  return gradient(apply_heat(t, g));
}

double grad_heat_commutator(double t, const SpectralField& g) {
  auto a = grad_heat(t, g);
  auto b = apply_heat(t, gradient(g));
  return sup_norm(a - b);
}

}  // namespace roughpde
