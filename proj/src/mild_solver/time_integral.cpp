#include <cmath>

#include "mild_solver/quadrature.hpp"
#include "roughpde/mild_solver.hpp"

namespace roughpde {

ScalarPath duhamel_integral(const ScalarPath& h, double lam, QuadratureRule rule) {
  validate_time_field(h);
  if (lam < 0.0) throw ValidationError("kernel rate must be nonnegative");
  const auto& g = h.slices.front().grid();
  const int nc = h.slices.front().ncomp();
  const std::size_t N = g.size(), M = h.M();
  const double dt = h.dt();
  bool real = true;
  for (const auto& s : h.slices) real = real && s.is_real();

  std::vector<std::vector<cplx>> I(M + 1, std::vector<cplx>(nc * N, cplx(0.0)));
  for (std::size_t k = 0; k < N; ++k) {
    const double mu = lam + 0.5 * g.k2(k);
    if (rule == QuadratureRule::Exponential) {
      auto w = detail::exp_linear_weights(mu, dt);
      for (int c = 0; c < nc; ++c) {
        const std::size_t i = c * N + k;
        for (std::size_t m = M; m-- > 0;)
          I[m][i] = w.decay * I[m + 1][i] + w.w0 * h.slices[m].coeff(c, k) + w.w1 * h.slices[m + 1].coeff(c, k);
      }
    } else {
      const double E = std::exp(-mu * dt), Eh = std::exp(-0.5 * mu * dt);
      double near_w[4], near_s[4];
      for (int q = 0; q < 4; ++q) {
        near_s[q] = (q + 0.5) / 4.0;
        near_w[q] = 0.25 * dt * std::exp(-mu * near_s[q] * dt);
      }
      for (int c = 0; c < nc; ++c) {
        const std::size_t i = c * N + k;
        cplx far = 0.0;
        for (std::size_t m = M; m-- > 0;) {
          if (m + 1 < M) {
            cplx mid = 0.5 * (h.slices[m + 1].coeff(c, k) + h.slices[m + 2].coeff(c, k));
            far = E * (far + dt * Eh * mid);
          }
          cplx a = h.slices[m].coeff(c, k), b = h.slices[m + 1].coeff(c, k);
          cplx nearv = 0.0;
          for (int q = 0; q < 4; ++q) nearv += near_w[q] * ((1.0 - near_s[q]) * a + near_s[q] * b);
          I[m][i] = nearv + far;
        }
      }
    }
  }

  ScalarPath out;
  out.times = h.times;
  out.slices.reserve(M + 1);
  for (auto& c : I) out.slices.push_back(SpectralField::from_coefficients(g, nc, std::move(c), real));
  return out;
}

}  // namespace roughpde
