#include "roughpde/random_field.hpp"

#include <cmath>
#include <random>

namespace roughpde {

namespace {

int shell_of(double r) { return r < 1.0 ? -1 : static_cast<int>(std::floor(std::log2(r) + 1e-12)); }

}  // namespace

SpectralField random_dyadic_field(const TorusGrid& grid, double gamma, std::uint64_t seed, int ncomp,
                                  double amplitude, int max_shell) {
  const std::size_t N = grid.size();
  int top = -1;
  for (std::size_t m = 0; m < N; ++m)
    if (!grid.nyquist(m)) top = std::max(top, shell_of(grid.radius(m)));
  if (max_shell >= 0) top = std::min(top, max_shell);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);

  std::vector<cplx> all;
  all.reserve(N * ncomp);
  for (int c = 0; c < ncomp; ++c) {
    std::vector<cplx> comp(N, cplx(0.0));
    comp[0] = amplitude * std::exp2(gamma) * unit(rng);
    for (int j = 0; j <= top; ++j) {
      std::vector<cplx> shell(N, cplx(0.0));
      bool any = false;
      for (std::size_t m = 0; m < N; ++m) {
        if (grid.nyquist(m) || shell_of(grid.radius(m)) != j) continue;
        std::size_t mc = grid.conj_index(m);
        if (mc < m) continue;
        double th = phase(rng);
        shell[m] = std::polar(1.0, th);
        shell[mc] = std::conj(shell[m]);
        any = true;
      }
      if (!any) continue;
      SpectralField s = SpectralField::from_coefficients(grid, 1, shell, true);
      double scale = amplitude * std::exp2(-j * gamma) / sup_norm_refined(s);
      for (std::size_t m = 0; m < N; ++m) comp[m] += scale * s.coeff(0, m);
    }
    all.insert(all.end(), comp.begin(), comp.end());
  }
  return SpectralField::from_coefficients(grid, ncomp, std::move(all), true);
}

}  // namespace roughpde
