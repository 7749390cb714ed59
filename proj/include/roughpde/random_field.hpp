#pragma once

#include <cstdint>

#include "roughpde/grid.hpp"

namespace roughpde {

// Random real field whose dyadic shell j (2^j <= |k| L / 2pi < 2^{j+1}) has
// refined-grid sup equal to amplitude * 2^{-j gamma}; the mean is
// amplitude * 2^{gamma} * u with u uniform in [-1, 1]. Phases are uniform,
// Nyquist modes are left empty. max_shell < 0 keeps every shell.
SpectralField random_dyadic_field(const TorusGrid& grid, double gamma, std::uint64_t seed, int ncomp = 1,
                                  double amplitude = 1.0, int max_shell = -1);

// Deterministic family: field i uses seed base_seed + i.
struct RandomFieldGenerator {
  TorusGrid grid;
  double gamma = 0.0;
  std::uint64_t base_seed = 1;
  int ncomp = 1;
  double amplitude = 1.0;
  int max_shell = -1;

  SpectralField operator()(std::size_t i) const {
    return random_dyadic_field(grid, gamma, base_seed + i, ncomp, amplitude, max_shell);
  }
};

}  // namespace roughpde
