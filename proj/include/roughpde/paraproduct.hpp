#pragma once

#include <cstdint>

#include "roughpde/grid.hpp"
#include "roughpde/littlewood_paley.hpp"

namespace roughpde {

// f g = T_f g + T_g f + R(f, g) with T_f g = sum_j S_{j-2} f Delta_j g and
// R collecting block pairs with |j - j'| <= 1. Products are formed on the 2x grid.
struct BonyProduct {
  SpectralField Tfg;
  SpectralField Tgf;
  SpectralField R;
  SpectralField total;
  // Set when alpha - beta <= 0 or an exponent is nonpositive; the terms are still computed.
  bool hypothesis_violated = false;
};

BonyProduct bony_product(const SpectralField& f, double alpha, const SpectralField& g, double beta);

// sum_i w_i b_i, equal to the sum of the Bony totals over components.
SpectralField drift_term(const SpectralField& w, const SpectralField& b, double alpha, double beta);

// ||f g||_{-beta} / (||f||_alpha ||g||_{-beta}).
double bony_ratio(const SpectralField& f, double alpha, const SpectralField& g, double beta);

// Max bony_ratio over `pairs` random dyadic pairs (f in C^alpha seed + 2i, g in C^{-beta} seed + 2i + 1).
double bony_max_ratio(const TorusGrid& grid, double alpha, double beta, std::uint64_t seed, std::size_t pairs);

}  // namespace roughpde
