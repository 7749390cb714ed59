#include "roughpde/paraproduct.hpp"
#include "roughpde/random_field.hpp"

namespace roughpde {

namespace {

std::vector<std::vector<cplx>> fine_blocks(const SpectralField& f, const DyadicPartition& part) {
  const TorusGrid fine = f.grid().refined(2);
  std::vector<std::vector<cplx>> out;
  out.reserve(part.num_blocks());
  for (int j = -1; j <= part.j_max(); ++j) {
    auto s = padded_coefficients(f.grid(), f.coefficients(0), 2, part.window(j).data());
    inverse_transform(s, fine);
    out.push_back(std::move(s));
  }
  return out;
}

SpectralField back_to_grid(std::vector<cplx> fine_samples, const TorusGrid& grid, bool real) {
  return SpectralField::from_coefficients(grid, 1, truncate_samples(std::move(fine_samples), grid.refined(2), grid),
                                          real);
}

}  // namespace

BonyProduct bony_product(const SpectralField& f, double alpha, const SpectralField& g, double beta) {
  if (f.grid() != g.grid()) throw ValidationError("Bony product of fields on different grids");
  if (f.ncomp() != 1 || g.ncomp() != 1)
    throw DimensionMismatch(-1, 1, static_cast<std::size_t>(f.ncomp() != 1 ? f.ncomp() : g.ncomp()));
  const TorusGrid& grid = f.grid();
  const auto& part = *DyadicPartition::for_grid(grid);
  const std::size_t Nf = grid.refined(2).size();
  auto F = fine_blocks(f, part);
  auto G = fine_blocks(g, part);
  const int nb = part.num_blocks();

  std::vector<cplx> tfg(Nf, cplx(0.0)), tgf(Nf, cplx(0.0)), res(Nf, cplx(0.0));
  std::vector<cplx> Sf(Nf, cplx(0.0)), Sg(Nf, cplx(0.0));
  // Block index b = j + 1; S_{j-2} covers b' <= b - 2.
  for (int b = 0; b < nb; ++b) {
    if (b >= 2) {
      for (std::size_t i = 0; i < Nf; ++i) {
        Sf[i] += F[b - 2][i];
        Sg[i] += G[b - 2][i];
      }
      for (std::size_t i = 0; i < Nf; ++i) {
        tfg[i] += Sf[i] * G[b][i];
        tgf[i] += Sg[i] * F[b][i];
      }
    }
    for (int c = std::max(0, b - 1); c <= std::min(nb - 1, b + 1); ++c)
      for (std::size_t i = 0; i < Nf; ++i) res[i] += F[b][i] * G[c][i];
  }
  const bool real = f.is_real() && g.is_real();
  BonyProduct out;
  out.Tfg = back_to_grid(std::move(tfg), grid, real);
  out.Tgf = back_to_grid(std::move(tgf), grid, real);
  out.R = back_to_grid(std::move(res), grid, real);
  out.total = out.Tfg + out.Tgf + out.R;
  out.hypothesis_violated = !(alpha > 0.0 && beta > 0.0 && alpha - beta > 0.0);
  return out;
}

SpectralField drift_term(const SpectralField& w, const SpectralField& b, double, double) {
  if (w.ncomp() != b.ncomp())
    throw DimensionMismatch(-1, static_cast<std::size_t>(b.ncomp()), static_cast<std::size_t>(w.ncomp()));
  return dot_dealiased(w, b);
}

double bony_ratio(const SpectralField& f, double alpha, const SpectralField& g, double beta) {
  double den = besov_norm(f, alpha).value * besov_norm(g, -beta).value;
  if (!(den > 0.0)) return 0.0;
  return besov_norm(product_dealiased(f, g), -beta).value / den;
}

double bony_max_ratio(const TorusGrid& grid, double alpha, double beta, std::uint64_t seed, std::size_t pairs) {
  double best = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    auto f = random_dyadic_field(grid, alpha, seed + 2 * i);
    auto h = random_dyadic_field(grid, -beta, seed + 2 * i + 1);
    best = std::max(best, bony_ratio(f, alpha, h, beta));
  }
  return best;
}

}  // namespace roughpde
