#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "roughpde/grid.hpp"

namespace roughpde {

// Smooth radial cutoff: 1 on [0, 3/4], 0 on [4/3, inf).
double lp_cutoff(double r);

// Windows phi_{-1}(r) = chi(r), phi_j(r) = chi(r / 2^{j+1}) - chi(r / 2^j), r = |k| L / (2 pi).
class DyadicPartition {
 public:
  explicit DyadicPartition(const TorusGrid& grid);
  // Shared instance per grid.
  static std::shared_ptr<const DyadicPartition> for_grid(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  int j_max() const { return j_max_; }
  int num_blocks() const { return j_max_ + 2; }
  // j ranges over -1 .. j_max.
  const std::vector<double>& window(int j) const { return windows_.at(j + 1); }

 private:
  TorusGrid grid_;
  int j_max_ = 0;
  std::vector<std::vector<double>> windows_;
};

struct LPDecomposition {
  std::vector<int> index;
  std::vector<SpectralField> blocks;
  SpectralField sum() const;
};

LPDecomposition lp_blocks(const SpectralField& f, const DyadicPartition& part);

struct BesovNorm {
  double gamma = 0.0;
  double value = 0.0;
  // ledger[j + 1] = 2^{j gamma} sup |Delta_j f| for j = -1 .. j_max.
  std::vector<double> ledger;
  std::vector<double> block_sup;
};

// Block sup-norms are taken on the 2x refined grid.
BesovNorm besov_norm(const SpectralField& f, double gamma, const DyadicPartition& part);
BesovNorm besov_norm(const SpectralField& f, double gamma);
std::vector<double> block_sup_norms(const SpectralField& f, const DyadicPartition& part);

// gamma in (0,1): sup + Holder seminorm over pairs with |x - y| < 1.
// gamma in (1,2): sup|f| + sup|grad f| + (gamma - 1)-seminorm of grad f.
double holder_norm(const SpectralField& f, double gamma);
double holder_seminorm(const SpectralField& f, double exponent);

// Integer offset vectors used for the Holder pair sampling on this grid.
std::vector<std::vector<int>> holder_offsets(const TorusGrid& grid);

// |f(0)| + || grad f ||_alpha.
double dc_norm(const AffinePeriodicField& f, double alpha);
// sup |f| + || grad f ||_alpha on bounded (zero slope) fields.
double c1plus_norm(const SpectralField& f, double alpha);
double c1plus_norm(const AffinePeriodicField& f, double alpha);

enum class NormKind { Besov, Holder, DC, C1Plus };

struct NormSpec {
  NormKind kind = NormKind::Besov;
  double exponent = 0.0;
  std::string name() const;
};

double slice_norm(const SpectralField& f, const NormSpec& spec);
double slice_norm(const AffinePeriodicField& f, const NormSpec& spec);

// max_m e^{-rho (T - t_m)} norms[m].
double rho_weighted_max(const std::vector<double>& times, const std::vector<double>& norms, double rho);
// log of the above, robust for very large rho; -inf when every norm vanishes.
double log_rho_weighted_max(const std::vector<double>& times, const std::vector<double>& norms, double rho);

template <class Slice>
std::vector<double> slice_norms(const TimeField<Slice>& v, const NormSpec& spec) {
  std::vector<double> out;
  out.reserve(v.slices.size());
  for (const auto& s : v.slices) out.push_back(slice_norm(s, spec));
  return out;
}

template <class Slice>
double rho_time_norm(const TimeField<Slice>& v, double rho, const NormSpec& spec) {
  if (rho < 0.0) throw ValidationError("rho must be nonnegative");
  return rho_weighted_max(v.times, slice_norms(v, spec), rho);
}

}  // namespace roughpde
