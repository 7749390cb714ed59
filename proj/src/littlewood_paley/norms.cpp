#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <tuple>

#include "roughpde/littlewood_paley.hpp"

namespace roughpde {

std::vector<double> block_sup_norms(const SpectralField& f, const DyadicPartition& part) {
  if (f.grid() != part.grid()) throw ValidationError("field and partition live on different grids");
  const TorusGrid& g = f.grid();
  const TorusGrid fine = g.refined(2);
  std::vector<double> out;
  out.reserve(part.num_blocks());
  std::vector<double> acc(fine.size());
  for (int j = -1; j <= part.j_max(); ++j) {
    const auto& w = part.window(j);
    std::fill(acc.begin(), acc.end(), 0.0);
    bool any = false;
    for (int c = 0; c < f.ncomp(); ++c) {
      auto s = padded_coefficients(g, f.coefficients(c), 2, w.data());
      bool nz = std::any_of(s.begin(), s.end(), [](const cplx& z) { return z != cplx(0.0); });
      if (!nz) continue;
      any = true;
      inverse_transform(s, fine);
      for (std::size_t i = 0; i < s.size(); ++i) acc[i] += std::norm(s[i]);
    }
    out.push_back(any ? std::sqrt(*std::max_element(acc.begin(), acc.end())) : 0.0);
  }
  return out;
}

BesovNorm besov_norm(const SpectralField& f, double gamma, const DyadicPartition& part) {
  BesovNorm b;
  b.gamma = gamma;
  b.block_sup = block_sup_norms(f, part);
  b.ledger.resize(b.block_sup.size());
  for (std::size_t i = 0; i < b.block_sup.size(); ++i) {
    int j = static_cast<int>(i) - 1;
    b.ledger[i] = std::exp2(j * gamma) * b.block_sup[i];
  }
  b.value = *std::max_element(b.ledger.begin(), b.ledger.end());
  return b;
}

BesovNorm besov_norm(const SpectralField& f, double gamma) {
  return besov_norm(f, gamma, *DyadicPartition::for_grid(f.grid()));
}

std::vector<std::vector<int>> holder_offsets(const TorusGrid& grid) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(grid.d(), grid.n(), grid.L());
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const int n = grid.n();
  const double dx = grid.dx();
  int S = 0;
  while (S + 1 <= n / 2 && (S + 1) * dx < 1.0) ++S;
  std::set<int> axis;
  if (S <= 64) {
    for (int s = 1; s <= S; ++s) axis.insert(s);
  } else {
    for (int s = 1; s <= S; s *= 2) axis.insert(s);
    for (double s = 1.0; s <= S; s *= std::pow(2.0, 0.25)) axis.insert(static_cast<int>(std::lround(s)));
    axis.insert(S);
  }
  std::vector<std::vector<int>> offs;
  for (int a = 0; a < grid.d(); ++a)
    for (int s : axis) {
      std::vector<int> v(grid.d(), 0);
      v[a] = s;
      offs.push_back(v);
    }
  if (grid.d() > 1 && S > 0) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(n));
    std::uniform_int_distribution<int> pick(-S, S);
    int found = 0;
    for (int tries = 0; found < 64 && tries < 100000; ++tries) {
      std::vector<int> v(grid.d());
      double r2 = 0.0;
      int nz = 0;
      for (int a = 0; a < grid.d(); ++a) {
        v[a] = pick(rng);
        r2 += double(v[a]) * v[a];
        nz += v[a] != 0;
      }
      if (nz < 2 || std::sqrt(r2) * dx >= 1.0) continue;
      offs.push_back(v);
      ++found;
    }
  }
  cache.emplace(key, offs);
  return offs;
}

double holder_seminorm(const SpectralField& f, double exponent) {
  const TorusGrid& g = f.grid();
  const int d = g.d();
  const int n = g.n();
  const std::size_t N = g.size();
  const auto& s = f.complex_samples();
  double best = 0.0;
  int idx[3], jdx[3];
  for (const auto& h : holder_offsets(g)) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += double(h[a]) * h[a];
    const double dist = std::sqrt(r2) * g.dx();
    double local = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
      g.unflatten(m, idx);
      for (int a = 0; a < d; ++a) jdx[a] = ((idx[a] + h[a]) % n + n) % n;
      std::size_t q = g.flatten(jdx);
      double acc = 0.0;
      for (int c = 0; c < f.ncomp(); ++c) acc += std::norm(s[c * N + q] - s[c * N + m]);
      local = std::max(local, acc);
    }
    best = std::max(best, std::sqrt(local) / std::pow(dist, exponent));
  }
  return best;
}

double holder_norm(const SpectralField& f, double gamma) {
  if (gamma > 0.0 && gamma < 1.0) return sup_norm(f) + holder_seminorm(f, gamma);
  if (gamma > 1.0 && gamma < 2.0) {
    SpectralField gf = gradient(f);
    return sup_norm(f) + sup_norm(gf) + holder_seminorm(gf, gamma - 1.0);
  }
  throw ValidationError("Holder exponent must lie in (0,1) or (1,2)");
}

double dc_norm(const AffinePeriodicField& f, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("D-norm exponent must lie in (0,1)");
  double at0 = 0.0;
  for (int c = 0; c < f.ncomp(); ++c) at0 += std::norm(f.p.complex_samples()[c * f.grid().size()]);
  return std::sqrt(at0) + besov_norm(gradient(f), alpha).value;
}

double c1plus_norm(const SpectralField& f, double alpha) {
  return sup_norm_refined(f) + besov_norm(gradient(f), alpha).value;
}

double c1plus_norm(const AffinePeriodicField& f, double alpha) {
  for (double a : f.slope)
    if (a != 0.0) throw ValidationError("bounded norm requested for a field with linear growth");
  return c1plus_norm(f.p, alpha);
}

std::string NormSpec::name() const {
  switch (kind) {
    case NormKind::Besov: return "besov";
    case NormKind::Holder: return "holder";
    case NormKind::DC: return "dc";
    case NormKind::C1Plus: return "c1plus";
  }
  return "unknown";
}

double slice_norm(const SpectralField& f, const NormSpec& spec) {
  switch (spec.kind) {
    case NormKind::Besov: return besov_norm(f, spec.exponent).value;
    case NormKind::Holder: return holder_norm(f, spec.exponent);
    case NormKind::DC: return dc_norm(AffinePeriodicField::periodic(f), spec.exponent);
    case NormKind::C1Plus: return c1plus_norm(f, spec.exponent);
  }
  return 0.0;
}

double slice_norm(const AffinePeriodicField& f, const NormSpec& spec) {
  switch (spec.kind) {
    case NormKind::DC: return dc_norm(f, spec.exponent);
    case NormKind::C1Plus: return c1plus_norm(f, spec.exponent);
    default:
      for (double a : f.slope)
        if (a != 0.0) throw ValidationError(spec.name() + " norm needs a bounded field");
      return slice_norm(f.p, spec);
  }
}

double rho_weighted_max(const std::vector<double>& times, const std::vector<double>& norms, double rho) {
  if (times.size() != norms.size()) throw DimensionMismatch(-1, times.size(), norms.size());
  const double T = times.back();
  double best = 0.0;
  for (std::size_t m = 0; m < times.size(); ++m)
    best = std::max(best, rho == 0.0 ? norms[m] : std::exp(-rho * (T - times[m])) * norms[m]);
  return best;
}

double log_rho_weighted_max(const std::vector<double>& times, const std::vector<double>& norms, double rho) {
  if (times.size() != norms.size()) throw DimensionMismatch(-1, times.size(), norms.size());
  const double T = times.back();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < times.size(); ++m)
    if (norms[m] > 0.0) best = std::max(best, -rho * (T - times[m]) + std::log(norms[m]));
  return best;
}

}  // namespace roughpde
