#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "roughpde/littlewood_paley.hpp"

namespace roughpde {

namespace {

constexpr double kInner = 0.75;
constexpr double kOuter = 4.0 / 3.0;

double bump_integral(double u) {
  if (u <= 0.0) return 0.0;
  auto bump = [](double s) {
    double q = 4.0 * s * (1.0 - s);
    return q <= 0.0 ? 0.0 : std::exp(-1.0 / q);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(bump, 0.0, u, 12, 1e-15);
}

double bump_total() {
  static const double total = bump_integral(1.0);
  return total;
}

}  // namespace

double lp_cutoff(double r) {
  double u = (r - kInner) / (kOuter - kInner);
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  return bump_integral(1.0 - u) / bump_total();
}

DyadicPartition::DyadicPartition(const TorusGrid& grid) : grid_(grid) {
  double r_max = 0.0;
  std::map<int, std::size_t> distinct;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    r_max = std::max(r_max, grid.radius(m));
    distinct.emplace(grid.radius_sq(m), 0);
  }
  j_max_ = 0;
  while (kInner * std::ldexp(1.0, j_max_ + 1) < r_max) ++j_max_;

  // chi(r / 2^j) for j = 0 .. j_max + 1, tabulated per distinct |k|^2.
  std::vector<int> keys;
  for (auto& [r2, slot] : distinct) {
    slot = keys.size();
    keys.push_back(r2);
  }
  const int levels = j_max_ + 2;
  std::vector<double> chi(keys.size() * levels);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    double r = std::sqrt(static_cast<double>(keys[i]));
    for (int j = 0; j < levels; ++j) chi[i * levels + j] = lp_cutoff(std::ldexp(r, -j));
  }

  windows_.assign(num_blocks(), std::vector<double>(grid.size()));
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double* c = chi.data() + distinct[grid.radius_sq(m)] * levels;
    windows_[0][m] = c[0];
    for (int j = 0; j <= j_max_; ++j) windows_[j + 1][m] = c[j + 1] - c[j];
  }
}

std::shared_ptr<const DyadicPartition> DyadicPartition::for_grid(const TorusGrid& grid) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const DyadicPartition>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(grid.d(), grid.n(), grid.L());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto p = std::make_shared<const DyadicPartition>(grid);
  cache.emplace(key, p);
  return p;
}

SpectralField LPDecomposition::sum() const {
  if (blocks.empty()) throw ValidationError("empty decomposition");
  SpectralField s = blocks.front();
  for (std::size_t i = 1; i < blocks.size(); ++i) s = s + blocks[i];
  return s;
}

LPDecomposition lp_blocks(const SpectralField& f, const DyadicPartition& part) {
  if (f.grid() != part.grid()) throw ValidationError("field and partition live on different grids");
  LPDecomposition out;
  for (int j = -1; j <= part.j_max(); ++j) {
    out.index.push_back(j);
    out.blocks.push_back(apply_multiplier(f, part.window(j)));
  }
  return out;
}

}  // namespace roughpde
