#include <cmath>

#include "roughpde/grid.hpp"

namespace roughpde {

TorusGrid::TorusGrid(int d, int n, double L) : d_(d), n_(n), L_(L) {
  if (d < 1 || d > 3) throw ValidationError("grid dimension must be 1, 2 or 3, got " + std::to_string(d));
  if (n < 8 || (n & (n - 1)) != 0)
    throw ValidationError("points per axis must be a power of two >= 8, got " + std::to_string(n));
  if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("period length must be positive");
  size_ = 1;
  for (int i = 0; i < d; ++i) size_ *= static_cast<std::size_t>(n);

  auto t = std::make_shared<Tables>();
  t->modes.resize(size_ * d);
  t->k2.resize(size_);
  t->radius.resize(size_);
  t->radius_sq.resize(size_);
  t->nyquist.resize(size_);
  t->conj.resize(size_);
  const double kk = k0();
  int idx[3] = {0, 0, 0};
  int cidx[3] = {0, 0, 0};
  for (std::size_t f = 0; f < size_; ++f) {
    unflatten(f, idx);
    int r2 = 0;
    bool nyq = false;
    for (int a = 0; a < d; ++a) {
      int s = signed_index(idx[a]);
      t->modes[f * d + a] = s;
      r2 += s * s;
      nyq = nyq || (s == -n / 2);
      cidx[a] = (n - idx[a]) % n;
    }
    t->radius_sq[f] = r2;
    t->radius[f] = std::sqrt(static_cast<double>(r2));
    t->k2[f] = kk * kk * r2;
    t->nyquist[f] = nyq ? 1 : 0;
    t->conj[f] = flatten(cidx);
  }
  tables_ = std::move(t);
}

std::size_t TorusGrid::flatten(const int* idx) const {
  std::size_t f = 0;
  for (int a = 0; a < d_; ++a) f = f * n_ + static_cast<std::size_t>(idx[a]);
  return f;
}

void TorusGrid::unflatten(std::size_t flat, int* idx) const {
  for (int a = d_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
}

std::vector<double> uniform_mesh(double T, std::size_t M) {
  if (M < 2) throw ValidationError("time mesh needs M >= 2");
  if (!(T > 0.0)) throw ValidationError("time horizon must be positive");
  std::vector<double> t(M + 1);
  for (std::size_t m = 0; m <= M; ++m) t[m] = T * static_cast<double>(m) / static_cast<double>(M);
  t[M] = T;
  return t;
}

}  // namespace roughpde
