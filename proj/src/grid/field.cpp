#include <algorithm>
#include <cmath>

#include "grid/fft.hpp"
#include "roughpde/grid.hpp"

namespace roughpde {

namespace {

void symmetrize(const TorusGrid& g, int ncomp, std::vector<cplx>& c) {
  const std::size_t N = g.size();
  std::vector<cplx> tmp(N);
  for (int comp = 0; comp < ncomp; ++comp) {
    cplx* blk = c.data() + comp * N;
    for (std::size_t f = 0; f < N; ++f) tmp[f] = 0.5 * (blk[f] + std::conj(blk[g.conj_index(f)]));
    std::copy(tmp.begin(), tmp.end(), blk);
  }
}

std::vector<cplx> synthesize(const TorusGrid& g, int ncomp, const std::vector<cplx>& coeffs, bool real) {
  std::vector<cplx> s = coeffs;
  const std::size_t N = g.size();
  for (int c = 0; c < ncomp; ++c) detail::fft_inplace(s.data() + c * N, g.d(), g.n(), +1);
  if (real)
    for (auto& z : s) z = cplx(z.real(), 0.0);
  return s;
}

std::vector<cplx> analyze(const TorusGrid& g, int ncomp, const std::vector<cplx>& samples) {
  std::vector<cplx> c = samples;
  const std::size_t N = g.size();
  const double inv = 1.0 / static_cast<double>(N);
  for (int k = 0; k < ncomp; ++k) detail::fft_inplace(c.data() + k * N, g.d(), g.n(), -1);
  for (auto& z : c) z *= inv;
  return c;
}

void require_same(const SpectralField& a, const SpectralField& b) {
  if (a.grid() != b.grid()) throw ValidationError("fields live on different grids");
  if (a.ncomp() != b.ncomp())
    throw DimensionMismatch(-1, static_cast<std::size_t>(a.ncomp()), static_cast<std::size_t>(b.ncomp()));
}

}  // namespace

SpectralField SpectralField::zeros(const TorusGrid& grid, int ncomp) {
  SpectralField f;
  f.grid_ = grid;
  f.ncomp_ = ncomp;
  f.real_ = true;
  f.coeffs_.assign(grid.size() * ncomp, cplx(0.0));
  f.samples_.assign(grid.size() * ncomp, cplx(0.0));
  return f;
}

SpectralField SpectralField::constant(const TorusGrid& grid, const std::vector<double>& value) {
  return add_constant(zeros(grid, static_cast<int>(value.size())), value);
}

SpectralField SpectralField::from_samples(const TorusGrid& grid, int ncomp, std::vector<double> samples) {
  if (samples.size() != grid.size() * ncomp)
    throw DimensionMismatch(grid.d() - 1, grid.size() * ncomp, samples.size());
  SpectralField f;
  f.grid_ = grid;
  f.ncomp_ = ncomp;
  f.real_ = true;
  f.samples_.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) f.samples_[i] = cplx(samples[i], 0.0);
  f.coeffs_ = analyze(grid, ncomp, f.samples_);
  symmetrize(grid, ncomp, f.coeffs_);
  return f;
}

SpectralField SpectralField::from_complex_samples(const TorusGrid& grid, int ncomp, std::vector<cplx> samples) {
  if (samples.size() != grid.size() * ncomp)
    throw DimensionMismatch(grid.d() - 1, grid.size() * ncomp, samples.size());
  SpectralField f;
  f.grid_ = grid;
  f.ncomp_ = ncomp;
  f.real_ = false;
  f.samples_ = std::move(samples);
  f.coeffs_ = analyze(grid, ncomp, f.samples_);
  return f;
}

SpectralField SpectralField::from_coefficients(const TorusGrid& grid, int ncomp, std::vector<cplx> coeffs,
                                               bool real) {
  if (coeffs.size() != grid.size() * ncomp)
    throw DimensionMismatch(grid.d() - 1, grid.size() * ncomp, coeffs.size());
  SpectralField f;
  f.grid_ = grid;
  f.ncomp_ = ncomp;
  f.real_ = real;
  f.coeffs_ = std::move(coeffs);
  if (real) symmetrize(grid, ncomp, f.coeffs_);
  f.samples_ = synthesize(grid, ncomp, f.coeffs_, real);
  return f;
}

SpectralField SpectralField::from_function(const TorusGrid& grid, int ncomp,
                                           const std::function<void(const double*, double*)>& fn) {
  const std::size_t N = grid.size();
  std::vector<double> s(N * ncomp);
  std::vector<double> out(ncomp);
  int idx[3];
  double x[3] = {0, 0, 0};
  for (std::size_t f = 0; f < N; ++f) {
    grid.unflatten(f, idx);
    for (int a = 0; a < grid.d(); ++a) x[a] = grid.x(idx[a]);
    fn(x, out.data());
    for (int c = 0; c < ncomp; ++c) s[c * N + f] = out[c];
  }
  return from_samples(grid, ncomp, std::move(s));
}

SpectralField SpectralField::stack(const std::vector<SpectralField>& parts) {
  if (parts.empty()) throw ValidationError("cannot stack zero fields");
  SpectralField f;
  f.grid_ = parts.front().grid();
  f.real_ = true;
  for (const auto& p : parts) {
    if (p.grid() != f.grid_) throw ValidationError("stacked fields live on different grids");
    f.ncomp_ += p.ncomp_;
    f.real_ = f.real_ && p.real_;
    f.coeffs_.insert(f.coeffs_.end(), p.coeffs_.begin(), p.coeffs_.end());
    f.samples_.insert(f.samples_.end(), p.samples_.begin(), p.samples_.end());
  }
  return f;
}

SpectralField SpectralField::assemble(const TorusGrid& grid, int ncomp, std::vector<cplx> coeffs,
                                     std::vector<cplx> samples, bool real) {
  SpectralField f;
  f.grid_ = grid;
  f.ncomp_ = ncomp;
  f.real_ = real;
  f.coeffs_ = std::move(coeffs);
  f.samples_ = std::move(samples);
  return f;
}

std::vector<double> SpectralField::samples() const {
  std::vector<double> s(samples_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = samples_[i].real();
  return s;
}

SpectralField SpectralField::component(int c) const {
  if (c < 0 || c >= ncomp_) throw DimensionMismatch(-1, static_cast<std::size_t>(ncomp_), static_cast<std::size_t>(c));
  SpectralField f;
  f.grid_ = grid_;
  f.ncomp_ = 1;
  f.real_ = real_;
  f.coeffs_.assign(coeffs_.begin() + block(c), coeffs_.begin() + block(c + 1));
  f.samples_.assign(samples_.begin() + block(c), samples_.begin() + block(c + 1));
  return f;
}

AffinePeriodicField AffinePeriodicField::periodic(SpectralField p) {
  AffinePeriodicField f;
  f.slope.assign(static_cast<std::size_t>(p.ncomp()) * p.grid().d(), 0.0);
  f.p = std::move(p);
  return f;
}

AffinePeriodicField AffinePeriodicField::identity(const TorusGrid& grid) {
  AffinePeriodicField f = periodic(SpectralField::zeros(grid, grid.d()));
  for (int i = 0; i < grid.d(); ++i) f.slope[i * grid.d() + i] = 1.0;
  return f;
}

SpectralField to_fourier(const std::vector<double>& samples, const TorusGrid& grid, int ncomp) {
  return SpectralField::from_samples(grid, ncomp, samples);
}

SpectralField to_fourier(const std::vector<double>& samples, const std::vector<std::size_t>& shape,
                         const TorusGrid& grid, int ncomp) {
  const bool has_comp_axis = shape.size() == static_cast<std::size_t>(grid.d()) + 1;
  if (shape.size() != static_cast<std::size_t>(grid.d()) && !has_comp_axis)
    throw DimensionMismatch(static_cast<int>(std::min(shape.size(), static_cast<std::size_t>(grid.d()))),
                            static_cast<std::size_t>(grid.d()), shape.size());
  std::size_t off = 0;
  if (has_comp_axis) {
    if (shape[0] != static_cast<std::size_t>(ncomp))
      throw DimensionMismatch(-1, static_cast<std::size_t>(ncomp), shape[0]);
    off = 1;
  }
  for (int a = 0; a < grid.d(); ++a)
    if (shape[a + off] != static_cast<std::size_t>(grid.n()))
      throw DimensionMismatch(a, static_cast<std::size_t>(grid.n()), shape[a + off]);
  return SpectralField::from_samples(grid, ncomp, samples);
}

SpectralField gradient(const SpectralField& f) {
  const TorusGrid& g = f.grid();
  const int d = g.d();
  const int nc = f.ncomp();
  const std::size_t N = g.size();
  std::vector<cplx> out(N * nc * d);
  const double kk = g.k0();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < nc; ++j) {
      const cplx* src = f.coefficients(j);
      cplx* dst = out.data() + static_cast<std::size_t>(i * nc + j) * N;
      for (std::size_t m = 0; m < N; ++m) {
        int s = g.mode(m, i);
        dst[m] = (s == -g.n() / 2) ? cplx(0.0) : cplx(0.0, kk * s) * src[m];
      }
    }
  }
  return SpectralField::from_coefficients(g, nc * d, std::move(out), f.is_real());
}

SpectralField gradient(const AffinePeriodicField& f) {
  SpectralField gp = gradient(f.p);
  const int d = f.grid().d();
  const int nc = f.ncomp();
  std::vector<double> shift(static_cast<std::size_t>(nc) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < nc; ++j) shift[i * nc + j] = f.slope[j * d + i];
  return add_constant(gp, shift);
}

SpectralField laplacian(const SpectralField& f) {
  const TorusGrid& g = f.grid();
  std::vector<double> w(g.size());
  const double kk = g.k0();
  for (std::size_t m = 0; m < g.size(); ++m) {
    double s = 0.0;
    for (int a = 0; a < g.d(); ++a) {
      int q = g.mode(m, a);
      if (q != -g.n() / 2) s += kk * kk * q * q;
    }
    w[m] = -s;
  }
  return apply_multiplier(f, w);
}

SpectralField apply_multiplier(const SpectralField& f, const std::vector<double>& weights) {
  const std::size_t N = f.grid().size();
  if (weights.size() != N) throw DimensionMismatch(f.grid().d() - 1, N, weights.size());
  std::vector<cplx> c = f.coefficients();
  for (int k = 0; k < f.ncomp(); ++k)
    for (std::size_t m = 0; m < N; ++m) c[k * N + m] *= weights[m];
  return SpectralField::from_coefficients(f.grid(), f.ncomp(), std::move(c), f.is_real());
}

namespace {

SpectralField combine(const SpectralField& a, const SpectralField& b, double sb) {
  require_same(a, b);
  std::vector<cplx> c = a.coefficients();
  std::vector<cplx> s = a.complex_samples();
  const auto& cb = b.coefficients();
  const auto& sb2 = b.complex_samples();
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] += sb * cb[i];
    s[i] += sb * sb2[i];
  }
  return SpectralField::assemble(a.grid(), a.ncomp(), std::move(c), std::move(s), a.is_real() && b.is_real());
}

}  // namespace

SpectralField operator+(const SpectralField& a, const SpectralField& b) { return combine(a, b, 1.0); }
SpectralField operator-(const SpectralField& a, const SpectralField& b) { return combine(a, b, -1.0); }

SpectralField operator*(double s, const SpectralField& a) {
  std::vector<cplx> c = a.coefficients();
  std::vector<cplx> v = a.complex_samples();
  for (auto& z : c) z *= s;
  for (auto& z : v) z *= s;
  return SpectralField::assemble(a.grid(), a.ncomp(), std::move(c), std::move(v), a.is_real());
}

SpectralField add_constant(const SpectralField& f, const std::vector<double>& value) {
  if (value.size() != static_cast<std::size_t>(f.ncomp()))
    throw DimensionMismatch(-1, static_cast<std::size_t>(f.ncomp()), value.size());
  std::vector<cplx> c = f.coefficients();
  std::vector<cplx> s = f.complex_samples();
  const std::size_t N = f.grid().size();
  for (int k = 0; k < f.ncomp(); ++k) {
    c[k * N] += value[k];
    for (std::size_t m = 0; m < N; ++m) s[k * N + m] += value[k];
  }
  return SpectralField::assemble(f.grid(), f.ncomp(), std::move(c), std::move(s), f.is_real());
}

AffinePeriodicField operator+(const AffinePeriodicField& a, const AffinePeriodicField& b) {
  AffinePeriodicField r{a.slope, a.p + b.p};
  for (std::size_t i = 0; i < r.slope.size(); ++i) r.slope[i] += b.slope[i];
  return r;
}

AffinePeriodicField operator-(const AffinePeriodicField& a, const AffinePeriodicField& b) {
  AffinePeriodicField r{a.slope, a.p - b.p};
  for (std::size_t i = 0; i < r.slope.size(); ++i) r.slope[i] -= b.slope[i];
  return r;
}

AffinePeriodicField operator*(double s, const AffinePeriodicField& a) {
  AffinePeriodicField r{a.slope, s * a.p};
  for (auto& x : r.slope) x *= s;
  return r;
}

std::vector<cplx> padded_coefficients(const TorusGrid& g, const cplx* src, int factor, const double* weights) {
  const TorusGrid fine = g.refined(factor);
  const int d = g.d();
  const int n = g.n();
  const int nf = fine.n();
  std::vector<cplx> out(fine.size(), cplx(0.0));
  int idx[3];
  for (std::size_t m = 0; m < g.size(); ++m) {
    cplx v = weights ? src[m] * weights[m] : src[m];
    if (v == cplx(0.0)) continue;
    int nyq_axes[3];
    int q = 0;
    for (int a = 0; a < d; ++a) {
      int s = g.mode(m, a);
      if (s == -n / 2) nyq_axes[q++] = a;
      idx[a] = (s + nf) % nf;
    }
    if (q == 0) {
      out[fine.flatten(idx)] += v;
      continue;
    }
    const double w = std::ldexp(1.0, -q);
    for (int mask = 0; mask < (1 << q); ++mask) {
      int tidx[3] = {idx[0], idx[1], idx[2]};
      for (int b = 0; b < q; ++b) {
        int s = (mask >> b) & 1 ? n / 2 : -n / 2;
        tidx[nyq_axes[b]] = (s + nf) % nf;
      }
      out[fine.flatten(tidx)] += w * v;
    }
  }
  return out;
}

std::vector<cplx> padded_coefficients(const SpectralField& f, int c, int factor) {
  return padded_coefficients(f.grid(), f.coefficients(c), factor);
}

void inverse_transform(std::vector<cplx>& data, const TorusGrid& grid) {
  if (data.size() != grid.size()) throw DimensionMismatch(grid.d() - 1, grid.size(), data.size());
  detail::fft_inplace(data.data(), grid.d(), grid.n(), +1);
}

void forward_transform(std::vector<cplx>& data, const TorusGrid& grid) {
  if (data.size() != grid.size()) throw DimensionMismatch(grid.d() - 1, grid.size(), data.size());
  detail::fft_inplace(data.data(), grid.d(), grid.n(), -1);
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (auto& z : data) z *= inv;
}

std::vector<cplx> padded_samples(const SpectralField& f, int c, int factor) {
  std::vector<cplx> s = padded_coefficients(f, c, factor);
  detail::fft_inplace(s.data(), f.grid().d(), f.grid().n() * factor, +1);
  return s;
}

std::vector<cplx> truncate_samples(std::vector<cplx> fine_samples, const TorusGrid& fine, const TorusGrid& grid) {
  detail::fft_inplace(fine_samples.data(), fine.d(), fine.n(), -1);
  const double inv = 1.0 / static_cast<double>(fine.size());
  std::vector<cplx> out(grid.size(), cplx(0.0));
  int idx[3];
  const int nf = fine.n();
  for (std::size_t m = 0; m < grid.size(); ++m) {
    if (grid.nyquist(m)) continue;
    for (int a = 0; a < grid.d(); ++a) idx[a] = (grid.mode(m, a) + nf) % nf;
    out[m] = fine_samples[fine.flatten(idx)] * inv;
  }
  return out;
}

SpectralField product_dealiased(const SpectralField& f, const SpectralField& g) {
  if (f.grid() != g.grid()) throw ValidationError("fields live on different grids");
  int nc = std::max(f.ncomp(), g.ncomp());
  if (!(f.ncomp() == g.ncomp() || f.ncomp() == 1 || g.ncomp() == 1))
    throw DimensionMismatch(-1, static_cast<std::size_t>(f.ncomp()), static_cast<std::size_t>(g.ncomp()));
  const TorusGrid& grid = f.grid();
  const TorusGrid fine = grid.refined(2);
  std::vector<cplx> out;
  out.reserve(grid.size() * nc);
  for (int c = 0; c < nc; ++c) {
    auto a = padded_samples(f, f.ncomp() == 1 ? 0 : c, 2);
    auto b = padded_samples(g, g.ncomp() == 1 ? 0 : c, 2);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    auto t = truncate_samples(std::move(a), fine, grid);
    out.insert(out.end(), t.begin(), t.end());
  }
  return SpectralField::from_coefficients(grid, nc, std::move(out), f.is_real() && g.is_real());
}

SpectralField dot_dealiased(const SpectralField& w, const SpectralField& b) {
  require_same(w, b);
  const TorusGrid& grid = w.grid();
  const TorusGrid fine = grid.refined(2);
  std::vector<cplx> acc(fine.size(), cplx(0.0));
  for (int c = 0; c < w.ncomp(); ++c) {
    auto a = padded_samples(w, c, 2);
    auto bb = padded_samples(b, c, 2);
    for (std::size_t i = 0; i < a.size(); ++i) acc[i] += a[i] * bb[i];
  }
  return SpectralField::from_coefficients(grid, 1, truncate_samples(std::move(acc), fine, grid),
                                          w.is_real() && b.is_real());
}

double sup_norm(const SpectralField& f) {
  const std::size_t N = f.grid().size();
  const auto& s = f.complex_samples();
  double best = 0.0;
  for (std::size_t m = 0; m < N; ++m) {
    double acc = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) acc += std::norm(s[c * N + m]);
    best = std::max(best, acc);
  }
  return std::sqrt(best);
}

double sup_norm_refined(const SpectralField& f) {
  const std::size_t Nf = f.grid().refined(2).size();
  std::vector<double> acc(Nf, 0.0);
  for (int c = 0; c < f.ncomp(); ++c) {
    auto s = padded_samples(f, c, 2);
    for (std::size_t i = 0; i < Nf; ++i) acc[i] += std::norm(s[i]);
  }
  return std::sqrt(*std::max_element(acc.begin(), acc.end()));
}

double coefficient_energy(const SpectralField& f) {
  double e = 0.0;
  for (const auto& z : f.coefficients()) e += std::norm(z);
  return e;
}

std::vector<cplx> evaluate_at_complex(const SpectralField& f, const std::vector<double>& x) {
  const TorusGrid& g = f.grid();
  const int d = g.d();
  const int n = g.n();
  if (x.size() != static_cast<std::size_t>(d)) throw DimensionMismatch(-1, static_cast<std::size_t>(d), x.size());
  std::vector<std::vector<cplx>> tab(d, std::vector<cplx>(n));
  for (int a = 0; a < d; ++a)
    for (int m = 0; m < n; ++m) {
      int s = g.signed_index(m);
      double ph = g.k0() * s * x[a];
      tab[a][m] = (s == -n / 2) ? cplx(std::cos(ph), 0.0) : std::polar(1.0, ph);
    }
  std::vector<cplx> out(f.ncomp(), cplx(0.0));
  int idx[3];
  for (std::size_t m = 0; m < g.size(); ++m) {
    g.unflatten(m, idx);
    cplx e = tab[0][idx[0]];
    for (int a = 1; a < d; ++a) e *= tab[a][idx[a]];
    for (int c = 0; c < f.ncomp(); ++c) out[c] += f.coeff(c, m) * e;
  }
  return out;
}

std::vector<double> evaluate_at(const SpectralField& f, const std::vector<double>& x) {
  auto z = evaluate_at_complex(f, x);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

std::vector<double> evaluate_at(const AffinePeriodicField& f, const std::vector<double>& x) {
  std::vector<double> out = evaluate_at(f.p, x);
  const int d = f.grid().d();
  for (int c = 0; c < f.ncomp(); ++c)
    for (int a = 0; a < d; ++a) out[c] += f.slope[c * d + a] * x[a];
  return out;
}

cplx pairing(const SpectralField& phi, int cphi, const SpectralField& f, int cf) {
  if (phi.grid() != f.grid()) throw ValidationError("fields live on different grids");
  const std::size_t N = f.grid().size();
  const cplx* a = phi.coefficients(cphi);
  const cplx* b = f.coefficients(cf);
  cplx acc(0.0);
  for (std::size_t m = 0; m < N; ++m) acc += std::conj(a[m]) * b[m];
  return acc * std::pow(f.grid().L(), f.grid().d());
}

}  // namespace roughpde
