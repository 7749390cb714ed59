#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "roughpde/errors.hpp"

namespace roughpde {

using cplx = std::complex<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform periodic grid [0, L)^d with n points per axis.
class TorusGrid {
 public:
  TorusGrid() = default;
  TorusGrid(int d, int n, double L = kTwoPi);

  int d() const { return d_; }
  int n() const { return n_; }
  double L() const { return L_; }
  std::size_t size() const { return size_; }
  double dx() const { return L_ / n_; }
  // Fundamental wavenumber 2*pi/L.
  double k0() const { return kTwoPi / L_; }

  int signed_index(int m) const { return m < n_ / 2 ? m : m - n_; }
  std::size_t flatten(const int* idx) const;
  void unflatten(std::size_t flat, int* idx) const;

  // Per-mode tables, flat row-major order.
  // mode(flat, axis) is the signed integer frequency on that axis.
  int mode(std::size_t flat, int axis) const { return tables_->modes[flat * d_ + axis]; }
  // |k|^2 in physical units.
  double k2(std::size_t flat) const { return tables_->k2[flat]; }
  // Dimensionless radius |k| L / (2 pi).
  double radius(std::size_t flat) const { return tables_->radius[flat]; }
  int radius_sq(std::size_t flat) const { return tables_->radius_sq[flat]; }
  // True when any axis sits at the Nyquist frequency -n/2.
  bool nyquist(std::size_t flat) const { return tables_->nyquist[flat] != 0; }
  // Flat index of the mode -k.
  std::size_t conj_index(std::size_t flat) const { return tables_->conj[flat]; }
  // Physical coordinate of grid point along one axis.
  double x(int m) const { return m * dx(); }

  TorusGrid refined(int factor) const { return TorusGrid(d_, n_ * factor, L_); }

  bool operator==(const TorusGrid& o) const { return d_ == o.d_ && n_ == o.n_ && L_ == o.L_; }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }

 private:
  struct Tables {
    std::vector<int> modes;
    std::vector<double> k2;
    std::vector<double> radius;
    std::vector<int> radius_sq;
    std::vector<unsigned char> nyquist;
    std::vector<std::size_t> conj;
  };
  int d_ = 0;
  int n_ = 0;
  double L_ = 0.0;
  std::size_t size_ = 0;
  std::shared_ptr<const Tables> tables_;
};

// Field with ncomp components on a torus grid, holding both Fourier
// coefficients (forward transform normalized by 1/n^d) and samples.
// Component layout is component-major; each block is row-major.
class SpectralField {
 public:
  SpectralField() = default;

  static SpectralField zeros(const TorusGrid& grid, int ncomp = 1);
  static SpectralField constant(const TorusGrid& grid, const std::vector<double>& value);
  static SpectralField from_samples(const TorusGrid& grid, int ncomp, std::vector<double> samples);
  static SpectralField from_complex_samples(const TorusGrid& grid, int ncomp, std::vector<cplx> samples);
  // When real is set the coefficients are symmetrized before synthesis.
  static SpectralField from_coefficients(const TorusGrid& grid, int ncomp, std::vector<cplx> coeffs,
                                         bool real = true);
  // fn(x, out) writes ncomp real values at point x.
  static SpectralField from_function(const TorusGrid& grid, int ncomp,
                                     const std::function<void(const double*, double*)>& fn);
  static SpectralField stack(const std::vector<SpectralField>& parts);
  // Trusts the caller that samples are the synthesis of coeffs.
  static SpectralField assemble(const TorusGrid& grid, int ncomp, std::vector<cplx> coeffs,
                                std::vector<cplx> samples, bool real);

  const TorusGrid& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }
  bool is_real() const { return real_; }
  bool empty() const { return ncomp_ == 0; }

  const std::vector<cplx>& coefficients() const { return coeffs_; }
  const cplx* coefficients(int c) const { return coeffs_.data() + block(c); }
  cplx coeff(int c, std::size_t flat) const { return coeffs_[block(c) + flat]; }

  const std::vector<cplx>& complex_samples() const { return samples_; }
  std::vector<double> samples() const;
  double sample(int c, std::size_t flat) const { return samples_[block(c) + flat].real(); }

  SpectralField component(int c) const;

 private:
  std::size_t block(int c) const { return static_cast<std::size_t>(c) * grid_.size(); }

  TorusGrid grid_;
  int ncomp_ = 0;
  bool real_ = true;
  std::vector<cplx> coeffs_;
  std::vector<cplx> samples_;
};

// v(x) = a x + p(x); slope[c * d + axis] is the derivative of component c along axis.
struct AffinePeriodicField {
  std::vector<double> slope;
  SpectralField p;

  static AffinePeriodicField periodic(SpectralField p);
  static AffinePeriodicField identity(const TorusGrid& grid);
  int ncomp() const { return p.ncomp(); }
  const TorusGrid& grid() const { return p.grid(); }
};

template <class Slice>
struct TimeField {
  std::vector<double> times;
  std::vector<Slice> slices;

  std::size_t M() const { return times.empty() ? 0 : times.size() - 1; }
  double T() const { return times.back(); }
  double dt() const { return times[1] - times[0]; }
};

using ScalarPath = TimeField<SpectralField>;
using AffinePath = TimeField<AffinePeriodicField>;

std::vector<double> uniform_mesh(double T, std::size_t M);

template <class Slice>
void validate_time_field(const TimeField<Slice>& f) {
  if (f.times.size() < 3) throw ValidationError("time field needs M >= 2");
  if (f.slices.size() != f.times.size()) throw ValidationError("time field slice count differs from mesh");
  const auto& g0 = f.slices.front().grid();
  int nc = f.slices.front().ncomp();
  for (const auto& s : f.slices) {
    if (s.grid() != g0) throw ValidationError("time field slices on different grids");
    if (s.ncomp() != nc) throw ValidationError("time field slices with different component counts");
  }
}

// Samples per component must be n^d; shape-checked overload names the axis.
SpectralField to_fourier(const std::vector<double>& samples, const TorusGrid& grid, int ncomp = 1);
SpectralField to_fourier(const std::vector<double>& samples, const std::vector<std::size_t>& shape,
                         const TorusGrid& grid, int ncomp = 1);

// Scalar -> vector (d), vector -> matrix with component (i, j) = d_i f_j at index i * ncomp + j.
SpectralField gradient(const SpectralField& f);
SpectralField gradient(const AffinePeriodicField& f);
SpectralField laplacian(const SpectralField& f);
// Per-mode real multiplier applied to every component.
SpectralField apply_multiplier(const SpectralField& f, const std::vector<double>& weights);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);
SpectralField add_constant(const SpectralField& f, const std::vector<double>& value);
AffinePeriodicField operator+(const AffinePeriodicField& a, const AffinePeriodicField& b);
AffinePeriodicField operator-(const AffinePeriodicField& a, const AffinePeriodicField& b);
AffinePeriodicField operator*(double s, const AffinePeriodicField& a);

// Coefficients on the grid refined by factor; Nyquist modes are split symmetrically.
std::vector<cplx> padded_coefficients(const SpectralField& f, int c, int factor);
// Raw variant: optional per-mode weights are applied before padding.
std::vector<cplx> padded_coefficients(const TorusGrid& grid, const cplx* coeffs, int factor,
                                      const double* weights = nullptr);
// In-place synthesis (coefficients to samples) and normalized analysis on grid.
void inverse_transform(std::vector<cplx>& data, const TorusGrid& grid);
void forward_transform(std::vector<cplx>& data, const TorusGrid& grid);
// Samples of component c on the refined grid.
std::vector<cplx> padded_samples(const SpectralField& f, int c, int factor);
// Forward-transform refined samples and keep the modes representable on grid, Nyquist dropped.
std::vector<cplx> truncate_samples(std::vector<cplx> fine_samples, const TorusGrid& fine,
                                   const TorusGrid& grid);

// Componentwise dealiased product (either argument may be scalar).
SpectralField product_dealiased(const SpectralField& f, const SpectralField& g);
// Sum over components of the dealiased product.
SpectralField dot_dealiased(const SpectralField& w, const SpectralField& b);

// Max over grid points of the pointwise Euclidean norm across components.
double sup_norm(const SpectralField& f);
// Same on the 2x refined grid.
double sup_norm_refined(const SpectralField& f);
// Sum over modes and components of |c_k|^2.
double coefficient_energy(const SpectralField& f);

// Trigonometric interpolation; the Nyquist mode is read as a cosine.
std::vector<cplx> evaluate_at_complex(const SpectralField& f, const std::vector<double>& x);
std::vector<double> evaluate_at(const SpectralField& f, const std::vector<double>& x);
std::vector<double> evaluate_at(const AffinePeriodicField& f, const std::vector<double>& x);

// Torus pairing sum_k conj(phi_k) f_k * L^d, i.e. the integral of phi * f over a period.
cplx pairing(const SpectralField& phi, int cphi, const SpectralField& f, int cf);

// Binary field file: one-line JSON header then float64 little-endian samples.
void write_field(const std::string& path, const SpectralField& f);
SpectralField read_field(const std::string& path);

}  // namespace roughpde
