#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "roughpde/grid.hpp"
#include "roughpde/random_field.hpp"

using namespace roughpde;

namespace {

std::vector<double> random_samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> s(n);
  for (auto& x : s) x = nd(rng);
  return s;
}

double rel_max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / std::max(den, 1e-300);
}

}  // namespace

TEST(TorusGrid, RejectsBadParameters) {
  EXPECT_THROW(TorusGrid(1, 12), ValidationError);
  EXPECT_THROW(TorusGrid(1, 4), ValidationError);
  EXPECT_THROW(TorusGrid(4, 8), ValidationError);
  EXPECT_THROW(TorusGrid(1, 8, -1.0), ValidationError);
  EXPECT_NO_THROW(TorusGrid(3, 8));
}

TEST(TorusGrid, ModeTables) {
  TorusGrid g(2, 8, 4.0);
  int idx[2] = {5, 2};
  std::size_t f = g.flatten(idx);
  EXPECT_EQ(g.mode(f, 0), -3);
  EXPECT_EQ(g.mode(f, 1), 2);
  EXPECT_EQ(g.radius_sq(f), 13);
  EXPECT_NEAR(g.k2(f), 13 * std::pow(kTwoPi / 4.0, 2), 1e-12);
  int cidx[2];
  g.unflatten(g.conj_index(f), cidx);
  EXPECT_EQ(cidx[0], 3);
  EXPECT_EQ(cidx[1], 6);
  int nyq[2] = {4, 0};
  EXPECT_TRUE(g.nyquist(g.flatten(nyq)));
  EXPECT_DOUBLE_EQ(g.x(3), 1.5);
}

TEST(ToFourier, ConstantGivesMeanOnly) {
  TorusGrid g(2, 16);
  auto f = to_fourier(std::vector<double>(g.size(), 2.5), g);
  EXPECT_NEAR(f.coeff(0, 0).real(), 2.5, 1e-14);
  for (std::size_t m = 1; m < g.size(); ++m) EXPECT_LT(std::abs(f.coeff(0, m)), 1e-14);
}

TEST(ToFourier, SineHasConjugatePair) {
  const double L = 3.0;
  TorusGrid g(1, 32, L);
  std::vector<double> s(32);
  for (int m = 0; m < 32; ++m) s[m] = std::sin(kTwoPi * g.x(m) / L);
  auto f = to_fourier(s, g);
  EXPECT_NEAR(std::abs(f.coeff(0, 1) - cplx(0, -0.5)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(f.coeff(0, 31) - cplx(0, 0.5)), 0.0, 1e-14);
}

TEST(ToFourier, MatchesNaiveDftAndRoundTrips) {
  for (int d : {1, 2}) {
    TorusGrid g(d, 16);
    auto s = random_samples(g.size(), 7 + d);
    auto f = to_fourier(s, g);
    std::vector<cplx> zs(s.begin(), s.end());
    auto want = oracle::naive_dft(zs, d, 16);
    EXPECT_LT(rel_max_diff(f.coefficients(), want), 1e-12);
    // Inverse of the stored coefficients recovers the samples.
    auto back = SpectralField::from_coefficients(g, 1, f.coefficients(), true);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      err = std::max(err, std::abs(back.sample(0, i) - s[i]));
      scale = std::max(scale, std::abs(s[i]));
    }
    EXPECT_LT(err / scale, 1e-12);
    // Hermitian symmetry.
    for (std::size_t m = 0; m < g.size(); ++m)
      EXPECT_LT(std::abs(f.coeff(0, m) - std::conj(f.coeff(0, g.conj_index(m)))), 1e-15);
  }
}

TEST(ToFourier, DimensionMismatchNamesAxis) {
  TorusGrid g(2, 8);
  try {
    to_fourier(std::vector<double>(8 * 16), {8, 16}, g);
    FAIL() << "expected DimensionMismatch";
  } catch (const DimensionMismatch& e) {
    EXPECT_EQ(e.axis(), 1);
    EXPECT_NE(std::string(e.what()).find("axis 1"), std::string::npos);
  }
  EXPECT_THROW(to_fourier(std::vector<double>(63), g), DimensionMismatch);
  EXPECT_NO_THROW(to_fourier(std::vector<double>(64), {8, 8}, g));
}

TEST(Parseval, EnergyMatchesSampleMean) {
  TorusGrid g(3, 8);
  auto s = random_samples(g.size(), 3);
  auto f = to_fourier(s, g);
  double mean = 0.0;
  for (double x : s) mean += x * x;
  mean /= s.size();
  EXPECT_NEAR(coefficient_energy(f) / mean, 1.0, 1e-12);
}

TEST(Gradient, ConstantAndSine) {
  TorusGrid g(1, 32, 5.0);
  auto c = SpectralField::constant(g, {3.0});
  EXPECT_LT(sup_norm(gradient(c)), 1e-14);
  auto f = SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = std::sin(kTwoPi * x[0] / 5.0); });
  auto df = gradient(f);
  for (int m = 0; m < 32; ++m)
    EXPECT_NEAR(df.sample(0, m), kTwoPi / 5.0 * std::cos(kTwoPi * g.x(m) / 5.0), 1e-12);
}

TEST(Gradient, FiniteDifferenceSecondOrder) {
  // Band-limited field sampled at two resolutions; FD error must drop by ~4.
  auto make = [](int n) {
    TorusGrid g(2, n);
    return SpectralField::from_function(g, 1, [](const double* x, double* o) {
      o[0] = std::sin(x[0] + 2 * x[1]) + 0.5 * std::cos(3 * x[0] - x[1]);
    });
  };
  double err[2];
  int ns[2] = {32, 64};
  for (int r = 0; r < 2; ++r) {
    auto f = make(ns[r]);
    auto df = gradient(f);
    double e = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
      auto fd = oracle::centered_difference(f.samples(), 2, ns[r], f.grid().dx(), axis);
      for (std::size_t m = 0; m < f.grid().size(); ++m) e = std::max(e, std::abs(fd[m] - df.sample(axis, m)));
    }
    err[r] = e;
  }
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.2);
}

TEST(Gradient, NyquistZeroedAndHessianSymmetric) {
  TorusGrid g(1, 8);
  std::vector<cplx> c(8, cplx(0.0));
  c[4] = 1.0;
  auto f = SpectralField::from_coefficients(g, 1, c, true);
  EXPECT_LT(sup_norm(gradient(f)), 1e-15);

  TorusGrid g2(2, 32);
  auto h = SpectralField::from_function(g2, 1, [](const double* x, double* o) {
    o[0] = std::exp(std::sin(x[0])) * std::cos(x[1]) + std::sin(x[0] + x[1]);
  });
  auto H = gradient(gradient(h));
  ASSERT_EQ(H.ncomp(), 4);
  for (std::size_t m = 0; m < g2.size(); ++m) EXPECT_NEAR(H.sample(1, m), H.sample(2, m), 1e-10);
}

TEST(Gradient, VectorGivesMatrixLayout) {
  TorusGrid g(2, 16);
  auto v = SpectralField::from_function(g, 2, [](const double* x, double* o) {
    o[0] = std::sin(x[0]);
    o[1] = std::cos(2 * x[1]);
  });
  auto J = gradient(v);
  ASSERT_EQ(J.ncomp(), 4);
  int idx[2] = {3, 5};
  std::size_t m = g.flatten(idx);
  // (i, j) = d_i v_j at i * 2 + j.
  EXPECT_NEAR(J.sample(0, m), std::cos(g.x(3)), 1e-12);
  EXPECT_NEAR(J.sample(1, m), 0.0, 1e-12);
  EXPECT_NEAR(J.sample(2, m), 0.0, 1e-12);
  EXPECT_NEAR(J.sample(3, m), -2 * std::sin(2 * g.x(5)), 1e-12);
}

TEST(EvaluateAt, ConstantAffineAndOffGridMode) {
  TorusGrid g(2, 16, 3.0);
  auto c = SpectralField::constant(g, {1.75});
  EXPECT_NEAR(evaluate_at(c, {0.3, 2.9})[0], 1.75, 1e-14);

  AffinePeriodicField a = AffinePeriodicField::periodic(SpectralField::zeros(g, 1));
  a.slope = {1.0, 0.0};
  EXPECT_NEAR(evaluate_at(a, {1.5, 0.0})[0], 1.5, 1e-14);

  int idx[2] = {3, 14};
  std::vector<cplx> co(g.size(), cplx(0.0));
  co[g.flatten(idx)] = 1.0;
  auto mode = SpectralField::from_coefficients(g, 1, co, false);
  std::vector<double> x = {0.4137, 2.2219};
  double ph = kTwoPi / 3.0 * (3 * x[0] - 2 * x[1]);
  EXPECT_LT(std::abs(evaluate_at_complex(mode, x)[0] - std::polar(1.0, ph)), 1e-12);
}

TEST(EvaluateAt, ReproducesGridSamples) {
  TorusGrid g(2, 16);
  auto f = random_dyadic_field(g, 0.3, 11);
  int idx[2];
  for (std::size_t m = 0; m < g.size(); m += 7) {
    g.unflatten(m, idx);
    EXPECT_NEAR(evaluate_at(f, {g.x(idx[0]), g.x(idx[1])})[0], f.sample(0, m), 1e-12);
  }
}

TEST(Products, DealiasedProductOfModes) {
  TorusGrid g(1, 32);
  auto s = SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = std::sin(x[0]); });
  auto c = SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = std::cos(x[0]); });
  auto p = product_dealiased(s, c);
  for (int m = 0; m < 32; ++m) EXPECT_NEAR(p.sample(0, m), 0.5 * std::sin(2 * g.x(m)), 1e-14);
  // High modes that would alias on the coarse grid are discarded instead.
  auto h = SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = std::cos(10 * x[0]); });
  auto hh = product_dealiased(h, h);
  EXPECT_NEAR(hh.coeff(0, 0).real(), 0.5, 1e-14);
  EXPECT_LT(std::abs(hh.coeff(0, 12)), 1e-14);
}

TEST(Products, SupRefinedAtLeastGridSup) {
  TorusGrid g(1, 16);
  auto f = random_dyadic_field(g, 0.0, 5);
  EXPECT_GE(sup_norm_refined(f), sup_norm(f) - 1e-14);
}

TEST(Pairing, MatchesIntegral) {
  TorusGrid g(1, 32, 2.0);
  auto a = SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = std::cos(kTwoPi * x[0] / 2.0); });
  // int_0^2 cos^2 = 1.
  EXPECT_NEAR(pairing(a, 0, a, 0).real(), 1.0, 1e-13);
}

TEST(TimeField, Validation) {
  TorusGrid g(1, 8);
  ScalarPath p;
  p.times = uniform_mesh(1.0, 2);
  p.slices.assign(3, SpectralField::zeros(g));
  EXPECT_NO_THROW(validate_time_field(p));
  p.slices[1] = SpectralField::zeros(g, 2);
  EXPECT_THROW(validate_time_field(p), ValidationError);
  EXPECT_THROW(uniform_mesh(1.0, 1), ValidationError);
}

TEST(FieldIo, BitExactRoundTrip) {
  TorusGrid g(2, 16, 1.2345678901234567);
  auto f = random_dyadic_field(g, -0.3, 99, 2);
  std::string path = ::testing::TempDir() + "field_roundtrip.bin";
  write_field(path, f);
  auto r = read_field(path);
  EXPECT_EQ(r.grid(), g);
  ASSERT_EQ(r.ncomp(), 2);
  auto a = f.samples(), b = r.samples();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i], b[i]);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_NE(header.find("rowmajor-float64-le"), std::string::npos);
  std::remove(path.c_str());
  EXPECT_THROW(read_field(path), IoError);
}
