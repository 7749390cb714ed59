#include <gtest/gtest.h>

#include <cmath>

#include "roughpde/paraproduct.hpp"
#include "roughpde/random_field.hpp"

using namespace roughpde;

namespace {

double max_abs_diff(const SpectralField& a, const SpectralField& b) { return sup_norm(a - b); }

double calibrated_bony(const TorusGrid& g, std::uint64_t seed, int pairs) {
  double c = 0.0;
  for (int i = 0; i < pairs; ++i) {
    auto f = random_dyadic_field(g, 0.6, seed + 2 * i);
    auto h = random_dyadic_field(g, -0.3, seed + 2 * i + 1);
    c = std::max(c, bony_ratio(f, 0.6, h, 0.3));
  }
  return c;
}

}  // namespace

TEST(BonyProduct, UnitFactor) {
  TorusGrid g(2, 32);
  auto h = random_dyadic_field(g, -0.3, 2);
  auto p = bony_product(SpectralField::constant(g, {1.0}), 0.6, h, 0.3);
  EXPECT_LT(max_abs_diff(p.total, h), 1e-12);
  EXPECT_FALSE(p.hypothesis_violated);
}

TEST(BonyProduct, SineTimesCosine) {
  TorusGrid g(1, 64);
  auto s = SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = std::sin(x[0]); });
  auto c = SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = std::cos(x[0]); });
  auto p = bony_product(s, 0.6, c, 0.3);
  for (std::size_t m = 0; m < g.size(); ++m) EXPECT_NEAR(p.total.sample(0, m), 0.5 * std::sin(2 * g.x(m)), 1e-10);
}

TEST(BonyProduct, TotalEqualsDealiasedProduct) {
  for (int d : {1, 2}) {
    TorusGrid g(d, d == 1 ? 128 : 32);
    auto f = random_dyadic_field(g, 1.5, 10 + d);
    auto h = random_dyadic_field(g, 1.0, 20 + d);
    auto p = bony_product(f, 0.6, h, 0.3);
    EXPECT_LT(max_abs_diff(p.total, product_dealiased(f, h)), 1e-10);
  }
}

TEST(BonyProduct, RingGeometry) {
  TorusGrid g(1, 64);
  // f lives in blocks <= 0, g in the interior of block 3.
  auto f = SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = 0.3 + std::cos(x[0]); });
  auto h = SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = std::cos(12 * x[0]); });
  auto p = bony_product(f, 0.6, h, 0.3);
  EXPECT_LT(max_abs_diff(p.Tfg, product_dealiased(f, h)), 1e-13);
  EXPECT_LT(sup_norm(p.Tgf), 1e-13);
  EXPECT_LT(sup_norm(p.R), 1e-13);
}

TEST(BonyProduct, Bilinear) {
  TorusGrid g(1, 64);
  auto f1 = random_dyadic_field(g, 0.6, 1), f2 = random_dyadic_field(g, 0.6, 2);
  auto h = random_dyadic_field(g, -0.3, 3);
  auto lhs = bony_product(2.0 * f1 + f2, 0.6, h, 0.3);
  auto a = bony_product(f1, 0.6, h, 0.3), b = bony_product(f2, 0.6, h, 0.3);
  double scale = sup_norm(lhs.total);
  EXPECT_LT(max_abs_diff(lhs.Tfg, 2.0 * a.Tfg + b.Tfg) / scale, 1e-12);
  EXPECT_LT(max_abs_diff(lhs.Tgf, 2.0 * a.Tgf + b.Tgf) / scale, 1e-12);
  EXPECT_LT(max_abs_diff(lhs.R, 2.0 * a.R + b.R) / scale, 1e-12);
  auto rhs2 = bony_product(f1, 0.6, 3.0 * h, 0.3);
  EXPECT_LT(max_abs_diff(rhs2.total, 3.0 * a.total) / scale, 1e-12);
}

TEST(BonyProduct, HypothesisFlag) {
  TorusGrid g(1, 32);
  auto f = random_dyadic_field(g, 0.2, 1), h = random_dyadic_field(g, -0.3, 2);
  EXPECT_TRUE(bony_product(f, 0.2, h, 0.3).hypothesis_violated);
  EXPECT_TRUE(bony_product(f, 0.6, h, -0.1).hypothesis_violated);
}

TEST(BonyProduct, RatioSeedStable) {
  TorusGrid g(1, 128);
  std::vector<double> cs;
  for (std::uint64_t seed : {100u, 2000u, 30000u, 400000u, 5000000u}) cs.push_back(calibrated_bony(g, seed, 64));
  double lo = *std::min_element(cs.begin(), cs.end()), hi = *std::max_element(cs.begin(), cs.end());
  EXPECT_LE(hi / lo - 1.0, 0.2);
}

TEST(DriftTerm, TrivialAndGridProduct) {
  TorusGrid g(2, 32);
  auto b = random_dyadic_field(g, 1.0, 5, 2);
  EXPECT_LT(sup_norm(drift_term(random_dyadic_field(g, 1.0, 6, 2), SpectralField::zeros(g, 2), 0.6, 0.3)), 1e-15);
  auto e1 = SpectralField::stack({SpectralField::constant(g, {1.0}), SpectralField::zeros(g)});
  EXPECT_LT(max_abs_diff(drift_term(e1, b, 0.6, 0.3), b.component(0)), 1e-12);

  auto w = random_dyadic_field(g, 1.2, 7, 2);
  auto dt = drift_term(w, b, 0.6, 0.3);
  auto bony_sum = bony_product(w.component(0), 0.6, b.component(0), 0.3).total +
                  bony_product(w.component(1), 0.6, b.component(1), 0.3).total;
  EXPECT_LT(max_abs_diff(dt, bony_sum), 1e-10);
  auto grid_dot = product_dealiased(w.component(0), b.component(0)) + product_dealiased(w.component(1), b.component(1));
  EXPECT_LT(max_abs_diff(dt, grid_dot), 1e-10);
  EXPECT_THROW(drift_term(w, b.component(0), 0.6, 0.3), DimensionMismatch);
}

TEST(BonyProduct, TimeSlicedAndWeightedBounds) {
  TorusGrid g(1, 128);
  const double c = calibrated_bony(g, 777, 32);
  auto f0 = random_dyadic_field(g, 0.6, 901), f1 = random_dyadic_field(g, 0.6, 902);
  auto h0 = random_dyadic_field(g, -0.3, 903), h1 = random_dyadic_field(g, -0.3, 904);
  ScalarPath F, H, P;
  F.times = H.times = P.times = uniform_mesh(1.0, 8);
  for (double t : F.times) {
    F.slices.push_back(std::cos(t) * f0 + std::sin(3 * t) * f1);
    H.slices.push_back((1.0 + t) * h0 - t * t * h1);
    P.slices.push_back(product_dealiased(F.slices.back(), H.slices.back()));
  }
  NormSpec fa{NormKind::Besov, 0.6}, gb{NormKind::Besov, -0.3};
  EXPECT_LE(rho_time_norm(P, 0.0, gb), c * rho_time_norm(F, 0.0, fa) * rho_time_norm(H, 0.0, gb));
  for (double rho : {1.0, 5.0, 50.0})
    EXPECT_LE(rho_time_norm(P, rho, gb), c * rho_time_norm(F, rho, fa) * rho_time_norm(H, 0.0, gb));
}
