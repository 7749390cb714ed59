#include <gtest/gtest.h>

#include <cmath>

#include <json.hpp>

#include "oracles.hpp"
#include "roughpde/experiments.hpp"
#include "roughpde/littlewood_paley.hpp"
#include "roughpde/random_field.hpp"

using namespace roughpde;

namespace {

std::vector<double> eps_ladder() {
  std::vector<double> e;
  for (int k = 2; k <= 8; ++k) e.push_back(std::ldexp(1.0, -k));
  return e;
}

const Calibration& calibration128() {
  static const Calibration cal = calibrate(CalibrationPlan::for_exponents(TorusGrid(1, 128), 0.3, 0.1, 0.35, 1));
  return cal;
}

SpectralField cosine(const TorusGrid& g) {
  return SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = std::cos(x[0]); });
}

ScalarPath zero_forcing(const TorusGrid& g, const std::vector<double>& times) {
  ScalarPath p;
  p.times = times;
  p.slices.assign(times.size(), SpectralField::zeros(g));
  return p;
}

bool bit_identical(const SpectralField& a, const SpectralField& b) {
  const auto &x = a.coefficients(), &y = b.coefficients();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return false;
  return true;
}

}  // namespace

TEST(DriftSpec, Validation) {
  DriftSpec s;
  s.beta = 0.5;
  EXPECT_THROW(s.validate(), ValidationError);
  s.beta = 0.3;
  s.amplitude = -1.0;
  EXPECT_THROW(s.validate(), ValidationError);
  DriftSpec m;
  m.kind = DriftKind::Mollified;
  EXPECT_THROW(m.validate(), ValidationError);
  EXPECT_EQ(parse_drift_kind(to_string(DriftKind::DyadicRandom)), DriftKind::DyadicRandom);
  EXPECT_EQ(parse_time_profile("modulated"), TimeProfile::Modulated);
  EXPECT_THROW(parse_drift_kind("rough"), ValidationError);
}

TEST(GenDrift, SmoothZeroAndModulated) {
  TorusGrid g(1, 64);
  auto times = uniform_mesh(1.0, 8);
  DriftSpec s;
  s.kind = DriftKind::SmoothDeterministic;
  s.amplitude = 2.0;
  auto b = gen_drift(s, g, times);
  ASSERT_EQ(b.slices.size(), times.size());
  EXPECT_EQ(b.slices[0].ncomp(), 1);
  EXPECT_NEAR(b.slices[3].coeff(0, 1).imag(), -1.0, 1e-13);
  for (double gam : {-0.3, 0.5, 1.5, 3.0}) EXPECT_TRUE(std::isfinite(besov_norm(b.slices[0], gam).value));

  s.time = TimeProfile::Modulated;
  auto bm = gen_drift(s, g, times);
  for (std::size_t m = 0; m < times.size(); ++m) {
    double f = 1.0 + 0.5 * std::sin(kTwoPi * times[m]);
    EXPECT_LT(sup_norm(bm.slices[m] - f * b.slices[m]), 1e-14);
  }
  DriftSpec z;
  z.kind = DriftKind::Zero;
  EXPECT_EQ(sup_norm(gen_drift(z, TorusGrid(2, 16), times).slices[0]), 0.0);
  EXPECT_EQ(gen_drift(z, TorusGrid(2, 16), times).slices[0].ncomp(), 2);
}

TEST(GenDrift, DyadicRandomRegularityAndDivergence) {
  DriftSpec s;
  s.beta = 0.3;
  auto times = uniform_mesh(1.0, 4);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    s.seed = seed;
    auto b = gen_drift(s, TorusGrid(1, 128), times).slices[0];
    double nb = besov_norm(b, -0.3).value;
    EXPECT_GE(nb, 0.5);
    EXPECT_LE(nb, 2.0);
  }
  // Positive regularity diverges as modes are added.
  s.seed = 1;
  double prev = 0.0;
  for (int n : {32, 64, 128, 256}) {
    double v = besov_norm(gen_drift(s, TorusGrid(1, n), times).slices[0], 0.1).value;
    EXPECT_GT(v, prev);
    prev = v;
  }
  auto b2 = gen_drift(s, TorusGrid(2, 32), times).slices[0];
  double n2 = besov_norm(b2, -0.3).value;
  EXPECT_GE(n2, 0.5);
  EXPECT_LE(n2, 2.0);
}

TEST(GenDrift, MollifiedAndSeedReproducible) {
  TorusGrid g(1, 64);
  auto times = uniform_mesh(1.0, 4);
  DriftSpec base;
  base.seed = 9;
  auto a = gen_drift(base, g, times), b = gen_drift(base, g, times);
  EXPECT_TRUE(bit_identical(a.slices[2], b.slices[2]));
  base.seed = 10;
  EXPECT_FALSE(bit_identical(a.slices[2], gen_drift(base, g, times).slices[2]));
  base.seed = 9;
  auto m = gen_drift(DriftSpec::mollified(base, 0.01), g, times);
  EXPECT_LT(sup_norm(m.slices[1] - apply_heat(0.01, a.slices[1])), 1e-15);
}

TEST(ConvergenceStudy, InversionsVerdictAndOutput) {
  EXPECT_EQ(count_inversions({3, 2, 2.5, 1, 0.5}, 0.0), 1);
  EXPECT_EQ(count_inversions({3, 2, 2.5, 1, 1.5}, 0.0), 2);
  EXPECT_EQ(count_inversions({1e-12, 2e-12, 1e-12}, 1e-11), 0);

  ConvergenceStudy s;
  s.name = "demo";
  s.parameter = "eps";
  s.params = {0.5, 0.25, 0.125};
  s.add_column("a", true).values = {1.0, 0.5, 1e-12};
  s.add_column("b", false).values = {1.0, 2.0, 3.0};
  s.cauchy.push_back(ErrorColumn{"a", {0.5, 0.5}, false});
  s.finalize(1e-9);
  EXPECT_TRUE(s.verdict);
  EXPECT_TRUE(s.monotone);
  EXPECT_EQ(s.column("b").inversions, 2);
  EXPECT_THROW(s.column("c"), ValidationError);

  auto csv = s.to_csv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "eps,a,b,cauchy_a");
  auto j = nlohmann::json::parse(s.to_json());
  EXPECT_TRUE(j["verdict"].get<bool>());
  EXPECT_TRUE(j["monotone"].get<bool>());
  EXPECT_EQ(j["columns"]["a"]["values"].size(), 3u);

  s.columns[0].values.back() = 1e-6;
  s.finalize(1e-9);
  EXPECT_FALSE(s.verdict);
  EXPECT_TRUE(s.monotone);
}

TEST(ContinuityV, ZeroDriftIsFlat) {
  TorusGrid g(1, 64);
  SolverConfig cfg;
  cfg.M = 32;
  cfg.lambda = 1.0;
  cfg.rho = 4.0;
  auto times = uniform_mesh(1.0, cfg.M);
  DriftSpec z;
  z.kind = DriftKind::Zero;
  auto vT = AffinePeriodicField::periodic(cosine(g));
  auto s = continuity_study_v(z, g, zero_forcing(g, times), vT, cfg, eps_ladder());
  EXPECT_TRUE(s.verdict);
  for (double e : s.column("v_dc").values) EXPECT_LE(e, 10 * cfg.tau_fix);
  for (double e : s.column("b_error").values) EXPECT_EQ(e, 0.0);
}

TEST(ContinuityV, SmoothDriftCauchyDecreasing) {
  TorusGrid g(1, 64);
  SolverConfig cfg;
  cfg.M = 32;
  cfg.lambda = 1.0;
  cfg.rho = 4.0;
  auto times = uniform_mesh(1.0, cfg.M);
  DriftSpec s;
  s.kind = DriftKind::SmoothDeterministic;
  auto vT = AffinePeriodicField::periodic(cosine(g));
  auto st = continuity_study_v(s, g, zero_forcing(g, times), vT, cfg, eps_ladder());
  EXPECT_TRUE(st.verdict);
  EXPECT_EQ(st.column("v_dc").inversions, 0);
  EXPECT_EQ(st.cauchy.at(0).inversions, 0);
  // sin mollifies to e^{-eps/2} sin: the drift error halves with eps.
  const auto& be = st.column("b_error").values;
  for (std::size_t i = 1; i < be.size(); ++i) EXPECT_NEAR(be[i] / be[i - 1], 0.5, 0.02);
}

TEST(ContinuityV, DyadicDriftAndForcingLadders) {
  TorusGrid g(1, 128);
  const auto& cal = calibration128();
  SolverConfig cfg;
  cfg.M = 64;
  cfg.lambda = 1.0;
  auto times = uniform_mesh(1.0, cfg.M);
  DriftSpec s;
  s.seed = 3;
  auto vT = AffinePeriodicField::periodic(
      SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = std::sin(x[0]); }));
  auto st = continuity_study_v(s, g, zero_forcing(g, times), vT, cfg, eps_ladder(), Perturbation::Drift, &cal);
  EXPECT_TRUE(st.verdict);
  EXPECT_TRUE(st.checks.at("data_decreasing"));
  EXPECT_LE(st.column("v_dc").inversions, 1);
  EXPECT_LE(st.column("grad_v_besov").inversions, 1);
  EXPECT_LE(st.column("v_dc").values.back(), 10 * cfg.tau_fix);
  EXPECT_GT(st.column("v_dc").values.front(), 1e-3);

  ScalarPath gr;
  gr.times = times;
  gr.slices.assign(times.size(), random_dyadic_field(g, -0.3, 101));
  auto sg = continuity_study_v(s, g, gr, vT, cfg, eps_ladder(), Perturbation::Forcing, &cal);
  EXPECT_TRUE(sg.verdict);
  EXPECT_LE(sg.column("v_dc").inversions, 1);
  EXPECT_LE(sg.column("v_dc").values.back(), 10 * cfg.tau_fix);
}

TEST(ContinuityV, InnerFailureCarriesPartialStudy) {
  TorusGrid g(1, 64);
  SolverConfig cfg;
  cfg.M = 16;
  cfg.lambda = 1.0;
  cfg.rho = 1.0;
  cfg.max_iterations = 2;
  auto times = uniform_mesh(1.0, cfg.M);
  DriftSpec s;
  auto vT = AffinePeriodicField::periodic(cosine(g));
  try {
    continuity_study_v(s, g, zero_forcing(g, times), vT, cfg, eps_ladder());
    FAIL() << "expected StudyAborted";
  } catch (const StudyAborted& e) {
    EXPECT_FALSE(e.partial().verdict);
    EXPECT_FALSE(e.partial().columns.empty());
    EXPECT_FALSE(e.increments().empty());
  }
  EXPECT_THROW(continuity_study_v(s, g, zero_forcing(g, times), vT, cfg, {0.1}), ValidationError);
}

TEST(ContinuityPhi, ZeroDriftIsIdentity) {
  TorusGrid g(1, 64);
  SolverConfig cfg;
  cfg.M = 16;
  cfg.lambda = 10.0;
  cfg.rho = 1.0;
  DriftSpec z;
  z.kind = DriftKind::Zero;
  auto s = continuity_study_phi(z, g, cfg, eps_ladder());
  EXPECT_TRUE(s.verdict);
  for (const char* c : {"u", "grad_u", "phi", "psi"})
    for (double e : s.column(c).values) EXPECT_EQ(e, 0.0);
  EXPECT_EQ(s.scalars.at("sup_grad_phi"), 1.0);
}

TEST(ContinuityPhi, DyadicDriftLadder) {
  TorusGrid g(1, 128);
  const auto& cal = calibration128();
  SolverConfig cfg;
  cfg.M = 64;
  DriftSpec s;
  s.seed = 3;
  auto st = continuity_study_phi(s, g, cfg, eps_ladder(), &cal);
  EXPECT_TRUE(st.verdict);
  EXPECT_GT(st.scalars.at("lambda"), 1e3);
  EXPECT_TRUE(st.checks.at("psi_within_2u"));
  EXPECT_TRUE(st.checks.at("grad_phi_le_3_2"));
  EXPECT_LE(st.scalars.at("lipschitz_certificate"), 2.0);
  const auto& u = st.column("u").values;
  const auto& psi = st.column("psi").values;
  for (std::size_t n = 0; n < u.size(); ++n) EXPECT_LE(psi[n], 2 * st.column("phi").values[n] + 2e-13);
  for (const char* c : {"u", "grad_u", "phi", "psi"}) {
    EXPECT_LE(st.column(c).inversions, 1) << c;
    EXPECT_LE(st.column(c).values.back(), 10 * cfg.tau_fix) << c;
  }
  EXPECT_GT(u.front(), 1e-8);
}

TEST(Bernstein, ReproducesAffineAndMatchesDirectSum) {
  TorusGrid g(1, 32);
  auto sl = cosine(g);
  auto times = uniform_mesh(2.0, 16);
  std::function<SpectralField(double)> cst = [&](double) { return sl; };
  std::function<SpectralField(double)> lin = [&](double t) { return (3.0 * t - 1.0) * sl; };
  for (int n : {1, 3, 7}) {
    auto bc = bernstein_path(cst, n, times);
    auto bl = bernstein_path(lin, n, times);
    for (std::size_t m = 0; m < times.size(); ++m) {
      EXPECT_LT(sup_norm(bc.slices[m] - sl), 1e-14);
      EXPECT_LT(sup_norm(bl.slices[m] - (3.0 * times[m] - 1.0) * sl), 1e-13);
    }
  }
  auto fn = [](double s) { return std::exp(s) * std::sin(3 * s); };
  std::function<SpectralField(double)> curved = [&](double t) { return fn(t / 2.0) * sl; };
  auto bp = bernstein_path(curved, 9, times);
  for (std::size_t m = 0; m < times.size(); ++m)
    EXPECT_NEAR(bp.slices[m].sample(0, 0), oracle::bernstein_direct(fn, 9, times[m] / 2.0), 1e-13);
  EXPECT_THROW(bernstein_path(cst, 0, times), ValidationError);
}

TEST(Bernstein, QuadraticClosedFormAndLipschitzRate) {
  TorusGrid g(1, 64);
  auto sl = cosine(g);
  ASSERT_NEAR(sup_norm(sl), 1.0, 1e-15);
  ScalarPath f, h;
  f.times = h.times = uniform_mesh(1.0, 128);
  for (double t : f.times) {
    f.slices.push_back(t * t * sl);
    h.slices.push_back(std::abs(t - 0.5) * sl);
  }
  auto st = bernstein_study(f, {4, 16, 64});
  for (std::size_t i = 0; i < st.params.size(); ++i)
    EXPECT_NEAR(st.columns[0].values[i], 0.25 / st.params[i], 1e-12);
  auto lip = bernstein_study(h, {4, 8, 16, 32, 64, 128});
  EXPECT_LE(lip.scalars.at("slope"), -0.4);
  EXPECT_EQ(lip.columns[0].inversions, 0);
  // Coarse-mesh path read by interpolation: exact at nodes when n divides M.
  auto bp = bernstein_path(f, 8);
  EXPECT_EQ(bp.slices.size(), f.slices.size());
}

TEST(Cutoff, ProfileAndSupport) {
  EXPECT_EQ(cutoff_profile(-1.0), 1.0);
  EXPECT_EQ(cutoff_profile(-3.0), 1.0);
  EXPECT_EQ(cutoff_profile(0.0), 0.0);
  EXPECT_NEAR(cutoff_profile(-0.5), 0.5, 1e-15);
  double prev = 1.0;
  for (double x = -1.0; x <= 0.0; x += 0.01) {
    EXPECT_LE(cutoff_profile(x), prev + 1e-15);
    prev = cutoff_profile(x);
  }
  TorusGrid g(2, 32);
  auto f = apply_cutoff(SpectralField::from_function(g, 1, [](const double* x, double* o) { o[0] = 1.0 + x[0]; }), 0.0);
  // f vanishes outside |x - c| >= 1; chi_n = 1 on |x - c| <= n.
  for (int n : {1, 2}) {
    auto s1 = apply_cutoff(f, n).samples(), s0 = f.samples();
    for (std::size_t i = 0; i < s0.size(); ++i) EXPECT_EQ(s1[i], s0[i]);
  }
  auto chi = cutoff_field(g, 0.5).samples();
  EXPECT_EQ(*std::max_element(chi.begin(), chi.end()), 1.0);
  EXPECT_EQ(*std::min_element(chi.begin(), chi.end()), 0.0);
}

TEST(MollificationDensity, ZeroAndFittedRate) {
  TorusGrid g(1, 256);
  auto eps = log_spaced(std::pow(4.0, -6), 0.25, 16);
  auto z = mollification_density_check(SpectralField::zeros(g), 0.4, eps);
  for (double e : z.columns[0].values) EXPECT_EQ(e, 0.0);
  // f in C^{gamma + 2 theta} exactly: dyadic field of that regularity under the cutoff.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto f = apply_cutoff(random_dyadic_field(g, 0.4 + 2 * 0.3, seed), 1.0);
    auto s = mollification_density_check(f, 0.4, eps);
    EXPECT_GE(s.scalars.at("rate"), 0.25);
    EXPECT_LE(s.scalars.at("rate"), 0.40);
    EXPECT_TRUE(s.checks.at("decreasing"));
  }
}
