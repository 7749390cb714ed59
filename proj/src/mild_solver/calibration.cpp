#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "roughpde/calibration.hpp"
#include "roughpde/heat.hpp"
#include "roughpde/littlewood_paley.hpp"
#include "roughpde/paraproduct.hpp"
#include "roughpde/random_field.hpp"

namespace roughpde {

namespace {

double lookup(const std::map<std::string, double>& table, const std::string& k, const char* what) {
  auto it = table.find(k);
  if (it == table.end()) throw ValidationError(std::string("calibration has no ") + what + " entry for " + k);
  return it->second;
}

double theta_of(double beta, double epsilon) { return (1.0 + 2.0 * beta - epsilon) / 2.0; }

}  // namespace

CalibrationPlan CalibrationPlan::for_exponents(const TorusGrid& grid, double beta, double epsilon, double alpha,
                                               std::uint64_t seed, double T) {
  CalibrationPlan p;
  p.grid = grid;
  p.seed = seed;
  p.T = T;
  p.schauder = {{-beta + epsilon, theta_of(beta, epsilon)}};
  p.bony = {{alpha, beta}, {beta, beta - epsilon}};
  p.bernstein = {beta};
  p.convolution = {{alpha, beta}};
  return p;
}

std::string Calibration::key(double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", a);
  return buf;
}

std::string Calibration::key(double a, double b) { return key(a) + "," + key(b); }

double Calibration::schauder_c(double gamma, double theta) const {
  return lookup(schauder, key(gamma, theta), "schauder");
}
double Calibration::bony_c(double alpha, double beta) const { return lookup(bony, key(alpha, beta), "bony"); }
double Calibration::bernstein_c(double gamma) const { return lookup(bernstein_ineq, key(gamma), "bernstein"); }
double Calibration::convolution_c(double alpha, double beta) const {
  return lookup(convolution, key(alpha, beta), "convolution");
}

double Calibration::c_rho(double alpha, double beta) const {
  return convolution_c(alpha, beta) * std::max(1.0, bony_c(alpha, beta));
}

double Calibration::c_lambda(double beta, double epsilon) const {
  return bernstein_c(beta) * schauder_c(-beta + epsilon, theta_of(beta, epsilon)) *
         std::max(1.0, bony_c(beta, beta - epsilon));
}

std::string Calibration::to_json() const {
  nlohmann::json j;
  j["metadata"] = {{"d", d}, {"n", n}, {"L", L}, {"seed", seed}, {"fields", fields},
                   {"bony_pairs", bony_pairs}, {"T", T}};
  j["schauder"] = schauder;
  j["bony"] = bony;
  j["bernstein_ineq"] = bernstein_ineq;
  j["convolution"] = convolution;
  return j.dump(2);
}

Calibration Calibration::from_json(const std::string& text) {
  Calibration c;
  try {
    auto j = nlohmann::json::parse(text);
    const auto& m = j.at("metadata");
    c.d = m.at("d");
    c.n = m.at("n");
    c.L = m.at("L");
    c.seed = m.at("seed");
    c.fields = m.at("fields");
    c.bony_pairs = m.value("bony_pairs", std::size_t{0});
    c.T = m.value("T", 1.0);
    c.schauder = j.at("schauder").get<std::map<std::string, double>>();
    c.bony = j.at("bony").get<std::map<std::string, double>>();
    c.bernstein_ineq = j.at("bernstein_ineq").get<std::map<std::string, double>>();
    c.convolution = j.at("convolution").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed calibration: ") + e.what());
  }
  return c;
}

void Calibration::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write calibration file " + path);
  out << to_json() << '\n';
  if (!out) throw IoError("failed writing calibration file " + path);
}

Calibration Calibration::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read calibration file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

double convolution_ratio(const SpectralField& l, double alpha, double beta, double rho, double tau) {
  const auto& g = l.grid();
  std::vector<double> w(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) {
    double mu = rho + 0.5 * g.k2(m);
    w[m] = mu == 0.0 ? tau : -std::expm1(-mu * tau) / mu;
  }
  double base = besov_norm(l, -beta).value;
  if (!(base > 0.0)) throw ValidationError("convolution ratio of a vanishing field");
  return c1plus_norm(apply_multiplier(l, w), alpha) / (base * std::pow(rho, (alpha + beta - 1.0) / 2.0));
}

Calibration calibrate(const CalibrationPlan& plan) {
  if (plan.grid.size() == 0) throw ValidationError("calibration needs a grid");
  if (plan.fields == 0 || plan.bony_pairs == 0) throw ValidationError("calibration needs at least one field");
  Calibration c;
  c.d = plan.grid.d();
  c.n = plan.grid.n();
  c.L = plan.grid.L();
  c.seed = plan.seed;
  c.fields = plan.fields;
  c.bony_pairs = plan.bony_pairs;
  c.T = plan.T;

  // Separate seed streams per family so adding an entry leaves the others unchanged.
  const std::uint64_t stride = 1000003;
  std::uint64_t stream = plan.seed;
  auto next_stream = [&] { return stream += stride; };

  auto t_samples = log_spaced(std::pow(4.0, -6), plan.T, 16);
  for (auto [gamma, theta] : plan.schauder) {
    auto r = schauder_fit(gamma, theta, RandomFieldGenerator{plan.grid, gamma, next_stream()}, plan.fields, t_samples);
    c.schauder[Calibration::key(gamma, theta)] = r.c_max;
  }
  for (auto [alpha, beta] : plan.bony)
    c.bony[Calibration::key(alpha, beta)] = bony_max_ratio(plan.grid, alpha, beta, next_stream(), plan.bony_pairs);
  for (double gamma : plan.bernstein) {
    auto r = bernstein_check(gamma, RandomFieldGenerator{plan.grid, gamma + 1.0, next_stream()}, plan.fields);
    c.bernstein_ineq[Calibration::key(gamma)] = r.c_max;
  }
  auto rhos = log_spaced(1.0, 1e6, 13);
  for (auto [alpha, beta] : plan.convolution) {
    RandomFieldGenerator gen{plan.grid, -beta, next_stream()};
    double best = 0.0;
    for (std::size_t i = 0; i < plan.fields; ++i) {
      auto l = gen(i);
      for (double rho : rhos)
        for (double tau : {plan.T / 4, plan.T / 2, plan.T}) best = std::max(best, convolution_ratio(l, alpha, beta, rho, tau));
    }
    c.convolution[Calibration::key(alpha, beta)] = best;
  }
  return c;
}

}  // namespace roughpde
