#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "roughpde/calibration.hpp"
#include "roughpde/grid.hpp"
#include "roughpde/heat.hpp"
#include "roughpde/mild_solver.hpp"

namespace roughpde {

enum class DriftKind { Zero, SmoothDeterministic, DyadicRandom, Mollified };
enum class TimeProfile { Static, Modulated };

std::string to_string(DriftKind k);
std::string to_string(TimeProfile p);
DriftKind parse_drift_kind(const std::string& s);
TimeProfile parse_time_profile(const std::string& s);

struct DriftSpec {
  DriftKind kind = DriftKind::DyadicRandom;
  double amplitude = 1.0;
  // Dyadic-random: target regularity -beta.
  double beta = 0.3;
  std::uint64_t seed = 1;
  int max_shell = -1;
  // Mollified: heat time applied to base.
  double eps_mol = 0.0;
  std::shared_ptr<const DriftSpec> base;
  // Modulated: b(t) = (1 + modulation sin(2 pi t / T)) b_0.
  TimeProfile time = TimeProfile::Static;
  double modulation = 0.5;

  void validate() const;
  static DriftSpec mollified(const DriftSpec& base, double eps);
};

// Smooth kind: b_i(x) = amplitude sin(k0 x_i).
VectorPath gen_drift(const DriftSpec& spec, const TorusGrid& grid, const std::vector<double>& times);

// apply_heat slice by slice.
template <class Slice>
TimeField<Slice> mollify(double eps, const TimeField<Slice>& f) {
  TimeField<Slice> out;
  out.times = f.times;
  for (const auto& s : f.slices) out.slices.push_back(apply_heat(eps, s));
  return out;
}

struct ErrorColumn {
  std::string name;
  std::vector<double> values;
  // Checked columns enter the verdict; inversions are counted for all.
  bool checked = false;
  int inversions = 0;
  bool final_ok = true;
};

struct ConvergenceStudy {
  std::string name;
  std::string parameter;
  std::vector<double> params;
  // deque: add_column references stay valid.
  std::deque<ErrorColumn> columns;
  // Differences between consecutive parameters, params.size() - 1 entries.
  std::deque<ErrorColumn> cauchy;
  std::map<std::string, double> scalars;
  std::map<std::string, bool> checks;
  // Errors at or below the floor never count as an inversion.
  double floor = 0.0;
  // Every checked column has at most one inversion.
  bool monotone = false;
  bool verdict = false;

  const ErrorColumn& column(const std::string& name) const;
  ErrorColumn& add_column(const std::string& name, bool checked);
  // Fills inversions/final_ok on checked columns and combines them with checks.
  void finalize(double final_tol);

  std::string to_csv() const;
  std::string to_json() const;
  void write(const std::string& csv_path, const std::string& json_path) const;
};

// An inner solve failed; partial() holds the entries finished before it.
class StudyAborted : public ConvergenceError {
 public:
  StudyAborted(const std::string& what, const ConvergenceError& inner, ConvergenceStudy partial)
      : ConvergenceError(what, inner.ratios(), inner.increments()),
        partial_(std::make_shared<ConvergenceStudy>(std::move(partial))) {}
  const ConvergenceStudy& partial() const { return *partial_; }

 private:
  std::shared_ptr<ConvergenceStudy> partial_;
};

// Number of strict increases above the floor.
int count_inversions(const std::vector<double>& v, double floor);

enum class Perturbation { Drift, Forcing };
std::string to_string(Perturbation p);

// b^n = P_{eps_n} b (or g^n = P_{eps_n} g). Reference: the smallest eps
// solved again from the previous ladder solution; ladder solves start at 0.
ConvergenceStudy continuity_study_v(const PDEData& data, const SolverConfig& cfg, const std::vector<double>& eps_list,
                                    Perturbation which = Perturbation::Drift, const Calibration* cal = nullptr);
ConvergenceStudy continuity_study_v(const DriftSpec& base, const TorusGrid& grid, const ScalarPath& g,
                                    const AffinePeriodicField& v_T, const SolverConfig& cfg,
                                    const std::vector<double>& eps_list, Perturbation which = Perturbation::Drift,
                                    const Calibration* cal = nullptr);

// Probe points for psi: a per-axis lattice with `per_axis` points, offset by a quarter cell.
std::vector<std::vector<double>> probe_points(const TorusGrid& grid, int per_axis);

// One lambda for the whole ladder: the threshold at max(sup_n ||b^n||, ||b||) unless cfg.lambda > 0.
ConvergenceStudy continuity_study_phi(const VectorPath& b, const SolverConfig& cfg, const std::vector<double>& eps_list,
                                      const Calibration* cal = nullptr, int probes_per_axis = 64,
                                      double newton_tol = 1e-13);
ConvergenceStudy continuity_study_phi(const DriftSpec& base, const TorusGrid& grid, const SolverConfig& cfg,
                                      const std::vector<double>& eps_list, const Calibration* cal = nullptr);

// B_n(f, t) = sum_j f(j / n) C(n, j) s^j (1 - s)^{n - j}, s = t / T, evaluated on `times`.
// f is sampled once per node j / n; Slice needs + and scalar *.
template <class Slice>
TimeField<Slice> bernstein_path(const std::function<Slice(double)>& f, int n, const std::vector<double>& times) {
  if (n < 1) throw ValidationError("Bernstein degree must be at least 1");
  if (times.size() < 2) throw ValidationError("Bernstein path needs a time mesh");
  const double T = times.back(), t0 = times.front();
  std::vector<Slice> nodes;
  for (int j = 0; j <= n; ++j) nodes.push_back(f(t0 + (T - t0) * j / n));
  TimeField<Slice> out;
  out.times = times;
  for (double t : times) {
    double s = std::clamp((t - t0) / (T - t0), 0.0, 1.0);
    Slice acc = 0.0 * nodes[0];
    if (s == 0.0 || s == 1.0) {
      acc = nodes[s == 0.0 ? 0 : n];
    } else {
      boost::math::binomial_distribution<double> bin(n, s);
      for (int j = 0; j <= n; ++j) acc = acc + boost::math::pdf(bin, j) * nodes[j];
    }
    out.slices.push_back(std::move(acc));
  }
  return out;
}

// Path version: f is read at j / n by linear interpolation in time (exact when n divides M).
ScalarPath bernstein_path(const ScalarPath& f, int n);

// sup over the mesh of ||B_n f - f|| in the sup norm, for each degree; fitted slope in log n.
ConvergenceStudy bernstein_study(const ScalarPath& f, const std::vector<int>& degrees);

// Smooth step: 1 on (-inf, -1], 0 on [0, inf).
double cutoff_profile(double x);
// chi_R(x) = chi(|x - c| - (R + 1)), |.| the periodic distance to the box centre c.
SpectralField cutoff_field(const TorusGrid& grid, double R);
// Pointwise product with chi_R on the grid samples.
SpectralField apply_cutoff(const SpectralField& f, double R);

// ||P_eps f - f||_gamma per eps; scalars["rate"] is the log-log slope.
ConvergenceStudy mollification_density_check(const SpectralField& f, double gamma, const std::vector<double>& eps_list);

}  // namespace roughpde
