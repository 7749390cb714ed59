#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roughpde/calibration.hpp"
#include "roughpde/grid.hpp"
#include "roughpde/littlewood_paley.hpp"

namespace roughpde {

// Exponential: per-mode exact integration of the kernel against a piecewise
// linear interpolant of the integrand. GradedMidpoint: composite midpoint with
// the cell next to s = t split in four.
enum class QuadratureRule { Exponential, GradedMidpoint };

// Absorbed: the lambda v term is moved into the kernel e^{-lambda (s-t)} P_{s-t}.
// Plain: lambda v stays in the integrand. Both share the same fixed point.
enum class OperatorForm { Absorbed, Plain };

std::string to_string(QuadratureRule r);
std::string to_string(OperatorForm f);
QuadratureRule parse_quadrature_rule(const std::string& s);
OperatorForm parse_operator_form(const std::string& s);

struct SolverConfig {
  double beta = 0.3;
  double epsilon = 0.1;
  // Unset means beta + epsilon / 2.
  std::optional<double> alpha;
  double lambda = 0.0;
  double T = 1.0;
  std::size_t M = 64;
  QuadratureRule rule = QuadratureRule::Exponential;
  OperatorForm form = OperatorForm::Absorbed;
  double tau_fix = 1e-10;
  int max_iterations = 60;
  // Unset means select_rho against a calibration.
  std::optional<double> rho;
  double quadrature_tol = 1e-6;

  double theta() const { return (1.0 + 2.0 * beta - epsilon) / 2.0; }
  double alpha_value() const { return alpha ? *alpha : beta + epsilon / 2.0; }
  void validate() const;
};

using VectorPath = TimeField<SpectralField>;

struct PDEData {
  VectorPath b;      // d components
  ScalarPath g;      // scalar
  AffinePeriodicField v_T;

  const TorusGrid& grid() const { return v_T.grid(); }
  void validate(const SolverConfig& cfg) const;
  static PDEData heat(const AffinePeriodicField& v_T, const std::vector<double>& times);
};

struct SolveResult {
  AffinePath v;
  int iterations = 0;
  double rho = 0.0;
  NormSpec monitor;
  // log of the rho-weighted increment of the last iteration (-inf when it vanished).
  double log_final_increment = 0.0;
  double final_increment = 0.0;
  double final_increment_unweighted = 0.0;
  // First iteration whose rho-weighted increment was <= tau_fix (0 if never).
  int weighted_converged_at = 0;
  std::vector<double> ratios;
  std::vector<double> increments;  // unweighted, one per iteration
  std::vector<double> log_weighted_increments;
  double weak_residual = 0.0;
};

// sup_t ||b(t)||_gamma.
double time_sup_besov(const VectorPath& b, double gamma);

// max(1, (2 c (lambda + b_norm))^{2 / (1 - alpha - beta)}).
double select_rho(const SolverConfig& cfg, double b_norm, double c_cal);

// (3 c Gamma(1 - theta) b_norm)^{1 / (1 - theta)} with b_norm = ||b||_{C_T C^{-beta+eps}}.
double lambda_threshold(double b_norm, const SolverConfig& cfg, double c_cal);
double lambda_threshold(const VectorPath& b, const SolverConfig& cfg, const Calibration& cal);

// I_m = int_{t_m}^T e^{-lam (s - t_m)} P_{s - t_m} h(s) ds for every mesh node.
ScalarPath duhamel_integral(const ScalarPath& h, double lam, QuadratureRule rule);

AffinePath apply_T(const AffinePath& v, const PDEData& data, const SolverConfig& cfg);

// Picard iteration for the mild solution; rho is explicit in cfg or selected
// from the calibration. v0 defaults to zero.
SolveResult solve_mild(const PDEData& data, const SolverConfig& cfg, const Calibration* cal = nullptr,
                       const AffinePath* v0 = nullptr);

// u_i with g = -b_i and zero terminal data.
SolveResult solve_u(const VectorPath& b, int axis, const SolverConfig& cfg, const Calibration* cal = nullptr,
                    const AffinePath* v0 = nullptr);

// cos and sin of every mode with |k| L / 2pi <= max_radius, plus the constant.
std::vector<SpectralField> default_test_set(const TorusGrid& grid, double max_radius = 2.0);

// Max over test fields and mesh times of the weak-form defect. The slope
// equation a_T - a(t) - lambda int a is included for linear-growth fields.
double weak_residual(const AffinePath& v, const PDEData& data, const SolverConfig& cfg,
                     const std::vector<SpectralField>& test_set);
double weak_residual(const AffinePath& v, const PDEData& data, const SolverConfig& cfg);

// sup_m sup_x |u_m - int e^{-lambda (s-t)} P_{s-t}(grad u b + b_i) ds| with the
// forcing interpolated quadratically over cell pairs, a different rule from the solver's.
double integral_form_residual(const TimeField<AffinePeriodicField>& u, const VectorPath& b, int axis,
                              const SolverConfig& cfg);

struct PhiResult {
  AffinePath phi;  // d components, slope identity
  double lambda = 0.0;
  std::vector<SolveResult> u;
  // max_i sup_{t,x} |grad u_i|.
  double sup_grad_u = 0.0;
  // sup_{t,x} Frobenius norm of grad u, an upper bound for |grad phi - I|.
  double sup_jacobian_defect = 0.0;
  // 1 / (1 - sup_jacobian_defect): Lipschitz bound for psi (inf if not certified).
  double lipschitz_certificate = 0.0;
  // weak residual of each u_i equation.
  std::vector<double> weak_residuals;
  // weak residual of id_i for L v = b_i with lambda = 0, max over i.
  double id_residual = 0.0;
};

// lambda from cfg.lambda when positive, otherwise from lambda_threshold.
// warm seeds each u_i Picard iteration with warm->u[i].v.
PhiResult build_phi(const VectorPath& b, const SolverConfig& cfg, const Calibration* cal = nullptr,
                    const PhiResult* warm = nullptr);

// phi(t, .) evaluated by time interpolation between mesh slices.
class PhiMap {
 public:
  PhiMap(const AffinePath& phi, double t);
  std::vector<double> operator()(const std::vector<double>& x) const;
  // Row-major J[j * d + k] = d phi_j / d x_k.
  std::vector<double> jacobian(const std::vector<double>& x) const;
  int d() const { return d_; }

 private:
  int d_;
  AffinePeriodicField slice_;
  SpectralField grad_;
};

struct InversionResult {
  std::vector<double> x;
  int steps = 0;
  double residual = 0.0;
};

// Newton from x0 = y; throws ConvergenceError after max_steps.
InversionResult invert_phi(const PhiMap& phi, const std::vector<double>& y, double tol, int max_steps = 50);
InversionResult invert_phi(const AffinePath& phi, double t, const std::vector<double>& y, double tol,
                           int max_steps = 50);

// log R_lambda(x) = log 2 + [2 c (lambda + x)]^{2 / (1 - alpha - beta)} T + log max(1, 1 / lambda).
double log_rlambda(double x, double lambda, double c, const SolverConfig& cfg);

struct RLambdaReport {
  double lhs = 0.0;       // ||v||_{C_T C^{alpha+1}}
  double log_rhs = 0.0;   // log of R_lambda(||b||) (||v_T||_{alpha+1} + ||g||_{C_T C^{-beta}})
  double log_slack = 0.0; // log_rhs - log lhs
  bool holds = false;
};

RLambdaReport rlambda_bound_check(const PDEData& data, const SolverConfig& cfg, const Calibration& cal,
                                  const SolveResult& solved);

}  // namespace roughpde
