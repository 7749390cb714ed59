#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roughpde/experiments.hpp"
#include "roughpde/grid.hpp"
#include "roughpde/mild_solver.hpp"

namespace roughpde::cli {

// One parsed value of the key-value format: number, string, bool or a flat list.
struct ConfigValue {
  enum class Kind { Number, String, Bool, List } kind = Kind::String;
  double number = 0.0;
  std::string text;
  bool flag = false;
  std::vector<ConfigValue> items;
  int line = 0;

  std::string describe() const;
};

// Flat map of dotted keys ("grid.n") to values.
using ConfigTable = std::map<std::string, ConfigValue>;

// Subset of TOML: [section] headers (dotted allowed), key = value lines, # comments,
// quoted or bare strings, true/false, numbers and single-line [a, b] lists.
ConfigTable parse_config_text(const std::string& text);

// Terminal data, forcing, or a standalone field for besov-norm.
struct FieldSpec {
  // zero | sin | cos | dyadic-random | file (terminal also: linear)
  std::string kind = "zero";
  double amplitude = 1.0;
  double gamma = 0.0;
  std::optional<std::uint64_t> seed;
  int mode = 1;
  std::vector<double> slope;
  std::string path;

  static FieldSpec of(std::string kind, int mode = 1) {
    FieldSpec f;
    f.kind = std::move(kind);
    f.mode = mode;
    return f;
  }
};

struct RunConfig {
  int d = 0;
  int n = 0;
  double L = kTwoPi;
  SolverConfig solver;
  bool lambda_auto = false;
  bool rho_auto = true;
  // lambda of the u_i equations behind solve-u and the phi commands; auto = threshold.
  bool phi_lambda_auto = true;
  double phi_lambda = 0.0;
  int axis = 0;

  DriftSpec drift;
  bool drift_seed_set = false;
  FieldSpec forcing;
  FieldSpec terminal = FieldSpec::of("sin");
  FieldSpec field = FieldSpec::of("dyadic-random");

  std::size_t cal_fields = 32;
  std::size_t cal_pairs = 64;
  std::optional<std::uint64_t> cal_seed;

  std::vector<double> eps_list;
  std::vector<int> degrees{4, 16, 64};
  std::vector<double> gammas{-0.3, 0.2};
  std::vector<double> thetas{0.25, 0.5};
  std::vector<double> alphas{0.6};
  std::vector<double> betas{0.3};
  std::size_t fields = 32;
  std::size_t pairs = 64;
  double t_min = 0.0;
  double t_max = 0.25;
  std::size_t t_count = 16;
  std::size_t seed_count = 5;
  std::string perturb = "drift";
  std::string path_kind = "quadratic";

  int probes = 8;
  double invert_t = 0.0;
  double newton_tol = 1e-12;

  std::uint64_t seed = 1;
  std::string out = "out";
  std::string calibration_path;

  // Every key read from the file, for the manifest.
  ConfigTable source;
  std::string config_file;

  TorusGrid grid() const { return TorusGrid(d, n, L); }
  std::vector<double> times() const { return uniform_mesh(solver.T, solver.M); }
  // Seed of a sub-generator: explicit value, else run seed plus a fixed offset.
  std::uint64_t seed_for(const std::optional<std::uint64_t>& explicit_seed, std::uint64_t offset) const;
  // Checks every module-level invariant.
  void validate() const;
};

// Unknown keys and type mismatches raise ValidationError naming the key and line.
RunConfig config_from_table(const ConfigTable& table);
RunConfig load_config(const std::string& path);

}  // namespace roughpde::cli
