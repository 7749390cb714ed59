#include "roughpde/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace roughpde::cli {

std::string ConfigValue::describe() const {
  switch (kind) {
    case Kind::Number: {
      std::ostringstream os;
      os << number;
      return os.str();
    }
    case Kind::String: return text;
    case Kind::Bool: return flag ? "true" : "false";
    case Kind::List: {
      std::string s = "[";
      for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + items[i].describe();
      return s + "]";
    }
  }
  return "";
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ValidationError("config line " + std::to_string(line) + ": " + msg);
}

std::string strip_comment(const std::string& s) {
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return k.find("..") == std::string::npos;
}

ConfigValue parse_scalar(const std::string& raw, int line) {
  ConfigValue v;
  v.line = line;
  std::string s = trim(raw);
  if (s.empty()) fail(line, "missing value");
  if (s.front() == '"' || s.front() == '\'') {
    if (s.size() < 2 || s.back() != s.front()) fail(line, "unterminated string");
    v.text = s.substr(1, s.size() - 2);
    return v;
  }
  if (s == "true" || s == "false") {
    v.kind = ConfigValue::Kind::Bool;
    v.flag = s == "true";
    return v;
  }
  const char* begin = s.c_str();
  char* end = nullptr;
  double x = std::strtod(begin, &end);
  if (end != begin && *end == '\0') {
    v.kind = ConfigValue::Kind::Number;
    v.number = x;
    return v;
  }
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '/'))
      fail(line, "cannot parse value '" + s + "'");
  v.text = s;
  return v;
}

ConfigValue parse_value(const std::string& raw, int line) {
  std::string s = trim(raw);
  if (s.empty() || s.front() != '[') return parse_scalar(s, line);
  if (s.back() != ']') fail(line, "unterminated list");
  ConfigValue v;
  v.kind = ConfigValue::Kind::List;
  v.line = line;
  std::string body = trim(s.substr(1, s.size() - 2));
  if (body.empty()) return v;
  std::string item;
  char quote = 0;
  for (char c : body) {
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '[') {
      fail(line, "nested lists are not supported");
    } else if (c == ',') {
      v.items.push_back(parse_scalar(item, line));
      item.clear();
      continue;
    }
    item += c;
  }
  if (!trim(item).empty()) v.items.push_back(parse_scalar(item, line));
  return v;
}

}  // namespace

ConfigTable parse_config_text(const std::string& text) {
  ConfigTable t;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_key(section)) fail(line, "invalid section name '" + section + "'");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    if (!valid_key(key)) fail(line, "invalid key '" + key + "'");
    std::string full = section.empty() ? key : section + "." + key;
    if (t.count(full)) fail(line, "duplicate key '" + full + "'");
    t[full] = parse_value(s.substr(eq + 1), line);
  }
  return t;
}

namespace {

class Reader {
 public:
  explicit Reader(const ConfigTable& t) : t_(t) {}

  const ConfigValue* find(const std::string& key) {
    auto it = t_.find(key);
    if (it == t_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  double num(const std::string& key, double def) {
    auto* v = find(key);
    if (!v) return def;
    return as_num(*v, key);
  }

  long long integer(const std::string& key, long long def) {
    auto* v = find(key);
    return v ? as_int(*v, key) : def;
  }

  std::string str(const std::string& key, const std::string& def) {
    auto* v = find(key);
    if (!v) return def;
    if (v->kind != ConfigValue::Kind::String) bad(*v, key, "a string");
    return v->text;
  }

  std::optional<std::uint64_t> seed(const std::string& key) {
    auto* v = find(key);
    if (!v) return std::nullopt;
    long long s = as_int(*v, key);
    if (s < 0) bad(*v, key, "a nonnegative integer");
    return static_cast<std::uint64_t>(s);
  }

  // "auto" or a number; returns nullopt for auto.
  std::optional<double> auto_or_num(const std::string& key, std::optional<double> def) {
    auto* v = find(key);
    if (!v) return def;
    if (v->kind == ConfigValue::Kind::String && v->text == "auto") return std::nullopt;
    if (v->kind != ConfigValue::Kind::Number) bad(*v, key, "a number or \"auto\"");
    return v->number;
  }

  std::vector<double> nums(const std::string& key, const std::vector<double>& def) {
    auto* v = find(key);
    if (!v) return def;
    if (v->kind != ConfigValue::Kind::List) return {as_num(*v, key)};
    std::vector<double> out;
    for (const auto& it : v->items) out.push_back(as_num(it, key));
    return out;
  }

  std::vector<int> ints(const std::string& key, const std::vector<int>& def) {
    auto* v = find(key);
    if (!v) return def;
    if (v->kind != ConfigValue::Kind::List) return {static_cast<int>(as_int(*v, key))};
    std::vector<int> out;
    for (const auto& it : v->items) out.push_back(static_cast<int>(as_int(it, key)));
    return out;
  }

  void finish() const {
    for (const auto& [k, v] : t_)
      if (!used_.count(k)) fail(v.line, "unknown key '" + k + "'");
  }

 private:
  [[noreturn]] static void bad(const ConfigValue& v, const std::string& key, const std::string& what) {
    fail(v.line, "'" + key + "' must be " + what + ", got '" + v.describe() + "'");
  }
  static double as_num(const ConfigValue& v, const std::string& key) {
    if (v.kind != ConfigValue::Kind::Number) bad(v, key, "a number");
    return v.number;
  }
  static long long as_int(const ConfigValue& v, const std::string& key) {
    double x = as_num(v, key);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) bad(v, key, "an integer");
    return static_cast<long long>(x);
  }

  const ConfigTable& t_;
  std::set<std::string> used_;
};

FieldSpec read_field(Reader& r, const std::string& sec, FieldSpec def) {
  def.kind = r.str(sec + ".kind", def.kind);
  def.amplitude = r.num(sec + ".amplitude", def.amplitude);
  def.gamma = r.num(sec + ".gamma", def.gamma);
  if (auto s = r.seed(sec + ".seed")) def.seed = s;
  def.mode = static_cast<int>(r.integer(sec + ".mode", def.mode));
  def.slope = r.nums(sec + ".slope", def.slope);
  def.path = r.str(sec + ".path", def.path);
  return def;
}

void validate_field(const FieldSpec& f, const std::string& name, int d, bool allow_linear) {
  static const std::set<std::string> kinds{"zero", "sin", "cos", "dyadic-random", "file"};
  if (!kinds.count(f.kind) && !(allow_linear && f.kind == "linear"))
    throw ValidationError(name + ".kind '" + f.kind + "' is not one of zero, sin, cos, dyadic-random, file" +
                          (allow_linear ? ", linear" : ""));
  if (!std::isfinite(f.amplitude)) throw ValidationError(name + ".amplitude must be finite");
  if (f.kind == "file" && f.path.empty()) throw ValidationError(name + ".path is required for kind = file");
  if (f.kind == "linear" && f.slope.size() != static_cast<std::size_t>(d))
    throw ValidationError(name + ".slope needs one entry per axis");
  if ((f.kind == "sin" || f.kind == "cos") && f.mode < 1) throw ValidationError(name + ".mode must be >= 1");
}

}  // namespace

std::uint64_t RunConfig::seed_for(const std::optional<std::uint64_t>& explicit_seed, std::uint64_t offset) const {
  return explicit_seed ? *explicit_seed : seed + offset;
}

RunConfig config_from_table(const ConfigTable& table) {
  Reader r(table);
  RunConfig c;
  c.source = table;
  c.d = static_cast<int>(r.integer("grid.d", 0));
  c.n = static_cast<int>(r.integer("grid.n", 0));
  c.L = r.num("grid.L", c.L);

  auto& s = c.solver;
  s.T = r.num("time.T", s.T);
  long long M = r.integer("time.M", static_cast<long long>(s.M));
  if (M < 0) throw ValidationError("time.M must be nonnegative");
  s.M = static_cast<std::size_t>(M);
  s.beta = r.num("exponents.beta", s.beta);
  s.epsilon = r.num("exponents.epsilon", s.epsilon);
  if (r.find("exponents.alpha")) s.alpha = r.num("exponents.alpha", 0.0);

  auto lam = r.auto_or_num("solver.lambda", 0.0);
  c.lambda_auto = !lam;
  s.lambda = lam.value_or(0.0);
  auto rho = r.auto_or_num("solver.rho", std::nullopt);
  c.rho_auto = !rho;
  s.rho = rho;
  auto plam = r.auto_or_num("phi.lambda", std::nullopt);
  c.phi_lambda_auto = !plam;
  c.phi_lambda = plam.value_or(0.0);
  s.tau_fix = r.num("solver.tau_fix", s.tau_fix);
  s.max_iterations = static_cast<int>(r.integer("solver.max_iterations", s.max_iterations));
  s.rule = parse_quadrature_rule(r.str("solver.rule", to_string(s.rule)));
  s.form = parse_operator_form(r.str("solver.form", to_string(s.form)));
  s.quadrature_tol = r.num("solver.quadrature_tol", s.quadrature_tol);
  c.axis = static_cast<int>(r.integer("solver.axis", c.axis));

  auto& dr = c.drift;
  dr.kind = parse_drift_kind(r.str("drift.kind", to_string(dr.kind)));
  dr.amplitude = r.num("drift.amplitude", dr.amplitude);
  dr.beta = r.num("drift.beta", s.beta);
  if (auto sd = r.seed("drift.seed")) {
    dr.seed = *sd;
    c.drift_seed_set = true;
  }
  dr.max_shell = static_cast<int>(r.integer("drift.max_shell", dr.max_shell));
  dr.time = parse_time_profile(r.str("drift.time", to_string(dr.time)));
  dr.modulation = r.num("drift.modulation", dr.modulation);
  dr.eps_mol = r.num("drift.eps_mol", dr.eps_mol);
  auto base_kind = r.str("drift.base", "dyadic-random");
  if (dr.kind == DriftKind::Mollified) {
    DriftSpec base = dr;
    base.kind = parse_drift_kind(base_kind);
    if (base.kind == DriftKind::Mollified) throw ValidationError("drift.base cannot itself be mollified");
    base.time = TimeProfile::Static;
    dr.base = std::make_shared<const DriftSpec>(base);
  }

  c.forcing = read_field(r, "forcing", c.forcing);
  c.terminal = read_field(r, "terminal", c.terminal);
  c.field = read_field(r, "field", c.field);

  c.cal_fields = static_cast<std::size_t>(r.integer("calibration.fields", static_cast<long long>(c.cal_fields)));
  c.cal_pairs = static_cast<std::size_t>(r.integer("calibration.bony_pairs", static_cast<long long>(c.cal_pairs)));
  c.cal_seed = r.seed("calibration.seed");

  c.eps_list = r.nums("study.eps", c.eps_list);
  c.degrees = r.ints("study.degrees", c.degrees);
  c.gammas = r.nums("study.gammas", c.gammas);
  c.thetas = r.nums("study.thetas", c.thetas);
  c.alphas = r.nums("study.alphas", c.alphas);
  c.betas = r.nums("study.betas", c.betas);
  c.fields = static_cast<std::size_t>(r.integer("study.fields", static_cast<long long>(c.fields)));
  c.pairs = static_cast<std::size_t>(r.integer("study.pairs", static_cast<long long>(c.pairs)));
  c.t_min = r.num("study.t_min", c.t_min);
  c.t_max = r.num("study.t_max", c.t_max);
  c.t_count = static_cast<std::size_t>(r.integer("study.t_count", static_cast<long long>(c.t_count)));
  c.seed_count = static_cast<std::size_t>(r.integer("study.seeds", static_cast<long long>(c.seed_count)));
  c.perturb = r.str("study.perturb", c.perturb);
  c.path_kind = r.str("study.path", c.path_kind);

  c.probes = static_cast<int>(r.integer("invert.probes", c.probes));
  c.invert_t = r.num("invert.t", c.invert_t);
  c.newton_tol = r.num("invert.tol", c.newton_tol);

  if (auto sd = r.seed("run.seed")) c.seed = *sd;
  c.out = r.str("run.out", c.out);
  c.calibration_path = r.str("run.calibration", c.calibration_path);
  r.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = config_from_table(parse_config_text(ss.str()));
  c.config_file = path;
  return c;
}

void RunConfig::validate() const {
  if (d == 0) throw ValidationError("grid.d is required");
  if (n == 0) throw ValidationError("grid.n is required");
  (void)grid();
  solver.validate();
  drift.validate();
  if (!phi_lambda_auto && !(phi_lambda > 0.0 && std::isfinite(phi_lambda)))
    throw ValidationError("phi.lambda must be \"auto\" or a positive number");
  if (axis < 0 || axis >= d) throw ValidationError("solver.axis must lie in [0, d)");
  validate_field(forcing, "forcing", d, false);
  validate_field(terminal, "terminal", d, true);
  validate_field(field, "field", d, false);
  if (cal_fields == 0 || cal_pairs == 0) throw ValidationError("calibration needs fields >= 1 and bony_pairs >= 1");
  for (double e : eps_list)
    if (!(e > 0.0)) throw ValidationError("study.eps entries must be positive");
  for (int k : degrees)
    if (k < 1) throw ValidationError("study.degrees entries must be >= 1");
  if (gammas.empty() || thetas.size() != gammas.size())
    throw ValidationError("study.gammas and study.thetas must be non-empty lists of equal length");
  if (alphas.empty() || betas.size() != alphas.size())
    throw ValidationError("study.alphas and study.betas must be non-empty lists of equal length");
  if (fields == 0 || pairs == 0 || seed_count == 0) throw ValidationError("study counts must be >= 1");
  if (t_count < 2 || !(t_max > 0.0) || !(t_min >= 0.0) || (t_min > 0.0 && t_min >= t_max))
    throw ValidationError("study time window needs 0 <= t_min < t_max and t_count >= 2");
  if (perturb != "drift" && perturb != "forcing") throw ValidationError("study.perturb must be drift or forcing");
  if (path_kind != "quadratic" && path_kind != "lipschitz")
    throw ValidationError("study.path must be quadratic or lipschitz");
  if (probes < 1) throw ValidationError("invert.probes must be >= 1");
  if (!(invert_t >= 0.0 && invert_t <= solver.T)) throw ValidationError("invert.t must lie in [0, T]");
  if (!(newton_tol > 0.0)) throw ValidationError("invert.tol must be positive");
  if (out.empty()) throw ValidationError("output directory must be non-empty");
}

}  // namespace roughpde::cli
