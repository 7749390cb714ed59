#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "roughpde/experiments.hpp"

namespace roughpde {

int count_inversions(const std::vector<double>& v, double floor) {
  int n = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] > floor) ++n;
  return n;
}

const ErrorColumn& ConvergenceStudy::column(const std::string& name) const {
  for (const auto& c : columns)
    if (c.name == name) return c;
  throw ValidationError("study has no column '" + name + "'");
}

ErrorColumn& ConvergenceStudy::add_column(const std::string& name, bool checked) {
  columns.push_back(ErrorColumn{name, {}, checked});
  return columns.back();
}

void ConvergenceStudy::finalize(double final_tol) {
  verdict = monotone = true;
  for (auto* group : {&columns, &cauchy})
    for (auto& c : *group) {
      c.inversions = count_inversions(c.values, floor);
      if (!c.checked) continue;
      for (double v : c.values)
        if (!std::isfinite(v)) verdict = false;
      c.final_ok = group == &cauchy || c.values.empty() || c.values.back() <= final_tol;
      monotone = monotone && c.inversions <= 1;
      verdict = verdict && c.inversions <= 1 && c.final_ok;
    }
  for (const auto& [name, ok] : checks) verdict = verdict && ok;
}

std::string ConvergenceStudy::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17) << parameter;
  for (const auto& c : columns) os << ',' << c.name;
  for (const auto& c : cauchy) os << ",cauchy_" << c.name;
  os << '\n';
  for (std::size_t i = 0; i < params.size(); ++i) {
    os << params[i];
    for (const auto& c : columns) os << ',' << (i < c.values.size() ? c.values[i] : NAN);
    // Cauchy differences sit on the coarser parameter of each pair.
    for (const auto& c : cauchy) {
      os << ',';
      if (i < c.values.size()) os << c.values[i];
    }
    os << '\n';
  }
  return os.str();
}

std::string ConvergenceStudy::to_json() const {
  using nlohmann::json;
  auto col = [](const ErrorColumn& c) {
    json j = {{"values", c.values}, {"checked", c.checked}, {"inversions", c.inversions}};
    if (c.checked) j["final_ok"] = c.final_ok;
    return j;
  };
  json j;
  j["name"] = name;
  j["parameter"] = parameter;
  j["params"] = params;
  j["floor"] = floor;
  j["verdict"] = verdict;
  j["monotone"] = monotone;
  for (const auto& c : columns) j["columns"][c.name] = col(c);
  for (const auto& c : cauchy) j["cauchy"][c.name] = col(c);
  j["scalars"] = scalars;
  j["checks"] = checks;
  return j.dump(2);
}

void ConvergenceStudy::write(const std::string& csv_path, const std::string& json_path) const {
  std::ofstream csv(csv_path), js(json_path);
  if (!csv || !js) throw IoError("cannot write study output to " + csv_path);
  csv << to_csv();
  js << to_json() << '\n';
  if (!csv || !js) throw IoError("write failed for " + csv_path);
}

}  // namespace roughpde
