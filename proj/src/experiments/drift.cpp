#include <cmath>

#include "roughpde/experiments.hpp"
#include "roughpde/random_field.hpp"

namespace roughpde {

std::string to_string(DriftKind k) {
  switch (k) {
    case DriftKind::Zero: return "zero";
    case DriftKind::SmoothDeterministic: return "smooth";
    case DriftKind::DyadicRandom: return "dyadic-random";
    case DriftKind::Mollified: return "mollified";
  }
  return "?";
}

std::string to_string(TimeProfile p) { return p == TimeProfile::Static ? "static" : "modulated"; }

DriftKind parse_drift_kind(const std::string& s) {
  if (s == "zero") return DriftKind::Zero;
  if (s == "smooth") return DriftKind::SmoothDeterministic;
  if (s == "dyadic-random") return DriftKind::DyadicRandom;
  if (s == "mollified") return DriftKind::Mollified;
  throw ValidationError("unknown drift kind '" + s + "'");
}

TimeProfile parse_time_profile(const std::string& s) {
  if (s == "static") return TimeProfile::Static;
  if (s == "modulated") return TimeProfile::Modulated;
  throw ValidationError("unknown time profile '" + s + "'");
}

void DriftSpec::validate() const {
  if (!std::isfinite(amplitude) || amplitude < 0.0) throw ValidationError("drift amplitude must be finite and >= 0");
  if (kind == DriftKind::DyadicRandom && !(beta > 0.0 && beta < 0.5))
    throw ValidationError("dyadic-random drift needs beta in (0, 1/2)");
  if (kind == DriftKind::Mollified) {
    if (!base) throw ValidationError("mollified drift needs a base spec");
    if (!(eps_mol >= 0.0)) throw ValidationError("mollification time must be >= 0");
    base->validate();
  }
  if (time == TimeProfile::Modulated && !(std::abs(modulation) < 1.0))
    throw ValidationError("modulation depth must lie in (-1, 1)");
}

DriftSpec DriftSpec::mollified(const DriftSpec& base, double eps) {
  DriftSpec s;
  s.kind = DriftKind::Mollified;
  s.base = std::make_shared<const DriftSpec>(base);
  s.eps_mol = eps;
  s.amplitude = base.amplitude;
  return s;
}

namespace {

SpectralField static_profile(const DriftSpec& spec, const TorusGrid& grid) {
  const int d = grid.d();
  switch (spec.kind) {
    case DriftKind::Zero: return SpectralField::zeros(grid, d);
    case DriftKind::SmoothDeterministic: {
      const double a = spec.amplitude, k0 = grid.k0();
      return SpectralField::from_function(grid, d, [&](const double* x, double* out) {
        for (int i = 0; i < d; ++i) out[i] = a * std::sin(k0 * x[i]);
      });
    }
    case DriftKind::DyadicRandom:
      return random_dyadic_field(grid, -spec.beta, spec.seed, d, spec.amplitude, spec.max_shell);
    case DriftKind::Mollified: break;
  }
  throw ValidationError("no static profile for this drift kind");
}

}  // namespace

VectorPath gen_drift(const DriftSpec& spec, const TorusGrid& grid, const std::vector<double>& times) {
  spec.validate();
  if (times.size() < 3) throw ValidationError("time mesh needs M >= 2");
  VectorPath out;
  if (spec.kind == DriftKind::Mollified) {
    out = mollify(spec.eps_mol, gen_drift(*spec.base, grid, times));
  } else {
    out.times = times;
    out.slices.assign(times.size(), static_profile(spec, grid));
  }
  if (spec.time == TimeProfile::Modulated) {
    const double T = times.back();
    for (std::size_t m = 0; m < times.size(); ++m)
      out.slices[m] = (1.0 + spec.modulation * std::sin(kTwoPi * times[m] / T)) * out.slices[m];
  }
  return out;
}

}  // namespace roughpde
