#pragma once

#include <array>
#include <functional>
#include <string>

#include "diracgap/exact_1d.hpp"
#include "diracgap/grid.hpp"
#include "json.hpp"

namespace diracgap::potentials {

struct AnalyticPotential {
  std::string family;
  int d = 1;
  std::function<double(const std::array<double, 3>&)> V;
  double support_radius = 0.0;  // 0 when the support is unbounded
  nlohmann::json params;
};

// A exp(-|x|^2 / s)
AnalyticPotential gaussian(int d, double amplitude, double scale);
// Radial bump proportional to exp(-1 / (1 - |x|^2/w^2)) on |x| < w, scaled to integral `mass`.
AnalyticPotential bump(int d, double mass, double width);
// Optimal 1D potential at ground-state energy lambda > -m.
AnalyticPotential keller_subcritical_1d(double m, double p, double lambda);
// Optimal 1D potential at lambda = -m.
AnalyticPotential keller_critical_1d(double m, double p);

// {"family": ..., parameters...}; unspecified parameters take documented defaults.
AnalyticPotential from_json(const nlohmann::json& spec, int d);

// Integral of the unit-height bump profile over R^d.
double bump_profile_integral(int d);

// Only for families with bounded support in d = 1.
exact1d::CompactPotential to_compact_1d(const AnalyticPotential& V);

bs::PotentialField sample(const AnalyticPotential& V, const bs::GridSpec& grid);

}  // namespace diracgap::potentials
