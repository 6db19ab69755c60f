#include "diracgap/potentials.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "diracgap/errors.hpp"
#include "diracgap/specfun.hpp"

namespace diracgap::potentials {

namespace {

void check_d(int d) {
  if (d < 1 || d > 3) throw ValidationError("potential: d must be 1, 2 or 3");
}

double radius(const std::array<double, 3>& x, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) s += x[k] * x[k];
  return std::sqrt(s);
}

double get(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ValidationError(std::string("potential: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

AnalyticPotential gaussian(int d, double amplitude, double scale) {
  check_d(d);
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ValidationError("gaussian: amplitude must be >= 0");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("gaussian: scale must be > 0");
  AnalyticPotential out;
  out.family = "gaussian";
  out.d = d;
  out.V = [=](const std::array<double, 3>& x) {
    const double r = radius(x, d);
    return amplitude * std::exp(-r * r / scale);
  };
  out.params = {{"family", "gaussian"}, {"amplitude", amplitude}, {"scale", scale}};
  return out;
}

double bump_profile_integral(int d) {
  check_d(d);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double radial = ts.integrate(
      [d](double r) { return r >= 1.0 ? 0.0 : std::pow(r, d - 1) * std::exp(-1.0 / (1.0 - r * r)); }, 0.0, 1.0);
  // |S^0| = 2 covers both half-lines in d = 1.
  return specfun::sphere_area(d) * radial;
}

AnalyticPotential bump(int d, double mass, double width) {
  check_d(d);
  if (!(mass >= 0.0) || !std::isfinite(mass)) throw ValidationError("bump: mass must be >= 0");
  if (!(width > 0.0) || !std::isfinite(width)) throw ValidationError("bump: width must be > 0");
  const double c = mass / (std::pow(width, d) * bump_profile_integral(d));
  AnalyticPotential out;
  out.family = "bump";
  out.d = d;
  out.support_radius = width;
  out.V = [=](const std::array<double, 3>& x) {
    const double y = radius(x, d) / width;
    return y < 1.0 ? c * std::exp(-1.0 / (1.0 - y * y)) : 0.0;
  };
  out.params = {{"family", "bump"}, {"mass", mass}, {"width", width}};
  return out;
}

AnalyticPotential keller_subcritical_1d(double m, double p, double lambda) {
  const exact1d::Keller1DParams kp{m, p, lambda};
  kp.validate();
  if (!(p > 1.0)) throw DomainError("keller_subcritical_1d: p must exceed 1");
  AnalyticPotential out;
  out.family = "keller-1d-subcritical";
  out.d = 1;
  out.V = [kp](const std::array<double, 3>& x) { return exact1d::potential_subcritical(kp, x[0]); };
  out.params = {{"family", out.family}, {"m", m}, {"p", p}, {"lambda", lambda}};
  return out;
}

AnalyticPotential keller_critical_1d(double m, double p) {
  if (!(m > 0.0) || !(p > 1.0)) throw DomainError("keller_critical_1d: need m > 0 and p > 1");
  AnalyticPotential out;
  out.family = "keller-1d-critical";
  out.d = 1;
  out.V = [m, p](const std::array<double, 3>& x) { return exact1d::potential_critical(m, p, x[0]); };
  out.params = {{"family", out.family}, {"m", m}, {"p", p}};
  return out;
}

AnalyticPotential from_json(const nlohmann::json& spec, int d) {
  if (!spec.is_object() || !spec.contains("family") || !spec.at("family").is_string())
    throw ValidationError("potential: expected an object with a string 'family'");
  const std::string f = spec.at("family").get<std::string>();
  if (f == "gaussian") return gaussian(d, get(spec, "amplitude", 2.0), get(spec, "scale", 4.0));
  if (f == "bump") return bump(d, get(spec, "mass", 1.0), get(spec, "width", 1.0));
  const bool sub = f == "keller-1d-subcritical" || f == "paper-1d-subcritical";
  const bool crit = f == "keller-1d-critical" || f == "paper-1d-critical";
  if (sub || crit) {
    if (d != 1) throw ValidationError("potential: family '" + f + "' requires d = 1");
    if (sub) return keller_subcritical_1d(get(spec, "m", 1.0), get(spec, "p", 2.0), get(spec, "lambda", 0.0));
    return keller_critical_1d(get(spec, "m", 1.0), get(spec, "p", 2.0));
  }
  throw ValidationError("potential: unknown family '" + f + "'");
}

exact1d::CompactPotential to_compact_1d(const AnalyticPotential& V) {
  if (V.d != 1 || !(V.support_radius > 0.0))
    throw ValidationError("to_compact_1d: needs a one-dimensional potential with bounded support");
  auto f = V.V;
  return {[f](double x) { return f({x, 0.0, 0.0}); }, -V.support_radius, V.support_radius};
}

bs::PotentialField sample(const AnalyticPotential& V, const bs::GridSpec& grid) {
  if (grid.d != V.d) throw ValidationError("potential: grid dimension differs from the potential's");
  return bs::sample_potential(grid, V.V);
}

}  // namespace diracgap::potentials
