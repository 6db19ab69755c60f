#include "diracgap/specfun.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "diracgap/errors.hpp"

namespace diracgap::specfun {

void Tolerance::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-6)) throw ValidationError("specfun: rel_tol must lie in (0, 1e-6]");
  if (max_terms < 64) throw ValidationError("specfun: max_terms must be at least 64");
}

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("ln_gamma: argument must be positive and finite");
  return std::lgamma(x);
}

double beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta: arguments must be positive");
  return std::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
}

namespace {

// Plain power series of 2F1 for |w| < 1 with Neumaier-compensated summation.
double series_2f1(double a, double b, double c, double w, const Tolerance& tol) {
  double sum = 1.0, comp = 0.0, term = 1.0;
  for (std::size_t n = 0; n < tol.max_terms; ++n) {
    const double dn = static_cast<double>(n);
    const double ratio = (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * w;
    term *= ratio;
    if (term == 0.0) return sum + comp;
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    // Once the ratio magnitude is below one and bounded by rho for all later n,
    // the remaining tail is at most |term| * rho / (1 - rho).
    const double rho = std::max(std::abs(w), std::abs(ratio));
    if (rho < 1.0 && n > 2) {
      const double tail = std::abs(term) * rho / (1.0 - rho);
      if (tail <= tol.rel_tol * 0.1 * std::abs(sum + comp)) return sum + comp;
    }
  }
  std::ostringstream msg;
  msg << "hyp2f1_nonpos: series did not converge within " << tol.max_terms << " terms";
  throw ConvergenceError(msg.str(), std::abs(term));
}

// Euler integral for 0 < b < c and 0 <= w < 1. Used near w = 1, where the
// series tail decays only algebraically.
double euler_2f1(double a, double b, double c, double w, const Tolerance& tol) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double t, double tc) {
    // Past the midpoint the integrator supplies 1 - t exactly as tc.
    const double s = t > 0.5 ? tc : 1.0 - t;
    const double one_minus_wt = (1.0 - w) + w * s;
    return std::exp((b - 1.0) * std::log(t) + (c - b - 1.0) * std::log(s) - a * std::log(one_minus_wt));
  };
  double err = 0.0;
  const double I = ts.integrate(f, 0.0, 1.0, 0.01 * tol.rel_tol, &err);
  if (!std::isfinite(I) || err > tol.rel_tol * std::abs(I))
    throw ConvergenceError("hyp2f1_nonpos: Euler integral did not converge", err);
  return I / beta(b, c - b);
}

}  // namespace

double hyp2f1_nonpos(double a, double b, double c, double z, const Tolerance& tol) {
  tol.validate();
  if (!(c > 0.0)) throw DomainError("hyp2f1_nonpos: c must be positive");
  if (!(z <= 0.0) || !std::isfinite(z)) throw DomainError("hyp2f1_nonpos: z must be finite and non-positive");
  if (z == 0.0) return 1.0;
  if (z > -0.5) return series_2f1(a, b, c, z, tol);
  // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)). Taking a as the
  // smaller parameter keeps c - a - (c - b) = b - a >= 0, so the transformed
  // series stays summable even as z/(z-1) approaches 1.
  if (a > b) std::swap(a, b);
  const double w = z / (z - 1.0);
  const double pre = std::pow(1.0 - z, -a);
  const double bt = c - b;
  if (w > 0.75) {
    if (bt > 0.0 && bt < c) return pre * euler_2f1(a, bt, c, w, tol);
    if (a > 0.0 && a < c) return pre * euler_2f1(bt, a, c, w, tol);
  }
  return pre * series_2f1(a, bt, c, w, tol);
}

double bessel_k(double nu, double x) {
  if (!(nu >= 0.0)) throw DomainError("bessel_k: order must be non-negative");
  if (!(x > 0.0)) throw DomainError("bessel_k: argument must be positive");
  return std::cyl_bessel_k(nu, x);
}

double sphere_area(int d) {
  if (d < 1) throw DomainError("sphere_area: dimension must be positive");
  const double h = 0.5 * d;
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

}  // namespace diracgap::specfun
