#include "diracgap/exact_1d.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <numbers>

#include "diracgap/errors.hpp"
#include "diracgap/specfun.hpp"

namespace diracgap::exact1d {

namespace {

constexpr double kPi = std::numbers::pi;

void require_subcritical(const Keller1DParams& params) {
  params.validate();
  if (!(params.p > 1.0)) throw DomainError("exact_1d: closed-form potentials need p > 1");
}

}  // namespace

void Keller1DParams::validate() const {
  if (!(m > 0.0)) throw DomainError("exact_1d: mass must be positive");
  if (!(p >= 1.0)) throw DomainError("exact_1d: p must be at least 1");
  if (!(lambda > -m && lambda < m)) throw DomainError("exact_1d: lambda must lie in (-m, m); use the critical forms at -m");
}

double Keller1DParams::kappa() const { return std::sqrt(m * m - lambda * lambda); }
double Keller1DParams::A() const { return p / (p - 1.0) * (m * m - lambda * lambda); }
double Keller1DParams::B() const { return 2.0 / (p - 1.0) * kappa(); }
double Keller1DParams::z0() const { return (m - lambda) / (m + lambda); }

double potential_subcritical(const Keller1DParams& params, double x) {
  require_subcritical(params);
  const double bx = params.B() * std::abs(x);
  // cosh overflows far out; the potential is then ~ 2A e^{-Bx}/m.
  if (bx > 600.0) return 2.0 * params.A() / params.m * std::exp(-bx);
  return params.A() / (params.m * std::cosh(bx) + params.lambda);
}

double potential_critical(double m, double p, double x) {
  if (!(p > 1.0)) throw DomainError("potential_critical: p must exceed 1");
  if (!(m > 0.0)) throw DomainError("potential_critical: mass must be positive");
  const double zeta = 2.0 * m / (p - 1.0);
  return zeta * p / (1.0 + zeta * zeta * x * x);
}

double alpha_D(const Keller1DParams& params) {
  params.validate();
  const double m = params.m, p = params.p, lam = params.lambda;
  if (p == 1.0) return std::acos(lam / m);
  const double z0 = params.z0();
  const double log_pow = p * std::log(p) + (p - 1.0) * std::log((m + lam) / (p - 1.0)) + (p - 0.5) * std::log(z0) +
                         std::log(specfun::beta(0.5, p)) + std::log(specfun::hyp2f1_nonpos(0.5, p, p + 0.5, -z0));
  return std::exp(log_pow / p);
}

double alpha_star(double p, double m) {
  if (!(p > 1.0)) throw DomainError("alpha_star: p must exceed 1 (the p -> 1 limit is pi)");
  if (!(m > 0.0)) throw DomainError("alpha_star: mass must be positive");
  return p * std::pow(2.0 * m / (p - 1.0), (p - 1.0) / p) * std::pow(specfun::beta(0.5, p - 0.5), 1.0 / p);
}

double Lambda_D_1d(double alpha, double p, double m) {
  if (!(alpha > 0.0)) throw DomainError("Lambda_D_1d: alpha must be positive");
  if (!(m > 0.0)) throw DomainError("Lambda_D_1d: mass must be positive");
  if (!(p >= 1.0)) throw DomainError("Lambda_D_1d: p must be at least 1");
  if (p == 1.0) {
    if (alpha >= kPi) throw SupercriticalError("Lambda_D_1d: alpha reaches the critical value pi");
    return m * std::cos(alpha);
  }
  if (alpha >= alpha_star(p, m)) throw SupercriticalError("Lambda_D_1d: alpha reaches the critical norm");
  // alpha_D decreases strictly in lambda.
  double lo = -m, hi = m;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * m; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= -m || mid >= m) break;
    if (alpha_D({m, p, mid}) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> spinor_solution_1d(const Keller1DParams& params, double x) {
  require_subcritical(params);
  const double m = params.m, p = params.p, lam = params.lambda;
  const double V = potential_subcritical(params, x);
  const double w = std::pow(V, p - 1.0) / (2.0 * m);
  const double shift = (p - 1.0) / p * V;
  const double phi = std::sqrt(w * (m + lam + shift));
  const double chi = std::sqrt(std::max(0.0, w * (m - lam - shift)));
  return {phi, x < 0.0 ? -chi : chi};
}

Conserved conservation(double phi, double chi, const Keller1DParams& params) {
  return conservation(std::complex<double>(phi), std::complex<double>(chi), params);
}

Conserved conservation(std::complex<double> phi, std::complex<double> chi, const Keller1DParams& params) {
  const double m = params.m, p = params.p, lam = params.lambda;
  const double c2 = std::norm(chi), p2 = std::norm(phi);
  Conserved out;
  out.H = m * (c2 - p2) + lam * (c2 + p2);
  if (p > 1.0) out.H += (p - 1.0) / p * std::pow(c2 + p2, p / (p - 1.0));
  out.G = (std::conj(chi) * phi - std::conj(phi) * chi).imag();
  return out;
}

PruferReport prufer_lambda_bound(const CompactPotential& V, double lambda, double m) {
  if (!(m > 0.0) || !(std::abs(lambda) < m)) throw DomainError("prufer: lambda must lie in (-m, m)");
  if (!(V.right > V.left)) throw DomainError("prufer: empty support");
  using namespace boost::numeric::odeint;
  const double kappa = std::sqrt(m * m - lambda * lambda);
  PruferReport rep;
  rep.theta_start = std::asin(lambda / m);
  double theta = rep.theta_start;
  auto rhs = [&](const double& th, double& dth, double x) {
    dth = V.V(x) - kappa * std::sin(2.0 * th) + lambda * (1.0 + std::cos(2.0 * th));
  };
  const double width = V.right - V.left;
  try {
    integrate_adaptive(make_controlled<runge_kutta_dopri5<double>>(1e-12, 1e-12), rhs, theta, V.left, V.right,
                       1e-3 * width);
  } catch (const std::exception& e) {
    throw IntegrationError(std::string("prufer: ") + e.what());
  }
  if (!std::isfinite(theta)) throw IntegrationError("prufer: angle diverged");
  rep.theta_end = theta;
  rep.theta_deficit = 0.5 * kPi - theta;
  rep.reaches_half_pi = theta >= 0.5 * kPi;
  auto integrand = [&](const double&, double& dy, double x) { dy = V.V(x); };
  double l1 = 0.0;
  integrate_adaptive(make_controlled<runge_kutta_dopri5<double>>(1e-13, 1e-12), integrand, l1, V.left, V.right,
                     1e-3 * width);
  rep.l1_norm = l1;
  rep.strict_bound_holds = std::acos(lambda / m) < l1;
  return rep;
}

std::optional<double> prufer_lambda_D(const CompactPotential& V, double m, double tol) {
  const double edge = 1e-9 * m;
  const double lo_end = -m + edge, hi_end = m - edge;
  if (prufer_lambda_bound(V, lo_end, m).reaches_half_pi)
    throw SupercriticalError("prufer: the ground state lies below the gap");
  constexpr int kScan = 200;
  double prev = lo_end;
  for (int i = 1; i <= kScan; ++i) {
    const double lam = lo_end + (hi_end - lo_end) * i / kScan;
    if (prufer_lambda_bound(V, lam, m).reaches_half_pi) {
      double lo = prev, hi = lam;
      for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (prufer_lambda_bound(V, mid, m).reaches_half_pi) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev = lam;
  }
  return std::nullopt;
}

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !(c > 0.0) || !(m > 0.0)) throw DomainError("physical constants must be positive");
}

double nonrel_alpha(const PhysicalConstants& k, double lambda, double p, int d) {
  k.validate();
  if (d != 1) throw DomainError("nonrel_alpha: only d = 1 has a closed-form threshold");
  const double mc2 = k.m * k.c * k.c;
  if (!(std::abs(lambda) < mc2)) throw DomainError("nonrel_alpha: |lambda| must be below m c^2");
  const double dp = d / p;
  return std::pow(k.hbar, dp) * std::pow(k.m, 1.0 - dp) * std::pow(k.c, 2.0 - dp) * alpha_D({1.0, p, lambda / mc2});
}

double nonrel_Kp(double p) {
  if (!(p > 1.0)) throw DomainError("nonrel_Kp: p must exceed 1");
  const double inner = std::pow(p, p) * std::pow(p - 1.0, -(p - 1.0)) * specfun::beta(0.5, p);
  return std::pow(inner, -2.0 / (2.0 * p - 1.0));
}

double nonrel_gap_depth(double alpha, double p, int d) {
  if (d != 1) throw DomainError("nonrel_gap_depth: K_p is only available for d = 1");
  const double eta = 2.0 * p / (2.0 * p - d);
  return std::pow(2.0, d / (2.0 * p - d)) * nonrel_Kp(p) * std::pow(alpha, eta);
}

double implicit_potential_pointwise(double a, double b, double cpar, double nu, double p) {
  if (!(a >= 0.0) || !(b >= 0.0) || !(cpar >= 0.0)) throw DomainError("implicit_potential: a, b, c must be non-negative");
  if (!(nu > 0.0)) throw DomainError("implicit_potential: nu must be positive");
  if (!(p > 1.0)) throw DomainError("implicit_potential: p must exceed 1");
  if (a == 0.0 && b == 0.0) return 0.0;
  auto f = [&](double X) { return nu * std::pow(X, p - 1.0) - a - b / ((cpar + X) * (cpar + X)); };
  double lo = 0.0;
  double hi = std::max(1.0, std::pow((a + b) / nu, 1.0 / (p - 1.0)));
  while (f(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double flo = std::abs(f(lo)), fhi = std::abs(f(hi));
  return flo < fhi ? lo : hi;
}

}  // namespace diracgap::exact1d
