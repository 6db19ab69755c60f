#include "diracgap/radial.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "diracgap/errors.hpp"
#include "diracgap/specfun.hpp"

namespace diracgap {

bool KellerCurve::strictly_decreasing() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    const bool lam_up = points[i].lambda > points[i - 1].lambda;
    const bool alpha_down = points[i].alpha < points[i - 1].alpha;
    if (lam_up != alpha_down) return false;
  }
  return true;
}

}  // namespace diracgap

namespace diracgap::radial {

namespace {

using State = std::array<double, 3>;  // phi, chi, integral of V^p over the ball of radius r

struct Trajectory {
  std::vector<double> r, phi, chi, integral;
  int sign = 0;
};

double surface_weight(int d, double r) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi * r;
    default: return 4.0 * std::numbers::pi * r * r;
  }
}

double default_r_max(const RadialSystemSpec& spec) {
  const double kappa = std::sqrt(std::max(0.0, spec.m * spec.m - spec.lambda * spec.lambda));
  const double B = 2.0 * kappa / (spec.p - 1.0);
  const double r = B > 0.0 ? 12.0 / B : std::numeric_limits<double>::infinity();
  return std::clamp(r, 20.0, 1000.0);
}

Trajectory integrate(const RadialSystemSpec& spec, double s, double r_max, const ShootingOptions& opts, bool record) {
  using namespace boost::numeric::odeint;
  const double lam = spec.lambda, m = spec.m, p = spec.p, delta = spec.delta;
  const int d = spec.d;
  auto rhs = [&](const State& y, State& dy, double r) {
    const double V = spec.potential(y[0], y[1]);
    dy[0] = -(lam + m + V) * y[1];
    dy[1] = (lam - m + V) * y[0] - (delta > 0.0 ? delta * y[1] / r : 0.0);
    dy[2] = surface_weight(d, r) * std::pow(V, p);
  };

  const double V0 = spec.potential(s, 0.0);
  double r = 0.0;
  State y{s, 0.0, 0.0};
  if (delta > 0.0) {
    // Regular series start: chi ~ c r / (1 + delta), phi ~ s - (lam + m + V0) c r^2 / (2 (1 + delta)).
    r = 1e-6 * std::min(1.0, 1.0 / std::max({V0, std::abs(lam - m), 1e-300}));
    const double c = (lam - m + V0) * s;
    y[1] = c * r / (1.0 + delta);
    y[0] = s - (lam + m + V0) * c * r * r / (2.0 * (1.0 + delta));
    y[2] = specfun::sphere_area(d) * std::pow(V0, p) * std::pow(r, d) / d;
  }
  Trajectory tr;
  auto push = [&](double rr, const State& yy) {
    if (!record) return;
    tr.r.push_back(rr);
    tr.phi.push_back(yy[0]);
    tr.chi.push_back(yy[1]);
    tr.integral.push_back(yy[2]);
  };
  push(r, y);
  if (y[1] < 0.0) {
    tr.sign = -1;
    return tr;
  }

  auto stepper = make_controlled<runge_kutta_dopri5<State>>(opts.abs_tol, opts.rel_tol);
  double dt = delta > 0.0 ? r : 1e-3 / std::max(1.0, V0 + std::abs(lam) + m);
  constexpr long kMaxSteps = 2'000'000;
  long steps = 0;
  while (r < r_max) {
    if (++steps > kMaxSteps) throw IntegrationError("shooting: step budget exhausted");
    const State prev = y;
    if (r + dt > r_max) dt = r_max - r;
    const double r_before = r;
    if (stepper.try_step(rhs, y, r, dt) == fail) {
      if (dt < 1e-14 * std::max(r, 1e-300)) throw IntegrationError("shooting: step size underflow");
      continue;
    }
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) throw IntegrationError("shooting: non-finite state");
    push(r, y);
    const bool phi_neg = y[0] < 0.0, chi_neg = y[1] < 0.0;
    if (phi_neg || chi_neg) {
      if (phi_neg && chi_neg) {
        // Decide which component crossed first by linear interpolation inside the step.
        const double tp = prev[0] / (prev[0] - y[0]);
        const double tc = prev[1] / (prev[1] - y[1]);
        tr.sign = tp <= tc ? 1 : -1;
      } else {
        tr.sign = phi_neg ? 1 : -1;
      }
      (void)r_before;
      return tr;
    }
  }
  tr.sign = 0;
  return tr;
}

RadialSolution finish(const RadialSystemSpec& spec, const Trajectory& tr, double s) {
  RadialSolution sol;
  sol.spec = spec;
  sol.s = s;
  // Cut where the amplitude is smallest: past this point the trajectory follows
  // the growing mode rather than the bound state.
  std::size_t cut = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tr.r.size(); ++i) {
    const double a = tr.phi[i] * tr.phi[i] + tr.chi[i] * tr.chi[i];
    if (a < best) {
      best = a;
      cut = i;
    }
  }
  if (tr.sign == 0) cut = tr.r.size() - 1;
  for (std::size_t i = 0; i <= cut; ++i) {
    sol.r.push_back(tr.r[i]);
    sol.phi.push_back(tr.phi[i]);
    sol.chi.push_back(tr.chi[i]);
    sol.V.push_back(spec.potential(tr.phi[i], tr.chi[i]));
  }
  sol.r_cut = tr.r[cut];
  sol.alpha = std::pow(tr.integral[cut], 1.0 / spec.p);
  return sol;
}

}  // namespace

RadialSystemSpec RadialSystemSpec::ground(int d, double lambda, double p, double m) {
  RadialSystemSpec s;
  s.d = d;
  s.delta = d - 1;
  s.lambda = lambda;
  s.p = p;
  s.m = m;
  return s;
}

void RadialSystemSpec::validate() const {
  if (d < 1 || d > 3) throw DomainError("radial: dimension must be 1, 2 or 3");
  if (!(p > 1.0)) throw DomainError("radial: p must exceed 1");
  if (!(m > 0.0)) throw DomainError("radial: mass must be positive");
  if (!(lambda >= -m && lambda < m)) throw DomainError("radial: lambda must lie in [-m, m)");
  if (!(delta >= 0.0)) throw DomainError("radial: delta must be non-negative");
  if (d == 1 && delta != 0.0) throw DomainError("radial: d = 1 requires delta = 0");
}

double RadialSystemSpec::potential(double phi, double chi) const {
  return std::pow(phi * phi + chi * chi, 1.0 / (p - 1.0));
}

std::array<double, 2> radial_rhs(const RadialSystemSpec& spec, double r, double phi, double chi) {
  if (spec.delta > 0.0 && !(r > 0.0)) throw DomainError("radial_rhs: r must be positive when delta > 0");
  const double V = spec.potential(phi, chi);
  const double centrifugal = spec.delta > 0.0 ? spec.delta * chi / r : 0.0;
  return {-(spec.lambda + spec.m + V) * chi, (spec.lambda - spec.m + V) * phi - centrifugal};
}

std::array<double, 2> RadialSolution::evaluate(double x) const {
  if (r.empty() || x > r_cut) return {0.0, 0.0};
  if (x <= r.front()) return {phi.front(), chi.front()};
  const auto it = std::upper_bound(r.begin(), r.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
  if (i + 1 >= r.size()) return {phi.back(), chi.back()};
  const double h = r[i + 1] - r[i];
  const double t = (x - r[i]) / h;
  const auto d0 = radial_rhs(spec, std::max(r[i], 1e-300), phi[i], chi[i]);
  const auto d1 = radial_rhs(spec, r[i + 1], phi[i + 1], chi[i + 1]);
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return {h00 * phi[i] + h10 * h * d0[0] + h01 * phi[i + 1] + h11 * h * d1[0],
          h00 * chi[i] + h10 * h * d0[1] + h01 * chi[i + 1] + h11 * h * d1[1]};
}

int shooting_sign(const RadialSystemSpec& spec, double s, const ShootingOptions& opts) {
  spec.validate();
  const double r_max = opts.r_max > 0.0 ? opts.r_max : default_r_max(spec);
  return integrate(spec, s, r_max, opts, false).sign;
}

RadialSolution shoot_ground_state(const RadialSystemSpec& spec, const ShootingOptions& opts) {
  spec.validate();
  if (!(opts.s_min > 0.0 && opts.s_max > opts.s_min)) throw ValidationError("shooting: invalid s range");
  double r_max = opts.r_max > 0.0 ? opts.r_max : default_r_max(spec);

  const int decades = static_cast<int>(std::ceil(std::log10(opts.s_max / opts.s_min)));
  const int n = decades * opts.scan_per_decade + 1;
  std::vector<double> ss(n);
  std::vector<int> sg(n);
  // Amplitudes whose trajectory overflows (large s with a steep nonlinearity) are left out of the scan.
  auto scan_sign = [&](double s, const ShootingOptions& o) {
    try {
      return integrate(spec, s, r_max, o, false).sign;
    } catch (const IntegrationError&) {
      return 0;
    }
  };
  for (int i = 0; i < n; ++i) {
    ss[i] = opts.s_min * std::pow(opts.s_max / opts.s_min, static_cast<double>(i) / (n - 1));
    sg[i] = scan_sign(ss[i], opts);
  }
  std::vector<std::pair<int, int>> candidates;
  int last_nonzero = -1;
  for (int i = 0; i < n; ++i) {
    if (sg[i] == 0) continue;
    if (last_nonzero >= 0 && sg[last_nonzero] == -1 && sg[i] == 1) candidates.emplace_back(last_nonzero, i);
    last_nonzero = i;
  }
  const int brackets = static_cast<int>(candidates.size());

  // A genuine bracket survives a hundredfold tighter integration tolerance; in
  // the scale-critical case p = d spurious sign changes drift with the tolerance.
  ShootingOptions tight = opts;
  tight.rel_tol *= 1e-2;
  tight.abs_tol *= 1e-2;
  auto robust = [&](int a, int b) {
    const int lo_i = std::max(a - 1, 0), hi_i = std::min(b + 1, n - 1);
    const std::pair<int, int> trials[] = {{a, b}, {lo_i, b}, {a, hi_i}, {lo_i, hi_i}};
    for (const auto& [x, y] : trials) {
      if (scan_sign(ss[x], tight) == -1 && scan_sign(ss[y], tight) == 1)
        return true;
    }
    return false;
  };
  int first = -1, hi_idx = -1;
  for (const auto& [a, b] : candidates) {
    if (robust(a, b)) {
      first = a;
      hi_idx = b;
      break;
    }
  }
  if (first < 0) {
    std::ostringstream msg;
    msg << "shooting: no bracketing phi(0) in [" << opts.s_min << ", " << opts.s_max << "] at lambda = " << spec.lambda
        << ", p = " << spec.p << ", d = " << spec.d;
    if (brackets > 0) msg << " (" << brackets << " sign change(s) rejected as tolerance artefacts)";
    throw NoSolutionError(msg.str());
  }
  double lo = ss[first];
  double hi = ss[hi_idx];

  for (int it = 0; it < 200; ++it) {
    const double mid = hi / lo > 1.0 + 1e-6 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    int sign = integrate(spec, mid, r_max, opts, false).sign;
    for (int grow = 0; sign == 0 && grow < 3; ++grow) {
      r_max *= 2.0;
      sign = integrate(spec, mid, r_max, opts, false).sign;
    }
    if (sign == 0) {
      RadialSolution sol = finish(spec, integrate(spec, mid, r_max, opts, true), mid);
      sol.brackets = brackets;
      return sol;
    }
    (sign > 0 ? hi : lo) = mid;
  }
  const Trajectory a = integrate(spec, lo, r_max, opts, true);
  const Trajectory b = integrate(spec, hi, r_max, opts, true);
  const bool use_a = a.r.back() >= b.r.back();
  RadialSolution sol = finish(spec, use_a ? a : b, use_a ? lo : hi);
  sol.brackets = brackets;
  return sol;
}

KellerCurve radial_keller_curve(int d, double p, const std::vector<double>& lambda_grid, double m,
                                const ShootingOptions& opts) {
  KellerCurve curve;
  for (double lam : lambda_grid) {
    try {
      const RadialSolution sol = shoot_ground_state(RadialSystemSpec::ground(d, lam, p, m), opts);
      curve.points.push_back({sol.alpha, lam, "ode"});
    } catch (const std::exception& e) {
      curve.notes.push_back(std::string("skipped lambda sample: ") + e.what());
    }
  }
  if (!curve.strictly_decreasing()) curve.notes.push_back("alpha is not strictly decreasing in lambda along the curve");
  return curve;
}

CriticalNorm radial_critical_norm(int d, double p, double m, const ShootingOptions& opts) {
  auto attempt = [&](double lam, double& alpha) {
    try {
      alpha = shoot_ground_state(RadialSystemSpec::ground(d, lam, p, m), opts).alpha;
      return true;
    } catch (const NoSolutionError&) {
      return false;
    }
  };
  double alpha = 0.0;
  if (attempt(-m, alpha)) return {alpha, -m, true};
  // Walk upward until a solution exists, then bisect on solvability.
  const double offsets[] = {1e-3, 1e-2, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.2, 1.5, 1.8};
  double bad = -m, good = std::numeric_limits<double>::quiet_NaN(), good_alpha = 0.0;
  for (double off : offsets) {
    const double lam = -m + off * m;
    if (attempt(lam, alpha)) {
      good = lam;
      good_alpha = alpha;
      break;
    }
    bad = lam;
  }
  if (std::isnan(good)) throw NoSolutionError("radial_critical_norm: no solvable energy found in the gap");
  for (int it = 0; it < 40 && good - bad > 1e-9 * m; ++it) {
    const double mid = 0.5 * (bad + good);
    if (attempt(mid, alpha)) {
      good = mid;
      good_alpha = alpha;
    } else {
      bad = mid;
    }
  }
  return {good_alpha, good, false};
}

double wp_norm_p(double p, int d, double delta) {
  if (d < 1 || d > 3) throw DomainError("wp: dimension must be 1, 2 or 3");
  if (!(delta < p - 1.0)) throw DomainError("wp: requires delta < p - 1");
  if (!(p > 0.5 * d)) throw DomainError("wp: the norm is infinite unless p > d/2");
  return std::exp(p * std::log(p) + 0.5 * d * std::log(std::numbers::pi) + (p - d) * std::log(2.0 / (p - 1.0 - delta)) +
                  specfun::ln_gamma(p - 0.5 * d) - specfun::ln_gamma(p));
}

WpExact wp_closed_form(double p, int d, double delta, const std::vector<double>& r_grid) {
  WpExact out;
  out.norm_p = wp_norm_p(p, d, delta);
  out.norm = std::pow(out.norm_p, 1.0 / p);
  const double mu = 0.5 * (p - 1.0 - delta);
  const double amp = std::pow(p * mu, 0.5 * (p - 1.0));
  RadialSolution& sol = out.solution;
  sol.spec = RadialSystemSpec{d, delta, -1.0, p, 1.0};
  for (double r : r_grid) {
    const double q = mu * mu + r * r;
    const double den = std::pow(q, 0.5 * p);
    sol.r.push_back(r);
    sol.phi.push_back(amp * mu / den);
    sol.chi.push_back(amp * r / den);
    sol.V.push_back(p * mu / q);
  }
  sol.alpha = out.norm;
  sol.s = amp * std::pow(mu, 1.0 - p);
  sol.r_cut = r_grid.empty() ? 0.0 : r_grid.back();
  return out;
}

}  // namespace diracgap::radial
