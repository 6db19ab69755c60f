#include "diracgap/lieb_thirring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include "diracgap/errors.hpp"
#include "diracgap/parallel.hpp"
#include "diracgap/specfun.hpp"

namespace diracgap::lt {

namespace {
constexpr double kEndpointSlack = 1e-12;
}

void LtParams::validate() const {
  if (d < 1 || d > 3) throw ValidationError("lt: d must be 1, 2 or 3");
  if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("lt: m must be > 0");
  if (!(gamma > 0.5 * d) || !std::isfinite(gamma)) throw ValidationError("lt: gamma must exceed d/2");
  if (!(p > d)) throw ValidationError("lt: p must exceed d");
  if (p > gamma + 0.5 * d + kEndpointSlack) throw DomainError("lt: p must not exceed gamma + d/2");
}

bool LtParams::at_endpoint() const { return std::abs(p - (gamma + 0.5 * d)) <= kEndpointSlack; }

double x_integral(int d, double p, double e, double m) {
  if (!(p > d)) throw ValidationError("x_integral: p must exceed d");
  if (!(e > 0.0) || !(m > 0.0)) throw ValidationError("x_integral: e and m must be positive");
  const double h = 0.5 * d - 1.0;
  auto f = [=](double X) {
    if (X <= 0.0) return 0.0;
    return std::pow(X * (e * X + 2.0 * m), h) * (e * X + m) * std::pow(X + 1.0, -p);
  };
  // Split at 1: integrable X^{d/2-1} singularity at 0 (d = 1), algebraic tail X^{d-1-p}.
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  return ts.integrate(f, 0.0, 1.0) + es.integrate(f, 1.0, std::numeric_limits<double>::infinity());
}

double pr_constant(int d, double p, double m) {
  // I(e; m) = m^{d/2} I(e/m; 1), so the constant does not depend on m.
  if (!(m > 0.0)) throw ValidationError("pr_constant: m must be positive");
  double best = x_integral(d, p, 2.0, 1.0);
  double arg = 2.0;
  const int n = 96;
  for (int i = 0; i < n; ++i) {
    const double e = 2.0 * std::pow(10.0, -6.0 * (1.0 - static_cast<double>(i) / n));
    const double v = x_integral(d, p, e, 1.0);
    if (v > best) best = v, arg = e;
  }
  if (arg < 2.0) {
    const auto r = boost::math::tools::brent_find_minima(
        [&](double e) { return -x_integral(d, p, e, 1.0); }, std::max(1e-7, arg / 1.2), std::min(2.0, arg * 1.2), 40);
    best = std::max(best, -r.second);
  }
  return specfun::sphere_area(d) * std::pow(2.0 * M_PI, -d) * best;
}

LtConstant lt_constant(const LtParams& params) {
  params.validate();
  LtConstant out;
  out.n_components = (params.d == 3) ? 4 : 2;
  const double crit = params.gamma + 0.5 * params.d;
  auto L_of = [&](double q) {
    return out.n_components * pr_constant(params.d, q, params.m) * params.gamma * std::pow(2.0, params.gamma) /
           (crit - q);
  };
  char buf[256];
  if (!params.at_endpoint()) {
    out.p_used = params.p;
    out.C = pr_constant(params.d, params.p, params.m);
    out.L = L_of(params.p);
    std::snprintf(buf, sizeof buf, "L = N*C*gamma*2^gamma/(gamma+d/2-p) = %d*%.12g*%g*%.12g/%.12g", out.n_components,
                  out.C, params.gamma, std::pow(2.0, params.gamma), crit - params.p);
  } else {
    out.endpoint = true;
    const double lo = params.d + 1e-6, hi = params.p - 1e-6;
    const auto r = boost::math::tools::brent_find_minima(L_of, lo, hi, 40);
    out.p_used = r.first;
    out.C = pr_constant(params.d, r.first, params.m);
    out.L = r.second;
    std::snprintf(buf, sizeof buf,
                  "endpoint: L = min_{d<q<p} N*C_q*gamma*2^gamma/(gamma+d/2-q), attained at q = %.9g with C_q = %.12g",
                  out.p_used, out.C);
  }
  out.assembly = buf;
  return out;
}

double lt_rhs(const bs::PotentialField& V, const LtParams& params, const LtConstant& constant) {
  params.validate();
  V.validate();
  if (V.grid.d != params.d) throw ValidationError("lt_rhs: dimension mismatch");
  // At the endpoint the exponent of V_m is gamma + d/2 - p = 0 by construction.
  const double q = constant.endpoint ? params.p : constant.p_used;
  const double ex = params.gamma + 0.5 * params.d - q;
  double s = 0.0;
  for (double v : V.values) {
    if (v <= 0.0) continue;
    s += std::pow(std::min(params.m, v), ex) * std::pow(v, q);
  }
  return constant.L * std::pow(params.m, 0.5 * params.d) * V.grid.cell_volume() * s;
}

double lt_rhs(const bs::PotentialField& V, const LtParams& params) { return lt_rhs(V, params, lt_constant(params)); }

RieszMean riesz_mean(const std::vector<double>& gap_energies, double m, double gamma, int layer_cake_points) {
  if (!(gamma > 0.0)) throw ValidationError("riesz_mean: gamma must be positive");
  if (layer_cake_points < 2) throw ValidationError("riesz_mean: need at least 2 layer-cake points");
  RieszMean out;
  out.energies = gap_energies;
  std::sort(out.energies.begin(), out.energies.end());
  for (double l : out.energies) out.direct += std::pow(m - l, gamma);
  // N_e = #{k : m - lambda_k > e}
  std::vector<double> ek;
  for (double l : out.energies) ek.push_back(m - l);
  std::sort(ek.begin(), ek.end());
  auto N = [&](double e) { return static_cast<double>(ek.end() - std::upper_bound(ek.begin(), ek.end(), e)); };
  // Midpoint rule: tolerates the e^{gamma-1} endpoint behaviour for gamma < 1.
  const double de = 2.0 * m / layer_cake_points;
  for (int i = 0; i < layer_cake_points; ++i) {
    const double e = (i + 0.5) * de;
    out.layer_cake += gamma * std::pow(e, gamma - 1.0) * N(e) * de;
  }
  return out;
}

RieszMean riesz_mean(const dirac::CliffordRep& rep, const bs::PotentialField& V, double m, double gamma,
                     const bs::SweepOptions& opts) {
  return riesz_mean(bs::gap_eigenvalues(rep, V, m, bs::default_gap_grid(m), opts), m, gamma);
}

std::vector<double> default_e_samples(double m, int n) {
  if (n < 1) throw ValidationError("default_e_samples: n must be >= 1");
  std::vector<double> out(n);
  const double lo = std::log(1e-3 * m), hi = std::log(2.0 * m);
  for (int i = 0; i < n; ++i) out[i] = std::exp(lo + (hi - lo) * (i + 1.0) / (n + 1.0));
  return out;
}

ChainReport verify_counting_chain(const dirac::CliffordRep& rep, const bs::PotentialField& V, double m,
                                  const std::vector<double>& e_samples, const std::vector<double>& gap_energies,
                                  const bs::EigenOptions& opts) {
  for (double e : e_samples)
    if (!(e > 0.0 && e < 2.0 * m)) throw ValidationError("verify_counting_chain: e samples must lie in (0, 2m)");
  ChainReport rep_out;
  rep_out.rows.resize(e_samples.size());
  const int N = rep.n_components;
  parallel_for(e_samples.size(), [&](std::size_t i) {
    ChainRow& row = rep_out.rows[i];
    row.e = e_samples[i];
    const auto c = bs::count_gap_eigenvalues(rep, V, m, row.e, gap_energies, opts);
    row.N_e = c.N_e;
    row.B_e = c.B_e;
    row.B_pr = bs::count_at_least_one(bs::make_pseudo_relativistic_bs(V, m, row.e), opts);
    row.N_times_Bpr = N * row.B_pr;
    row.holds = row.N_e <= row.B_e && row.B_e <= row.N_times_Bpr;
  });
  for (const auto& r : rep_out.rows) rep_out.all_hold = rep_out.all_hold && r.holds;
  return rep_out;
}

ChainReport verify_counting_chain(const dirac::CliffordRep& rep, const bs::PotentialField& V, double m,
                                  const std::vector<double>& e_samples, const bs::EigenOptions& opts) {
  bs::SweepOptions so;
  so.eig = opts;
  return verify_counting_chain(rep, V, m, e_samples, bs::gap_eigenvalues(rep, V, m, bs::default_gap_grid(m), so),
                               opts);
}

}  // namespace diracgap::lt
