// Acceptance run: one PASS/FAIL line per criterion. Optional arguments select criteria by number.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "diracgap/bs_operator.hpp"
#include "diracgap/errors.hpp"
#include "diracgap/exact_1d.hpp"
#include "diracgap/lieb_thirring.hpp"
#include "diracgap/potentials.hpp"
#include "diracgap/radial.hpp"
#include "diracgap/scf.hpp"
#include "diracgap/specfun.hpp"

using namespace diracgap;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string f(const char* format, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

std::string cat(std::initializer_list<std::string> parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
  return s;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

// ||g||_p over the line by the trapezoid rule after x = sinh t.
double lp_norm_line(const std::function<double(double)>& g, double p) {
  const int n = 100000;
  const double T = 11.0, h = 2.0 * T / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = -T + i * h;
    s += ((i == 0 || i == n) ? 0.5 : 1.0) * std::pow(g(std::sinh(t)), p) * std::cosh(t);
  }
  return std::pow(s * h, 1.0 / p);
}

Outcome c01() {
  const double a0 = exact1d::alpha_D({1.0, 1.0, 0.0});
  double worst = 0.0;
  for (double alpha : linspace(0.05, pi - 0.05, 50))
    worst = std::max(worst, std::abs(exact1d::Lambda_D_1d(alpha, 1.0) - std::cos(alpha)));
  const double e0 = std::abs(a0 - pi / 2);
  return {e0 <= 1e-12 && worst <= 1e-10,
          cat({f("|alpha_D(0,1) - pi/2| = %.2e", e0), f("max |Lambda_D - cos alpha| = %.2e", worst)})};
}

Outcome c02() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ul(-0.9, 0.9), up(1.1, 6.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const exact1d::Keller1DParams par{1.0, up(rng), ul(rng)};
    const double q = lp_norm_line([&](double x) { return exact1d::potential_subcritical(par, x); }, par.p);
    worst = std::max(worst, std::abs(q - exact1d::alpha_D(par)) / q);
  }
  return {worst <= 1e-8, f("max relative difference over 20 samples = %.2e", worst)};
}

Outcome c03() {
  const double lo = exact1d::alpha_star(1.0001), hi = exact1d::alpha_star(500.0);
  double best_p = 0.0, best = -1.0;
  for (double p = 1.001; p <= 5.0 + 1e-12; p += 1e-3) {
    const double a = exact1d::alpha_star(p);
    if (a > best) best = a, best_p = p;
  }
  const bool ok_lo = std::abs(lo - pi) <= 1e-3;
  const bool ok_hi = std::abs(hi - 2.0) <= 2e-2;
  const bool ok_arg = std::abs(best_p - 1.32) <= 0.05;
  return {ok_lo && ok_hi && ok_arg,
          cat({f("|alpha_star(1.0001) - pi| = %.3e (limit 1e-3)", std::abs(lo - pi)),
               f("|alpha_star(500) - 2| = %.3e", std::abs(hi - 2.0)), f("argmax p = %.3f", best_p)})};
}

Outcome c04() {
  const auto rep = dirac::clifford_rep(1);
  const bs::GridSpec g{1, 30.0, 2048};
  std::string detail;
  bool ok = true;
  for (auto [p, lam] : {std::pair{2.0, 0.0}, std::pair{3.0, -0.5}}) {
    const exact1d::Keller1DParams par{1.0, p, lam};
    const auto V = bs::sample_potential(g, [&](const std::array<double, 3>& x) {
      return exact1d::potential_subcritical(par, x[0]);
    });
    const auto ld = bs::lambda_D(rep, V, 1.0, 1e-10, {1e-11});
    const double err = ld ? std::abs(*ld - lam) : INFINITY;
    ok = ok && err <= 1e-2;
    detail += (detail.empty() ? "" : "; ") + f("p=%g: ", p) + f("|lambda_D - target| = %.2e", err);
  }
  return {ok, detail};
}

Outcome c05() {
  const auto rep = dirac::clifford_rep(2);
  const bs::GridSpec g{2, 6.0, 100};
  const auto V = potentials::sample(potentials::gaussian(2, 2.0, 4.0), g);
  const auto lams = linspace(-0.999, 0.999, 64);
  bs::SweepOptions so;
  so.eig.rel_tol = 1e-11;
  const auto curve = bs::sweep_branches(rep, V, 1.0, lams, 20, so);
  const double viol = curve.worst_monotonicity_violation();

  // Independent confirmation: plain bisection on mu_j(lambda) - 1 between the bracketing samples.
  double worst = 0.0;
  for (const auto& c : curve.crossings) {
    std::size_t i = 0;
    while (i + 1 < lams.size() && lams[i + 1] < c.lambda) ++i;
    double lo = lams[i], hi = lams[std::min(i + 1, lams.size() - 1)];
    if (bs::top_eigenvalue(rep, V, 1.0, lo, c.branch, so.eig) >= 1.0) lo = -0.999999;
    for (int it = 0; it < 60 && hi - lo > 1e-9; ++it) {
      const double mid = 0.5 * (lo + hi);
      (bs::top_eigenvalue(rep, V, 1.0, mid, c.branch, so.eig) >= 1.0 ? hi : lo) = mid;
    }
    worst = std::max(worst, std::abs(0.5 * (lo + hi) - c.lambda));
  }
  double ld_diff = 0.0;
  const auto ld = bs::lambda_D(rep, V, 1.0, 1e-9, so.eig);
  if (!curve.crossings.empty()) ld_diff = ld ? std::abs(*ld - curve.crossings.front().lambda) : INFINITY;
  const bool ok = viol <= 1e-8 && worst <= 1e-6 && ld_diff <= 1e-6 && !curve.crossings.empty();
  return {ok, cat({f("branches 20, crossings %.0f", static_cast<double>(curve.crossings.size())),
                   f("worst monotonicity violation %.2e", viol), f("max bisection difference %.2e", worst),
                   f("lambda_D difference %.2e", ld_diff)})};
}

Eigen::MatrixXcd dense_sandwich(const dirac::CliffordRep& rep, const bs::PotentialField& V, double m, double lam) {
  const auto& g = V.grid;
  const std::size_t N = g.nodes();
  const int nc = rep.n_components;
  std::vector<dirac::CMat> sym(N);
  for (std::size_t q = 0; q < N; ++q) {
    const auto k = g.wavevector(q);
    sym[q] = dirac::resolvent_symbol(rep, {m, lam}, std::span<const double>(k.data(), g.d));
  }
  Eigen::MatrixXcd M(N * nc, N * nc);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const auto xi = g.position(i), xj = g.position(j);
      dirac::CMat acc = dirac::CMat::Zero(nc, nc);
      for (std::size_t q = 0; q < N; ++q) {
        const auto k = g.wavevector(q);
        double ph = 0.0;
        for (int t = 0; t < g.d; ++t) ph += k[t] * (xi[t] - xj[t]);
        acc += sym[q] * std::polar(1.0, ph);
      }
      acc *= std::sqrt(V.values[i] * V.values[j]) / static_cast<double>(N);
      for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b) M(a * N + i, b * N + j) = acc(a, b);
    }
  return M;
}

Outcome c06() {
  double worst = 0.0;
  for (auto [d, L] : {std::pair{1, 32}, std::pair{2, 16}}) {
    const bs::GridSpec g{d, 5.0, L};
    const auto rep = dirac::clifford_rep(d);
    const auto V = bs::sample_potential(g, [](const std::array<double, 3>& x) {
      return 1.5 * std::exp(-(x[0] * x[0] + 0.7 * x[1] * x[1]) / 3.0) * (1.0 + 0.4 * std::cos(x[0] + 0.3));
    });
    for (double lam : {-0.6, 0.0, 0.7}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_sandwich(rep, V, 1.0, lam));
      const auto& ev = es.eigenvalues();
      const Eigen::Index n = ev.size();
      const auto e = bs::extremal_eigs(rep, V, 1.0, lam, 4, 4, {1e-12});
      for (int j = 0; j < 4; ++j) {
        worst = std::max(worst, std::abs(e.top[j] - ev(n - 1 - j)));
        worst = std::max(worst, std::abs(e.bottom[j] - ev(j)));
      }
    }
  }
  return {worst <= 1e-9, f("max |matrix-free - dense| over top/bottom 4 = %.2e", worst)};
}

Outcome c07() {
  bool ok = true;
  std::string detail;
  for (auto [d, p] : {std::pair{2, 3.0}, std::pair{3, 4.0}}) {
    const double delta = d - 1.0, mu = 0.5 * (p - 1.0 - delta);
    const auto sol = radial::shoot_ground_state(radial::RadialSystemSpec::ground(d, -1.0, p));
    double worst = 0.0;
    for (double r : linspace(0.0, 10.0, 401)) {
      const auto y = sol.evaluate(r);
      const double V = sol.spec.potential(y[0], y[1]);
      const double ref = p * mu / (mu * mu + r * r);
      worst = std::max(worst, std::abs(V - ref) / ref);
    }
    ok = ok && worst <= 1e-3;
    detail += (detail.empty() ? "" : "; ") + f("d=%.0f: ", d) + f("max relative error of V on [0,10] = %.2e", worst);
  }
  // |S^1| int_0^inf r V^3 dr with V = 3 mu / (mu^2 + r^2), mu = 1/2, via r = mu tan t.
  const double mu = 0.5;
  const int n = 200000;
  double s = 0.0;
  for (int i = 1; i < n; ++i) {
    const double t = 0.5 * pi * i / n;
    const double r = mu * std::tan(t);
    s += r * std::pow(3.0 * mu / (mu * mu + r * r), 3.0) * mu / (std::cos(t) * std::cos(t));
  }
  s *= 2.0 * pi * 0.5 * pi / n;
  const double cf = radial::wp_norm_p(3.0, 2, 1.0);
  const double e1 = std::abs(s - 27.0 * pi) / (27.0 * pi), e2 = std::abs(cf - s) / s;
  ok = ok && e1 <= 1e-3 && e2 <= 1e-3;
  detail += "; " + f("quadrature ||W_3||^3 = %.6f", s) + f(" vs 27 pi rel %.1e", e1) + f(", closed form rel %.1e", e2);
  return {ok, detail};
}

Outcome c08() {
  bool ok = true;
  std::string detail;
  struct Case {
    int d;
    double p, bound;
  };
  const Case cases[] = {{2, 2.0, 2.0 * std::sqrt(pi)}, {3, 3.0, 3.0 * std::pow(pi / 2.0, 2.0 / 3.0)}};
  radial::ShootingOptions so;
  for (const auto& c : cases) {
    double value = NAN;
    std::string how;
    try {
      value = radial::shoot_ground_state(radial::RadialSystemSpec::ground(c.d, -1.0 + 1e-3, c.p), so).alpha;
      how = "shooting at -m+1e-3";
    } catch (const std::exception& e) {
      // Both cases have p = d, where the L^p norm is invariant under the dilation linking energies in the gap,
      // so the lowest energy the shooting still resolves carries the same norm.
      const auto cn = radial::radial_critical_norm(c.d, c.p, 1.0, so);
      value = cn.alpha;
      how = "-m+1e-3 unresolvable (" + std::string(e.what()) + "); lowest resolvable lambda " +
            f("%.4f", cn.lambda);
    }
    const bool in = value <= c.bound * 1.01 && value >= c.bound * 0.99;
    ok = ok && in;
    detail += (detail.empty() ? "" : "; ") + f("d=%.0f ", c.d) + f("p=%g: ", c.p) + f("alpha = %.6f", value) +
              f(" vs bound %.6f", c.bound) + " [" + how + "]";
  }
  // Argmax of the radial critical norm: coarse scan, then Brent on the shooting values.
  for (auto [d, target] : {std::pair{2, 2.66}, std::pair{3, 3.86}}) {
    auto crit = [&](double p) { return radial::radial_critical_norm(d, p, 1.0, so).alpha; };
    double bp = 0.0, bv = -1.0;
    for (int i = 1; i <= 30; ++i) {
      const double p = d + 0.1 * i;
      const double v = crit(p);
      if (v > bv) bv = v, bp = p;
    }
    const auto r = boost::math::tools::brent_find_minima([&](double p) { return -crit(p); }, bp - 0.1, bp + 0.1, 30);
    const bool in = std::abs(r.first - target) <= 0.1;
    ok = ok && in;
    detail += "; " + f("d=%.0f argmax p = ", d) + f("%.4f", r.first);
  }
  return {ok, detail};
}

Outcome c09() {
  const auto rep = dirac::clifford_rep(2);
  bool ok = true;
  int typical = 0;
  double worst_drop = 0.0, worst_rad = 0.0, worst_el = 0.0;
  int worst_iter = 0;
  std::string rads;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    scf::ScfConfig c;
    c.seed = seed;
    c.max_iter = 100;
    const auto st = scf::run_scf(rep, c);
    for (std::size_t k = 1; k < st.history.size(); ++k)
      worst_drop = std::max(worst_drop, st.history[k - 1].mu1 - st.history[k].mu1);
    const double rad = st.history.back().radiality;
    const double el = scf::el_residual(rep, scf::el_variable(st), c.lambda, c.p, st.mu1);
    worst_rad = std::max(worst_rad, rad);
    worst_el = std::max(worst_el, el);
    worst_iter = std::max(worst_iter, st.iteration);
    typical += rad <= 1e-2;
    rads += (rads.empty() ? "" : ",") + f("%.3f", rad);
    ok = ok && st.converged && !st.monotonicity_violated;
  }
  // "Typically" is read as a majority of the seeds.
  ok = ok && worst_drop <= 1e-8 && worst_rad <= 1e-1 && typical >= 3 && worst_el <= 1e-3;
  return {ok, cat({f("max iterations %.0f", worst_iter), f("max mu1 drop %.2e", worst_drop), "radiality " + rads,
                   f("seeds with radiality <= 1e-2: %.0f of 5", typical), f("max EL residual %.2e", worst_el)})};
}

Outcome c10() {
  bool ok = true;
  double min_margin = INFINITY;
  int chains = 0, rows = 0;
  for (int d = 1; d <= 2; ++d) {
    const auto rep = dirac::clifford_rep(d);
    const bs::GridSpec g = d == 1 ? bs::GridSpec{1, 20.0, 512} : bs::GridSpec{2, 6.0, 100};
    const lt::LtParams par{2.0, d == 1 ? 2.0 : 3.0, 1.0, d};
    const auto constant = lt::lt_constant(par);
    for (double amp : {0.5, 1.0, 2.0, 3.0, 4.0}) {
      const auto V = potentials::sample(potentials::gaussian(d, amp, 4.0), g);
      bs::SweepOptions so;
      const auto gap = bs::gap_eigenvalues(rep, V, 1.0, bs::default_gap_grid(1.0), so);
      const auto lhs = lt::riesz_mean(gap, 1.0, par.gamma);
      const double rhs = lt::lt_rhs(V, par, constant);
      min_margin = std::min(min_margin, rhs - lhs.direct);
      ok = ok && lhs.direct <= rhs;
      const auto chain = lt::verify_counting_chain(rep, V, 1.0, lt::default_e_samples(1.0, 32), gap, so.eig);
      chains += chain.all_hold;
      rows += static_cast<int>(chain.rows.size());
      ok = ok && chain.all_hold && chain.rows.size() == 32;
    }
  }
  return {ok, cat({f("min rhs - lhs = %.4g", min_margin), f("chains holding %.0f of 10", chains),
                   f("e samples checked %.0f", rows)})};
}

Outcome c11() {
  const auto rep = dirac::clifford_rep(1);
  const bs::GridSpec g{1, 20.0, 512};
  const double cap = 0.9 * exact1d::alpha_star(2.0);
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = INFINITY;
  int none = 0;
  for (int s = 0; s < 50; ++s) {
    const int bumps = 1 + static_cast<int>(4 * U(rng));
    std::vector<std::array<double, 3>> b(bumps);
    for (auto& x : b) x = {-8.0 + 16.0 * U(rng), 0.3 + 1.7 * U(rng), 0.2 + 0.8 * U(rng)};
    auto V = bs::sample_potential(g, [&](const std::array<double, 3>& x) {
      double v = 0.0;
      for (const auto& [c, w, h] : b) v += h * std::exp(-(x[0] - c) * (x[0] - c) / (w * w));
      return v;
    });
    const double target = cap * (0.05 + 0.94 * U(rng));
    const double n0 = V.lp_norm(2.0);
    for (double& v : V.values) v *= target / n0;
    const double alpha = V.lp_norm(2.0);
    const auto ld = bs::lambda_D(rep, V, 1.0, 1e-9, {1e-11});
    // No crossing below m - 1e-8 means the ground state sits even closer to m.
    if (!ld) ++none;
    const double lam = ld ? *ld : 1.0 - 1e-8;
    worst = std::min(worst, lam - exact1d::Lambda_D_1d(alpha, 2.0));
  }
  return {worst >= -1e-3,
          cat({f("min lambda_D - Lambda_D(||V||_2) = %.4e", worst), f("potentials without a resolved crossing %.0f", none)})};
}

Outcome c12() {
  std::vector<double> ld;
  for (double w : {1.0, 0.1, 0.01}) {
    const auto V = potentials::to_compact_1d(potentials::bump(1, 1.0, w));
    const auto l = exact1d::prufer_lambda_D(V, 1.0, 1e-12);
    ld.push_back(l ? *l : NAN);
  }
  const double c1 = std::cos(1.0);
  const bool ok = ld[0] > ld[1] && ld[1] > ld[2] && ld[2] > c1 && ld[2] - c1 < 5e-2;
  return {ok, cat({f("lambda_D = %.6f", ld[0]), f("%.6f", ld[1]), f("%.6f", ld[2]), f("final gap to cos(1) %.3e", ld[2] - c1)})};
}

Outcome c13() {
  const double alpha = 1e-3;
  const double depth = 1.0 - exact1d::Lambda_D_1d(alpha, 2.0);
  const double kp = std::pow(std::pow(2.0, 2.0) * specfun::beta(0.5, 2.0), -2.0 / 3.0);
  const double ref = std::pow(2.0, 1.0 / 3.0) * kp * std::pow(alpha, 4.0 / 3.0);
  const double rel = std::abs(depth - ref) / ref;
  return {rel <= 0.05, cat({f("1 - Lambda_D = %.6e", depth), f("2^{1/3} K_2 alpha^{4/3} = %.6e", ref),
                            f("relative difference %.3e", rel)})};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    double budget_s;
    Outcome (*run)();
  };
  const Criterion all[] = {{1, 1, c01},   {2, 10, c02},  {3, 10, c03},  {4, 120, c04},  {5, 300, c05},
                           {6, 30, c06},  {7, 30, c07},  {8, 600, c08}, {9, 900, c09},  {10, 600, c10},
                           {11, 600, c11}, {12, 120, c12}, {13, 1, c13}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("C%02d %s  %.2fs (budget %.0fs%s)  %s\n", c.id, pass ? "PASS" : "FAIL", dt, c.budget_s,
                in_time ? "" : ", exceeded", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
