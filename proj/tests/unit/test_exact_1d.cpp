#include <cmath>
#include <numbers>

#include "diracgap/bs_operator.hpp"
#include "diracgap/errors.hpp"
#include "diracgap/exact_1d.hpp"
#include "doctest.h"

using namespace diracgap;
using namespace diracgap::exact1d;
using std::numbers::pi;

namespace {

// ||V||_p by the trapezoid rule after x = sinh(t), which absorbs the exponential tails.
double lp_norm_1d(const std::function<double(double)>& V, double p) {
  const int n = 200000;
  const double T = 12.0, h = 2.0 * T / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = -T + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    s += w * std::pow(V(std::sinh(t)), p) * std::cosh(t);
  }
  return std::pow(s * h, 1.0 / p);
}

}  // namespace

TEST_SUITE("exact_1d") {
  TEST_CASE("alpha_D equals the L^p norm of the closed-form potential") {
    for (double p : {1.3, 2.0, 3.5, 8.0}) {
      for (double lam : {-0.8, -0.2, 0.0, 0.45, 0.9}) {
        const Keller1DParams par{1.0, p, lam};
        const double ref = lp_norm_1d([&](double x) { return potential_subcritical(par, x); }, p);
        CAPTURE(p);
        CAPTURE(lam);
        CHECK(alpha_D(par) == doctest::Approx(ref).epsilon(1e-9));
      }
    }
    // Mass scaling: alpha_D(m) = m^{1 - 1/p} alpha_D(1) at fixed lambda/m.
    const double p = 2.5;
    CHECK(alpha_D({3.0, p, 0.6}) == doctest::Approx(std::pow(3.0, 1.0 - 1.0 / p) * alpha_D({1.0, p, 0.2})).epsilon(1e-12));
    CHECK(alpha_D({1.0, 1.0, 0.3}) == doctest::Approx(std::acos(0.3)));
  }

  TEST_CASE("alpha_star is the norm of the critical potential and the lower-edge limit") {
    for (double p : {1.5, 2.0, 4.0}) {
      // x = tan(t)/zeta maps the line to (-pi/2, pi/2).
      const double zeta = 2.0 / (p - 1.0);
      const int n = 100000;
      double s = 0.0;
      for (int i = 1; i < n; ++i) {
        const double t = -0.5 * pi + pi * i / n;
        s += std::pow(std::cos(t), 2.0 * p - 2.0);
      }
      const double ref = std::pow(std::pow(zeta * p, p) / zeta * s * pi / n, 1.0 / p);
      CHECK(alpha_star(p) == doctest::Approx(ref).epsilon(1e-9));
      CHECK(alpha_D({1.0, p, -1.0 + 1e-9}) == doctest::Approx(alpha_star(p)).epsilon(1e-3));
      CHECK(potential_critical(1.0, p, 0.7) ==
            doctest::Approx(zeta * p / (1.0 + zeta * zeta * 0.49)).epsilon(1e-14));
    }
    // p -> 1 recovers pi.
    CHECK(alpha_star(1.0 + 1e-6) == doctest::Approx(pi).epsilon(1e-4));
    CHECK_THROWS_AS(alpha_star(1.0), DomainError);
  }

  TEST_CASE("the threshold curve is strictly decreasing and invertible") {
    const double p = 2.0;
    double prev = 1e300;
    for (int i = 0; i <= 40; ++i) {
      const double lam = -0.99 + 1.98 * i / 40;
      const double a = alpha_D({1.0, p, lam});
      CHECK(a < prev);
      prev = a;
      CHECK(Lambda_D_1d(a, p) == doctest::Approx(lam).epsilon(1e-9));
    }
    CHECK(Lambda_D_1d(1.0, 1.0) == doctest::Approx(std::cos(1.0)));
    CHECK_THROWS_AS(Lambda_D_1d(alpha_star(p) * 1.001, p), SupercriticalError);
    CHECK_THROWS_AS(Lambda_D_1d(4.0, 1.0), SupercriticalError);
  }

  TEST_CASE("closed-form spinor is self-consistent and conserves H and G") {
    const Keller1DParams par{1.0, 3.0, 0.25};
    for (double x : {-2.0, -0.3, 0.4, 1.7, 5.0}) {
      const auto [phi, chi] = spinor_solution_1d(par, x);
      const double V = potential_subcritical(par, x);
      CHECK(std::pow(phi * phi + chi * chi, 1.0 / (par.p - 1.0)) == doctest::Approx(V).epsilon(1e-12));
      const auto c = conservation(phi, chi, par);
      CHECK(std::abs(c.H) < 1e-12);
      CHECK(std::abs(c.G) < 1e-15);
    }
    // Central differences of the closed form satisfy phi' = -(lambda+m+V) chi, chi' = (lambda-m+V) phi.
    const double h = 1e-5;
    for (double x : {0.3, 1.1, 2.4}) {
      const auto [pp, cp] = spinor_solution_1d(par, x + h);
      const auto [pm, cm] = spinor_solution_1d(par, x - h);
      const auto [p0, c0] = spinor_solution_1d(par, x);
      const double V = potential_subcritical(par, x);
      CHECK((pp - pm) / (2 * h) == doctest::Approx(-(par.lambda + par.m + V) * c0).epsilon(1e-7));
      CHECK((cp - cm) / (2 * h) == doctest::Approx((par.lambda - par.m + V) * p0).epsilon(1e-7));
    }
  }

  TEST_CASE("Prufer energy agrees with the pseudospectral operator") {
    const double w = 1.5, amp = 1.1;
    const CompactPotential V{[&](double x) {
                               const double c = std::cos(0.5 * pi * x / w);
                               return std::abs(x) < w ? amp * c * c * c * c : 0.0;
                             },
                             -w, w};
    const auto ld = prufer_lambda_D(V, 1.0, 1e-11);
    REQUIRE(ld.has_value());
    const bs::GridSpec g{1, 24.0, 4096};
    const auto Vg = bs::sample_potential(g, [&](const std::array<double, 3>& x) { return V.V(x[0]); });
    const auto ref = bs::lambda_D(dirac::clifford_rep(1), Vg, 1.0, 1e-11, {1e-12});
    REQUIRE(ref.has_value());
    CHECK(*ld == doctest::Approx(*ref).epsilon(1e-6));

    const auto rep = prufer_lambda_bound(V, *ld - 1e-4);
    CHECK_FALSE(rep.reaches_half_pi);
    CHECK(rep.strict_bound_holds);
    CHECK(rep.l1_norm == doctest::Approx(amp * 2 * w * 3.0 / 8.0).epsilon(1e-10));

    // A potential with zero mass leaves the angle at its fixed point.
    const CompactPotential zero{[](double) { return 0.0; }, 0.0, 1.0};
    const auto z = prufer_lambda_bound(zero, 0.3);
    CHECK(z.theta_end == doctest::Approx(std::asin(0.3)).epsilon(1e-12));
    CHECK_FALSE(prufer_lambda_D(zero).has_value());
  }

  TEST_CASE("non-relativistic limit matches the Schrodinger gap depth") {
    const double p = 2.0, E = 0.3;
    double prev_err = 1e300;
    for (double c : {10.0, 30.0, 100.0}) {
      const double a = nonrel_alpha({1.0, c, 1.0}, c * c - E, p);
      const double err = std::abs(nonrel_gap_depth(a, p) - E);
      CHECK(err < prev_err);
      prev_err = err;
    }
    CHECK(prev_err < 1e-3);
    CHECK(nonrel_alpha({1.0, 1.0, 1.0}, 0.2, p) == doctest::Approx(alpha_D({1.0, p, 0.2})));
    CHECK_THROWS_AS(nonrel_alpha({1.0, 1.0, 1.0}, 0.2, p, 2), DomainError);
  }

  TEST_CASE("implicit pointwise potential solves its defining equation") {
    const double a = 0.4, b = 1.3, cp = 0.2, nu = 2.0, p = 3.0;
    const double X = implicit_potential_pointwise(a, b, cp, nu, p);
    CHECK(nu * std::pow(X, p - 1.0) == doctest::Approx(a + b / ((cp + X) * (cp + X))).epsilon(1e-12));
    CHECK(implicit_potential_pointwise(0.0, 0.0, cp, nu, p) == 0.0);
    CHECK_THROWS_AS(implicit_potential_pointwise(-1.0, b, cp, nu, p), DomainError);
  }
}
