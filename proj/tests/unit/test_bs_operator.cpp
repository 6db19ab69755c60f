#include <cmath>
#include <random>

#include "diracgap/bs_operator.hpp"
#include "diracgap/errors.hpp"
#include "doctest.h"

using namespace diracgap;
using namespace diracgap::bs;
using diracgap::dirac::CMat;

namespace {

PotentialField smooth_potential(const GridSpec& g, double amp) {
  return sample_potential(g, [&](const std::array<double, 3>& x) {
    return amp * std::exp(-(x[0] * x[0] + 0.5 * x[1] * x[1] + x[2] * x[2]) / 2.0) * (1.0 + 0.3 * std::sin(x[0]));
  });
}

// Dense matrix of sqrt(V) T_g sqrt(V), built entry by entry from the discrete Fourier sum.
Eigen::MatrixXcd dense_sandwich(const dirac::CliffordRep& rep, const PotentialField& V, double m, cplx z) {
  const auto& g = V.grid;
  const std::size_t N = g.nodes();
  const int nc = rep.n_components;
  std::vector<CMat> sym(N);
  for (std::size_t q = 0; q < N; ++q) {
    const auto k = g.wavevector(q);
    sym[q] = dirac::resolvent_symbol_complex(rep, m, z, std::span<const double>(k.data(), g.d));
  }
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N * nc, N * nc);
  for (std::size_t i = 0; i < N; ++i) {
    const auto xi = g.position(i);
    for (std::size_t j = 0; j < N; ++j) {
      const auto xj = g.position(j);
      CMat acc = CMat::Zero(nc, nc);
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
  }
  return M;
}

Eigen::VectorXcd random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = cplx(N(rng), N(rng));
  return v;
}

PotentialField constant(const GridSpec& g, double v) { return PotentialField{g, std::vector<double>(g.nodes(), v)}; }

}  // namespace

TEST_SUITE("bs_operator") {
  TEST_CASE("matrix-free apply agrees with dense assembly") {
    for (int d = 1; d <= 2; ++d) {
      const GridSpec g{d, 4.0, 16};
      const auto rep = dirac::clifford_rep(d);
      const auto V = smooth_potential(g, 1.3);
      for (cplx z : {cplx(0.4, 0.0), cplx(-0.2, 0.0), cplx(0.0, 0.7)}) {
        const Eigen::MatrixXcd D = dense_sandwich(rep, V, 1.0, z);
        const auto K = z.imag() == 0.0 ? make_dirac_bs(rep, V, 1.0, z.real()) : make_dirac_bs_complex(rep, V, 1.0, z);
        REQUIRE(K.dim() == static_cast<std::size_t>(D.rows()));
        const Eigen::VectorXcd u = random_vector(K.dim(), 17);
        Eigen::VectorXcd y(K.dim()), ya(K.dim());
        K.apply(u.data(), y.data());
        K.apply_adjoint(u.data(), ya.data());
        CAPTURE(d);
        CHECK((y - D * u).norm() < 1e-12 * (D * u).norm());
        CHECK((ya - D.adjoint() * u).norm() < 1e-12 * (D.adjoint() * u).norm());
      }
    }
  }

  TEST_CASE("real-energy operator is Hermitian with increasing branches") {
    const GridSpec g{2, 5.0, 32};
    const auto rep = dirac::clifford_rep(2);
    const auto V = smooth_potential(g, 2.0);
    const auto K = make_dirac_bs(rep, V, 1.0, 0.1);
    const auto u = random_vector(K.dim(), 1), v = random_vector(K.dim(), 2);
    Eigen::VectorXcd Ku(K.dim()), Kv(K.dim());
    K.apply(u.data(), Ku.data());
    K.apply(v.data(), Kv.data());
    CHECK(std::abs(v.dot(Ku) - Kv.dot(u)) < 1e-12 * Ku.norm() * v.norm());

    double prev = -1e300;
    for (double lam : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
      const double mu = top_eigenvalue(rep, V, 1.0, lam);
      CHECK(mu > prev);
      prev = mu;
    }
    // The Schrodinger sandwich is a positive operator.
    const auto S = make_schrodinger_bs(V, -0.3);
    Eigen::VectorXcd Su(S.dim());
    const auto w = random_vector(S.dim(), 3);
    S.apply(w.data(), Su.data());
    CHECK(w.dot(Su).real() > 0.0);
    CHECK_THROWS_AS(make_schrodinger_bs(V, 0.1), DomainError);
  }

  TEST_CASE("constant potential has the explicit spectrum v / (+-m - lambda)") {
    const GridSpec g{2, 3.0, 16};
    const auto rep = dirac::clifford_rep(2);
    const double v = 0.3, lam = 0.2;
    const auto e = extremal_eigs(rep, constant(g, v), 1.0, lam, 1, 1, {1e-12});
    CHECK(e.top[0] == doctest::Approx(v / (1.0 - lam)).epsilon(1e-11));
    CHECK(e.bottom[0] == doctest::Approx(-v / (1.0 + lam)).epsilon(1e-11));
    // mu_1(lambda) = 1 exactly at lambda = m - v.
    const auto ld = lambda_D(rep, constant(g, v), 1.0, 1e-10);
    REQUIRE(ld.has_value());
    CHECK(*ld == doctest::Approx(0.7).epsilon(1e-8));
    const double c = branch_crossing(rep, constant(g, v), 1.0, 1, -0.5, 0.95, 1e-12);
    CHECK(c == doctest::Approx(0.7).epsilon(1e-10));
    // No eigenvalue for V = 0, and a supercritical level reports an error.
    CHECK_FALSE(lambda_D(rep, constant(g, 0.0), 1.0, 1e-8).has_value());
    CHECK_THROWS_AS(lambda_D(rep, constant(g, 2.5), 1.0, 1e-8), SupercriticalError);
  }

  TEST_CASE("sweep reports crossings consistent with lambda_D") {
    const GridSpec g{1, 10.0, 128};
    const auto rep = dirac::clifford_rep(1);
    const auto V = smooth_potential(g, 0.8);
    std::vector<double> lams;
    for (int i = 0; i < 33; ++i) lams.push_back(-0.99 + 1.98 * i / 32);
    const auto curve = sweep_branches(rep, V, 1.0, lams, 3);
    CHECK(curve.worst_monotonicity_violation() <= 1e-9);
    const auto ld = lambda_D(rep, V, 1.0, 1e-10);
    REQUIRE(ld.has_value());
    REQUIRE_FALSE(curve.crossings.empty());
    CHECK(curve.crossings.front().branch == 1);
    CHECK(curve.crossings.front().lambda == doctest::Approx(*ld).epsilon(1e-7));
    CHECK(top_eigenvalue(rep, V, 1.0, *ld) == doctest::Approx(1.0).epsilon(1e-7));
  }

  TEST_CASE("imaginary energy norm matches dense singular value") {
    const GridSpec g{1, 4.0, 16};
    const auto rep = dirac::clifford_rep(1);
    const auto V = smooth_potential(g, 1.0);
    const Eigen::MatrixXcd D = dense_sandwich(rep, V, 1.0, cplx(0.0, 0.8));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(D);
    CHECK(imaginary_energy_norm(rep, V, 1.0, 0.8, {1e-12}) ==
          doctest::Approx(svd.singularValues()(0)).epsilon(1e-9));
  }

  TEST_CASE("free resolvent multiplier matches the symbol on plane waves") {
    const GridSpec g{1, 3.0, 16};
    const auto rep = dirac::clifford_rep(1);
    const auto R = make_free_resolvent(rep, g, 1.0, 0.25);
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(R.dim()), y(R.dim());
    const int n = 3;
    for (int j = 0; j < 16; ++j) u(j) = std::polar(1.0, g.wavenumber(n) * g.coordinate(j));
    R.apply(u.data(), y.data());
    const double k = g.wavenumber(n);
    const CMat gs = dirac::resolvent_symbol(rep, {1.0, 0.25}, std::span<const double>(&k, 1));
    for (int j = 0; j < 16; ++j) {
      CHECK(std::abs(y(j) - gs(0, 0) * u(j)) < 1e-12);
      CHECK(std::abs(y(16 + j) - gs(1, 0) * u(j)) < 1e-12);
    }
  }
}
