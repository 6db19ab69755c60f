#include "diracgap/dirac.hpp"

#include <cmath>
#include <numbers>

#include "diracgap/errors.hpp"
#include "diracgap/specfun.hpp"

namespace diracgap::dirac {

namespace {

const cplx I{0.0, 1.0};

CMat pauli(int j) {
  CMat s(2, 2);
  switch (j) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

void check_dim(const CliffordRep& rep, std::size_t n) {
  if (n != static_cast<std::size_t>(rep.d)) throw DomainError("dirac: vector length does not match dimension");
}

}  // namespace

CliffordRep clifford_rep(int d) {
  CliffordRep rep;
  rep.d = d;
  switch (d) {
    case 1:
      rep.n_components = 2;
      rep.alphas = {pauli(2)};
      rep.beta = pauli(3);
      break;
    case 2:
      rep.n_components = 2;
      rep.alphas = {pauli(1), pauli(2)};
      rep.beta = pauli(3);
      break;
    case 3: {
      rep.n_components = 4;
      for (int k = 1; k <= 3; ++k) {
        CMat a = CMat::Zero(4, 4);
        a.block(0, 2, 2, 2) = pauli(k);
        a.block(2, 0, 2, 2) = pauli(k);
        rep.alphas.push_back(a);
      }
      rep.beta = CMat::Identity(4, 4);
      rep.beta.block(2, 2, 2, 2) *= -1.0;
      break;
    }
    default:
      throw DomainError("clifford_rep: dimension must be 1, 2 or 3");
  }
  return rep;
}

double clifford_defect(const CliffordRep& rep) {
  const int n = rep.n_components;
  const CMat id = CMat::Identity(n, n);
  double worst = (rep.beta * rep.beta - id).cwiseAbs().maxCoeff();
  worst = std::max(worst, (rep.beta - rep.beta.adjoint()).cwiseAbs().maxCoeff());
  for (int j = 0; j < rep.d; ++j) {
    const CMat& aj = rep.alphas[j];
    worst = std::max(worst, (aj - aj.adjoint()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (aj * rep.beta + rep.beta * aj).cwiseAbs().maxCoeff());
    for (int k = 0; k < rep.d; ++k) {
      const CMat target = (j == k ? 2.0 : 0.0) * id;
      worst = std::max(worst, (aj * rep.alphas[k] + rep.alphas[k] * aj - target).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

void ResolventParams::validate() const {
  if (!(m > 0.0)) throw DomainError("resolvent: mass must be positive");
  if (!(std::abs(lambda) < m)) throw DomainError("resolvent: lambda must lie strictly inside (-m, m)");
}

CMat dirac_symbol(const CliffordRep& rep, double m, std::span<const double> k) {
  check_dim(rep, k.size());
  CMat out = m * rep.beta;
  for (int j = 0; j < rep.d; ++j) out += k[j] * rep.alphas[j];
  return out;
}

CMat resolvent_symbol(const CliffordRep& rep, const ResolventParams& params, std::span<const double> k) {
  params.validate();
  double k2 = 0.0;
  for (double kj : k) k2 += kj * kj;
  const int n = rep.n_components;
  CMat out = dirac_symbol(rep, params.m, k) + params.lambda * CMat::Identity(n, n);
  return out / (k2 + params.m * params.m - params.lambda * params.lambda);
}

CMat resolvent_symbol_complex(const CliffordRep& rep, double m, cplx z, std::span<const double> k) {
  double k2 = 0.0;
  for (double kj : k) k2 += kj * kj;
  const cplx denom = k2 + m * m - z * z;
  if (std::abs(denom) == 0.0) throw DomainError("resolvent: energy lies on the spectrum");
  const int n = rep.n_components;
  CMat out = dirac_symbol(rep, m, k).cast<cplx>() + z * CMat::Identity(n, n);
  return out / denom;
}

CMat resolvent_kernel(const CliffordRep& rep, const ResolventParams& params, std::span<const double> x) {
  params.validate();
  check_dim(rep, x.size());
  double r2 = 0.0;
  for (double xj : x) r2 += xj * xj;
  if (r2 == 0.0) throw SingularityError("resolvent_kernel: the kernel is singular at x = 0");
  const double r = std::sqrt(r2);
  const double d = rep.d;
  const double m = params.m, lam = params.lambda;
  const double kappa = std::sqrt(m * m - lam * lam);
  const double c = 1.0 / (2.0 * std::numbers::pi) * std::pow(kappa / (2.0 * std::numbers::pi), d / 2.0 - 1.0);
  const double pref = c * std::pow(r, 1.0 - d / 2.0);
  const double k_odd = specfun::bessel_k(d / 2.0, kappa * r);
  const double k_even = specfun::bessel_k(std::abs(d / 2.0 - 1.0), kappa * r);
  const int n = rep.n_components;
  CMat out = (m * rep.beta + lam * CMat::Identity(n, n)) * k_even;
  for (int j = 0; j < rep.d; ++j) out += I * (x[j] / r) * kappa * k_odd * rep.alphas[j];
  return pref * out;
}

}  // namespace diracgap::dirac
