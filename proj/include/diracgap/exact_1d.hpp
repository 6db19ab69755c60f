#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>

namespace diracgap::exact1d {

struct Keller1DParams {
  double m = 1.0;
  double p = 2.0;
  double lambda = 0.0;

  // Throws DomainError unless m > 0, p >= 1 and lambda in (-m, m).
  void validate() const;
  double kappa() const;  // sqrt(m^2 - lambda^2)
  double A() const;      // p (m^2 - lambda^2) / (p - 1)
  double B() const;      // 2 kappa / (p - 1)
  double z0() const;     // (m - lambda) / (m + lambda)
};

// A / (m cosh(B x) + lambda); requires lambda > -m and p > 1.
double potential_subcritical(const Keller1DParams& params, double x);
// zeta p / (1 + zeta^2 x^2) with zeta = 2 m / (p - 1).
double potential_critical(double m, double p, double x);

// Optimal L^p norm for a ground state at lambda; arccos(lambda/m) when p = 1.
double alpha_D(const Keller1DParams& params);
// Critical norm at which the ground state reaches -m.
double alpha_star(double p, double m = 1.0);
// Inverse of lambda -> alpha_D(lambda, p), accurate to 1e-10 in lambda.
double Lambda_D_1d(double alpha, double p, double m = 1.0);

// (phi(x), chi(x)) of the optimal spinor; phi even and positive, chi odd.
std::pair<double, double> spinor_solution_1d(const Keller1DParams& params, double x);

struct Conserved {
  double H = 0.0;
  double G = 0.0;
};
Conserved conservation(double phi, double chi, const Keller1DParams& params);
// G = conj(chi) phi - conj(phi) chi is purely imaginary; its imaginary part is returned.
Conserved conservation(std::complex<double> phi, std::complex<double> chi, const Keller1DParams& params);

// Potential supported on [left, right].
struct CompactPotential {
  std::function<double(double)> V;
  double left = 0.0;
  double right = 0.0;
};

struct PruferReport {
  double theta_start = 0.0;    // arcsin(lambda/m)
  double theta_end = 0.0;      // angle at the right edge of the support
  double theta_deficit = 0.0;  // pi/2 - theta_end
  bool reaches_half_pi = false;
  double l1_norm = 0.0;
  // arccos(lambda/m) < ||V||_1, which must hold whenever lambda is an eigenvalue.
  bool strict_bound_holds = false;
};

// Integrates theta' = V - kappa sin(2 theta) + lambda (1 + cos(2 theta)) across the support.
PruferReport prufer_lambda_bound(const CompactPotential& V, double lambda, double m = 1.0);
// Ground-state energy from the angle condition theta_end = pi/2, or empty if there is none.
std::optional<double> prufer_lambda_D(const CompactPotential& V, double m = 1.0, double tol = 1e-10);

struct PhysicalConstants {
  double hbar = 1.0;
  double c = 1.0;
  double m = 1.0;

  void validate() const;
};

// hbar^{d/p} m^{1-d/p} c^{2-d/p} alpha_D^{(m=1)}(lambda/(m c^2), p); only d = 1 has a closed form.
double nonrel_alpha(const PhysicalConstants& constants, double lambda, double p, int d = 1);
// K_p = (p^p (p-1)^{-(p-1)} B(1/2, p))^{-2/(2p-1)}
double nonrel_Kp(double p);
// Leading small-alpha behaviour of 1 - Lambda_D(alpha, p) for m = 1: 2^{d/(2p-d)} K_p alpha^{2p/(2p-d)}.
double nonrel_gap_depth(double alpha, double p, int d = 1);

// Unique X >= 0 with nu X^{p-1} = a + b / (cpar + X)^2.
double implicit_potential_pointwise(double a, double b, double cpar, double nu, double p);

}  // namespace diracgap::exact1d
