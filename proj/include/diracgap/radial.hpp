#pragma once

#include <array>
#include <vector>

#include "diracgap/keller_curve.hpp"

namespace diracgap::radial {

// phi' = -(lambda + m + V) chi,  chi' + delta chi / r = (lambda - m + V) phi,
// V = (phi^2 + chi^2)^{1/(p-1)}.  delta = 0 (d=1), 1 (d=2, n=0), 2 (d=3, kappa=1).
struct RadialSystemSpec {
  int d = 2;
  double delta = 1.0;
  double lambda = 0.0;
  double p = 3.0;
  double m = 1.0;

  static RadialSystemSpec ground(int d, double lambda, double p, double m = 1.0);
  void validate() const;
  double potential(double phi, double chi) const;
};

std::array<double, 2> radial_rhs(const RadialSystemSpec& spec, double r, double phi, double chi);

struct RadialSolution {
  std::vector<double> r, phi, chi, V;
  double alpha = 0.0;   // ||V||_p over R^d
  double s = 0.0;       // phi(0)
  double r_cut = 0.0;   // profiles are trusted up to here and set to 0 beyond
  int brackets = 0;     // number of sign changes of the shooting dichotomy in the scan
  RadialSystemSpec spec;

  // Cubic Hermite interpolation of (phi, chi) using the ODE for derivatives; 0 beyond r_cut.
  std::array<double, 2> evaluate(double r) const;
};

struct ShootingOptions {
  double r_max = 0.0;    // 0 selects 12 / B, B = 2 sqrt(m^2 - lambda^2) / (p - 1), capped
  double s_min = 1e-6;
  double s_max = 1e12;
  int scan_per_decade = 6;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

// Ground-state shooting on phi(0) = s. Throws NoSolutionError when no bracket exists.
RadialSolution shoot_ground_state(const RadialSystemSpec& spec, const ShootingOptions& opts = {});

// Result of one trajectory: +1 phi turned negative first, -1 chi turned negative first,
// 0 neither happened before r_max.
int shooting_sign(const RadialSystemSpec& spec, double s, const ShootingOptions& opts = {});

KellerCurve radial_keller_curve(int d, double p, const std::vector<double>& lambda_grid, double m = 1.0,
                                const ShootingOptions& opts = {});

struct CriticalNorm {
  double alpha = 0.0;
  double lambda = 0.0;  // energy of the solution realizing it
  bool at_gap_bottom = false;
};

// Critical radial norm: the shooting value at lambda = -m when a solution exists
// there, otherwise the supremum along the curve at the lowest solvable energy.
CriticalNorm radial_critical_norm(int d, double p, double m = 1.0, const ShootingOptions& opts = {});

struct WpExact {
  RadialSolution solution;
  double norm_p = 0.0;  // ||W_p||_p^p, closed form
  double norm = 0.0;    // ||W_p||_p
};

// Explicit solution at m = 1, lambda = -1 with mu = (p - 1 - delta)/2:
// phi = (p mu)^{(p-1)/2} mu / (mu^2 + r^2)^{p/2}, chi = (p mu)^{(p-1)/2} r / (mu^2 + r^2)^{p/2},
// W = p mu / (mu^2 + r^2).
WpExact wp_closed_form(double p, int d, double delta, const std::vector<double>& r_grid);
double wp_norm_p(double p, int d, double delta);

}  // namespace diracgap::radial
