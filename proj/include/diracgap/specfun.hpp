#pragma once

#include <cstddef>

namespace diracgap::specfun {

struct Tolerance {
  double rel_tol = 1e-10;
  std::size_t max_terms = 100'000'000;

  void validate() const;
};

double ln_gamma(double x);
double beta(double a, double b);

// Gauss hypergeometric 2F1(a,b;c;z) restricted to z <= 0.
double hyp2f1_nonpos(double a, double b, double c, double z, const Tolerance& tol = {});

// Modified Bessel function of the second kind K_nu(x), nu >= 0, x > 0.
double bessel_k(double nu, double x);

// Surface area of the unit sphere in R^d.
double sphere_area(int d);

}  // namespace diracgap::specfun
