#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace diracgap::dirac {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

struct CliffordRep {
  int d = 0;
  int n_components = 0;
  std::vector<CMat> alphas;
  CMat beta;
};

// Representation for d in {1,2,3}:
//   d=1: alpha = sigma_2, beta = sigma_3
//   d=2: alpha = (sigma_1, sigma_2), beta = sigma_3
//   d=3: alpha_k = [[0, sigma_k], [sigma_k, 0]], beta = diag(I_2, -I_2)
CliffordRep clifford_rep(int d);

// Largest entrywise deviation from the anticommutation relations and hermiticity.
double clifford_defect(const CliffordRep& rep);

struct ResolventParams {
  double m = 1.0;
  double lambda = 0.0;

  void validate() const;
};

// M(k) = alpha . k + m beta
CMat dirac_symbol(const CliffordRep& rep, double m, std::span<const double> k);

// g_lambda(k) = (M(k) + lambda) / (|k|^2 + m^2 - lambda^2), the Fourier symbol of (D_m - lambda)^{-1}.
CMat resolvent_symbol(const CliffordRep& rep, const ResolventParams& params, std::span<const double> k);

// Same symbol at a complex energy z (used for z = i s off the real axis).
CMat resolvent_symbol_complex(const CliffordRep& rep, double m, cplx z, std::span<const double> k);

// Position-space kernel of (D_m - lambda)^{-1} at x != 0, in closed form via K_nu.
CMat resolvent_kernel(const CliffordRep& rep, const ResolventParams& params, std::span<const double> x);

}  // namespace diracgap::dirac
