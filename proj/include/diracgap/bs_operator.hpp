#pragma once

#include <complex>
#include <functional>
#include <span>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "diracgap/dirac.hpp"
#include "diracgap/grid.hpp"
#include "diracgap/lanczos.hpp"

namespace diracgap::bs {

// sqrt(V) F^{-1} S(k) F sqrt(V) on the periodic grid, where S(k) is an
// n_components x n_components matrix per wavevector.
class SandwichOperator {
 public:
  SandwichOperator(const PotentialField& V, int n_components, std::vector<cplx> symbol);
  ~SandwichOperator();
  SandwichOperator(SandwichOperator&&) noexcept;
  SandwichOperator& operator=(SandwichOperator&&) noexcept;
  SandwichOperator(const SandwichOperator&) = delete;
  SandwichOperator& operator=(const SandwichOperator&) = delete;

  std::size_t dim() const;
  int n_components() const;
  const GridSpec& grid() const;
  // Not thread-safe: uses an internal work buffer.
  void apply(const cplx* in, cplx* out) const;
  void apply_adjoint(const cplx* in, cplx* out) const;
  linalg::LinearOp as_linear_op() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Dirac Birman-Schwinger operator K_V(lambda) with the real-energy symbol g_lambda.
SandwichOperator make_dirac_bs(const dirac::CliffordRep& rep, const PotentialField& V, double m, double lambda);
// Same construction at a complex energy z (not Hermitian off the real axis).
SandwichOperator make_dirac_bs_complex(const dirac::CliffordRep& rep, const PotentialField& V, double m, cplx z);
// Scalar Schroedinger comparison sqrt(V) (-Laplacian - lambda)^{-1} sqrt(V), lambda < 0.
SandwichOperator make_schrodinger_bs(const PotentialField& V, double lambda);
// Scalar pseudo-relativistic operator sqrt(V) (sqrt(-Laplacian + m^2) - m + e)^{-1} sqrt(V), e > 0.
SandwichOperator make_pseudo_relativistic_bs(const PotentialField& V, double m, double e);

// Plain Fourier multiplier F^{-1} f(k) F on scalar fields (the sandwich with V = 1).
SandwichOperator make_fourier_multiplier(const GridSpec& grid, const std::function<cplx(std::span<const double>)>& f);
// Dirac resolvent (D_m - lambda)^{-1} applied on the grid, without the sqrt(V) factors.
SandwichOperator make_free_resolvent(const dirac::CliffordRep& rep, const GridSpec& grid, double m, double lambda);

SpinorField apply_KV(const dirac::CliffordRep& rep, const PotentialField& V, double m, double lambda,
                     const SpinorField& phi);

struct EigenOptions {
  double rel_tol = 1e-10;
  std::uint64_t seed = 0x5eed;
  int max_basis = 0;
};

struct ExtremalEigs {
  std::vector<double> top;     // descending
  std::vector<double> bottom;  // ascending
  std::vector<SpinorField> top_vectors;
  std::vector<SpinorField> bottom_vectors;
  std::vector<double> top_residuals;
  std::vector<double> bottom_residuals;
  double next_top = 0.0;
};

ExtremalEigs extremal_eigs(const SandwichOperator& K, int k_top, int k_bottom, const EigenOptions& opts = {},
                           const SpinorField* start = nullptr);
ExtremalEigs extremal_eigs(const dirac::CliffordRep& rep, const PotentialField& V, double m, double lambda, int k_top,
                           int k_bottom, const EigenOptions& opts = {});

// j-th largest eigenvalue of K_V(lambda), j >= 1.
double top_eigenvalue(const dirac::CliffordRep& rep, const PotentialField& V, double m, double lambda, int j = 1,
                      const EigenOptions& opts = {});

struct Crossing {
  int branch = 0;  // 1-based index of the top branch
  double lambda = 0.0;
};

struct SpectralCurve {
  std::vector<double> lambdas;
  std::vector<std::vector<double>> top;     // top[i][j] = mu_{j+1}(lambdas[i])
  std::vector<std::vector<double>> bottom;  // bottom[i][j] = nu_{j+1}(lambdas[i])
  std::vector<Crossing> crossings;          // sorted by energy
  std::vector<double> near_degenerate;      // samples where mu_1 - mu_2 < 1e-6

  // Largest decrease of any branch between consecutive samples (0 if monotone).
  double worst_monotonicity_violation() const;
};

struct SweepOptions {
  EigenOptions eig;
  double crossing_tol = 1e-9;
};

SpectralCurve sweep_branches(const dirac::CliffordRep& rep, const PotentialField& V, double m,
                             const std::vector<double>& lambda_grid, int k, const SweepOptions& opts = {});

// Energy where mu_branch(lambda) = 1 inside [lo, hi], by bisection.
double branch_crossing(const dirac::CliffordRep& rep, const PotentialField& V, double m, int branch, double lo,
                       double hi, double tol, const EigenOptions& opts = {});

// Smallest lambda in (-m, m) with mu_1(K_V(lambda)) = 1. Empty if there is no
// bound state; throws SupercriticalError if mu_1 > 1 already at -m + 10 tol.
std::optional<double> lambda_D(const dirac::CliffordRep& rep, const PotentialField& V, double m, double tol,
                               const EigenOptions& opts = {});

// Number of eigenvalues >= 1 of a Hermitian sandwich operator.
int count_at_least_one(const SandwichOperator& K, const EigenOptions& opts = {});

struct GapCounts {
  int N_e = 0;
  int B_e = 0;
};

// Energies of all gap eigenvalues, located as top-branch crossings of 1.
std::vector<double> gap_eigenvalues(const dirac::CliffordRep& rep, const PotentialField& V, double m,
                                    const std::vector<double>& lambda_grid, const SweepOptions& opts = {});

GapCounts count_gap_eigenvalues(const dirac::CliffordRep& rep, const PotentialField& V, double m, double e,
                                const std::vector<double>& gap_energies, const EigenOptions& opts = {});
GapCounts count_gap_eigenvalues(const dirac::CliffordRep& rep, const PotentialField& V, double m, double e,
                                const EigenOptions& opts = {});

// Default sweep grid for gap-eigenvalue enumeration: uniform samples plus
// samples clustered toward +m.
std::vector<double> default_gap_grid(double m, int uniform = 48, int clustered = 32);

// Largest singular value of K_V(i s).
double imaginary_energy_norm(const dirac::CliffordRep& rep, const PotentialField& V, double m, double s,
                             const EigenOptions& opts = {});

}  // namespace diracgap::bs
