#pragma once

#include <string>
#include <vector>

#include "diracgap/bs_operator.hpp"

namespace diracgap::lt {

struct LtParams {
  double gamma = 2.0;
  double p = 2.0;
  double m = 1.0;
  int d = 1;

  // gamma > d/2, d < p <= gamma + d/2 (up to 1e-12 slack at the endpoint), m > 0.
  void validate() const;
  bool at_endpoint() const;
};

// I(e) = int_0^inf (X(eX + 2m))^{d/2-1} (eX + m) / (X + 1)^p dX, p > d.
double x_integral(int d, double p, double e, double m = 1.0);

// C_{p,d} = (2 pi)^{-d} |S^{d-1}| sup_{0 < e <= 2m} I(e) / m^{d/2}, so that
// #{eig >= 1 of sqrt(V)(sqrt(-Lap + m^2) - m + e)^{-1} sqrt(V)} <= C m^{d/2} ||V||_p^p / e^{p - d/2}.
double pr_constant(int d, double p, double m = 1.0);

struct LtConstant {
  double C = 0.0;        // C_{p_used,d}
  double L = 0.0;        // L_{gamma,d,p}
  double p_used = 0.0;   // equals p unless p sits at the endpoint
  int n_components = 0;  // spinor dimension N
  bool endpoint = false;
  std::string assembly;  // human-readable formula with the numbers inserted
};

// L = N C_{p,d} gamma 2^gamma / (gamma + d/2 - p) for p < gamma + d/2. At p = gamma + d/2
// the bound with exponent p' < p and V_m^{p-p'} V^{p'} <= V^p gives L = min_{d < p' < p} L_{p'}.
LtConstant lt_constant(const LtParams& params);

// L m^{d/2} int V_m^{gamma + d/2 - p} V^p dx with V_m = min(m, V).
double lt_rhs(const bs::PotentialField& V, const LtParams& params, const LtConstant& constant);
double lt_rhs(const bs::PotentialField& V, const LtParams& params);

struct RieszMean {
  double direct = 0.0;      // sum_k (m - lambda_k)^gamma
  double layer_cake = 0.0;  // gamma int_0^{2m} e^{gamma-1} N_e de, midpoint rule on a dense e grid
  std::vector<double> energies;
};

RieszMean riesz_mean(const std::vector<double>& gap_energies, double m, double gamma, int layer_cake_points = 20000);
RieszMean riesz_mean(const dirac::CliffordRep& rep, const bs::PotentialField& V, double m, double gamma,
                     const bs::SweepOptions& opts = {});

struct ChainRow {
  double e = 0.0;
  int N_e = 0;
  int B_e = 0;
  int B_pr = 0;
  int N_times_Bpr = 0;
  bool holds = false;
};

struct ChainReport {
  std::vector<ChainRow> rows;
  bool all_hold = true;
};

// Log-spaced samples in (1e-3 m, 2m), endpoints excluded.
std::vector<double> default_e_samples(double m, int n = 32);

ChainReport verify_counting_chain(const dirac::CliffordRep& rep, const bs::PotentialField& V, double m,
                                  const std::vector<double>& e_samples, const std::vector<double>& gap_energies,
                                  const bs::EigenOptions& opts = {});
ChainReport verify_counting_chain(const dirac::CliffordRep& rep, const bs::PotentialField& V, double m,
                                  const std::vector<double>& e_samples, const bs::EigenOptions& opts = {});

}  // namespace diracgap::lt
