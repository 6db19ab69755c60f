#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "diracgap/bs_operator.hpp"

namespace diracgap::scf {

struct ScfHistoryEntry {
  int iter = 0;
  double mu1 = 0.0;        // mu_1(K_{W_k})
  double step_norm = 0.0;  // ||W_{k+1} - W_k||_p
  double radiality = 0.0;  // ||x d_y W_{k+1} - y d_x W_{k+1}||_p
  double top_gap = 0.0;    // mu_1 - mu_2
  bool degenerate = false;
};

struct ScfState {
  int iteration = 0;
  bs::PotentialField W;  // ||W||_p = 1
  double mu1 = 0.0;
  bs::SpinorField phi;   // continuous L^2 norm 1
  std::vector<ScfHistoryEntry> history;
  bool converged = false;
  // Set when mu_1 decreased by more than the monitoring tolerance.
  bool monotonicity_violated = false;
};

struct ScfConfig {
  double p = 3.0;
  double lambda = 0.5;
  double m = 1.0;
  double a = 6.0;
  int L = 100;
  std::uint64_t seed = 1;
  int max_iter = 200;
  double conv_tol = 1e-6;
  double eig_tol = 1e-11;
  double monotone_tol = 1e-8;

  void validate() const;
  bs::GridSpec grid() const { return {2, a, L}; }
};

// |band-limited Gaussian random field|, normalized in L^p.
bs::PotentialField random_initial_potential(const bs::GridSpec& grid, double p, std::uint64_t seed);

// Torus roll moving the maximum (lexicographically first on ties) to the node at the origin.
std::array<int, 3> argmax_shift(const bs::PotentialField& W);
bs::PotentialField roll(const bs::PotentialField& W, const std::array<int, 3>& shift);
bs::SpinorField roll(const bs::SpinorField& phi, const std::array<int, 3>& shift);

ScfState initial_state(const bs::PotentialField& W0);
ScfState scf_step(const dirac::CliffordRep& rep, const ScfState& state, double lambda, double p, double m = 1.0,
                  double eig_tol = 1e-11);
ScfState run_scf(const dirac::CliffordRep& rep, const ScfConfig& config);
// on_step sees every iterate after it is produced.
ScfState run_scf(const dirac::CliffordRep& rep, const ScfConfig& config, const bs::PotentialField& W0,
                 const std::function<void(const ScfState&)>& on_step = nullptr);

// L^p norm of the angular derivative x d_y W - y d_x W, with spectral derivatives (d = 2).
double radiality_metric(const bs::PotentialField& W, double p);

// ||R_0(lambda) w - tau |w|^{-2/(p+1)} w|| / ||w||.
double el_residual(const dirac::CliffordRep& rep, const bs::SpinorField& w, double lambda, double p, double tau,
                   double m = 1.0);
// w = sqrt(W) phi
bs::SpinorField el_variable(const ScfState& state);

}  // namespace diracgap::scf
