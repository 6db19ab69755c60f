#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace diracgap::linalg {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
// out = A * in for a Hermitian operator on C^n.
using LinearOp = std::function<void(const cplx* in, cplx* out)>;

struct LanczosOptions {
  int k_top = 1;
  int k_bottom = 0;
  // Ritz pairs are accepted when ||A v - theta v|| <= rel_tol * max(|theta|, floor),
  // floor = 1e-2 * (largest |theta| seen).
  double rel_tol = 1e-10;
  int max_basis = 0;  // 0 selects a size from k_top + k_bottom
  int max_restarts = 300;
  std::uint64_t seed = 0x5eed;
  // Optional start vector; a small seeded perturbation is added to it.
  const CVec* start = nullptr;
};

struct LanczosResult {
  std::vector<double> top;     // descending
  std::vector<double> bottom;  // ascending
  Eigen::MatrixXcd top_vectors;
  Eigen::MatrixXcd bottom_vectors;
  std::vector<double> top_residuals;
  std::vector<double> bottom_residuals;
  // Ritz value just below the last requested top value, NaN when unavailable.
  double next_top = 0.0;
  int matvecs = 0;
  int restarts = 0;
};

// Extremal eigenpairs of a Hermitian operator by Lanczos with full
// reorthogonalization and thick restart.
LanczosResult extremal_eigs(const LinearOp& op, std::size_t n, const LanczosOptions& opts);

}  // namespace diracgap::linalg
