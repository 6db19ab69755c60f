#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace diracgap::bs {

using cplx = std::complex<double>;

// Periodic box [-a, a)^d sampled with L points per direction.
struct GridSpec {
  int d = 1;
  double a = 1.0;
  int L = 16;

  void validate() const;
  double h() const { return 2.0 * a / L; }
  double cell_volume() const;
  std::size_t nodes() const;
  double coordinate(int j) const { return -a + j * h(); }
  // Wavenumber of DFT index n in FFTW ordering.
  double wavenumber(int n) const;
  // Row-major multi-index of a flat node index; unused trailing entries are 0.
  std::array<int, 3> multi_index(std::size_t flat) const;
  std::array<double, 3> position(std::size_t flat) const;
  std::array<double, 3> wavevector(std::size_t flat) const;
};

struct PotentialField {
  GridSpec grid;
  std::vector<double> values;

  void validate() const;
  // (h^d sum V^p)^{1/p}
  double lp_norm(double p) const;
  double integral() const;
};

PotentialField sample_potential(const GridSpec& grid, const std::function<double(const std::array<double, 3>&)>& f);

// Component-major storage: values[c * nodes + node].
struct SpinorField {
  GridSpec grid;
  int n_components = 1;
  std::vector<cplx> values;

  SpinorField() = default;
  SpinorField(const GridSpec& g, int n) : grid(g), n_components(n), values(g.nodes() * n) {}
  // Continuous L^2 norm (h^d sum |phi|^2)^{1/2}.
  double l2_norm() const;
};

}  // namespace diracgap::bs
