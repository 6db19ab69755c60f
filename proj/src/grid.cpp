#include "diracgap/grid.hpp"

#include <cmath>
#include <numbers>

#include "diracgap/errors.hpp"

namespace diracgap::bs {

void GridSpec::validate() const {
  if (d < 1 || d > 3) throw ValidationError("grid: dimension must be 1, 2 or 3");
  if (!(a > 0.0)) throw ValidationError("grid: half width must be positive");
  if (L < 16 || L % 2 != 0) throw ValidationError("grid: points per dimension must be even and at least 16");
}

double GridSpec::cell_volume() const { return std::pow(h(), d); }

std::size_t GridSpec::nodes() const {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(L);
  return n;
}

double GridSpec::wavenumber(int n) const {
  const int signed_n = n < L / 2 ? n : n - L;
  return std::numbers::pi * signed_n / a;
}

std::array<int, 3> GridSpec::multi_index(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int i = d - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(flat % L);
    flat /= L;
  }
  return idx;
}

std::array<double, 3> GridSpec::position(std::size_t flat) const {
  const auto idx = multi_index(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int i = 0; i < d; ++i) x[i] = coordinate(idx[i]);
  return x;
}

std::array<double, 3> GridSpec::wavevector(std::size_t flat) const {
  const auto idx = multi_index(flat);
  std::array<double, 3> k{0.0, 0.0, 0.0};
  for (int i = 0; i < d; ++i) k[i] = wavenumber(idx[i]);
  return k;
}

void PotentialField::validate() const {
  grid.validate();
  if (values.size() != grid.nodes()) throw ValidationError("potential: value count does not match grid");
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("potential: values must be finite and non-negative");
  }
}

double PotentialField::lp_norm(double p) const {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be at least 1");
  double s = 0.0;
  for (double v : values) s += std::pow(v, p);
  return std::pow(s * grid.cell_volume(), 1.0 / p);
}

double PotentialField::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_volume();
}

PotentialField sample_potential(const GridSpec& grid, const std::function<double(const std::array<double, 3>&)>& f) {
  grid.validate();
  PotentialField V{grid, std::vector<double>(grid.nodes())};
  for (std::size_t i = 0; i < V.values.size(); ++i) V.values[i] = f(grid.position(i));
  return V;
}

double SpinorField::l2_norm() const {
  double s = 0.0;
  for (const cplx& z : values) s += std::norm(z);
  return std::sqrt(s * grid.cell_volume());
}

}  // namespace diracgap::bs
