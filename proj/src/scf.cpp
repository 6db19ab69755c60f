#include "diracgap/scf.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "diracgap/errors.hpp"

namespace diracgap::scf {

using bs::cplx;
using bs::GridSpec;
using bs::PotentialField;
using bs::SpinorField;

void ScfConfig::validate() const {
  if (!(p > 2.0) || !std::isfinite(p)) throw ValidationError("scf: p must be > d = 2");
  if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("scf: m must be > 0");
  if (!(lambda > -m && lambda < m)) throw ValidationError("scf: lambda must lie in (-m, m)");
  grid().validate();
  if (max_iter < 1) throw ValidationError("scf: max_iter must be >= 1");
  if (!(conv_tol > 0.0) || !(eig_tol > 0.0) || !(monotone_tol >= 0.0))
    throw ValidationError("scf: tolerances must be positive");
}

namespace {

void normalize_lp(PotentialField& W, double p) {
  const double n = W.lp_norm(p);
  if (!(n > 0.0)) throw DomainError("scf: potential vanishes identically");
  for (double& v : W.values) v /= n;
}

double diff_lp(const PotentialField& a, const PotentialField& b, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::pow(std::abs(a.values[i] - b.values[i]), p);
  return std::pow(a.grid.cell_volume() * s, 1.0 / p);
}

// Pointwise spinor modulus |phi(x)|.
std::vector<double> modulus(const SpinorField& phi) {
  const std::size_t n = phi.grid.nodes();
  std::vector<double> out(n, 0.0);
  for (int c = 0; c < phi.n_components; ++c)
    for (std::size_t i = 0; i < n; ++i) out[i] += std::norm(phi.values[c * n + i]);
  for (double& v : out) v = std::sqrt(v);
  return out;
}

std::size_t rolled_index(const GridSpec& g, std::size_t flat, const std::array<int, 3>& shift) {
  auto mi = g.multi_index(flat);
  std::size_t out = 0;
  for (int k = 0; k < g.d; ++k) out = out * g.L + static_cast<std::size_t>(((mi[k] + shift[k]) % g.L + g.L) % g.L);
  return out;
}

}  // namespace

PotentialField random_initial_potential(const GridSpec& grid, double p, std::uint64_t seed) {
  grid.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> noise(grid.nodes());
  for (auto& z : noise) z = gauss(rng);
  // Gaussian low-pass with a correlation length of about one unit.
  auto filter = bs::make_fourier_multiplier(grid, [](std::span<const double> k) {
    double k2 = 0.0;
    for (double x : k) k2 += x * x;
    return cplx(std::exp(-0.5 * k2), 0.0);
  });
  std::vector<cplx> smooth(noise.size());
  filter.apply(noise.data(), smooth.data());
  PotentialField W{grid, std::vector<double>(grid.nodes())};
  for (std::size_t i = 0; i < smooth.size(); ++i) W.values[i] = std::abs(smooth[i].real());
  normalize_lp(W, p);
  return W;
}

std::array<int, 3> argmax_shift(const PotentialField& W) {
  const auto it = std::max_element(W.values.begin(), W.values.end());  // first maximum in row-major order
  const auto mi = W.grid.multi_index(static_cast<std::size_t>(it - W.values.begin()));
  std::array<int, 3> shift{0, 0, 0};
  for (int k = 0; k < W.grid.d; ++k) shift[k] = W.grid.L / 2 - mi[k];
  return shift;
}

PotentialField roll(const PotentialField& W, const std::array<int, 3>& shift) {
  PotentialField out{W.grid, std::vector<double>(W.values.size())};
  for (std::size_t i = 0; i < W.values.size(); ++i) out.values[rolled_index(W.grid, i, shift)] = W.values[i];
  return out;
}

SpinorField roll(const SpinorField& phi, const std::array<int, 3>& shift) {
  SpinorField out(phi.grid, phi.n_components);
  const std::size_t n = phi.grid.nodes();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = rolled_index(phi.grid, i, shift);
    for (int c = 0; c < phi.n_components; ++c) out.values[c * n + j] = phi.values[c * n + i];
  }
  return out;
}

ScfState initial_state(const PotentialField& W0) {
  W0.validate();
  ScfState s;
  s.W = W0;
  return s;
}

ScfState scf_step(const dirac::CliffordRep& rep, const ScfState& state, double lambda, double p, double m,
                  double eig_tol) {
  const GridSpec& g = state.W.grid;
  if (g.d != rep.d) throw ValidationError("scf: grid and representation dimensions differ");
  auto K = bs::make_dirac_bs(rep, state.W, m, lambda);
  bs::EigenOptions opts;
  opts.rel_tol = eig_tol;
  const bool warm = !state.phi.values.empty() && state.phi.values.size() == K.dim();
  const auto eig = bs::extremal_eigs(K, 2, 0, opts, warm ? &state.phi : nullptr);

  ScfHistoryEntry h;
  h.iter = state.iteration;
  h.mu1 = eig.top[0];
  h.top_gap = eig.top[0] - eig.top[1];
  h.degenerate = h.top_gap < 1e-8 * std::max(1.0, std::abs(eig.top[0]));

  SpinorField phi = eig.top_vectors[0];
  if (h.degenerate && warm) {
    // Follow the previous iterate inside the (near) degenerate top eigenspace.
    auto overlap = [&](const SpinorField& v) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < v.values.size(); ++i) s += std::conj(state.phi.values[i]) * v.values[i];
      return std::abs(s);
    };
    if (overlap(eig.top_vectors[1]) > overlap(phi)) phi = eig.top_vectors[1];
  }
  const double nrm = phi.l2_norm();
  for (auto& z : phi.values) z /= nrm;

  PotentialField Wn{g, modulus(phi)};
  for (double& v : Wn.values) v = std::pow(v, 2.0 / p);
  normalize_lp(Wn, p);  // already 1 up to rounding
  const auto shift = argmax_shift(Wn);
  Wn = roll(Wn, shift);
  phi = roll(phi, shift);

  ScfState next;
  next.iteration = state.iteration + 1;
  h.step_norm = diff_lp(Wn, state.W, p);
  h.radiality = g.d == 2 ? radiality_metric(Wn, p) : 0.0;
  next.history = state.history;
  next.history.push_back(h);
  next.W = std::move(Wn);
  next.phi = std::move(phi);
  next.mu1 = h.mu1;
  next.monotonicity_violated = state.monotonicity_violated;
  return next;
}

ScfState run_scf(const dirac::CliffordRep& rep, const ScfConfig& config) {
  config.validate();
  return run_scf(rep, config, random_initial_potential(config.grid(), config.p, config.seed));
}

ScfState run_scf(const dirac::CliffordRep& rep, const ScfConfig& config, const PotentialField& W0,
                 const std::function<void(const ScfState&)>& on_step) {
  config.validate();
  ScfState s = initial_state(W0);
  for (int it = 0; it < config.max_iter; ++it) {
    s = scf_step(rep, s, config.lambda, config.p, config.m, config.eig_tol);
    if (on_step) on_step(s);
    const auto& hist = s.history;
    if (hist.size() >= 2 && hist.back().mu1 < hist[hist.size() - 2].mu1 - config.monotone_tol) {
      s.monotonicity_violated = true;
      return s;
    }
    if (hist.back().step_norm < config.conv_tol) {
      s.converged = true;
      break;
    }
  }
  return s;
}

double radiality_metric(const PotentialField& W, double p) {
  const GridSpec& g = W.grid;
  if (g.d != 2) throw ValidationError("radiality_metric: d must be 2");
  const double nyq = M_PI * g.L / (2.0 * g.a) * (1.0 - 1e-12);
  auto deriv = [&](int axis) {
    return bs::make_fourier_multiplier(g, [=](std::span<const double> k) {
      if (std::abs(k[axis]) >= nyq) return cplx(0.0);
      return cplx(0.0, k[axis]);
    });
  };
  std::vector<cplx> f(W.values.begin(), W.values.end()), dx(f.size()), dy(f.size());
  deriv(0).apply(f.data(), dx.data());
  deriv(1).apply(f.data(), dy.data());
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = g.position(i);
    s += std::pow(std::abs(x[0] * dy[i].real() - x[1] * dx[i].real()), p);
  }
  return std::pow(g.cell_volume() * s, 1.0 / p);
}

SpinorField el_variable(const ScfState& state) {
  if (state.phi.values.empty()) throw ValidationError("el_variable: state has no eigenvector");
  SpinorField w = state.phi;
  const std::size_t n = w.grid.nodes();
  // phi was computed for the previous W; the new W equals |phi|^{2/p}, which is what pairs with phi.
  for (int c = 0; c < w.n_components; ++c)
    for (std::size_t i = 0; i < n; ++i) w.values[c * n + i] *= std::sqrt(state.W.values[i]);
  return w;
}

double el_residual(const dirac::CliffordRep& rep, const SpinorField& w, double lambda, double p, double tau,
                   double m) {
  auto R0 = bs::make_free_resolvent(rep, w.grid, m, lambda);
  SpinorField r(w.grid, w.n_components);
  R0.apply(w.values.data(), r.values.data());
  const auto mod = modulus(w);
  const std::size_t n = w.grid.nodes();
  for (int c = 0; c < w.n_components; ++c)
    for (std::size_t i = 0; i < n; ++i)
      if (mod[i] > 0.0) r.values[c * n + i] -= tau * std::pow(mod[i], -2.0 / (p + 1.0)) * w.values[c * n + i];
  return r.l2_norm() / w.l2_norm();
}

}  // namespace diracgap::scf
