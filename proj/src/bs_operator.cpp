#include "diracgap/bs_operator.hpp"

#include <boost/math/tools/roots.hpp>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "diracgap/errors.hpp"
#include "diracgap/parallel.hpp"

namespace diracgap::bs {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

void check_potential(const PotentialField& V) { V.validate(); }

}  // namespace

struct SandwichOperator::Impl {
  GridSpec grid;
  int nc = 1;
  std::size_t nodes = 0;
  std::vector<double> sqrtV;
  std::vector<cplx> symbol;
  fftw_complex* work = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (work) fftw_free(work);
  }

  void run(const cplx* in, cplx* out, bool adjoint) {
    auto* w = reinterpret_cast<cplx*>(work);
    for (int c = 0; c < nc; ++c)
      for (std::size_t i = 0; i < nodes; ++i) w[c * nodes + i] = sqrtV[i] * in[c * nodes + i];
    fftw_execute(forward);
    const std::size_t nc2 = static_cast<std::size_t>(nc) * nc;
    cplx u[4], v[4];
    for (std::size_t i = 0; i < nodes; ++i) {
      const cplx* S = &symbol[i * nc2];
      for (int c = 0; c < nc; ++c) u[c] = w[c * nodes + i];
      for (int r = 0; r < nc; ++r) {
        cplx acc = 0.0;
        if (adjoint) {
          for (int c = 0; c < nc; ++c) acc += std::conj(S[c * nc + r]) * u[c];
        } else {
          for (int c = 0; c < nc; ++c) acc += S[r * nc + c] * u[c];
        }
        v[r] = acc;
      }
      for (int r = 0; r < nc; ++r) w[r * nodes + i] = v[r];
    }
    fftw_execute(backward);
    const double inv = 1.0 / static_cast<double>(nodes);
    for (int c = 0; c < nc; ++c)
      for (std::size_t i = 0; i < nodes; ++i) out[c * nodes + i] = sqrtV[i] * inv * w[c * nodes + i];
  }
};

SandwichOperator::SandwichOperator(const PotentialField& V, int n_components, std::vector<cplx> symbol)
    : impl_(std::make_unique<Impl>()) {
  check_potential(V);
  if (n_components < 1 || n_components > 4) throw ValidationError("operator: component count must be 1..4");
  auto& p = *impl_;
  p.grid = V.grid;
  p.nc = n_components;
  p.nodes = V.grid.nodes();
  if (symbol.size() != p.nodes * n_components * n_components)
    throw ValidationError("operator: symbol table size does not match grid");
  p.symbol = std::move(symbol);
  p.sqrtV.resize(p.nodes);
  for (std::size_t i = 0; i < p.nodes; ++i) p.sqrtV[i] = std::sqrt(V.values[i]);

  std::vector<int> dims(V.grid.d, V.grid.L);
  const int dist = static_cast<int>(p.nodes);
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  p.work = fftw_alloc_complex(p.nodes * n_components);
  p.forward = fftw_plan_many_dft(V.grid.d, dims.data(), n_components, p.work, nullptr, 1, dist, p.work, nullptr, 1,
                                 dist, FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_many_dft(V.grid.d, dims.data(), n_components, p.work, nullptr, 1, dist, p.work, nullptr, 1,
                                  dist, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!p.forward || !p.backward) throw std::runtime_error("operator: FFTW planning failed");
}

SandwichOperator::~SandwichOperator() = default;
SandwichOperator::SandwichOperator(SandwichOperator&&) noexcept = default;
SandwichOperator& SandwichOperator::operator=(SandwichOperator&&) noexcept = default;

std::size_t SandwichOperator::dim() const { return impl_->nodes * impl_->nc; }
int SandwichOperator::n_components() const { return impl_->nc; }
const GridSpec& SandwichOperator::grid() const { return impl_->grid; }
void SandwichOperator::apply(const cplx* in, cplx* out) const { impl_->run(in, out, false); }
void SandwichOperator::apply_adjoint(const cplx* in, cplx* out) const { impl_->run(in, out, true); }

linalg::LinearOp SandwichOperator::as_linear_op() const {
  return [this](const cplx* in, cplx* out) { apply(in, out); };
}

namespace {

template <class F>
std::vector<cplx> build_symbol(const GridSpec& grid, int nc, F&& entry) {
  const std::size_t nodes = grid.nodes();
  const std::size_t nc2 = static_cast<std::size_t>(nc) * nc;
  std::vector<cplx> sym(nodes * nc2);
  for (std::size_t i = 0; i < nodes; ++i) {
    const auto k = grid.wavevector(i);
    entry(std::span<const double>(k.data(), grid.d), &sym[i * nc2]);
  }
  return sym;
}

void check_rep(const dirac::CliffordRep& rep, const PotentialField& V) {
  if (rep.d != V.grid.d) throw ValidationError("operator: Clifford dimension does not match grid");
}

}  // namespace

SandwichOperator make_dirac_bs(const dirac::CliffordRep& rep, const PotentialField& V, double m, double lambda) {
  check_rep(rep, V);
  const dirac::ResolventParams params{m, lambda};
  params.validate();
  const int nc = rep.n_components;
  auto sym = build_symbol(V.grid, nc, [&](std::span<const double> k, cplx* out) {
    const dirac::CMat g = dirac::resolvent_symbol(rep, params, k);
    for (int r = 0; r < nc; ++r)
      for (int c = 0; c < nc; ++c) out[r * nc + c] = g(r, c);
  });
  return SandwichOperator(V, nc, std::move(sym));
}

SandwichOperator make_dirac_bs_complex(const dirac::CliffordRep& rep, const PotentialField& V, double m, cplx z) {
  check_rep(rep, V);
  if (z.imag() == 0.0 && std::abs(z.real()) >= m) throw DomainError("operator: real energy outside the gap");
  const int nc = rep.n_components;
  auto sym = build_symbol(V.grid, nc, [&](std::span<const double> k, cplx* out) {
    const dirac::CMat g = dirac::resolvent_symbol_complex(rep, m, z, k);
    for (int r = 0; r < nc; ++r)
      for (int c = 0; c < nc; ++c) out[r * nc + c] = g(r, c);
  });
  return SandwichOperator(V, nc, std::move(sym));
}

SandwichOperator make_schrodinger_bs(const PotentialField& V, double lambda) {
  if (!(lambda < 0.0)) throw DomainError("schrodinger operator: lambda must be negative");
  auto sym = build_symbol(V.grid, 1, [&](std::span<const double> k, cplx* out) {
    double k2 = 0.0;
    for (double kj : k) k2 += kj * kj;
    out[0] = 1.0 / (k2 - lambda);
  });
  return SandwichOperator(V, 1, std::move(sym));
}

SandwichOperator make_pseudo_relativistic_bs(const PotentialField& V, double m, double e) {
  if (!(m > 0.0) || !(e > 0.0)) throw DomainError("pseudo-relativistic operator: m and e must be positive");
  auto sym = build_symbol(V.grid, 1, [&](std::span<const double> k, cplx* out) {
    double k2 = 0.0;
    for (double kj : k) k2 += kj * kj;
    // sqrt(k^2+m^2) - m written without cancellation.
    out[0] = 1.0 / (k2 / (std::sqrt(k2 + m * m) + m) + e);
  });
  return SandwichOperator(V, 1, std::move(sym));
}

SandwichOperator make_fourier_multiplier(const GridSpec& grid, const std::function<cplx(std::span<const double>)>& f) {
  grid.validate();
  const PotentialField one{grid, std::vector<double>(grid.nodes(), 1.0)};
  auto sym = build_symbol(grid, 1, [&](std::span<const double> k, cplx* out) { out[0] = f(k); });
  return SandwichOperator(one, 1, std::move(sym));
}

SandwichOperator make_free_resolvent(const dirac::CliffordRep& rep, const GridSpec& grid, double m, double lambda) {
  grid.validate();
  return make_dirac_bs(rep, PotentialField{grid, std::vector<double>(grid.nodes(), 1.0)}, m, lambda);
}

SpinorField apply_KV(const dirac::CliffordRep& rep, const PotentialField& V, double m, double lambda,
                     const SpinorField& phi) {
  if (phi.n_components != rep.n_components || phi.values.size() != V.grid.nodes() * rep.n_components)
    throw ValidationError("apply_KV: spinor shape does not match");
  const SandwichOperator K = make_dirac_bs(rep, V, m, lambda);
  SpinorField out(V.grid, rep.n_components);
  K.apply(phi.values.data(), out.values.data());
  return out;
}

ExtremalEigs extremal_eigs(const SandwichOperator& K, int k_top, int k_bottom, const EigenOptions& opts,
                           const SpinorField* start) {
  const std::size_t n = K.dim();
  if (static_cast<std::size_t>(k_top + k_bottom) * 4 > n)
    throw ValidationError("extremal_eigs: k_top + k_bottom must not exceed a quarter of the dimension");
  linalg::LanczosOptions lo;
  lo.k_top = k_top;
  lo.k_bottom = k_bottom;
  lo.rel_tol = opts.rel_tol;
  lo.seed = opts.seed;
  lo.max_basis = opts.max_basis;
  linalg::CVec sv;
  if (start != nullptr && start->values.size() == n) {
    sv = Eigen::Map<const linalg::CVec>(start->values.data(), static_cast<Eigen::Index>(n));
    lo.start = &sv;
  }
  const linalg::LanczosResult r = linalg::extremal_eigs(K.as_linear_op(), n, lo);
  ExtremalEigs out;
  out.top = r.top;
  out.bottom = r.bottom;
  out.top_residuals = r.top_residuals;
  out.bottom_residuals = r.bottom_residuals;
  out.next_top = r.next_top;
  auto to_field = [&](const linalg::CVec& v) {
    SpinorField f(K.grid(), K.n_components());
    std::copy(v.data(), v.data() + v.size(), f.values.begin());
    return f;
  };
  for (Eigen::Index c = 0; c < r.top_vectors.cols(); ++c) out.top_vectors.push_back(to_field(r.top_vectors.col(c)));
  for (Eigen::Index c = 0; c < r.bottom_vectors.cols(); ++c)
    out.bottom_vectors.push_back(to_field(r.bottom_vectors.col(c)));
  return out;
}

ExtremalEigs extremal_eigs(const dirac::CliffordRep& rep, const PotentialField& V, double m, double lambda, int k_top,
                           int k_bottom, const EigenOptions& opts) {
  return extremal_eigs(make_dirac_bs(rep, V, m, lambda), k_top, k_bottom, opts);
}

double top_eigenvalue(const dirac::CliffordRep& rep, const PotentialField& V, double m, double lambda, int j,
                      const EigenOptions& opts) {
  if (j < 1) throw ValidationError("top_eigenvalue: branch index starts at 1");
  const ExtremalEigs e = extremal_eigs(rep, V, m, lambda, j, 0, opts);
  return e.top[j - 1];
}

double SpectralCurve::worst_monotonicity_violation() const {
  double worst = 0.0;
  auto scan = [&](const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size() && j < rows[i - 1].size(); ++j)
        worst = std::max(worst, rows[i - 1][j] - rows[i][j]);
  };
  scan(top);
  scan(bottom);
  return worst;
}

namespace {

void validate_lambda_grid(const std::vector<double>& grid, double m) {
  if (grid.empty()) throw ValidationError("sweep: empty lambda grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(std::abs(grid[i]) < m)) throw ValidationError("sweep: lambda samples must lie inside (-m, m)");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError("sweep: lambda grid must be strictly increasing");
  }
}

SpectralCurve sweep_impl(const dirac::CliffordRep& rep, const PotentialField& V, double m,
                         const std::vector<double>& lambda_grid, int k_top, int k_bottom, const SweepOptions& opts) {
  validate_lambda_grid(lambda_grid, m);
  SpectralCurve curve;
  curve.lambdas = lambda_grid;
  const std::size_t n = lambda_grid.size();
  curve.top.resize(n);
  curve.bottom.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const ExtremalEigs e = extremal_eigs(rep, V, m, lambda_grid[i], k_top, k_bottom, opts.eig);
    curve.top[i] = e.top;
    curve.bottom[i] = e.bottom;
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (k_top >= 2 && curve.top[i][0] - curve.top[i][1] < 1e-6) curve.near_degenerate.push_back(lambda_grid[i]);
  }
  struct Job {
    int branch;
    std::size_t i;
  };
  std::vector<Job> jobs;
  for (int j = 0; j < k_top; ++j)
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (curve.top[i][j] < 1.0 && curve.top[i + 1][j] >= 1.0) jobs.push_back({j + 1, i});
  curve.crossings.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t q) {
    const Job& job = jobs[q];
    const double lam = branch_crossing(rep, V, m, job.branch, lambda_grid[job.i], lambda_grid[job.i + 1],
                                       opts.crossing_tol, opts.eig);
    curve.crossings[q] = {job.branch, lam};
  });
  std::sort(curve.crossings.begin(), curve.crossings.end(),
            [](const Crossing& a, const Crossing& b) { return a.lambda < b.lambda || (a.lambda == b.lambda && a.branch < b.branch); });
  return curve;
}

}  // namespace

SpectralCurve sweep_branches(const dirac::CliffordRep& rep, const PotentialField& V, double m,
                             const std::vector<double>& lambda_grid, int k, const SweepOptions& opts) {
  if (k < 1) throw ValidationError("sweep: at least one branch is required");
  return sweep_impl(rep, V, m, lambda_grid, k, k, opts);
}

double branch_crossing(const dirac::CliffordRep& rep, const PotentialField& V, double m, int branch, double lo,
                       double hi, double tol, const EigenOptions& opts) {
  if (!(lo < hi)) throw ValidationError("branch_crossing: empty bracket");
  if (!(tol > 0.0)) throw ValidationError("branch_crossing: tolerance must be positive");
  auto f = [&](double lam) { return top_eigenvalue(rep, V, m, lam, branch, opts) - 1.0; };
  const double flo = f(lo), fhi = f(hi);
  // Endpoint values can land on the other side of 1 by solver roundoff when the crossing sits at a sample.
  if (flo >= 0.0) return lo;
  if (fhi < 0.0) return hi;
  std::uintmax_t max_iter = 200;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, [tol](double a, double b) { return std::abs(b - a) <= tol; }, max_iter);
  return 0.5 * (r.first + r.second);
}

std::optional<double> lambda_D(const dirac::CliffordRep& rep, const PotentialField& V, double m, double tol,
                               const EigenOptions& opts) {
  if (!(tol > 0.0) || !(10.0 * tol < m)) throw ValidationError("lambda_D: tolerance must be positive and small");
  double lo = -m + 10.0 * tol;
  double hi = m - 10.0 * tol;
  if (top_eigenvalue(rep, V, m, lo, 1, opts) > 1.0)
    throw SupercriticalError("lambda_D: mu_1 exceeds 1 at the bottom of the gap");
  if (top_eigenvalue(rep, V, m, hi, 1, opts) < 1.0) return std::nullopt;
  for (int it = 0; it < 60 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (top_eigenvalue(rep, V, m, mid, 1, opts) >= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

int count_at_least_one(const SandwichOperator& K, const EigenOptions& opts) {
  const int cap = static_cast<int>(K.dim() / 4);
  // Grow from one pair: weak potentials leave a dense cluster near zero that converges slowly.
  int k = std::min(1, cap);
  while (true) {
    const ExtremalEigs e = extremal_eigs(K, k, 0, opts);
    const int count = static_cast<int>(std::count_if(e.top.begin(), e.top.end(), [](double v) { return v >= 1.0; }));
    if (count < k || k == cap) return count;
    k = std::min(2 * k, cap);
  }
}

std::vector<double> default_gap_grid(double m, int uniform, int clustered) {
  std::vector<double> g;
  const double edge = 1e-4 * m;
  for (int i = 0; i < uniform; ++i) g.push_back(-m + edge + (2.0 * m - 2.0 * edge) * i / (uniform - 1));
  for (int i = 0; i < clustered; ++i) {
    const double e = edge * std::pow(0.5 * m / edge, static_cast<double>(i) / (clustered - 1));
    g.push_back(m - e);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), g.end());
  return g;
}

std::vector<double> gap_eigenvalues(const dirac::CliffordRep& rep, const PotentialField& V, double m,
                                    const std::vector<double>& lambda_grid, const SweepOptions& opts) {
  validate_lambda_grid(lambda_grid, m);
  const int at_top = count_at_least_one(make_dirac_bs(rep, V, m, lambda_grid.back()), opts.eig);
  if (at_top == 0) return {};
  const SpectralCurve curve = sweep_impl(rep, V, m, lambda_grid, at_top + 1, 0, opts);
  std::vector<double> energies;
  for (const Crossing& c : curve.crossings) energies.push_back(c.lambda);
  return energies;
}

GapCounts count_gap_eigenvalues(const dirac::CliffordRep& rep, const PotentialField& V, double m, double e,
                                const std::vector<double>& gap_energies, const EigenOptions& opts) {
  if (!(e > 0.0 && e < 2.0 * m)) throw ValidationError("count_gap_eigenvalues: e must lie in (0, 2m)");
  GapCounts c;
  c.N_e = static_cast<int>(std::count_if(gap_energies.begin(), gap_energies.end(), [&](double l) { return l <= m - e; }));
  c.B_e = count_at_least_one(make_dirac_bs(rep, V, m, m - e), opts);
  return c;
}

GapCounts count_gap_eigenvalues(const dirac::CliffordRep& rep, const PotentialField& V, double m, double e,
                                const EigenOptions& opts) {
  SweepOptions so;
  so.eig = opts;
  return count_gap_eigenvalues(rep, V, m, e, gap_eigenvalues(rep, V, m, default_gap_grid(m), so), opts);
}

double imaginary_energy_norm(const dirac::CliffordRep& rep, const PotentialField& V, double m, double s,
                             const EigenOptions& opts) {
  const SandwichOperator K = make_dirac_bs_complex(rep, V, m, cplx(0.0, s));
  std::vector<cplx> tmp(K.dim());
  linalg::LinearOp op = [&](const cplx* in, cplx* out) {
    K.apply(in, tmp.data());
    K.apply_adjoint(tmp.data(), out);
  };
  linalg::LanczosOptions lo;
  lo.k_top = 1;
  lo.rel_tol = opts.rel_tol;
  lo.seed = opts.seed;
  const linalg::LanczosResult r = linalg::extremal_eigs(op, K.dim(), lo);
  return std::sqrt(std::max(0.0, r.top[0]));
}

}  // namespace diracgap::bs
