#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include "CLI11.hpp"
#include "diracgap/bs_operator.hpp"
#include "diracgap/cli.hpp"
#include "diracgap/errors.hpp"
#include "diracgap/exact_1d.hpp"
#include "diracgap/io.hpp"
#include "diracgap/lieb_thirring.hpp"
#include "diracgap/potentials.hpp"
#include "diracgap/radial.hpp"
#include "diracgap/scf.hpp"
#include "diracgap/specfun.hpp"

namespace diracgap::cli {

using nlohmann::json;

namespace {

json defaults_for(const std::string& cmd) {
  const json gaussian = {{"family", "gaussian"}, {"amplitude", 2.0}, {"scale", 4.0}};
  if (cmd == "keller-1d")
    return {{"m", 1.0},       {"p_min", 1.0001},  {"p_max", 500.0},
            {"n_p", 400},     {"curve_p", {1.0, 1.5, 2.0, 3.0, 5.0}}, {"n_alpha", 200},
            {"tol", 1e-6}};
  if (cmd == "bs-spectrum")
    return {{"d", 2},
            {"a", 6.0},
            {"L", 100},
            {"m", 1.0},
            {"potential", gaussian},
            {"k", 10},
            {"n_lambda", 64},
            {"lambda_min", -0.999},
            {"lambda_max", 0.999},
            {"schrodinger", true},
            {"schrodinger_lambda_min", -2.0},
            {"schrodinger_lambda_max", -0.01},
            {"crossing_tol", 1e-9},
            {"confirm_tol", 1e-7},
            {"seed", 24301},
            {"tol", 1e-10}};
  if (cmd == "radial")
    return {{"d", 2}, {"m", 1.0}, {"p_grid", nullptr}, {"curve_p", nullptr}, {"n_lambda", 24}, {"tol", 1e-10}};
  if (cmd == "scf")
    return {{"p", 3.0},        {"lambda", 0.5},  {"m", 1.0},       {"a", 6.0},
            {"L", 100},        {"seed", 1},      {"max_iter", 200}, {"conv_tol", 1e-6},
            {"eig_tol", 1e-11}, {"snapshots", {0, 1, 5, 20}}};
  if (cmd == "lt")
    return {{"d", 2},         {"a", 6.0}, {"L", 100},     {"m", 1.0}, {"potential", gaussian},
            {"gamma", 2.0},   {"p", 3.0}, {"n_e", 32},    {"seed", 24301}, {"tol", 1e-10}};
  if (cmd == "wp-exact")
    return {{"d", 2}, {"p", 3.0}, {"delta", nullptr}, {"r_max", 10.0}, {"n_r", 501}, {"shoot", true}, {"tol", 1e-10}};
  throw ValidationError("unknown command '" + cmd + "'");
}

double num(const json& c, const char* key) {
  const json& v = c.at(key);
  if (!v.is_number()) throw ValidationError(std::string("config: '") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(std::string("config: '") + key + "' must be finite");
  return x;
}

int integer(const json& c, const char* key) {
  const json& v = c.at(key);
  if (!v.is_number_integer()) throw ValidationError(std::string("config: '") + key + "' must be an integer");
  return v.get<int>();
}

bool boolean(const json& c, const char* key) {
  const json& v = c.at(key);
  if (!v.is_boolean()) throw ValidationError(std::string("config: '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::vector<double> numbers(const json& v, const char* key) {
  if (!v.is_array()) throw ValidationError(std::string("config: '") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ValidationError(std::string("config: '") + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::uint64_t seed_of(const json& c) {
  const json& v = c.at("seed");
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ValidationError("config: 'seed' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string out_path(const RunConfig& run, const std::string& name) {
  return (std::filesystem::path(run.out_dir) / name).string();
}

void prepare_out(const RunConfig& run) {
  std::error_code ec;
  std::filesystem::create_directories(run.out_dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + run.out_dir + "'");
}

json finish(const RunConfig& run, const json& cfg, json summary) {
  summary["command"] = run.command;
  summary["config"] = cfg;
  summary["config_hash"] = io::config_hash(cfg);
  io::write_json(out_path(run, "summary.json"), summary);
  return summary;
}

bs::GridSpec grid_of(const json& c) {
  bs::GridSpec g{integer(c, "d"), num(c, "a"), integer(c, "L")};
  g.validate();
  return g;
}

// Potential from a named family or a CSV file ({"file": path}); the grid comes from the file in the latter case.
bs::PotentialField potential_of(const json& c) {
  const json& spec = c.at("potential");
  if (spec.is_object() && spec.contains("file")) {
    if (!spec.at("file").is_string()) throw ValidationError("config: potential.file must be a string");
    return io::read_potential_csv(spec.at("file").get<std::string>());
  }
  const bs::GridSpec g = grid_of(c);
  return potentials::sample(potentials::from_json(spec, g.d), g);
}

std::vector<double> uniform(double lo, double hi, int n) {
  if (n < 2) throw ValidationError("config: grids need at least 2 points");
  if (!(lo < hi)) throw ValidationError("config: grid bounds must be increasing");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

// Grid argmax refined by a parabola through the neighbours.
std::pair<double, double> refined_argmax(const std::vector<double>& x, const std::vector<double>& y) {
  const auto it = std::max_element(y.begin(), y.end());
  const std::size_t i = static_cast<std::size_t>(it - y.begin());
  if (i == 0 || i + 1 == y.size()) return {x[i], y[i]};
  const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
  const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
  const double den = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double A = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
  const double B = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den;
  if (!(A < 0.0)) return {x1, y1};
  const double xv = -B / (2.0 * A);
  const double C = y1 - A * x1 * x1 - B * x1;
  return {xv, A * xv * xv + B * xv + C};
}

json json_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"keller-1d", "bs-spectrum", "radial", "scf", "lt", "wp-exact"};
  return names;
}

json resolved_config(const RunConfig& run) {
  json cfg = defaults_for(run.command);
  if (!run.config.is_object()) throw ValidationError("config: top level must be a JSON object");
  for (const auto& [k, v] : run.config.items()) {
    if (!cfg.contains(k)) throw ValidationError("config: unknown key '" + k + "' for command " + run.command);
    cfg[k] = v;
  }
  if (run.seed && cfg.contains("seed")) cfg["seed"] = *run.seed;
  if (run.tol) {
    if (!(*run.tol > 0.0)) throw ValidationError("--tol must be positive");
    cfg[run.command == "scf" ? "conv_tol" : "tol"] = *run.tol;
  }
  return cfg;
}

json cmd_keller_1d(const RunConfig& run) {
  const json cfg = resolved_config(run);
  const double m = num(cfg, "m"), p_min = num(cfg, "p_min"), p_max = num(cfg, "p_max"), tol = num(cfg, "tol");
  const int n_p = integer(cfg, "n_p"), n_alpha = integer(cfg, "n_alpha");
  const auto curve_p = numbers(cfg.at("curve_p"), "curve_p");
  if (!(m > 0.0)) throw ValidationError("keller-1d: m must be positive");
  if (!(p_min > 1.0) || !(p_max > p_min)) throw ValidationError("keller-1d: need 1 < p_min < p_max");
  if (n_p < 2 || n_alpha < 1) throw ValidationError("keller-1d: empty p or alpha grid");
  if (curve_p.empty()) throw ValidationError("keller-1d: empty curve_p");
  for (double p : curve_p)
    if (!(p >= 1.0)) throw ValidationError("keller-1d: curve_p entries must be >= 1");
  prepare_out(run);

  // p - 1 log-spaced
  const double t0 = std::log(p_min - 1.0), t1 = std::log(p_max - 1.0);
  {
    io::CsvWriter w(out_path(run, "alpha_star.csv"), {"p", "alpha_star"}, cfg, {{"m", io::fmt(m)}});
    for (int i = 0; i < n_p; ++i) {
      const double p = 1.0 + std::exp(t0 + (t1 - t0) * i / (n_p - 1));
      w.row(std::vector<double>{p, exact1d::alpha_star(p, m)});
    }
  }
  const auto best = boost::math::tools::brent_find_minima(
      [m](double p) { return -exact1d::alpha_star(p, m); }, std::max(p_min, 1.0 + 1e-6), std::min(p_max, 10.0),
      std::max(8, static_cast<int>(std::ceil(-std::log2(tol)))));
  {
    io::CsvWriter w(out_path(run, "lambda_curves.csv"), {"p", "alpha", "Lambda_D", "provenance"}, cfg,
                    {{"m", io::fmt(m)}});
    for (double p : curve_p) {
      const double astar = (p == 1.0) ? M_PI : exact1d::alpha_star(p, m);
      for (int i = 1; i <= n_alpha; ++i) {
        const double a = astar * i / (n_alpha + 1.0);
        w.row({io::fmt(p), io::fmt(a), io::fmt(exact1d::Lambda_D_1d(a, p, m)), "closed-form"});
      }
    }
  }
  json s;
  s["alpha_star_at_p_min"] = exact1d::alpha_star(p_min, m);
  s["alpha_star_at_p_max"] = exact1d::alpha_star(p_max, m);
  s["argmax_p"] = best.first;
  s["max_alpha_star"] = -best.second;
  s["limits"] = {{"p_to_1", M_PI}, {"p_to_infinity", 2.0}};
  return finish(run, cfg, s);
}

json cmd_bs_spectrum(const RunConfig& run) {
  const json cfg = resolved_config(run);
  const bs::PotentialField V = potential_of(cfg);
  const double m = num(cfg, "m");
  if (!(m > 0.0)) throw ValidationError("bs-spectrum: m must be positive");
  const int k = integer(cfg, "k");
  if (k < 1) throw ValidationError("bs-spectrum: k must be >= 1");
  if (4 * 2 * k > static_cast<int>(V.values.size()) * 2) throw ValidationError("bs-spectrum: k too large for grid");
  const auto lambdas = uniform(num(cfg, "lambda_min"), num(cfg, "lambda_max"), integer(cfg, "n_lambda"));
  bs::SweepOptions so;
  so.eig.rel_tol = num(cfg, "tol");
  so.eig.seed = seed_of(cfg);
  so.crossing_tol = num(cfg, "crossing_tol");
  const double confirm_tol = num(cfg, "confirm_tol");
  if (!(so.crossing_tol > 0.0) || !(confirm_tol > 0.0)) throw ValidationError("bs-spectrum: tolerances must be > 0");
  const auto rep = dirac::clifford_rep(V.grid.d);
  prepare_out(run);

  const bs::SpectralCurve curve = bs::sweep_branches(rep, V, m, lambdas, k, so);
  {
    std::vector<std::string> cols{"lambda"};
    for (int j = 1; j <= k; ++j) cols.push_back("mu_" + std::to_string(j));
    for (int j = 1; j <= k; ++j) cols.push_back("nu_" + std::to_string(j));
    io::CsvWriter w(out_path(run, "dirac_branches.csv"), cols, cfg, {{"operator", "dirac"}});
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      std::vector<double> row{lambdas[i]};
      row.insert(row.end(), curve.top[i].begin(), curve.top[i].end());
      row.insert(row.end(), curve.bottom[i].begin(), curve.bottom[i].end());
      w.row(row);
    }
  }
  json s;
  json crossings = json::array();
  double worst_confirm = 0.0;
  for (const auto& c : curve.crossings) {
    const double again = bs::branch_crossing(rep, V, m, c.branch, lambdas.front(), lambdas.back(), confirm_tol, so.eig);
    worst_confirm = std::max(worst_confirm, std::abs(again - c.lambda));
    crossings.push_back({{"branch", c.branch}, {"lambda", c.lambda}, {"confirmed_lambda", again}});
  }
  s["crossings"] = crossings;
  s["max_confirmation_difference"] = worst_confirm;
  s["near_degenerate"] = curve.near_degenerate;
  s["worst_monotonicity_violation"] = curve.worst_monotonicity_violation();
  try {
    const auto ld = bs::lambda_D(rep, V, m, confirm_tol, so.eig);
    s["lambda_D"] = ld ? json(*ld) : json(nullptr);
  } catch (const SupercriticalError&) {
    s["lambda_D"] = "supercritical";
  }

  if (boolean(cfg, "schrodinger")) {
    const auto sl = uniform(num(cfg, "schrodinger_lambda_min"), num(cfg, "schrodinger_lambda_max"),
                            integer(cfg, "n_lambda"));
    if (!(sl.back() < 0.0)) throw ValidationError("bs-spectrum: Schroedinger energies must be negative");
    std::vector<std::vector<double>> rows(sl.size());
    double min_eig = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sl.size(); ++i) {
      const auto K = bs::make_schrodinger_bs(V, sl[i]);
      const auto e = bs::extremal_eigs(K, k, 0, so.eig);
      rows[i] = e.top;
      min_eig = std::min(min_eig, e.top.back());
    }
    std::vector<std::string> cols{"lambda"};
    for (int j = 1; j <= k; ++j) cols.push_back("mu_" + std::to_string(j));
    io::CsvWriter w(out_path(run, "schrodinger_branches.csv"), cols, cfg, {{"operator", "schrodinger"}});
    for (std::size_t i = 0; i < sl.size(); ++i) {
      std::vector<double> row{sl[i]};
      row.insert(row.end(), rows[i].begin(), rows[i].end());
      w.row(row);
    }
    s["schrodinger_min_tracked_eigenvalue"] = min_eig;
  }
  return finish(run, cfg, s);
}

json cmd_radial(const RunConfig& run) {
  const json cfg = resolved_config(run);
  const int d = integer(cfg, "d");
  const double m = num(cfg, "m");
  if (d < 1 || d > 3) throw ValidationError("radial: d must be 1, 2 or 3");
  if (!(m > 0.0)) throw ValidationError("radial: m must be positive");
  std::vector<double> p_grid, curve_p;
  if (cfg.at("p_grid").is_null()) {
    for (int i = 0; i < 100; ++i) p_grid.push_back(d + 0.05 * (i + 1));
  } else {
    p_grid = numbers(cfg.at("p_grid"), "p_grid");
  }
  if (cfg.at("curve_p").is_null()) {
    curve_p = d == 1 ? std::vector<double>{1.5, 2.0, 3.0, 5.0} : std::vector<double>{d + 0.5, d + 1.0, d + 2.0};
  } else {
    curve_p = numbers(cfg.at("curve_p"), "curve_p");
  }
  if (p_grid.empty()) throw ValidationError("radial: empty p_grid");
  for (double p : p_grid)
    if (!(p > d)) throw ValidationError("radial: p_grid entries must exceed d");
  for (double p : curve_p)
    if (!(p > 1.0)) throw ValidationError("radial: curve_p entries must exceed 1");
  const int n_lambda = integer(cfg, "n_lambda");
  if (n_lambda < 1) throw ValidationError("radial: n_lambda must be >= 1");
  radial::ShootingOptions so;
  so.rel_tol = num(cfg, "tol");
  so.abs_tol = 1e-2 * so.rel_tol;
  prepare_out(run);

  std::vector<double> astar(p_grid.size());
  {
    io::CsvWriter w(out_path(run, "alpha_star_rad.csv"), {"p", "alpha_star", "lambda_end", "at_gap_bottom", "closed_form"},
                    cfg, {{"d", std::to_string(d)}});
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
      const double p = p_grid[i];
      const auto cn = radial::radial_critical_norm(d, p, m, so);
      astar[i] = cn.alpha;
      // Closed forms exist at m = 1: the 1D critical norm and the d >= 2 explicit solution.
      double closed = std::numeric_limits<double>::quiet_NaN();
      if (m == 1.0) closed = d == 1 ? exact1d::alpha_star(p, 1.0) : std::pow(radial::wp_norm_p(p, d, d - 1.0), 1.0 / p);
      w.row({io::fmt(p), io::fmt(cn.alpha), io::fmt(cn.lambda), cn.at_gap_bottom ? "1" : "0",
             std::isfinite(closed) ? io::fmt(closed) : "nan"});
    }
  }
  json notes = json::array();
  {
    std::vector<double> lg(n_lambda);
    for (int i = 0; i < n_lambda; ++i) lg[i] = -m + 2.0 * m * (i + 0.5) / n_lambda;
    io::CsvWriter w(out_path(run, "curves.csv"), {"p", "alpha", "lambda", "provenance"}, cfg,
                    {{"d", std::to_string(d)}});
    for (double p : curve_p) {
      const KellerCurve c = radial::radial_keller_curve(d, p, lg, m, so);
      for (const auto& pt : c.points) w.row({io::fmt(p), io::fmt(pt.alpha), io::fmt(pt.lambda), pt.provenance});
      for (const auto& n : c.notes) notes.push_back("p=" + io::fmt(p) + ": " + n);
    }
  }
  const auto [pa, va] = refined_argmax(p_grid, astar);
  json s;
  s["d"] = d;
  s["argmax_p"] = pa;
  s["max_alpha_star"] = va;
  s["notes"] = notes;
  return finish(run, cfg, s);
}

json cmd_scf(const RunConfig& run) {
  const json cfg = resolved_config(run);
  scf::ScfConfig sc;
  sc.p = num(cfg, "p");
  sc.lambda = num(cfg, "lambda");
  sc.m = num(cfg, "m");
  sc.a = num(cfg, "a");
  sc.L = integer(cfg, "L");
  sc.seed = seed_of(cfg);
  sc.max_iter = integer(cfg, "max_iter");
  sc.conv_tol = num(cfg, "conv_tol");
  sc.eig_tol = num(cfg, "eig_tol");
  sc.validate();
  const auto snaps = numbers(cfg.at("snapshots"), "snapshots");
  const auto rep = dirac::clifford_rep(2);
  prepare_out(run);

  const auto W0 = scf::random_initial_potential(sc.grid(), sc.p, sc.seed);
  auto snapshot = [&](const bs::PotentialField& W, int k) {
    if (std::find(snaps.begin(), snaps.end(), static_cast<double>(k)) != snaps.end())
      io::write_potential_csv(out_path(run, "W_" + std::to_string(k) + ".csv"), W, cfg);
  };
  snapshot(W0, 0);
  const scf::ScfState st = scf::run_scf(rep, sc, W0, [&](const scf::ScfState& s) { snapshot(s.W, s.iteration); });
  {
    io::CsvWriter w(out_path(run, "history.csv"), {"iter", "mu1", "step_norm", "radiality"}, cfg);
    for (const auto& h : st.history)
      w.row({std::to_string(h.iter), io::fmt(h.mu1), io::fmt(h.step_norm), io::fmt(h.radiality)});
  }
  io::write_potential_csv(out_path(run, "W_final.csv"), st.W, cfg);
  json s;
  s["converged"] = st.converged;
  s["iterations"] = st.iteration;
  s["monotonicity_violated"] = st.monotonicity_violated;
  s["mu1"] = st.mu1;
  s["inverse_mu1"] = 1.0 / st.mu1;
  s["final_step_norm"] = st.history.empty() ? 0.0 : st.history.back().step_norm;
  s["radiality"] = st.history.empty() ? 0.0 : st.history.back().radiality;
  s["el_residual"] = scf::el_residual(rep, scf::el_variable(st), sc.lambda, sc.p, st.mu1, sc.m);
  int degenerate = 0;
  for (const auto& h : st.history) degenerate += h.degenerate;
  s["degenerate_steps"] = degenerate;
  return finish(run, cfg, s);
}

json cmd_lt(const RunConfig& run) {
  const json cfg = resolved_config(run);
  const bs::PotentialField V = potential_of(cfg);
  lt::LtParams P{num(cfg, "gamma"), num(cfg, "p"), num(cfg, "m"), V.grid.d};
  P.validate();
  const int n_e = integer(cfg, "n_e");
  if (n_e < 1) throw ValidationError("lt: n_e must be >= 1");
  bs::SweepOptions so;
  so.eig.rel_tol = num(cfg, "tol");
  so.eig.seed = seed_of(cfg);
  const auto rep = dirac::clifford_rep(V.grid.d);
  prepare_out(run);

  const auto energies = bs::gap_eigenvalues(rep, V, P.m, bs::default_gap_grid(P.m), so);
  const auto rm = lt::riesz_mean(energies, P.m, P.gamma);
  const auto chain = lt::verify_counting_chain(rep, V, P.m, lt::default_e_samples(P.m, n_e), energies, so.eig);
  const auto C = lt::lt_constant(P);
  const double rhs = lt::lt_rhs(V, P, C);
  {
    io::CsvWriter w(out_path(run, "chain.csv"), {"e", "N_e", "B_e", "N_times_Bpr"}, cfg);
    for (const auto& r : chain.rows)
      w.row({io::fmt(r.e), std::to_string(r.N_e), std::to_string(r.B_e), std::to_string(r.N_times_Bpr)});
  }
  json s;
  s["lhs"] = rm.direct;
  s["lhs_layer_cake"] = rm.layer_cake;
  s["rhs"] = rhs;
  s["constant"] = C.C;
  s["L"] = C.L;
  s["p_used"] = C.p_used;
  s["endpoint"] = C.endpoint;
  s["assembly"] = C.assembly;
  s["margin"] = rhs - rm.direct;
  s["inequality_holds"] = rm.direct <= rhs;
  s["chain_holds"] = chain.all_hold;
  s["gap_energies"] = energies;
  return finish(run, cfg, s);
}

json cmd_wp_exact(const RunConfig& run) {
  const json cfg = resolved_config(run);
  const int d = integer(cfg, "d");
  const double p = num(cfg, "p");
  const double delta = cfg.at("delta").is_null() ? d - 1.0 : num(cfg, "delta");
  const double r_max = num(cfg, "r_max");
  const int n_r = integer(cfg, "n_r");
  if (d < 1 || d > 3) throw ValidationError("wp-exact: d must be 1, 2 or 3");
  if (!(p - 1.0 - delta > 0.0)) throw ValidationError("wp-exact: need p > 1 + delta");
  if (!(r_max > 0.0) || n_r < 2) throw ValidationError("wp-exact: need r_max > 0 and n_r >= 2");
  prepare_out(run);

  std::vector<double> rg(n_r);
  for (int i = 0; i < n_r; ++i) rg[i] = r_max * i / (n_r - 1);
  const auto ex = radial::wp_closed_form(p, d, delta, rg);
  {
    io::CsvWriter w(out_path(run, "wp_exact.csv"), {"r", "phi", "chi", "V"}, cfg, {{"provenance", "closed-form"}});
    for (int i = 0; i < n_r; ++i)
      w.row(std::vector<double>{rg[i], ex.solution.phi[i], ex.solution.chi[i], ex.solution.V[i]});
  }
  // |S^{d-1}| int_0^inf W^p r^{d-1} dr by quadrature
  const double mu = 0.5 * (p - 1.0 - delta);
  const double quad = specfun::sphere_area(d) * [&] {
    boost::math::quadrature::exp_sinh<double> es;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double r) { return std::pow(p * mu / (mu * mu + r * r), p) * std::pow(r, d - 1); };
    return ts.integrate(f, 0.0, 1.0) + es.integrate(f, 1.0, std::numeric_limits<double>::infinity());
  }();
  json s;
  s["norm_p_closed_form"] = ex.norm_p;
  s["norm_p_quadrature"] = quad;
  s["norm"] = ex.norm;
  if (boolean(cfg, "shoot")) {
    radial::ShootingOptions so;
    so.rel_tol = num(cfg, "tol");
    so.abs_tol = 1e-2 * so.rel_tol;
    radial::RadialSystemSpec spec{d, delta, -1.0, p, 1.0};
    const auto sol = radial::shoot_ground_state(spec, so);
    double worst = 0.0;
    io::CsvWriter w(out_path(run, "wp_shooting.csv"), {"r", "phi", "chi", "V"}, cfg, {{"provenance", "ode"}});
    for (int i = 0; i < n_r; ++i) {
      const auto pc = sol.evaluate(rg[i]);
      const double Vs = spec.potential(pc[0], pc[1]);
      worst = std::max(worst, std::abs(Vs - ex.solution.V[i]) / ex.solution.V[i]);
      w.row(std::vector<double>{rg[i], pc[0], pc[1], Vs});
    }
    s["shooting_alpha"] = sol.alpha;
    s["shooting_s"] = sol.s;
    s["max_relative_error_V"] = worst;
    s["r_cut"] = json_or_null(sol.r_cut);
  }
  return finish(run, cfg, s);
}

json run_command(const RunConfig& run) {
  if (run.command == "keller-1d") return cmd_keller_1d(run);
  if (run.command == "bs-spectrum") return cmd_bs_spectrum(run);
  if (run.command == "radial") return cmd_radial(run);
  if (run.command == "scf") return cmd_scf(run);
  if (run.command == "lt") return cmd_lt(run);
  if (run.command == "wp-exact") return cmd_wp_exact(run);
  throw ValidationError("unknown command '" + run.command + "'");
}

int exit_code_for(const std::exception_ptr& e) {
  if (!e) return 0;
  try {
    std::rethrow_exception(e);
  } catch (const SupercriticalError&) {
    return 4;
  } catch (const ConvergenceError&) {
    return 3;
  } catch (const NoSolutionError&) {
    return 3;
  } catch (const IntegrationError&) {
    return 3;
  } catch (const ValidationError&) {
    return 2;
  } catch (const DomainError&) {
    return 2;
  } catch (const SingularityError&) {
    return 2;
  } catch (const nlohmann::json::exception&) {
    return 2;
  } catch (...) {
    return 1;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Gap eigenvalues of Dirac operators with scalar potentials"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  double tol = 0.0;
  auto* o_seed = app.add_option("--seed", seed, "RNG seed override");
  auto* o_tol = app.add_option("--tol", tol, "Main numerical tolerance override");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "Output directory");
  for (const auto& name : command_names()) app.add_subcommand(name);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  RunConfig run;
  run.command = app.get_subcommands().front()->get_name();
  run.out_dir = out_dir;
  if (o_seed->count()) run.seed = seed;
  if (o_tol->count()) run.tol = tol;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ValidationError("cannot open config '" + config_path + "'");
      run.config = json::parse(in);
    }
    const json s = run_command(run);
    std::cout << s.dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(std::current_exception());
  }
}

}  // namespace diracgap::cli
