#include "ancient/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "ancient/graph.hpp"
#include "ancient/verification.hpp"

namespace ancient {
namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void print_checks(const Report& rep) {
  const Json j = rep.json();
  for (const auto& c : j["checks"]) {
    std::cout << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>();
    if (c.contains("relation")) {
      std::cout << "  " << (c["value"].is_null() ? std::string("nan") : c["value"].dump()) << ' '
                << c["relation"].get<std::string>() << ' ' << c["tolerance"].dump();
    } else if (!c["detail"].get<std::string>().empty()) {
      std::cout << "  " << c["detail"].get<std::string>();
    }
    std::cout << '\n';
  }
}

void dump_operators(const Grid& grid, const std::filesystem::path& dir) {
  write_atomic(dir / "grid.csv", grid_csv(grid));
  for (int k = 0; k <= grid.K; ++k)
    write_atomic(dir / ("operator_k" + std::to_string(k) + ".csv"),
                 operator_csv(grid, assemble_jacobi(grid, k)));
}

Json spectrum_json(const SpectralData& d) {
  Json j;
  j["index"] = d.index();
  j["lambdas"] = d.lambdas;
  j["mode_of"] = d.mode_of;
  j["harmonic_of"] = d.harmonic_of;
  j["residuals"] = d.residuals;
  return j;
}

/// Coefficients <f, phi_j> for the negative eigenpairs (zero for k >= 1).
Eigen::VectorXd negative_coefficients(const SpectralData& d, const Eigen::VectorXd& f) {
  const Eigen::VectorXd c = d.to_coefficients(f);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d.index());
  int col = 0;
  for (int j = 0; j < d.index(); ++j)
    if (d.mode_of[j] == 0) out[j] = c[col++];
  return out;
}

struct Hygiene {
  double orthonormality = 0.0;
  double residual = 0.0;
  int count = 0;
};

/// Gram defect and eigen-residual of the lowest mode-0 eigenfunctions and of
/// every negative eigenfunction.
Hygiene spectral_hygiene(const SpectralData& d, int count = 8) {
  const Grid& g = d.grid;
  const ModeSpectrum& m0 = d.mode0();
  const ModeOperator op = assemble_jacobi(g, 0);
  Hygiene h;
  h.count = std::min(count, m0.dim());
  std::vector<Eigen::VectorXd> f;
  for (int i = 0; i < h.count; ++i)
    f.push_back(d.from_coefficients(Eigen::VectorXd::Unit(m0.dim(), i)));
  for (int i = 0; i < h.count; ++i) {
    for (int j = 0; j < h.count; ++j)
      h.orthonormality =
          std::max(h.orthonormality, std::abs(l2_inner(g, f[i], f[j]) - (i == j ? 1.0 : 0.0)));
    const double lam = m0.values[i];
    const double r = l2_norm(g, op.apply(g, f[i]) - lam * f[i]) / std::max(1.0, std::abs(lam));
    h.residual = std::max(h.residual, r);
  }
  for (int i = 0; i < d.index(); ++i)
    for (int j = 0; j < d.index(); ++j)
      h.orthonormality = std::max(
          h.orthonormality, std::abs(l2_inner(g, d.phis[i], d.phis[j]) - (i == j ? 1.0 : 0.0)));
  for (double r : d.residuals) h.residual = std::max(h.residual, r);
  return h;
}

PicardOptions picard_options(const RunConfig& cfg, const Setup& st) {
  PicardOptions opt;
  opt.tol = cfg.tol;
  opt.max_iter = cfg.max_iter;
  opt.params = st.params;
  return opt;
}

/// Default terminal data: epsilon e_1 with epsilon from the halving search.
Eigen::VectorXd default_a(const RunConfig& cfg, const Setup& st, const LinearSolver& solver,
                          Json& log) {
  const int I = st.data->index();
  if (I == 0) return Eigen::VectorXd(0);
  const EpsilonSearch es =
      find_epsilon(solver, Eigen::VectorXd::Unit(I, 0), cfg.epsilon0, picard_options(cfg, st));
  log["epsilon"] = es.epsilon;
  log["halvings"] = es.halvings;
  log["search"] = es.log;
  if (es.epsilon == 0.0) throw BallExitError("no admissible epsilon below " +
                                             std::to_string(cfg.epsilon0));
  return es.epsilon * Eigen::VectorXd::Unit(I, 0);
}

struct FlowDiagnostics {
  double residual = 0.0;
  double residual_bound = 0.0;
  DecayFit decay;
  double mu = 0.0;
  double terminal = 0.0;
};

FlowDiagnostics diagnose(const Setup& st, const AncientFlow& flow) {
  const Grid& g = st.grid();
  FlowDiagnostics d;
  d.residual = mcf_residual(g, flow.u).sup;
  const double dt = st.time.dt();
  d.residual_bound = 10.0 * (dt * dt + g.h * g.h);
  d.decay = decay_rate(*st.data, flow);
  d.mu = mu_estimate(*st.data, flow, st.params);
  if (st.data->index() > 0) {
    const Eigen::VectorXd c = negative_coefficients(*st.data, flow.u.values.col(st.time.M()));
    d.terminal = (c - flow.a).cwiseAbs().maxCoeff();
  }
  return d;
}

Json flow_json(const AncientFlow& flow, const FlowDiagnostics& d) {
  Json j;
  j["a"] = to_std(flow.a);
  j["converged"] = flow.converged;
  j["iterations"] = flow.iterations;
  j["star_norm_history"] = flow.history;
  j["contraction"] = flow.contraction;
  j["tail_bound"] = flow.tail_bound;
  j["mcf_residual"] = d.residual;
  j["mcf_residual_bound"] = d.residual_bound;
  j["decay_slope"] = finite_or_null(d.decay.slope);
  j["decay_expected"] = d.decay.expected;
  j["decay_underflow"] = d.decay.underflow;
  j["mu_estimate"] = d.mu;
  j["terminal_projection_error"] = d.terminal;
  return j;
}

double sup_abs(const Eigen::MatrixXd& u) { return u.size() ? u.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Setup prepare(RunConfig& cfg) {
  cfg.validate();
  const Hypersurface surf =
      Hypersurface::make(surface_kind_from_string(cfg.surface), cfg.n, 1.25 * cfg.S);
  Grid grid = build_grid(surf, cfg.S, cfg.Ns, cfg.K);
  if (cfg.K == 0) grid.K = cfg.K = choose_K(grid);

  Setup st;
  st.data = std::make_unique<SpectralData>(negative_spectrum(grid));
  const SpectralData& d = *st.data;
  const int I = d.index();
  // Without negative directions the rates key off the bottom of the spectrum.
  const double rate = I > 0 ? -d.lambdas.back() : d.lambda_min_nonneg();
  if (std::isnan(cfg.beta)) cfg.beta = cfg.n + 0.5;
  if (std::isnan(cfg.delta0)) cfg.delta0 = 0.5 * rate;
  if (std::isnan(cfg.T)) cfg.T = 12.0 / rate;
  st.params = WeightParams{cfg.beta, cfg.alpha, cfg.delta0};
  st.params.validate(cfg.n, I > 0 ? d.lambdas.back() : 0.0, I);
  st.time = TimeGrid(cfg.T, cfg.M);
  return st;
}

Json checkpoint_json(const PicardState& state, const Eigen::VectorXd& a) {
  Json j;
  j["a"] = to_std(a);
  j["iteration"] = state.iteration;
  j["rows"] = state.u.rows();
  j["cols"] = state.u.cols();
  j["u"] = std::vector<double>(state.u.data(), state.u.data() + state.u.size());
  j["history"] = state.history;
  return j;
}

PicardState checkpoint_from_json(const Json& j, const Eigen::VectorXd& a) {
  const auto saved = j.at("a").get<std::vector<double>>();
  if (saved != to_std(a)) throw ConfigError("checkpoint was written for different terminal data");
  PicardState s;
  s.iteration = j.at("iteration").get<int>();
  const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
  const auto u = j.at("u").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(u.size()) != rows * cols)
    throw ConfigError("checkpoint iterate has the wrong size");
  s.u = Eigen::Map<const Eigen::MatrixXd>(u.data(), rows, cols);
  s.history = j.at("history").get<std::vector<double>>();
  return s;
}

int cmd_index(RunConfig cfg) {
  const auto t0 = Clock::now();
  Setup st = prepare(cfg);
  const SpectralData& d = *st.data;
  Report rep("index", cfg);
  rep.timing("spectrum", since(t0));

  const auto t1 = Clock::now();
  const IndexLadder ladder = morse_index(st.grid(), {0.5 * cfg.S, 0.75 * cfg.S, cfg.S});
  rep.timing("ladder", since(t1));

  Json& r = rep.results();
  r["spectrum"] = spectrum_json(d);
  Json lj;
  lj["S"] = ladder.S;
  lj["Ns"] = ladder.Ns;
  lj["index"] = ladder.index;
  Json l1 = Json::array();
  for (double v : ladder.lambda1) l1.push_back(finite_or_null(v));
  lj["lambda1"] = l1;
  r["ladder"] = lj;
  r["index"] = d.index();

  rep.check("index_monotone_in_S", ladder.monotone, "index nondecreasing along the ladder");
  rep.check("index_matches_ladder_top", ladder.final_index() == d.index(),
            "ladder top reproduces the run");
  double res = 0.0;
  for (double v : d.residuals) res = std::max(res, v);
  rep.check("eigen_residual", res, "<", cfg.verify.eigen_residual);

  const std::filesystem::path out(cfg.out);
  for (int i = 0; i < d.index(); ++i)
    write_atomic(out / ("phi_" + std::to_string(i + 1) + ".csv"), eigenfunction_csv(d, i));
  if (cfg.dump) dump_operators(st.grid(), out);
  rep.timing("total", since(t0));
  rep.write(out);

  std::cout << "index " << d.index();
  if (d.index() > 0) std::cout << "  lambda_1 " << std::setprecision(10) << d.lambdas.front();
  std::cout << '\n';
  print_checks(rep);
  return rep.all_pass() ? exit_ok : exit_verify_failed;
}

int cmd_spectrum(RunConfig cfg) {
  const auto t0 = Clock::now();
  Setup st = prepare(cfg);
  const SpectralData& d = *st.data;
  const Grid& g = st.grid();
  Report rep("spectrum", cfg);

  Json& r = rep.results();
  r["spectrum"] = spectrum_json(d);
  Json modes = Json::array();
  for (const auto& ms : d.modes) {
    Json m;
    m["k"] = ms.k;
    m["multiplicity"] = ms.multiplicity;
    m["lowest"] = to_std(ms.values.head(std::min(5, ms.dim())));
    modes.push_back(m);
  }
  r["modes"] = modes;

  const Hygiene h = spectral_hygiene(d);
  r["hygiene_count"] = h.count;
  rep.check("orthonormality", h.orthonormality, "<", cfg.verify.orthonormality);
  rep.check("eigen_residual", h.residual, "<", cfg.verify.eigen_residual);

  const std::filesystem::path out(cfg.out);
  std::ostringstream os;
  os.precision(17);
  os << "s";
  for (int i = 0; i < h.count; ++i) os << ",phi" << i + 1;
  os << '\n';
  std::vector<Eigen::VectorXd> f;
  for (int i = 0; i < h.count; ++i)
    f.push_back(d.from_coefficients(Eigen::VectorXd::Unit(d.mode0().dim(), i)));
  for (int j = 0; j < g.Ns; ++j) {
    os << g.s[j];
    for (const auto& v : f) os << ',' << v[j];
    os << '\n';
  }
  write_atomic(out / "mode0_eigenfunctions.csv", os.str());
  for (int i = 0; i < d.index(); ++i)
    write_atomic(out / ("phi_" + std::to_string(i + 1) + ".csv"), eigenfunction_csv(d, i));
  if (cfg.dump) dump_operators(g, out);
  rep.timing("total", since(t0));
  rep.write(out);
  print_checks(rep);
  return rep.all_pass() ? exit_ok : exit_verify_failed;
}

int cmd_construct(RunConfig cfg) {
  const auto t0 = Clock::now();
  Setup st = prepare(cfg);
  const SpectralData& d = *st.data;
  const LinearSolver solver(d, st.time);
  const std::filesystem::path out(cfg.out);

  Json search;
  Eigen::VectorXd a;
  if (!cfg.a.empty()) {
    a = to_eigen(cfg.a);
    if (a.size() != d.index())
      throw ConfigError("--a has " + std::to_string(a.size()) + " entries but the index is " +
                        std::to_string(d.index()));
  } else {
    a = default_a(cfg, st, solver, search);
    cfg.a = to_std(a);
  }
  Report rep("construct", cfg);
  if (!search.empty()) rep.results()["epsilon_search"] = search;

  std::optional<PicardState> resume;
  if (!cfg.resume.empty()) {
    std::ifstream is(cfg.resume);
    if (!is) throw ConfigError("cannot read checkpoint " + cfg.resume);
    Json j;
    try {
      j = Json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed checkpoint: ") + e.what());
    }
    resume = checkpoint_from_json(j, a);
  }
  const auto checkpoint = [&](const PicardState& s) {
    write_atomic(out / "checkpoint.json", checkpoint_json(s, a).dump() + "\n");
  };

  const auto t1 = Clock::now();
  const AncientFlow flow =
      construct_ancient_flow(solver, a, picard_options(cfg, st), resume, checkpoint);
  rep.timing("picard", since(t1));

  const FlowDiagnostics diag = diagnose(st, flow);
  rep.results()["flow"] = flow_json(flow, diag);
  // Weighted sups run over the truncated time grid only.
  rep.results()["norm_time_window"] = {-cfg.T, 0.0};
  rep.check("picard_converged", flow.converged,
            std::to_string(flow.iterations) + " iterations");
  rep.check("contraction", flow.contraction, "<", cfg.verify.contraction);
  rep.check("mcf_residual", diag.residual, "<", diag.residual_bound);
  if (d.index() > 0) {
    rep.check("terminal_projection", diag.terminal, "<", 1e-8);
    if (!diag.decay.underflow)
      rep.check("decay_slope",
                std::abs(diag.decay.slope - diag.decay.expected) / diag.decay.expected, "<",
                cfg.verify.decay_slope);
  }

  write_atomic(out / "flow.csv", flow_csv(st.grid(), flow.u));
  write_atomic(out / "norm_trace.csv", norm_trace_csv(st.grid(), flow.u, st.params));
  write_atomic(out / "diagnostics.json", rep.results().dump(2) + "\n");
  if (cfg.dump) dump_operators(st.grid(), out);
  rep.timing("total", since(t0));
  rep.write(out);
  print_checks(rep);

  if (!flow.converged) {
    std::cerr << "no convergence after " << flow.iterations << " iterations; history:";
    for (double v : flow.history) std::cerr << ' ' << v;
    std::cerr << '\n';
    return exit_no_convergence;
  }
  return rep.all_pass() ? exit_ok : exit_verify_failed;
}

int cmd_verify(RunConfig cfg) {
  const auto t0 = Clock::now();
  Setup st = prepare(cfg);
  const SpectralData& d = *st.data;
  const Grid& g = st.grid();
  const VerifyTolerances& v = cfg.verify;
  const WeightParams& p = st.params;
  const int I = d.index();
  Report rep("verify", cfg);
  Json& r = rep.results();
  r["index"] = I;
  r["lambdas"] = d.lambdas;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  // Spectral hygiene and projector.
  auto t1 = Clock::now();
  const Hygiene h = spectral_hygiene(d);
  rep.check("orthonormality", h.orthonormality, "<", v.orthonormality);
  rep.check("eigen_residual", h.residual, "<", v.eigen_residual);
  {
    const ModeSpectrum& m0 = d.mode0();
    const double mu = m0.values[std::min(5, m0.dim() - 1)];
    double idem = 0.0, adj = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXd f = random_profile(g, rng), k = random_profile(g, rng);
      const Eigen::VectorXd Pf = project_below(d, f, mu), Pk = project_below(d, k, mu);
      const double nf = l2_norm(g, f), nk = l2_norm(g, k);
      idem = std::max(idem, l2_norm(g, project_below(d, Pf, mu) - Pf) / nf);
      adj = std::max(adj, std::abs(l2_inner(g, Pf, k) - l2_inner(g, f, Pk)) / (nf * nk));
    }
    rep.check("projector_idempotent", idem, "<", v.projector);
    rep.check("projector_self_adjoint", adj, "<", v.projector);
  }
  rep.timing("spectral", since(t1));

  // Semigroup and heat kernel.
  t1 = Clock::now();
  const Semigroup sg(d);
  {
    std::uniform_real_distribution<double> tdist(0.1, 2.0);
    double law = 0.0;
    for (int i = 0; i < v.random_fields; ++i) {
      const Eigen::VectorXd f = random_profile(g, rng);
      const double s1 = tdist(rng), s2 = tdist(rng);
      const Eigen::VectorXd lhs = sg.apply(sg.apply(f, s1), s2), rhs = sg.apply(f, s1 + s2);
      law = std::max(law, l2_norm(g, lhs - rhs) / l2_norm(g, rhs));
    }
    rep.check("semigroup_law", law, "<", v.semigroup);

    const int lo = g.first_active(0), hi = g.last_active();
    std::uniform_int_distribution<int> node(lo, hi);
    std::uniform_real_distribution<double> tk(0.5, 8.0);
    double asym = 0.0;
    for (int i = 0; i < 50; ++i) {
      const int x = node(rng), y = node(rng);
      const double t = tk(rng);
      asym = std::max(asym, std::abs(sg.kernel(x, y, t) - sg.kernel(y, x, t)));
    }
    rep.check("kernel_symmetry", asym, "<=", 0.0);

    const KernelBoundReport kb = verify_kernel_bound(sg, 0.5 * p.delta0, v.kernel_samples, cfg.seed);
    Json kj;
    kj["delta"] = kb.delta;
    kj["c"] = kb.c;
    kj["C"] = finite_or_null(kb.C);
    kj["diagonal_neck"] = kb.diagonal_neck;
    kj["growth_t"] = kb.growth_t;
    kj["growth"] = kb.growth;
    kj["gaussian_slope"] = kb.gaussian_slope;
    kj["samples"] = kb.samples.size();
    r["kernel_bound"] = kj;
    std::ostringstream os;
    os << "C = " << kb.C << ", c1 = c2 = " << kb.c;
    rep.check("kernel_bound", kb.pass, os.str());
    rep.check("kernel_bound_shape", kb.subchecks, "diagonal finite, growth damped, Gaussian decay");
  }
  rep.timing("semigroup", since(t1));

  // Linear solver.
  t1 = Clock::now();
  const LinearSolver solver(d, st.time);
  auto random_a = [&] {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(I);
    for (int j = 0; j < I; ++j)
      if (d.mode_of[j] == 0) a[j] = 0.05 * unit(rng);
    return a;
  };
  {
    const Eigen::VectorXd a = random_a();
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(g.Ns, st.time.size());
    const SpaceTimeField u = solver.solve(zero, a);
    const SpaceTimeField iota = iota_field(d, a, st.time);
    rep.check("homogeneous_is_iota", sup_abs(u.values - iota.values), "<", v.uniqueness);

    double l2r = 0.0, wr = 0.0, schauder = 0.0, uniq = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Eigen::MatrixXd src = random_source(g, st.time, p.delta0, rng);
      const Eigen::VectorXd ai = random_a();
      const SpaceTimeField ui = solver.solve(src, ai);
      const SpaceTimeField ur = solver.solve(src, ai, true);
      uniq = std::max(uniq, sup_abs(ui.values - ur.values) / sup_abs(ui.values));
      l2r = std::max(l2r, l2_decay_check(d, ui, src, ai, p).ratio);
      wr = std::max(wr, weighted_decay_check(d, ui, src, ai, p).ratio);
      double past = 0.0;
      for (int m = 0; m < st.time.size(); ++m) {
        const Eigen::VectorXd um = ui.values.col(m), hm = src.col(m);
        past = std::max(past, weighted_c0(g, um, p.beta) +
                                  holder_norm(g, hm, 0, p.alpha, p.beta + 2.0));
        if (past > 0.0)
          schauder = std::max(schauder, holder_norm(g, um, 2, p.alpha, p.beta) / past);
      }
    }
    r["l2_decay_ratio"] = finite_or_null(l2r);
    r["weighted_decay_ratio"] = finite_or_null(wr);
    r["schauder_ratio"] = finite_or_null(schauder);
    rep.check("l2_decay_ratio", l2r, "finite", 0.0);
    rep.check("weighted_decay_ratio", wr, "finite", 0.0);
    rep.check("schauder_ratio", schauder, "finite", 0.0);
    rep.check("linear_uniqueness", uniq, "<", v.uniqueness);
  }
  rep.timing("linear", since(t1));

  // Nonlinear error.
  t1 = Clock::now();
  rep.check("error_at_zero", sup_abs(nonlinear_error(g, Eigen::VectorXd::Zero(g.Ns))), "<",
            1e-12);
  if (I == 0) {
    r["nonlinear"] = "skipped: index 0";
    rep.timing("nonlinear", since(t1));
    rep.timing("total", since(t0));
    rep.write(cfg.out);
    print_checks(rep);
    return rep.all_pass() ? exit_ok : exit_verify_failed;
  }
  {
    const Eigen::VectorXd phi = d.phi(0);
    std::vector<double> q;
    for (double eps : {1e-2, 5e-3, 2.5e-3})
      q.push_back(sup_abs(nonlinear_error(g, Eigen::VectorXd(eps * phi))) / (eps * eps));
    const auto [qmin, qmax] = std::minmax_element(q.begin(), q.end());
    r["quadratic_ratios"] = q;
    rep.check("quadratic_drift", (*qmax - *qmin) / *qmin, "<", v.quadratic_drift);

    double lip = 0.0;
    for (int i = 0; i < v.lipschitz_pairs; ++i) {
      Eigen::VectorXd u = random_profile(g, rng), w = random_profile(g, rng);
      u *= 0.02 / sup_abs(u);
      w *= 0.005 / sup_abs(w);
      const Eigen::VectorXd ub = u + w;
      const double num =
          holder_norm(g, nonlinear_error(g, ub) - nonlinear_error(g, u), 0, p.alpha, p.beta + 2);
      const double den = (holder_norm(g, u, 2, p.alpha, p.beta) +
                          holder_norm(g, ub, 2, p.alpha, p.beta)) *
                         holder_norm(g, w, 2, p.alpha, p.beta);
      lip = std::max(lip, num / den);
    }
    r["lipschitz_ratio"] = finite_or_null(lip);
    rep.check("lipschitz_ratio", lip, "finite", 0.0);
  }
  rep.timing("nonlinear", since(t1));

  // Ancient flows.
  t1 = Clock::now();
  {
    Json search;
    const Eigen::VectorXd a = default_a(cfg, st, solver, search);
    r["epsilon_search"] = search;
    const PicardOptions opt = picard_options(cfg, st);
    Json flows = Json::array();
    std::vector<double> mus;
    std::vector<AncientFlow> family;
    for (double f : {1.0, 0.5, 0.25}) {
      AncientFlow flow = construct_ancient_flow(solver, f * a, opt);
      const FlowDiagnostics diag = diagnose(st, flow);
      flows.push_back(flow_json(flow, diag));
      const std::string tag = "_a" + std::to_string(static_cast<int>(1.0 / f));
      rep.check("picard_converged" + tag, flow.converged,
                std::to_string(flow.iterations) + " iterations");
      rep.check("contraction" + tag, flow.contraction, "<", v.contraction);
      rep.check("terminal_projection" + tag, diag.terminal, "<", 1e-8);
      rep.check("mcf_residual" + tag, diag.residual, "<", diag.residual_bound);
      if (f == 1.0 && !diag.decay.underflow)
        rep.check("decay_slope",
                  std::abs(diag.decay.slope - diag.decay.expected) / diag.decay.expected, "<",
                  v.decay_slope);
      mus.push_back(diag.mu);
      family.push_back(std::move(flow));
    }
    r["flows"] = flows;
    r["norm_time_window"] = {-cfg.T, 0.0};
    const auto [mmin, mmax] = std::minmax_element(mus.begin(), mus.end());
    rep.check("mu_spread", (*mmax - *mmin) / *mmin, "<", v.mu_spread);

    const AncientFlow rev = [&] {
      PicardOptions o = opt;
      o.reverse = true;
      return construct_ancient_flow(solver, a, o);
    }();
    rep.check("uniqueness_reordered",
              sup_abs(rev.u.values - family[0].u.values) / sup_abs(family[0].u.values), "<",
              v.uniqueness);

    // a and -a: distinct flows whose even part is quadratic in |a|.
    std::vector<double> even, odd;
    for (int i = 0; i < 2; ++i) {
      const AncientFlow& plus = family[i];
      const AncientFlow minus = construct_ancient_flow(solver, -plus.a, opt);
      const double na = plus.a.norm();
      even.push_back(sup_abs(plus.u.values + minus.u.values) / (na * na));
      odd.push_back(sup_abs(plus.u.values) / na);
    }
    r["family_even_over_a2"] = even;
    r["family_u_over_a"] = odd;
    rep.check("family_even_part_quadratic", std::abs(even[1] / even[0] - 1.0), "<", 0.5);
    rep.check("family_nondegenerate", std::min(odd[0], odd[1]), ">", 0.0);
  }
  rep.timing("flows", since(t1));
  rep.timing("total", since(t0));
  rep.write(cfg.out);
  print_checks(rep);
  return rep.all_pass() ? exit_ok : exit_verify_failed;
}

int cmd_sweep(RunConfig cfg) {
  const auto t0 = Clock::now();
  const auto grid_a = parse_agrid(cfg.agrid);
  if (grid_a.empty()) throw ConfigError("sweep needs a nonempty --agrid");
  Setup st = prepare(cfg);
  const SpectralData& d = *st.data;
  const LinearSolver solver(d, st.time);
  const PicardOptions opt = picard_options(cfg, st);
  Report rep("sweep", cfg);

  Json rows = Json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "row,a_norm,converged,iterations,contraction,mu,decay_slope,mcf_residual,error\n";
  std::vector<double> mus;
  for (std::size_t i = 0; i < grid_a.size(); ++i) {
    Json row;
    row["a"] = grid_a[i];
    const Eigen::VectorXd a = to_eigen(grid_a[i]);
    std::string error;
    try {
      if (a.size() != d.index())
        throw ConfigError("entry has " + std::to_string(a.size()) + " components, index is " +
                          std::to_string(d.index()));
      const AncientFlow flow = construct_ancient_flow(solver, a, opt);
      const FlowDiagnostics diag = diagnose(st, flow);
      row["flow"] = flow_json(flow, diag);
      if (flow.converged && a.norm() > 0.0) mus.push_back(diag.mu);
      csv << i << ',' << a.norm() << ',' << flow.converged << ',' << flow.iterations << ','
          << flow.contraction << ',' << diag.mu << ',' << diag.decay.slope << ','
          << diag.residual << ",\n";
    } catch (const Error& e) {
      error = e.what();
      csv << i << ',' << a.norm() << ",0,,,,,," << '"' << error << "\"\n";
    }
    if (!error.empty()) row["error"] = error;
    rows.push_back(row);
  }
  rep.results()["rows"] = rows;
  if (mus.size() >= 2) {
    const auto [mmin, mmax] = std::minmax_element(mus.begin(), mus.end());
    rep.check("mu_spread", (*mmax - *mmin) / *mmin, "<", cfg.verify.mu_spread);
  }
  const std::filesystem::path out(cfg.out);
  write_atomic(out / "sweep.csv", csv.str());
  rep.timing("total", since(t0));
  rep.write(out);
  print_checks(rep);
  return exit_ok;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Ancient mean curvature flows out of unstable minimal hypersurfaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> surface, out, a, agrid, resume;
  std::optional<int> n, Ns, K, M, max_iter;
  std::optional<double> S, beta, alpha, delta0, T, tol, epsilon0;
  std::optional<std::uint64_t> seed;
  bool dump = false;

  app.add_option("--config", config_path, "sectioned key = value file");
  app.add_option("--surface", surface, "plane | catenoid | ncatenoid");
  app.add_option("--n", n, "dimension of the hypersurface");
  app.add_option("--S", S, "profile truncation |s| <= S");
  app.add_option("--Ns", Ns, "profile nodes");
  app.add_option("--K", K, "highest angular mode (0 picks it)");
  app.add_option("--beta", beta, "spatial weight exponent");
  app.add_option("--alpha", alpha, "Hoelder exponent");
  app.add_option("--delta0", delta0, "time weight rate");
  app.add_option("--T", T, "time horizon");
  app.add_option("--M", M, "time steps");
  app.add_option("--a", a, "terminal data, comma separated");
  app.add_option("--agrid", agrid, "sweep grid: a-vectors separated by ';'");
  app.add_option("--tol", tol, "Picard tolerance in the star norm");
  app.add_option("--max-iter", max_iter, "Picard iteration cap");
  app.add_option("--epsilon0", epsilon0, "start of the epsilon search");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed of the random batteries");
  app.add_option("--resume", resume, "checkpoint.json to resume from");
  app.add_flag("--dump", dump, "write grid and operator CSVs");

  const char* names[] = {"index", "spectrum", "construct", "verify", "sweep"};
  const char* help[] = {"Morse index ladder", "eigenpairs and eigenfunction CSVs",
                        "ancient flow for terminal data a", "invariant battery",
                        "family over an a-grid"};
  for (int i = 0; i < 5; ++i) app.add_subcommand(names[i], help[i])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (surface) cfg.surface = *surface;
    if (n) cfg.n = *n;
    if (S) cfg.S = *S;
    if (Ns) cfg.Ns = *Ns;
    if (K) cfg.K = *K;
    if (beta) cfg.beta = *beta;
    if (alpha) cfg.alpha = *alpha;
    if (delta0) cfg.delta0 = *delta0;
    if (T) cfg.T = *T;
    if (M) cfg.M = *M;
    if (a) cfg.a = parse_csv(*a);
    if (agrid) cfg.agrid = *agrid;
    if (tol) cfg.tol = *tol;
    if (max_iter) cfg.max_iter = *max_iter;
    if (epsilon0) cfg.epsilon0 = *epsilon0;
    if (out) cfg.out = *out;
    if (seed) cfg.seed = *seed;
    if (resume) cfg.resume = *resume;
    if (dump) cfg.dump = true;

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "index") return cmd_index(cfg);
    if (cmd == "spectrum") return cmd_spectrum(cfg);
    if (cmd == "construct") return cmd_construct(cfg);
    if (cmd == "verify") return cmd_verify(cfg);
    return cmd_sweep(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return exit_config;
  } catch (const KTooSmallError& e) {
    std::cerr << "K too small: " << e.what() << '\n';
    return exit_config;
  } catch (const BallExitError& e) {
    std::cerr << "left the ball: " << e.what() << '\n';
    return exit_no_convergence;
  } catch (const GraphDegenerateError& e) {
    std::cerr << "graph degenerate: " << e.what() << '\n';
    return exit_no_convergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_verify_failed;
  }
}

}  // namespace ancient
