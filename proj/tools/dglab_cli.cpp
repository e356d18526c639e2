#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

#include "dglab/bump.hpp"
#include "dglab/config.hpp"
#include "dglab/covariance.hpp"
#include "dglab/geometry.hpp"
#include "dglab/inequalities.hpp"
#include "dglab/mc.hpp"
#include "dglab/potential.hpp"
#include "dglab/report.hpp"
#include "dglab/rgflow.hpp"
#include "dglab/validation.hpp"

using namespace dglab;

namespace {

enum Exit { kPass = 0, kUsage = 1, kDivergence = 2, kInternal = 3 };

struct Flags {
  std::string config;
  std::string emit = "json";
  std::optional<std::uint64_t> seed;
  std::string out;
};

RunConfig resolve(const Flags& f, bool require_file) {
  if (f.config.empty() && require_file) throw Error(ErrorKind::InvalidInput, "--config is required for this command");
  RunConfig c = f.config.empty() ? config_from_json(Json::object()) : load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (!f.out.empty()) c.out_dir = f.out;
  if (!c.covariance_file.empty()) read_checked_json(c.covariance_file);  // surfaces checksum failures
  return c;
}

void emit(const Flags& f, const RunConfig& c, const std::string& kind, const Json& payload, const Table& table) {
  Json cfg = to_json(c);
  if (f.emit == "csv")
    write_text(c.out_dir, kind + ".csv", render_csv(cfg, table));
  else
    write_text(c.out_dir, kind + ".json", render_json(kind, cfg, payload));
}

FiniteRangeDecomposition make_frd(const RunConfig& c, double s, double m2) {
  FrdOptions o;
  o.cell_width = c.cell_width;
  o.series_tol = c.series_tol;
  return FiniteRangeDecomposition(default_profile(), make_distribution(c), s, m2, o);
}

int cmd_validate(const Flags& f) {
  RunConfig c = resolve(f, false);
  ValidationOptions o;
  o.criteria = c.criteria;
  o.quick = c.quick;
  o.seed = c.seed;
  o.on_result = [](const CriterionResult& r) { std::printf("%s\n", format_line(r).c_str()); std::fflush(stdout); };
  auto res = run_validation(o);
  Table t{{"id", "name", "pass", "soft", "summary"}, {}};
  for (const auto& r : res) t.rows.push_back({r.id, r.name, r.pass, r.soft, "\"" + r.summary + "\""});
  emit(f, c, "validate", results_json(res), t);
  return suite_passed(res) ? kPass : kDivergence;
}

int cmd_frd_report(const Flags& f) {
  RunConfig c = resolve(f, true);
  const double s = require_s(c);
  FiniteRangeDecomposition F = make_frd(c, s, c.m2);
  if (c.zero_mode) zero_mode(F, c.L, c.N);  // throws for m2 = 0
  TorusDecomposition d = torus_decomposition(F, c.L, c.N);
  const StepDistribution& J = F.J();
  Json ranges = Json::array(), asym = Json::array();
  bool range_ok = true;
  for (std::size_t j = 0; j < d.scales.size(); ++j) {
    double radius = scale_bound(c.L, double(j + 1));
    Eigen::MatrixXd pos = position_from_hat(d.scales[j]);
    double g0 = pos(0, 0), out = 0.0;
    for (long a = 0; a < d.R; ++a)
      for (long b = 0; b < d.R; ++b) {
        long x = std::min(a, d.R - a), y = std::min(b, d.R - b);
        if (std::max(x, y) >= radius) out = std::max(out, std::abs(pos(a, b)));
      }
    bool checkable = 2.0 * radius < double(d.R);
    bool ok = !checkable || g0 == 0.0 || out < c.range_tol * g0;
    range_ok = range_ok && ok;
    ranges.push_back({{"j", j}, {"radius", radius}, {"gamma00", g0}, {"max_outside", out}, {"checked", checkable}, {"ok", ok}});
    if (j >= 1) asym.push_back({{"j", j}, {"ratio", 2.0 * kPi * (J.v2 + s) * g0 / std::log(double(c.L))}});
  }
  Json payload = {{"J", J.name},
                  {"theta_J", J.theta},
                  {"v2", J.v2},
                  {"R", d.R},
                  {"max_rel_residual", d.max_rel_residual},
                  {"residual_ok", d.max_rel_residual < c.residual_tol},
                  {"min_hat", d.min_hat},
                  {"ranges", ranges},
                  {"asymptotics", asym}};
  if (d.has_zero_mode) payload["zero_mode"] = {{"t_N", d.zero.t_N}, {"t_N_trapezoid", d.zero.t_N_trapezoid}, {"t_N_grid", d.zero.t_N_grid}};
  Table t{{"p1", "p2", "j", "gamma_hat"}, {}};
  if (f.emit == "csv")
    for (long a = 0; a < d.R; ++a)
      for (long b = 0; b < d.R; ++b)
        for (std::size_t j = 0; j <= d.scales.size(); ++j) {
          double v = j < d.scales.size() ? d.scales[j](a, b) : d.last(a, b);
          t.rows.push_back({2.0 * kPi * double(a) / double(d.R), 2.0 * kPi * double(b) / double(d.R), int(j), v});
        }
  emit(f, c, "frd-report", payload, t);
  std::printf("frd-report: R = %ld, max relative residual %.3e, range %s\n", d.R, d.max_rel_residual, range_ok ? "ok" : "VIOLATED");
  return d.max_rel_residual < c.residual_tol && range_ok ? kPass : kDivergence;
}

int cmd_flow(const Flags& f) {
  RunConfig c = resolve(f, true);
  const double beta = require_beta(c), s = require_s(c);
  FiniteRangeDecomposition F = make_frd(c, s, 0.0);
  std::vector<GammaData> gam = flow_gamma_table(F, c.L, c.flow_scales + 1, s == 0.0 ? 1000 : 3);
  const double g = default_profile()->gamma();
  PotentialCoefficients z = tilde_z_coefficients(beta, g, c.q_max, 1 << 14, c.gamma_beta_threshold);
  if (z.below_threshold) std::fprintf(stderr, "warning: gamma beta = %.3g below threshold %.3g\n", g * beta, c.gamma_beta_threshold);
  CouplingState u;
  u.s = s;
  u.z = z.z_tilde;
  FlowParams p;
  p.beta = beta;
  p.L = c.L;
  p.r = c.r;
  p.delta = c.delta;
  p.c_h = c.c_h;
  p.C_loc = c.c_loc;
  p.c_f = z.c_f;
  FlowResult r = run_flow(u, F.J(), gam, p);
  Json traj = Json::array();
  Table t{{"j", "norm", "E", "s", "gamma0", "factor", "alpha_loc"}, {}};
  for (int q = 1; q <= c.q_max; ++q) t.header.push_back("z" + std::to_string(q));
  for (std::size_t j = 0; j < r.trajectory.size(); ++j) {
    const CouplingState& st = r.trajectory[j];
    double norm = st.norm(p.c_f, beta);
    Json row = {{"j", st.j}, {"norm", norm}, {"E", st.E}, {"s", st.s}, {"z", st.z}};
    std::vector<Json> cells{st.j, norm, st.E, st.s};
    if (j < r.scales.size()) {
      row["gamma0"] = r.scales[j].gamma.g0;
      row["factor"] = r.scales[j].factor;
      row["alpha_loc"] = r.scales[j].alpha_loc;
      cells.insert(cells.end(), {r.scales[j].gamma.g0, r.scales[j].factor, r.scales[j].alpha_loc});
    } else {
      cells.insert(cells.end(), {nullptr, nullptr, nullptr});
    }
    for (double v : st.z) cells.push_back(v);
    traj.push_back(row);
    t.rows.push_back(cells);
  }
  Json payload = {{"beta", beta},       {"beta_free", r.beta_free},         {"beta_eff", r.beta_eff},
                  {"j0", r.j0},         {"contracting", r.contracting},     {"alpha", r.alpha},
                  {"diverged", r.diverged}, {"divergence_scale", r.divergence_scale}, {"trajectory", traj}};
  emit(f, c, "flow", payload, t);
  if (r.diverged) {
    std::printf("flow: divergence at scale %d\n", r.divergence_scale);
    return kDivergence;
  }
  std::printf("flow: j0 = %d, contracting = %d, alpha = %.4f\n", r.j0, int(r.contracting), r.alpha);
  return r.contracting ? kPass : kDivergence;
}

int cmd_mc(const Flags& f) {
  RunConfig c = resolve(f, true);
  const double beta = require_beta(c);
  TorusGeometry g(c.L, c.N);
  if (g.side() > 256) throw Error(ErrorKind::InvalidInput, "mc lattice side L^N must be <= 256");
  DGModel m{int(g.side()), int(g.side()), make_distribution(c), beta, c.m2, c.m2 == 0.0};
  Field fN = f_N_field(TestFunction{{1, 0, 1.0, 0.0}}, g);
  ChainOptions o;
  o.sweeps = c.sweeps;
  o.burn_in = c.burn_in;
  o.chains = c.chains;
  o.window_sd = c.window_sd;
  o.seed = c.seed;
  const double sb = std::sqrt(beta);
  const int n = m.sites();
  std::vector<std::pair<std::string, Observable>> obs{
      {"sigma0", [&](const SpinConfig& s) { return sb * s.value(0); }},
      {"sigma0^2", [&](const SpinConfig& s) { return beta * s.value(0) * s.value(0); }},
      {"mean_square_step", [&](const SpinConfig& s) {
         double acc = 0.0;
         for (int x = 0; x < m.Lx; ++x)
           for (int y = 0; y < m.Ly; ++y) {
             double d = s.value(x + m.Lx * y) - s.value((x + 1) % m.Lx + m.Lx * y);
             acc += d * d;
           }
         return beta * acc / n;
       }}};
  std::vector<ChainStats> st = run_chains(m, obs, o);
  SmearedMoments sm = estimate_smeared_moments(m, fN, o);
  st.push_back(sm.X);
  st.push_back(sm.X2);
  Table t{{"observable", "mean", "stderr", "tau_int", "n_samples", "seed"}, {}};
  Json list = Json::array();
  for (const auto& s : st) {
    t.rows.push_back({s.name, s.mean, s.stderr_mean, s.tau_int, s.n_samples, c.seed});
    list.push_back({{"observable", s.name}, {"mean", s.mean}, {"variance", s.variance}, {"stderr", s.stderr_mean},
                    {"tau_int", s.tau_int}, {"n_samples", s.n_samples}, {"batches", s.batches}, {"seeds", s.seeds}});
  }
  Json payload = {{"side", g.side()},
                  {"pinned", m.pinned},
                  {"observables", list},
                  {"smeared", {{"variance", sm.variance}, {"baseline", sm.baseline}, {"ratio", sm.ratio},
                               {"effective_samples", sm.effective_samples}}}};
  emit(f, c, "mc", payload, t);
  std::printf("mc: Var(X) = %.5g, free baseline %.5g, ratio %.4f, effective samples %.0f\n", sm.variance, sm.baseline,
              sm.ratio, sm.effective_samples);
  return kPass;
}

int cmd_inequalities(const Flags& f) {
  RunConfig c = resolve(f, false);
  const int n = c.quick ? 100 : 1000, kmax = c.quick ? 8 : 12;
  InequalityFuzz fz = fuzz_inequalities({8, 16, 32}, n, n, c.seed);
  SetsizeReport ss = setsizes_margin(5, kmax, 0.0);
  const double g = default_profile()->gamma();
  double zworst = 0.0;
  for (double gb : {20.0, 30.0, 40.0}) {
    PotentialCoefficients z = tilde_z_coefficients(gb / g, g, c.q_max);
    for (int q = 1; q <= c.q_max; ++q) zworst = std::max(zworst, std::abs(z.z_tilde[q - 1]) / tilde_z_bound(gb, q));
  }
  bool ok = fz.trace_ok && fz.sobolev_ok && fz.quad_exp_ok && ss.margin_components >= 0.0 && ss.margin_large >= 0.0 &&
            zworst <= 1.0;
  Json payload = {{"trace", {{"ok", fz.trace_ok}, {"max_ratio", fz.trace_max_ratio}}},
                  {"sobolev", {{"ok", fz.sobolev_ok}, {"max_ratio", fz.sobolev_max_ratio}, {"C", fz.sobolev_C}}},
                  {"quad_exp", {{"ok", fz.quad_exp_ok}, {"max_ratio", fz.quad_exp_max_ratio}}},
                  {"setsizes", {{"max_blocks", kmax}, {"margin_components", ss.margin_components},
                                {"margin_large", ss.margin_large}, {"eta_sup", ss.eta_sup}}},
                  {"z_tilde_max_ratio", zworst}};
  Table t{{"check", "value", "ok"}, {}};
  t.rows.push_back({"trace_max_ratio", *std::max_element(fz.trace_max_ratio.begin(), fz.trace_max_ratio.end()), fz.trace_ok});
  t.rows.push_back({"sobolev_C", fz.sobolev_C, fz.sobolev_ok});
  t.rows.push_back({"quad_exp_max_ratio", fz.quad_exp_max_ratio, fz.quad_exp_ok});
  t.rows.push_back({"setsizes_margin_components", ss.margin_components, ss.margin_components >= 0.0});
  t.rows.push_back({"setsizes_margin_large", ss.margin_large, ss.margin_large >= 0.0});
  t.rows.push_back({"setsizes_eta_sup", ss.eta_sup, true});
  t.rows.push_back({"z_tilde_max_ratio", zworst, zworst <= 1.0});
  emit(f, c, "inequalities", payload, t);
  std::printf("inequalities: %s\n", ok ? "all hold" : "VIOLATED");
  return ok ? kPass : kDivergence;
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidParameter:
    case ErrorKind::InvalidInput:
    case ErrorKind::Checksum:
    case ErrorKind::ZeroModeDivergence:
    case ErrorKind::SeriesDivergence:
    case ErrorKind::SizeLimit:
    case ErrorKind::PreconditionViolation:
    case ErrorKind::DomainError:
      return kUsage;
    case ErrorKind::Subcritical:
    case ErrorKind::InsufficientSampling:
      return kDivergence;
    default:
      return kInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dglab: finite-range decomposition, RG flow and Monte Carlo for the discrete Gaussian model"};
  app.require_subcommand(1);
  Flags flags;
  std::uint64_t seed = 0;
  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON run configuration");
    sub->add_option("--emit", flags.emit, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "RNG seed override")->each([&](const std::string&) { flags.seed = seed; });
    sub->add_option("--out", flags.out, "output directory");
  };
  std::map<std::string, int (*)(const Flags&)> commands{{"validate", cmd_validate},
                                                         {"frd-report", cmd_frd_report},
                                                         {"flow", cmd_flow},
                                                         {"mc", cmd_mc},
                                                         {"inequalities", cmd_inequalities}};
  const std::map<std::string, std::string> help{{"validate", "run the acceptance suite"},
                                                {"frd-report", "decomposition residuals, ranges and asymptotics"},
                                                {"flow", "coupling-constant flow"},
                                                {"mc", "heat-bath Monte Carlo"},
                                                {"inequalities", "Sobolev/trace/determinant fuzz and small-set margins"}};
  for (const auto& [name, fn] : commands) add_flags(app.add_subcommand(name, help.at(name)));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    for (const auto& [name, fn] : commands)
      if (app.got_subcommand(name)) return fn(flags);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternal;
  }
  return kInternal;
}
