#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "g2flow/claim.hpp"
#include "g2flow/donaldson.hpp"
#include "g2flow/energy.hpp"
#include "g2flow/g2.hpp"
#include "g2flow/io.hpp"
#include "g2flow/monad.hpp"

using nlohmann::json;
using namespace g2flow;

namespace {

int run_algebra_selftest() {
  auto checks = algebra_selftest();
  bool all = true;
  std::printf("%-78s %s\n", "identity", "status");
  std::printf("%s\n", std::string(86, '-').c_str());
  for (const auto& c : checks) {
    std::printf("%-78s %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL");
    if (!c.note.empty()) std::printf("    %s\n", c.note.c_str());
    all = all && c.pass;
  }
  return all ? 0 : 1;
}

int run_flow(const std::string& config_path, const std::string& out_dir) {
  RunSetup setup = parse_config_file(config_path);
  const LatticeChart& g = setup.geom;
  HolomorphicTwist tw = build_twist(setup);
  EndoField h0 = setup.reference == "identity" ? EndoField::identity(g.nsites(), setup.rank)
                                               : make_reference_metric(g, tw, setup.rank);
  FlowTrace trace = flow_run(g, tw, h0, setup.flow);
  MonitorReport monitors = monitor_max_principles(g, trace, h0, setup.mono_c, setup.flow.det1);

  // energy upper bound relative to the reference curvature scale
  double f0sq = 0;
  {
    CurvatureField f0 = curvature(g, h0, tw);
    EndoField h0inv = field_inverse(g, h0);
    f0sq = l2_of_scalar(g, curvature_norm2_field(g, f0, h0, h0inv));
  }
  const double energy_tol = 1e-6 * f0sq;
  bool energy_ok = true;
  for (const auto& s : trace.samples) energy_ok = energy_ok && s.energy <= energy_tol;

  write_run_outputs(out_dir, setup, g, trace, monitors, energy_ok, energy_tol);

  if (trace.diverged) {
    std::fprintf(stderr, "flow diverged: %s\n", trace.abort_reason.c_str());
    return 1;
  }
  bool pass = monitors.pass() && energy_ok;
  for (const auto& v : monitors.violations) std::fprintf(stderr, "monitor: %s\n", v.c_str());
  if (!energy_ok)
    std::fprintf(stderr, "monitor: energy upper bound E(t) <= %g violated\n", energy_tol);
  std::printf("flow-run: %d steps, dt=%s, sup|F_hat|^2 = %s, %s\n", trace.steps,
              format_double(trace.dt).c_str(),
              format_double(trace.samples.back().sup_e).c_str(),
              trace.converged ? "converged" : "reached t_end");
  std::printf("outputs in %s (monitors %s)\n", out_dir.c_str(), pass ? "pass" : "FAIL");
  return pass ? 0 : 1;
}

int run_diag_nfunctional(const std::string& trace_dir, const std::string& out_path) {
  LoadedRun run = load_run(trace_dir);
  const LatticeChart& g = run.setup.geom;
  HolomorphicTwist tw = build_twist(run.setup);
  const double cn = donaldson_cn(g.ncomplex());
  if (run.trace.snapshots.size() < 3) {
    std::fprintf(stderr, "need at least 3 snapshots\n");
    return 1;
  }
  const EndoField& h0 = run.trace.snapshots.front();
  std::vector<double> nvals, fh2;
  for (std::size_t i = 0; i < run.trace.snapshots.size(); ++i) {
    QuadratureResult q = n_functional_geodesic(g, tw, h0, run.trace.snapshots[i]);
    nvals.push_back(q.value);
    CurvatureField f = curvature(g, run.trace.snapshots[i], tw);
    EndoField fhat = lambda_contract(f);
    fh2.push_back(l2_of_scalar(g, e_hat_field(fhat)));
  }
  std::ofstream csv(out_path.empty() ? trace_dir + "/n_functional.csv" : out_path);
  csv << "# t, N, dN_dt, minus_cn_fhat_l2sq\n";
  for (std::size_t i = 0; i < nvals.size(); ++i) {
    double dndt = 0;
    if (i > 0 && i + 1 < nvals.size())
      dndt = (nvals[i + 1] - nvals[i - 1]) /
             (run.trace.snapshot_times[i + 1] - run.trace.snapshot_times[i - 1]);
    else if (i + 1 < nvals.size())
      dndt = (nvals[i + 1] - nvals[i]) /
             (run.trace.snapshot_times[i + 1] - run.trace.snapshot_times[i]);
    else
      dndt = (nvals[i] - nvals[i - 1]) /
             (run.trace.snapshot_times[i] - run.trace.snapshot_times[i - 1]);
    csv << format_double(run.trace.snapshot_times[i]) << "," << format_double(nvals[i]) << ","
        << format_double(dndt) << "," << format_double(-cn * fh2[i]) << "\n";
  }
  std::printf("n-functional written (%zu samples)\n", nvals.size());
  return 0;
}

int run_diag_energy(const std::string& trace_dir, const std::string& out_path) {
  LoadedRun run = load_run(trace_dir);
  const LatticeChart& g = run.setup.geom;
  HolomorphicTwist tw = build_twist(run.setup);
  std::vector<double> es = energy_series(g, tw, run.trace.snapshots);
  std::ofstream csv(out_path.empty() ? trace_dir + "/energy.csv" : out_path);
  csv << "# t, E_t, YM, norm_plus2, norm_minus2, kappa, ym_split_residual, hodge_riemann_residual\n";
  bool ok = true;
  double f0sq = 0;
  for (std::size_t i = 0; i < run.trace.snapshots.size(); ++i) {
    CurvatureField f = curvature(g, run.trace.snapshots[i], tw);
    EnergyReport rep = chern_weil_lattice(g, f, run.trace.snapshots[i]);
    rep.energy = es[i];
    if (i == 0) f0sq = rep.ym;
    csv << format_double(run.trace.snapshot_times[i]) << "," << format_double(rep.energy) << ","
        << format_double(rep.ym) << "," << format_double(rep.norm_plus2) << ","
        << format_double(rep.norm_minus2) << "," << format_double(rep.kappa) << ","
        << format_double(rep.ym_split_residual) << ","
        << format_double(rep.hodge_riemann_residual) << "\n";
    if (rep.energy > 1e-6 * f0sq) ok = false;
    if (rep.ym_split_residual > 1e-8 || rep.hodge_riemann_residual > 1e-8) ok = false;
  }
  std::printf("energy report written (%zu samples), bounds %s\n", run.trace.snapshots.size(),
              ok ? "hold" : "VIOLATED");
  return ok ? 0 : 1;
}

int run_diag_claim(const std::string& trace_dir, const std::string& out_path) {
  LoadedRun run = load_run(trace_dir);
  const LatticeChart& g = run.setup.geom;
  if (g.Ns == 0) {
    std::fprintf(stderr, "claim diagnostics need a cylinder chart\n");
    return 1;
  }
  HolomorphicTwist tw = build_twist(run.setup);
  std::vector<double> l1s;
  std::vector<ScalarField> lams;
  const EndoField& h0 = run.trace.snapshots.front();
  for (const auto& h : run.trace.snapshots) {
    lams.push_back(lambda_bar_field(h, h0));
    l1s.push_back(fhat_l1_norm(g, h, tw));
  }
  WeakBetaReport beta = weak_laplacian_beta(g, lams, l1s, run.setup.seed);
  ClaimReport rep = claim_lower_bound(g, tw, h0, run.trace.snapshots.back(), beta.beta);

  json j;
  j["beta"] = rep.beta;
  j["beta_bank_violations"] = beta.bank_violations;
  j["eps"] = rep.eps;
  j["x"] = rep.x;
  j["L_t"] = rep.L;
  j["S_t"] = rep.S;
  j["delta_plus_eps"] = rep.delta_plus_eps;
  j["I_eps"] = {rep.S, rep.S + rep.delta_plus_eps};
  j["mu_A"] = rep.mu_A;
  j["mu_over_sqrt_L"] = rep.mu_over_sqrt_l;
  j["slab_energy"] = rep.slab_energy;
  j["parabola_violations"] = rep.parabola_violations;
  j["k_prime"] = rep.k_prime;
  j["k_half_one"] = rep.k_half_one;
  j["k_dblprime"] = rep.k_dblprime;
  j["c"] = rep.c;
  j["c_prime"] = rep.c_prime;
  j["c_dblprime"] = rep.c_dblprime;
  j["c_z"] = rep.c_z;
  j["rhs"] = rep.rhs;
  j["ratio"] = rep.ratio;
  j["vacuous"] = rep.vacuous;
  std::ofstream out(out_path.empty() ? trace_dir + "/claim.json" : out_path);
  out << j.dump(2) << "\n";
  std::printf("claim report written (parabola violations: %d)\n", rep.parabola_violations);
  return rep.parabola_violations == 0 ? 0 : 1;
}

int run_monad(int c, uint64_t seed, int dim, int d) {
  MonadChern mc = chern_of_monad(c, dim);
  MonadData m = sample_monad(c, seed);
  bool comp = monad_composition_zero(m);
  bool fib = fiberwise_exact(m, seed + 1, 100);
  RestrictionChern rc = restriction_chern(c, d, dim);

  json j;
  j["c"] = c;
  j["seed"] = seed;
  j["rank"] = mc.rank;
  json ch = json::array();
  for (int i = 0; i <= dim; ++i) ch.push_back(mc.total.coeff(i).to_string());
  j["total_chern"] = ch;
  j["c1"] = mc.total.coeff(1).to_string();
  j["c2"] = mc.total.coeff(2).to_string();
  j["beta_alpha_zero"] = comp;
  j["fiberwise_exact_points"] = 100;
  j["fiberwise_exact"] = fib;
  j["restriction"] = {{"d", d},
                      {"chern_E_twisted", rc.chern_e_twisted.to_string()},
                      {"whitney_exact", rc.whitney_exact},
                      {"chern_on_divisor", rc.on_divisor.to_string()}};
  std::printf("%s\n", j.dump(2).c_str());
  return comp && fib ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HYM heat-flow laboratory on asymptotically cylindrical lattice models"};
  app.require_subcommand(1);

  auto* selftest = app.add_subcommand("algebra-selftest", "exact identity table for the 7-frame calculus");

  std::string config_path, out_dir = "out";
  auto* flow = app.add_subcommand("flow-run", "integrate the metric heat flow");
  flow->add_option("--config", config_path, "plain-text key=value configuration")->required();
  flow->add_option("--out", out_dir, "output directory");

  auto* diag = app.add_subcommand("diagnostics", "reports over a recorded run");
  diag->require_subcommand(1);
  std::string trace_dir, diag_out;
  auto* dnf = diag->add_subcommand("n-functional", "functional vs curvature identity");
  dnf->add_option("--trace", trace_dir, "run directory")->required();
  dnf->add_option("--out", diag_out, "output CSV path");
  auto* den = diag->add_subcommand("energy", "Chern-Weil / Hodge-Riemann energy accounting");
  den->add_option("--trace", trace_dir, "run directory")->required();
  den->add_option("--out", diag_out, "output CSV path");
  auto* dcl = diag->add_subcommand("claim", "slicewise lower-bound machinery");
  dcl->add_option("--trace", trace_dir, "run directory")->required();
  dcl->add_option("--out", diag_out, "output JSON path");

  int monad_c = 1, monad_dim = 3, monad_d = 4;
  uint64_t monad_seed = 1;
  auto* mon = app.add_subcommand("monad", "instanton-monad construction and Chern arithmetic");
  mon->add_option("--c", monad_c, "second Chern number")->required();
  mon->add_option("--seed", monad_seed, "sampling seed");
  mon->add_option("--dim", monad_dim, "ambient dimension (2 or 3)");
  mon->add_option("--d", monad_d, "divisor degree for the restriction sequence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (selftest->parsed()) return run_algebra_selftest();
    if (flow->parsed()) return run_flow(config_path, out_dir);
    if (diag->parsed()) {
      if (dnf->parsed()) return run_diag_nfunctional(trace_dir, diag_out);
      if (den->parsed()) return run_diag_energy(trace_dir, diag_out);
      if (dcl->parsed()) return run_diag_claim(trace_dir, diag_out);
    }
    if (mon->parsed()) return run_monad(monad_c, monad_seed, monad_dim, monad_d);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
