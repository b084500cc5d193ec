#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <oscsync/equilibria.hpp>
#include <oscsync/experiments.hpp>
#include <oscsync/io.hpp>
#include <oscsync/parallel.hpp>
#include <oscsync/pulse.hpp>
#include <oscsync/stability.hpp>

#include "config.hpp"
#include "manifest.hpp"

namespace oscsync::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
  Config cfg;
  std::size_t threads = 1;
  std::size_t grid = 0;  // --grid, 0 if absent
};

using Outputs = std::vector<OutputFile>;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json phases_json(const PhaseVector& phi) {
  json a = json::array();
  for (Eigen::Index i = 0; i < phi.size(); ++i) a.push_back(phi[i]);
  return a;
}

json vector_json(const Eigen::VectorXd& v) { return phases_json(v); }

// Partitions leave the CLI 1-indexed.
json partition_json(const Partition& p) {
  json minus = json::array();
  json plus = json::array();
  for (std::size_t v : p.minus_vertices()) minus.push_back(v + 1);
  for (std::size_t v : p.plus_vertices()) plus.push_back(v + 1);
  return {{"minus", minus}, {"plus", plus}};
}

ExperimentConfig experiment_config(const Context& c, std::size_t default_trials) {
  ExperimentConfig e;
  e.seed = c.cfg.seed();
  e.trials = c.cfg.count("trials", default_trials);
  e.horizon = c.cfg.number("horizon", 0.0);
  e.step = c.cfg.number("step", 0.0);
  e.sync_threshold = c.cfg.number("sync_threshold", 0.99);
  e.threads = c.threads;
  return e;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  return os.str();
}

Outputs cmd_simulate(const Context& c) {
  const PhaseModel m = c.cfg.phase_model();
  const PhaseVector phi0 = c.cfg.initial(m.size());
  IntegrateOptions io;
  io.record_every = c.cfg.count("record_every", 1);
  io.record_potential = m.potential_form();
  const Trajectory tr = integrate(m, phi0, c.cfg.number("step", 0.0), c.cfg.number("horizon", 0.0), io);
  const OrderParameter op = order_parameter(tr.states.back());
  json res = {{"final_r", op.r}, {"final_phi", phases_json(tr.states.back())}, {"samples", tr.times.size()}};
  if (!tr.potential.empty()) res["final_V"] = tr.potential.back();
  return {{"trajectory.csv", trajectory_csv(tr)}, {"result.json", dump(res)}};
}

Outputs cmd_pulse(const Context& c) {
  const Graph g = c.cfg.graph();
  const double omega = c.cfg.number("omega", kTwoPi);
  std::vector<double> delays = c.cfg.lags(g);
  for (double& d : delays) d /= omega;
  const PulseResponse k = kappa_from_f(c.cfg.coupling(), omega);
  PulseModel m = PulseModel::delayed(g, k.kappa, std::move(delays), c.cfg.number("epsilon", 1e-2), omega);
  m.validate();
  const PhaseVector theta0 = c.cfg.initial(m.size());
  const PulseRun run = simulate_pulse(m, theta0, c.cfg.number("horizon", 0.0), c.cfg.number("sample_dt", 0.0));
  std::ostringstream firings;
  write_firings_csv(firings, run.firings);
  const OrderParameter op = order_parameter(run.trajectory.states.back());
  json res = {{"final_r", op.r}, {"events", run.events}, {"firings", run.firings.size()}};
  return {{"trajectory.csv", trajectory_csv(run.trajectory)}, {"firings.csv", firings.str()}, {"result.json", dump(res)}};
}

json equilibrium_json(const EquilibriumReport& r) {
  return {{"phi", phases_json(r.phi_star)},
          {"omega_star", r.omega_star},
          {"residual", r.residual},
          {"converged", r.converged},
          {"iterations", r.iterations}};
}

Outputs cmd_equilibrium(const Context& c) {
  const PhaseModel m = c.cfg.phase_model();
  const EquilibriumReport r = find_equilibrium(m, c.cfg.initial(m.size()));
  return {{"equilibrium.json", dump(equilibrium_json(r))}};
}

// The state to linearise at: the configured phases, or a Newton solve from
// them when "solve" is set.
PhaseVector operating_point(const Context& c, const PhaseModel& m, json& info) {
  PhaseVector phi = c.cfg.initial(m.size());
  if (c.cfg.doc().value("solve", false)) {
    const EquilibriumReport r = find_equilibrium(m, phi);
    info["equilibrium"] = equilibrium_json(r);
    if (!r.converged) throw Error(ErrorCode::PreconditionFailed, "Newton iteration did not converge");
    phi = r.phi_star;
  }
  info["phi"] = phases_json(phi);
  return phi;
}

CutCertificate scan(const Context& c, const Linearization& lin) {
  CutScanOptions o;
  o.seed = c.cfg.seed();
  o.threads = c.threads;
  const bool big = lin.graph.num_vertices() > kMaxExhaustiveVertices;
  std::string mode = big ? "heuristic" : "exhaustive";
  if (c.cfg.has("scan")) {
    const json& s = c.cfg.doc().at("scan");
    mode = s.value("mode", mode);
    o.restarts = s.value("restarts", o.restarts);
  }
  o.mode = mode == "heuristic" ? CutScanOptions::Mode::Heuristic : CutScanOptions::Mode::Exhaustive;
  return min_cut_scan(lin, o);
}

json cut_json(const CutCertificate& cc) {
  json j = partition_json(cc.partition);
  j["value"] = cc.value;
  return j;
}

Outputs cmd_stability(const Context& c) {
  const PhaseModel m = c.cfg.phase_model();
  json res;
  const PhaseVector phi = operating_point(c, m, res);
  const Linearization lin = linearize(m, phi);
  const StabilityVerdict v = classify(lin);
  res["class"] = to_string(v.cls);
  res["max_nonflow_eigenvalue"] = v.max_nonflow_eigenvalue;
  res["nonflow_eigenvalues"] = vector_json(v.nonflow_eigenvalues);
  res["tol"] = v.tol;
  res["residual"] = residual(m, phi, 0.0);
  const CutCertificate cc = scan(c, lin);
  res["min_cut"] = cut_json(cc);
  res["certificate"] = cc.value < 0.0 ? cut_json(cc) : json();
  return {{"verdict.json", dump(res)}};
}

Outputs cmd_cut_scan(const Context& c) {
  const PhaseModel m = c.cfg.phase_model();
  json res;
  const PhaseVector phi = operating_point(c, m, res);
  const Linearization lin = linearize(m, phi);
  res["edge_weights"] = vector_json(lin.edge_weights);
  res["min_cut"] = cut_json(scan(c, lin));
  return {{"cut.json", dump(res)}};
}

Outputs cmd_surface(const Context& c) {
  const std::size_t grid = c.grid > 0 ? c.grid : c.cfg.count("grid", 41);
  if (grid < 2) throw Error(ErrorCode::BadConfig, "surface grid needs at least 2 points");
  const Eigen::MatrixXd s = min_cut_surface(c.cfg.coupling(), grid, c.threads);
  std::ostringstream os;
  write_surface_csv(os, s);
  json res = {{"grid", grid}, {"max", s.maxCoeff()}, {"min", s.minCoeff()}, {"all_negative", s.maxCoeff() < 0.0}};
  return {{"surface.csv", os.str()}, {"result.json", dump(res)}};
}

Outputs cmd_basin(const Context& c) {
  const Graph g = c.cfg.graph();
  BasinOptions o;
  o.epsilon = c.cfg.number("epsilon", 1.0);
  o.splay_jitter = c.cfg.number("splay_jitter", 0.0);
  const BasinResult r = basin_mc(g, c.cfg.coupling(), experiment_config(c, 100), o);
  std::string csv = "trial,final_r\n";
  for (std::size_t t = 0; t < r.final_r.size(); ++t) csv += std::to_string(t) + "," + format_double(r.final_r[t]) + "\n";
  json res = {{"fraction", r.fraction},
              {"synced", r.synced},
              {"trials", r.trials},
              {"hypothesis_holds", r.hypothesis_holds}};
  return {{"basin.csv", csv}, {"result.json", dump(res)}};
}

Outputs cmd_meanfield(const Context& c) {
  const CouplingFunction f = c.cfg.coupling();
  const DelayDistribution g = c.cfg.delay();
  const auto sizes = c.cfg.counts("sizes");
  const ExperimentConfig e = experiment_config(c, 20);
  MeanfieldOptions o;
  o.eps_bar = c.cfg.number("eps_bar", 1.0);
  o.grid = c.cfg.count("conv_grid", 4096);
  o.record_every = c.cfg.count("record_every", 1);
  const MeanfieldStudy st = meanfield_study(f, g, sizes, e, o);

  std::string csv = "n,trial,sup_distance,final_r_lagged,final_r_convolved\n";
  for (std::size_t s = 0; s < sizes.size(); ++s)
    for (std::size_t t = 0; t < e.trials; ++t)
      csv += std::to_string(sizes[s]) + "," + std::to_string(t) + "," + format_double(st.sup_distance[s][t]) + "," +
             format_double(st.final_r_lagged[s][t]) + "," + format_double(st.final_r_convolved[s][t]) + "\n";

  // Order-parameter series of trial 0 for each N.
  std::string series = "n,t,r_lagged,r_convolved\n";
  for (std::size_t n : sizes) {
    ExperimentConfig e0 = e;
    e0.seed = trial_seed(e.seed, 0);
    const MeanfieldResult r = meanfield_compare(f, g, n, e0, o);
    for (std::size_t k = 0; k < r.times.size(); ++k)
      series += std::to_string(n) + "," + format_double(r.times[k]) + "," + format_double(r.r_lagged[k]) + "," +
                format_double(r.r_convolved[k]) + "\n";
  }

  bool decreasing = true;
  for (std::size_t s = 1; s < st.median.size(); ++s) decreasing = decreasing && st.median[s] < st.median[s - 1];
  const DelayOrderParameter op = order_parameter_of_delays(g);
  json res = {{"sizes", sizes},
              {"median_sup_distance", st.median},
              {"median_strictly_decreasing", decreasing},
              {"delay_C", op.c},
              {"delay_xi", op.xi}};
  return {{"meanfield.csv", csv}, {"series.csv", series}, {"result.json", dump(res)}};
}

ClusterOptions cluster_options(const Context& c) {
  ClusterOptions o;
  o.engine = c.cfg.text("engine", "pulse") == "phase" ? Engine::Phase : Engine::Pulse;
  o.eps_bar = c.cfg.number("eps_bar", 1.0);
  o.omega = c.cfg.number("omega", kTwoPi);
  o.jitter = c.cfg.number("jitter", 0.01);
  o.grid = c.cfg.count("conv_grid", 4096);
  return o;
}

Outputs cmd_clusters(const Context& c) {
  const std::size_t n = c.cfg.count("n", 45);
  const ClusterResult r = cluster_destab(c.cfg.coupling(), c.cfg.delay(), n, experiment_config(c, 1),
                                         cluster_options(c));
  std::string csv = "t,r\n";
  for (std::size_t k = 0; k < r.run.times.size(); ++k)
    csv += format_double(r.run.times[k]) + "," + format_double(r.run.r[k]) + "\n";
  const auto& d = r.diagnostics;
  const bool predicts_sync = d.verdict.cls == StabilityClass::Unstable;
  json res = {{"outcome", to_string(r.run.outcome)},
              {"final_r", r.run.final_r},
              {"engine", to_string(r.engine)},
              {"n", n},
              {"diagnostics",
               {{"h_slope_0", d.h_slope_0},
                {"h_slope_2pi_3", d.h_slope_2pi_3},
                {"h_slope_4pi_3", d.h_slope_4pi_3},
                {"h_is_odd", d.h_is_odd},
                {"class", to_string(d.verdict.cls)},
                {"max_nonflow_eigenvalue", d.verdict.max_nonflow_eigenvalue}}},
              {"agrees", predicts_sync == (r.run.outcome == ClusterOutcome::InPhase)}};
  return {{"clusters.csv", csv}, {"result.json", dump(res)}};
}

Outputs cmd_sweep(const Context& c) {
  const auto sizes = c.cfg.counts("sizes");
  const auto sigmas = c.cfg.numbers("sigmas");
  const SweepResult r = sync_probability_sweep(c.cfg.coupling(), c.cfg.number("mu", 0.0), sizes, sigmas,
                                               experiment_config(c, 50), cluster_options(c));
  std::string csv = "n,sigma,successes,trials,probability\n";
  std::string dat = "# n sigma probability\n";
  json crossings = json::object();
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    json cross;
    for (std::size_t b = 0; b < sigmas.size(); ++b) {
      csv += std::to_string(sizes[a]) + "," + format_double(sigmas[b]) + "," + std::to_string(r.successes[a][b]) + "," +
             std::to_string(r.trials) + "," + format_double(r.probability[a][b]) + "\n";
      dat += std::to_string(sizes[a]) + " " + format_double(sigmas[b]) + " " + format_double(r.probability[a][b]) + "\n";
      if (cross.is_null() && r.probability[a][b] >= 0.5) cross = sigmas[b];
    }
    dat += "\n";
    crossings[std::to_string(sizes[a])] = cross;
  }
  json res = {{"sizes", sizes},
              {"sigmas", sigmas},
              {"trials", r.trials},
              {"sigma_star", r.sigma_star ? json(*r.sigma_star) : json()},
              {"first_sigma_with_probability_at_least_half", crossings}};
  return {{"sweep.csv", csv}, {"sweep.dat", dat}, {"result.json", dump(res)}};
}

Outputs dispatch(const std::string& verb, const Context& c) {
  if (verb == "simulate") return cmd_simulate(c);
  if (verb == "pulse") return cmd_pulse(c);
  if (verb == "equilibrium") return cmd_equilibrium(c);
  if (verb == "stability") return cmd_stability(c);
  if (verb == "cut-scan") return cmd_cut_scan(c);
  if (verb == "surface") return cmd_surface(c);
  if (verb == "basin") return cmd_basin(c);
  if (verb == "meanfield") return cmd_meanfield(c);
  if (verb == "clusters") return cmd_clusters(c);
  if (verb == "sweep") return cmd_sweep(c);
  throw Error(ErrorCode::BadConfig, "unknown verb '" + verb + "'");
}

// Without a target verb, requirements of individual verbs are not findings.
int validate_only(const json& doc, const fs::path& base, const fs::path& out, const std::string& target) {
  const auto findings = check_config(doc, base);
  json list = json::array();
  for (const auto& f : findings) {
    if (target.empty() ? f.missing_key : !f.applies_to(target)) continue;
    json item = {{"message", f.message}};
    if (!f.verbs.empty()) item["verbs"] = f.verbs;
    list.push_back(item);
    std::cerr << "finding: " << f.message;
    if (!f.verbs.empty()) {
      std::cerr << " (";
      for (std::size_t i = 0; i < f.verbs.size(); ++i) std::cerr << (i ? ", " : "") << f.verbs[i];
      std::cerr << ")";
    }
    std::cerr << '\n';
  }
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + out.string());
  write_file(out, "findings.json", dump(list));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Weakly coupled oscillator networks: simulation, stability certificates and experiments", "oscsync"};
  std::string verb;
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::size_t threads = 1;
  std::size_t grid = 0;
  std::vector<std::string> verbs = run_verbs();
  verbs.push_back("validate");
  app.add_option("verb", verb, "What to run")->required()->check(CLI::IsMember(verbs));
  app.add_option("-c,--config", config_path, "JSON config file")->required();
  app.add_option("-o,--out", out_dir, "Output directory");
  app.add_option("--set", overrides, "Config override key=value (repeatable; dotted keys reach into objects)");
  app.add_option("--threads", threads, "Worker threads for experiments")->check(CLI::PositiveNumber);
  std::string target;
  app.add_option("--for", target, "validate: also check the requirements of this verb")
      ->check(CLI::IsMember(run_verbs()));
  app.add_option("--grid", grid, "Surface grid size")->check(CLI::PositiveNumber);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    const fs::path cfg_path(config_path);
    json doc = load_config(cfg_path);
    for (const auto& o : overrides) apply_override(doc, o);
    const fs::path base = cfg_path.has_parent_path() ? cfg_path.parent_path() : fs::path(".");
    if (verb == "validate") return validate_only(doc, base, out_dir, target);

    bool blocked = false;
    for (const auto& f : check_config(doc, base)) {
      if (!f.applies_to(verb)) continue;
      std::cerr << "invalid config: " << f.message << '\n';
      blocked = true;
    }
    if (blocked) return kExitInvalid;

    Context ctx{Config(doc, base), threads, grid};
    const Manifest manifest(out_dir, verb, doc);
    manifest.begin();
    const Outputs outputs = dispatch(verb, ctx);
    for (const auto& o : outputs) write_file(out_dir, o.name, o.content);
    manifest.finish(outputs);
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.numerical() ? kExitNumerical : kExitInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace oscsync::cli
