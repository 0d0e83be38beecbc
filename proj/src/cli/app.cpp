#include "smc/cli/app.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

#include "smc/cli/heatmap.hpp"
#include "smc/core/error.hpp"
#include "smc/experiments/report.hpp"

namespace smc {

namespace {

namespace fs = std::filesystem;

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

void write_centroids(const ClusterModel& m, const fs::path& path) {
  std::ostringstream s;
  s << "cluster";
  for (std::size_t d = 0; d < m.centroids.cols(); ++d) s << ",c" << d;
  s << '\n';
  char buf[32];
  for (std::size_t k = 0; k < m.centroids.rows(); ++k) {
    s << k;
    for (std::size_t d = 0; d < m.centroids.cols(); ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", m.centroids(k, d));
      s << ',' << buf;
    }
    s << '\n';
  }
  write_text(path, s.str());
}

std::vector<std::size_t> label_order(const SubgraphPartition& p) { return order_by_label(p.labels); }

nlohmann::json run_envdisc(const RunConfig& c, const fs::path& dir) {
  EnvDiscoveryResult r = run_env_discovery(c.envdisc);
  write_csv(r.counts, dir / "counts");
  write_csv(r.analysis.transitions, dir / "T");
  write_text(dir / "partition.json", r.analysis.partition.to_json() + "\n");
  write_centroids(r.discretization, dir / "centroids.csv");
  write_log_csv(r.log, dir / "log.csv", c.emit_truth);
  Heatmap h = make_heatmap(r.analysis.transitions, 0, label_order(r.analysis.partition));
  h.title = "T, states grouped by subgraph";
  write_heatmap(h, c.max_cells, dir / "T.svg");

  nlohmann::json rep;
  rep["run"] = {{"samples", r.n_samples},
                {"transitions", r.n_transitions},
                {"distinct_points", r.distinct_points},
                {"kmeans_inertia", r.discretization.inertia},
                {"kmeans_iterations", r.discretization.iterations},
                {"kmeans_converged", r.discretization.converged}};
  rep["evaluation"] = {{"cluster_truth", to_json(r.cluster_truth)}};
  rep["metrics"] = env_metrics(r.analysis, r.table);
  return rep;
}

nlohmann::json run_objects(const RunConfig& c, const fs::path& dir) {
  ObjectDiscoveryResult r = run_object_discovery(c.objects);
  write_links_csv(r.links, dir / "links.csv");
  write_states_csv(r, dir / "states.csv", c.emit_truth);
  write_text(dir / "partition.json", r.analysis.partition.to_json() + "\n");
  Heatmap h = make_heatmap(r.analysis.probabilities, r.analysis.observed, label_order(r.analysis.partition));
  h.title = "T over stored states, grouped by subgraph";
  write_heatmap(h, c.max_cells, dir / "T.svg");

  nlohmann::json rep;
  rep["run"] = {{"tau", r.tau},
                {"n_states", r.n_states},
                {"links", r.links.size()},
                {"background_changes", r.background_changes}};
  rep["evaluation"] = {{"composition", to_json(r.table)}};
  rep["metrics"] = object_metrics(r.analysis, r.table, r.matches);
  return rep;
}

nlohmann::json run_retina(const RunConfig& c, const fs::path& dir) {
  VisualFieldResult r = run_visual_field(c.retina);
  write_csv(r.counts, dir / "counts");
  write_csv(r.analysis.transitions, dir / "T");
  write_centroids(r.patches, dir / "centroids.csv");
  for (std::size_t q = 0; q < kSaccades; ++q) {
    Heatmap h = make_heatmap(r.analysis.transitions, q);
    h.title = "saccade " + std::to_string(q) + ", state = field * K + cluster";
    write_heatmap(h, c.max_cells, dir / ("T_cmd" + std::to_string(q) + ".svg"));
  }
  nlohmann::json rep;
  rep["run"] = {{"transitions", r.n_transitions},
                {"clamped", r.n_clamped},
                {"distinct_patches", r.distinct_patches},
                {"kmeans_inertia", r.patches.inertia}};
  rep["metrics"] = visual_metrics(r.analysis, c.retina.K);
  return rep;
}

struct ClusterOutcome {
  SpectralResult result;
  SubgraphPartition partition;
  std::size_t eigengap_k = 0;
};

ClusterOutcome cluster_matrix(const ProbabilityMatrix& t, const ClusterConfig& cc, std::uint64_t seed) {
  Affinity w = symmetrize(t);
  auto spectrum = normalized_spectrum(w);
  const std::size_t k_top = std::min(cc.k_max, spectrum.empty() ? 0 : spectrum.size() - 1);
  ClusterOutcome o;
  o.eigengap_k = k_top >= 2 ? eigengap_suggest(spectrum, k_top) : 2;
  SpectralOptions so;
  so.regularization = cc.regularization;
  o.result = spectral_cluster_detailed(w, cc.k ? cc.k : o.eigengap_k, Rng::stream(seed, "spectral").next(), so);
  o.partition = expand_to_states(o.result.partition, w);
  return o;
}

nlohmann::json run_cluster(const RunConfig& c, const fs::path& dir) {
  ProbabilityMatrix t = read_probability_csv(c.cluster.matrix);
  write_csv(t, dir / "input");
  ClusterOutcome o = cluster_matrix(t, c.cluster, c.seed);
  write_text(dir / "partition.json", o.partition.to_json() + "\n");
  Heatmap h = make_heatmap(t, 0, label_order(o.partition));
  h.title = "input, states grouped by subgraph";
  write_heatmap(h, c.max_cells, dir / "T.svg");
  nlohmann::json rep;
  rep["run"] = {{"states", t.n_from()}};
  rep["metrics"] = cluster_metrics(o.result, o.eigengap_k);
  return rep;
}

int report_command(const fs::path& dir, bool recompute, std::ostream& out) {
  auto rep = nlohmann::json::parse(read_text(dir / "report.json"));
  if (!recompute) {
    out << rep.at("metrics").dump(2) << "\n";
    return kExitOk;
  }
  bool all = true;
  for (const auto& check : recompute_run(dir)) {
    out << (check.ok ? "MATCH    " : "MISMATCH ") << check.name << "\n";
    all = all && check.ok;
  }
  return all ? kExitOk : kExitFailure;
}

}  // namespace

fs::path run_experiment(const RunConfig& c, std::ostream& log) {
  const fs::path dir = c.run_dir();
  fs::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::json rep;
  switch (c.experiment) {
    case Experiment::envdisc: rep = run_envdisc(c, dir); break;
    case Experiment::objects: rep = run_objects(c, dir); break;
    case Experiment::retina: rep = run_retina(c, dir); break;
    case Experiment::cluster: rep = run_cluster(c, dir); break;
  }
  rep["experiment"] = to_string(c.experiment);
  rep["config"] = config_json(c);
  write_json(dir / "report.json", rep);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // Timing stays out of report.json so reruns are byte-identical.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", secs);
  log << to_string(c.experiment) << " finished in " << buf << " s -> " << dir.string() << "\n";
  return dir;
}

std::vector<RecomputeCheck> recompute_run(const fs::path& dir) {
  const auto rep = nlohmann::json::parse(read_text(dir / "report.json"));
  const RunConfig c = config_from_json(rep.at("config"));
  nlohmann::json metrics;
  std::string partition;
  switch (c.experiment) {
    case Experiment::envdisc: {
      TransitionCounts counts = read_counts_csv(dir / "counts", 1);
      EnvAnalysis a = analyze_env_counts(counts, c.envdisc.k_subgraphs, c.envdisc.k_max, c.seed);
      Contingency table = subgraph_table(contingency_from_json(rep.at("evaluation").at("cluster_truth")), a.partition);
      metrics = env_metrics(a, table);
      partition = a.partition.to_json();
      break;
    }
    case Experiment::objects: {
      const auto& o = c.objects;
      ObjectAnalysis a = analyze_object_links(rep.at("run").at("n_states").get<std::size_t>(),
                                              read_links_csv(dir / "links.csv"), o.min_trials, o.k_subgraphs,
                                              o.regularization, c.seed);
      Contingency table = contingency_from_json(rep.at("evaluation").at("composition"));
      metrics = object_metrics(a, table, match_objects(table));
      partition = a.partition.to_json();
      break;
    }
    case Experiment::retina: {
      TransitionCounts counts = read_counts_csv(dir / "counts", kSaccades);
      metrics = visual_metrics(analyze_visual_counts(counts, c.retina.retina, c.retina.K, c.retina.trial_threshold),
                               c.retina.K);
      break;
    }
    case Experiment::cluster: {
      ClusterOutcome o = cluster_matrix(read_probability_csv(dir / "input.csv"), c.cluster, c.seed);
      metrics = cluster_metrics(o.result, o.eigengap_k);
      partition = o.partition.to_json();
      break;
    }
  }
  std::vector<RecomputeCheck> checks;
  checks.push_back({"metrics", metrics.dump() == rep.at("metrics").dump()});
  if (!partition.empty()) checks.push_back({"partition.json", partition + "\n" == read_text(dir / "partition.json")});
  return checks;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    Invocation inv = parse_command_line(args);
    switch (inv.command) {
      case Invocation::Command::help:
        out << inv.help_text;
        return kExitOk;
      case Invocation::Command::report:
        return report_command(inv.report_dir, inv.recompute, out);
      case Invocation::Command::run:
        out << config_json(inv.config).dump(2) << "\n";
        run_experiment(inv.config, err);
        return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ShapeError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InsufficientDataError& e) {
    err << "insufficient data: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace smc
