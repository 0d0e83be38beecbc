#include "smc/cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <type_traits>

#include "smc/core/error.hpp"

namespace smc {

namespace {

const std::map<std::string, BackgroundChange> kBackgroundChange{
    {"per_element", BackgroundChange::per_element}, {"whole", BackgroundChange::whole}};

std::string background_name(BackgroundChange b) {
  return b == BackgroundChange::whole ? "whole" : "per_element";
}

// One call per configurable key of an experiment section: v(key, field, help).
// Bool fields may carry a short alias as a fourth argument.
template <class V>
void visit_section(Experiment e, RunConfig& c, V&& v) {
  switch (e) {
    case Experiment::envdisc: {
      auto& w = c.envdisc.wall;
      v("n_env_states", w.n_env_states, "number of wall positions");
      v("distance_min", w.distance_min, "nearest wall distance");
      v("distance_max", w.distance_max, "farthest wall distance");
      v("n_angles", w.n_angles, "motor states spread over [-60, 60] degrees");
      v("s_max", w.s_max, "range sensor saturation");
      v("p_env", w.p_env, "chance per step that the wall moves");
      v("K", c.envdisc.K, "k-means clusters over (reading, motor)");
      v("k_subgraphs", c.envdisc.k_subgraphs, "subgraphs, 0 = eigengap suggestion");
      v("k_max", c.envdisc.k_max, "largest k the eigengap search considers");
      v("steps", c.envdisc.steps, "babbling steps");
      break;
    }
    case Experiment::objects: {
      auto& g = c.objects.grid;
      auto& o = c.objects;
      v("width", g.width, "world width in elements");
      v("height", g.height, "world height in elements");
      v("toroidal", g.toroidal, "wrap the world around");
      v("n_objects", g.n_objects, "number of objects");
      v("object_side", g.object_side, "object side in elements");
      v("p_env_redraw", g.p_env_redraw, "background change probability per scene");
      v("background_change", g.background_change, "per_element or whole");
      v("n_scenes", o.n_scenes, "scenes including the first");
      v("steps_per_scene", o.steps_per_scene, "babbling steps in each later scene");
      v("initial_steps", o.initial_steps, "babbling steps in the first scene");
      v("min_trials", o.min_trials, "trials needed before a probability counts");
      v("k_subgraphs", o.k_subgraphs, "subgraphs including the residual");
      v("salient_fraction", o.salient_fraction, "share of sensor readings kept as salient");
      v("tau_samples", o.tau_samples, "random readings used to set the salience threshold");
      v("link_radius", o.link_radius, "largest stored displacement per axis");
      v("link_horizon", o.link_horizon, "largest step gap of a stored transition");
      v("regularization", o.regularization, "affinity regularization, times mean degree");
      v("overlap", o.overlap, "objects may overlap after the first scene");
      break;
    }
    case Experiment::retina: {
      auto& r = c.retina.retina;
      v("width", r.width, "scene width in pixels");
      v("height", r.height, "scene height in pixels");
      v("window", r.window, "retina side in pixels, split into 2x2 fields");
      v("square_count", r.square_count, "white squares per scene");
      v("side_min", r.side_min, "smallest square side");
      v("side_max", r.side_max, "largest square side");
      v("noise_mode", r.noise_mode, "white-noise scenes", "--noise");
      v("n_scenes", c.retina.n_scenes, "scenes");
      v("steps_per_scene", c.retina.steps_per_scene, "saccades per scene");
      v("K", c.retina.K, "patch clusters shared by all fields");
      v("trial_threshold", c.retina.trial_threshold, "trials behind a high-probability entry");
      break;
    }
    case Experiment::cluster: {
      v("matrix", c.cluster.matrix, "CSV matrix to cluster (required)");
      v("k", c.cluster.k, "subgraphs, 0 = eigengap suggestion");
      v("k_max", c.cluster.k_max, "largest k the eigengap search considers");
      v("regularization", c.cluster.regularization, "affinity regularization, times mean degree");
      break;
    }
  }
}

template <class V>
void visit_common(RunConfig& c, V&& v) {
  v("seed", c.seed, "master seed");
  v("jobs", c.jobs, "worker threads for scene loops");
  v("emit_truth", c.emit_truth, "write hidden labels next to the logs");
  v("max_cells", c.max_cells, "heatmap crop in cells, 0 = full");
}

// "--max_cells,--max-cells": both spellings reach the same option.
std::string option_names(const std::string& key) {
  std::string name = "--" + key;
  std::string dashed = key;
  std::replace(dashed.begin(), dashed.end(), '_', '-');
  if (dashed != key) name += ",--" + dashed;
  return name;
}

constexpr Experiment kExperiments[] = {Experiment::envdisc, Experiment::objects, Experiment::retina,
                                       Experiment::cluster};

struct JsonWriter {
  nlohmann::json& j;
  template <class T>
  void operator()(const char* key, T& field, const char*, const char* = nullptr) {
    if constexpr (std::is_same_v<T, BackgroundChange>) {
      j[key] = background_name(field);
    } else {
      j[key] = field;
    }
  }
};

struct JsonReader {
  const nlohmann::json& j;
  std::string section;
  std::size_t used = 0;
  template <class T>
  void operator()(const char* key, T& field, const char*, const char* = nullptr) {
    if (!j.contains(key)) return;
    ++used;
    try {
      if constexpr (std::is_same_v<T, BackgroundChange>) {
        auto it = kBackgroundChange.find(j.at(key).get<std::string>());
        if (it == kBackgroundChange.end()) throw ConfigError("bad value");
        field = it->second;
      } else {
        field = j.at(key).get<T>();
      }
    } catch (const std::exception&) {
      throw ConfigError("bad value for " + section + key);
    }
  }
};

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::envdisc: return "envdisc";
    case Experiment::objects: return "objects";
    case Experiment::retina: return "retina";
    case Experiment::cluster: return "cluster";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& s) {
  for (Experiment e : kExperiments) {
    if (s == to_string(e)) return e;
  }
  throw ConfigError("unknown experiment: " + s);
}

void RunConfig::propagate() {
  envdisc.seed = seed;
  objects.seed = seed;
  objects.jobs = jobs;
  retina.seed = seed;
  retina.jobs = jobs;
}

std::filesystem::path RunConfig::run_dir() const {
  return out / (std::string(to_string(experiment)) + "_seed" + std::to_string(seed));
}

Invocation parse_command_line(const std::vector<std::string>& args) {
  Invocation inv;
  RunConfig& c = inv.config;
  CLI::App app{"Sensorimotor contingency discovery by motor babbling and spectral clustering",
               "smc-lab"};
  app.set_config("--config", "", "INI file: common keys at the top, one [section] per experiment");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  std::string out = c.out.string();

  // Common keys live on the top level; subcommands fall through to them.
  visit_common(c, [&](const char* key, auto& field, const char* help) {
    using T = std::remove_reference_t<decltype(field)>;
    const std::string name = option_names(key);
    if constexpr (std::is_same_v<T, bool>) {
      app.add_flag(name, field, help);
    } else {
      app.add_option(name, field, help)->capture_default_str();
    }
  });
  app.add_option("--out", out, "output root; runs go to <out>/<experiment>_seed<seed>")
      ->capture_default_str();

  std::map<CLI::App*, Experiment> subs;
  for (Experiment e : kExperiments) {
    CLI::App* sub = app.add_subcommand(to_string(e), std::string("run the ") + to_string(e) + " experiment");
    sub->fallthrough();
    sub->allow_config_extras(CLI::config_extras_mode::error);
    visit_section(e, c, [&](const char* key, auto& field, const char* help, const char* alias = nullptr) {
      using T = std::remove_reference_t<decltype(field)>;
      std::string name = option_names(key);
      if (alias) name += std::string(",") + alias;
      if constexpr (std::is_same_v<T, bool>) {
        // On-by-default switches need a way off from the command line.
        if (field) name += std::string(",!--no-") + key;
        sub->add_flag(name, field, help);
      } else if constexpr (std::is_same_v<T, BackgroundChange>) {
        sub->add_option(name, field, help)
            ->transform(CLI::CheckedTransformer(kBackgroundChange, CLI::ignore_case))
            ->default_str(background_name(field));
      } else {
        sub->add_option(name, field, help)->capture_default_str();
      }
    });
    subs[sub] = e;
  }
  CLI::App* report = app.add_subcommand("report", "inspect or verify a run directory");
  std::string report_dir;
  report->add_option("dir", report_dir, "run directory holding report.json")->required();
  report->add_flag("--recompute", inv.recompute, "rebuild every metric from the saved matrices");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    inv.command = Invocation::Command::help;
    inv.help_text = app.help();
    for (const auto& [sub, e] : subs) {
      if (sub->parsed()) inv.help_text = sub->help();
    }
    return inv;
  } catch (const CLI::CallForAllHelp&) {
    inv.command = Invocation::Command::help;
    inv.help_text = app.help("", CLI::AppFormatMode::All);
    return inv;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  if (report->parsed()) {
    inv.command = Invocation::Command::report;
    inv.report_dir = report_dir;
    return inv;
  }
  for (const auto& [sub, e] : subs) {
    if (sub->parsed()) c.experiment = e;
  }
  c.out = out;
  if (c.experiment == Experiment::cluster && c.cluster.matrix.empty()) {
    throw ConfigError("cluster.matrix is required");
  }
  c.propagate();
  return inv;
}

nlohmann::json config_json(const RunConfig& c) {
  RunConfig copy = c;
  nlohmann::json j;
  j["experiment"] = to_string(c.experiment);
  visit_common(copy, JsonWriter{j});
  nlohmann::json section;
  visit_section(c.experiment, copy, JsonWriter{section});
  j[to_string(c.experiment)] = section;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  if (!j.is_object() || !j.contains("experiment")) throw ConfigError("config echo lacks experiment");
  c.experiment = experiment_from_string(j.at("experiment").get<std::string>());
  const std::string name = to_string(c.experiment);
  JsonReader common{j, ""};
  visit_common(c, common);
  const std::size_t expected = 2 + common.used;  // experiment + section
  if (j.size() != expected || !j.contains(name)) throw ConfigError("unexpected keys in config echo");
  JsonReader section{j.at(name), name + "."};
  visit_section(c.experiment, c, section);
  if (section.used != j.at(name).size()) throw ConfigError("unexpected keys in [" + name + "]");
  c.propagate();
  return c;
}

}  // namespace smc
