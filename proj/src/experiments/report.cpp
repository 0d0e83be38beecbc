#include "smc/experiments/report.hpp"

#include <fstream>
#include <sstream>

#include "smc/core/error.hpp"

namespace smc {

namespace {

nlohmann::json optional_ratio(const std::optional<double>& r) {
  return r ? nlohmann::json(*r) : nlohmann::json(nullptr);
}

nlohmann::json sizes_of(const SubgraphPartition& p) {
  const std::size_t n_labels = p.k + (p.residual_label ? 1 : 0);
  std::vector<std::size_t> sizes(n_labels, 0);
  for (int l : p.labels) ++sizes.at(static_cast<std::size_t>(l));
  return sizes;
}

}  // namespace

nlohmann::json to_json(const Contingency& c) {
  return {{"rows", c.row_ids}, {"cols", c.col_ids}, {"table", c.table}};
}

Contingency contingency_from_json(const nlohmann::json& j) {
  Contingency c;
  try {
    c.row_ids = j.at("rows").get<std::vector<int>>();
    c.col_ids = j.at("cols").get<std::vector<int>>();
    c.table = j.at("table").get<std::vector<std::vector<long>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad contingency table: ") + e.what());
  }
  if (c.table.size() != c.row_ids.size()) throw ShapeError("contingency row count mismatch");
  for (const auto& row : c.table) {
    if (row.size() != c.col_ids.size()) throw ShapeError("contingency column count mismatch");
  }
  return c;
}

nlohmann::json env_metrics(const EnvAnalysis& a, const Contingency& table) {
  nlohmann::json j;
  j["ari"] = adjusted_rand_index(table);
  j["purity"] = purity(table);
  j["k_used"] = a.k_used;
  j["eigengap_k"] = a.eigengap_k;
  j["degenerate"] = a.degenerate;
  j["spectrum_head"] = a.spectrum_head;
  j["subgraph_sizes"] = sizes_of(a.partition);
  j["composition"] = to_json(table);
  return j;
}

nlohmann::json object_metrics(const ObjectAnalysis& a, const Contingency& table,
                              const std::vector<ObjectMatch>& matches) {
  nlohmann::json j;
  j["observed_links"] = a.observed_links;
  j["eigenvalues_head"] = a.eigenvalues;
  j["eigengap_k"] = a.eigengap_k;
  j["subgraph_sizes"] = sizes_of(a.partition);
  j["residual_label"] = a.partition.residual_label ? nlohmann::json(*a.partition.residual_label)
                                                   : nlohmann::json(nullptr);
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& s : a.subgraphs) {
    subs.push_back({{"label", s.label},
                    {"size", s.size},
                    {"mean_probability", s.mean_probability},
                    {"observed_entries", s.observed_entries},
                    {"mean_tried_probability", s.mean_tried_probability},
                    {"tried_entries", s.tried_entries}});
  }
  j["subgraphs"] = subs;
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : matches) {
    ms.push_back({{"object", m.object}, {"label", m.label}, {"purity", m.purity}, {"coverage", m.coverage}});
  }
  j["objects"] = ms;
  j["composition"] = to_json(table);
  return j;
}

nlohmann::json visual_metrics(const VisualAnalysis& a, std::size_t k) {
  nlohmann::json j;
  nlohmann::json dom = nlohmann::json::array();
  for (std::size_t q = 0; q < a.dominance.size(); ++q) {
    const auto& d = a.dominance[q];
    dom.push_back({{"saccade", q},
                   {"mean_on", d.mean_on},
                   {"mean_off", d.mean_off},
                   {"ratio", optional_ratio(d.ratio)},
                   {"n_on", d.n_on},
                   {"n_off", d.n_off}});
  }
  j["dominance"] = dom;
  std::size_t on = 0, off = 0;
  nlohmann::json off_entries = nlohmann::json::array();
  for (const auto& e : a.high_entries) {
    if (e.on_diagonal) {
      ++on;
      continue;
    }
    ++off;
    off_entries.push_back({{"from", e.from}, {"to", e.to}, {"saccade", e.cmd}, {"p", e.p}, {"trials", e.trials}});
  }
  j["high_on_diagonal"] = on;
  j["high_off_diagonal"] = off;
  j["high_off_entries"] = off_entries;
  j["rows_dominate"] = a.rows_dominate;
  j["k"] = k;
  return j;
}

nlohmann::json cluster_metrics(const SpectralResult& r, std::size_t eigengap_k) {
  nlohmann::json j;
  j["k"] = r.partition.k;
  j["eigengap_k"] = eigengap_k;
  const std::size_t head = std::min<std::size_t>(20, r.eigenvalues.size());
  j["eigenvalues_head"] = std::vector<double>(r.eigenvalues.begin(), r.eigenvalues.begin() + static_cast<long>(head));
  j["subgraph_sizes"] = sizes_of(r.partition);
  return j;
}

void write_links_csv(const std::vector<StoredLink>& links, const std::filesystem::path& path) {
  std::ostringstream s;
  s << "from,to,dx,dy,trials,successes\n";
  for (const auto& l : links) {
    s << l.from << ',' << l.to << ',' << l.dx << ',' << l.dy << ',' << l.trials << ',' << l.successes << '\n';
  }
  write_text(path, s.str());
}

std::vector<StoredLink> read_links_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line != "from,to,dx,dy,trials,successes") {
    throw ValidationError(path.string() + ": unexpected header");
  }
  std::vector<StoredLink> links;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    StoredLink l;
    char c1, c2, c3, c4, c5;
    std::istringstream row(line);
    if (!(row >> l.from >> c1 >> l.to >> c2 >> l.dx >> c3 >> l.dy >> c4 >> l.trials >> c5 >> l.successes) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',') {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    }
    links.push_back(l);
  }
  return links;
}

void write_states_csv(const ObjectDiscoveryResult& r, const std::filesystem::path& path, bool emit_truth) {
  std::ostringstream s;
  s << "id";
  for (int i = 0; i < 9; ++i) s << ",v" << i;
  if (emit_truth) s << ",truth";
  s << '\n';
  for (std::size_t id = 0; id < r.states.size(); ++id) {
    s << id;
    for (int v : r.states[id]) s << ',' << v;
    if (emit_truth) s << ',' << r.state_truth[id];
    s << '\n';
  }
  write_text(path, s.str());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

}  // namespace smc
