#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "smc/clustering/spectral.hpp"
#include "smc/experiments/env_discovery.hpp"
#include "smc/experiments/metrics.hpp"
#include "smc/experiments/object_discovery.hpp"
#include "smc/experiments/visual_field.hpp"

namespace smc {

// The "metrics" block of report.json. Each is a function of artifacts written
// to the run directory, so it can be rebuilt and compared byte for byte.
nlohmann::json env_metrics(const EnvAnalysis& a, const Contingency& table);
nlohmann::json object_metrics(const ObjectAnalysis& a, const Contingency& table,
                              const std::vector<ObjectMatch>& matches);
nlohmann::json visual_metrics(const VisualAnalysis& a, std::size_t k);
nlohmann::json cluster_metrics(const SpectralResult& r, std::size_t eigengap_k);

nlohmann::json to_json(const Contingency& c);
Contingency contingency_from_json(const nlohmann::json& j);

// from,to,dx,dy,trials,successes
void write_links_csv(const std::vector<StoredLink>& links, const std::filesystem::path& path);
std::vector<StoredLink> read_links_csv(const std::filesystem::path& path);

// Salient dictionary: id, nine values in thousandths, plus truth when asked.
void write_states_csv(const ObjectDiscoveryResult& r, const std::filesystem::path& path, bool emit_truth);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace smc
