#include "smc/clustering/spectral.hpp"

#include <cmath>
#include <json.hpp>

#include "smc/clustering/eigen.hpp"
#include "smc/clustering/kmeans.hpp"
#include "smc/core/error.hpp"

namespace smc {

namespace {

struct Laplacian {
  Matrix l;
  std::vector<std::size_t> nodes;  // affinity node of each row of l
};

Laplacian normalized_laplacian(const Affinity& aff, double regularization) {
  const std::size_t n = aff.size();
  Matrix w = aff.w;
  if (regularization > 0.0 && n > 0) {
    double total = 0.0;
    for (double v : w.data()) total += v;
    const double add = regularization * (total / static_cast<double>(n)) / static_cast<double>(n);
    for (double& v : w.data()) v += add;
  }
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : w.row(i)) deg[i] += v;
  }
  Laplacian out;
  for (std::size_t i = 0; i < n; ++i) {
    if (deg[i] > 0.0) out.nodes.push_back(i);
  }
  const std::size_t m = out.nodes.size();
  out.l = Matrix(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t i = out.nodes[a];
    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t j = out.nodes[b];
      out.l(a, b) = w(i, j) / std::sqrt(deg[i] * deg[j]);
    }
  }
  // Rounding in the two square roots can differ; keep L exactly symmetric.
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) out.l(b, a) = out.l(a, b);
  }
  return out;
}

}  // namespace

Affinity make_affinity(Matrix w) {
  if (w.rows() != w.cols()) throw ValidationError("affinity must be square");
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      const double v = w(i, j);
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("affinity entries must be >= 0");
      if (v != w(j, i)) throw ValidationError("affinity must be exactly symmetric");
    }
  }
  Affinity a;
  a.n_states = w.rows();
  a.index_map.resize(w.rows());
  for (std::size_t i = 0; i < w.rows(); ++i) a.index_map[i] = i;
  a.w = std::move(w);
  return a;
}

Affinity symmetrize(const ProbabilityMatrix& t, std::size_t cmd) {
  if (!t.square()) throw ShapeError("symmetrize needs a square transition matrix");
  Affinity a;
  a.n_states = t.n_from();
  for (std::size_t i = 0; i < t.n_from(); ++i) {
    if (t.row_observed(i, cmd)) a.index_map.push_back(i);
  }
  const std::size_t n = a.index_map.size();
  a.w = Matrix(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x; y < n; ++y) {
      const std::size_t i = a.index_map[x];
      const std::size_t j = a.index_map[y];
      const double v = (t.at(i, j, cmd) + t.at(j, i, cmd)) / 2.0;
      a.w(x, y) = a.w(y, x) = v;
    }
  }
  return a;
}

Affinity symmetrize_dense(const Matrix& t, const std::vector<bool>& keep) {
  if (t.rows() != t.cols()) throw ShapeError("symmetrize needs a square matrix");
  if (keep.size() != t.rows()) throw ShapeError("node mask length mismatch");
  Affinity a;
  a.n_states = t.rows();
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (keep[i]) a.index_map.push_back(i);
  }
  const std::size_t n = a.index_map.size();
  a.w = Matrix(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x; y < n; ++y) {
      const std::size_t i = a.index_map[x];
      const std::size_t j = a.index_map[y];
      const double v = (t(i, j) + t(j, i)) / 2.0;
      a.w(x, y) = a.w(y, x) = v;
    }
  }
  return a;
}

std::vector<double> normalized_spectrum(const Affinity& w) {
  return symmetric_eigen(normalized_laplacian(w, 0.0).l).values;
}

SubgraphPartition spectral_cluster(const Affinity& w, std::size_t k, std::uint64_t seed,
                                   const SpectralOptions& opts) {
  return spectral_cluster_detailed(w, k, seed, opts).partition;
}

SpectralResult spectral_cluster_detailed(const Affinity& w, std::size_t k, std::uint64_t seed,
                                         const SpectralOptions& opts) {
  if (k < 2) throw ValidationError("spectral clustering needs k >= 2");
  Laplacian lap = normalized_laplacian(w, opts.regularization);
  const std::size_t m = lap.nodes.size();
  if (k > m) {
    throw InsufficientDataError("k=" + std::to_string(k) + " exceeds the " + std::to_string(m) +
                                " connected nodes");
  }
  EigenDecomposition eig = symmetric_eigen(lap.l);

  Matrix embed(m, k);
  for (std::size_t i = 0; i < m; ++i) {
    double norm = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      embed(i, j) = eig.vectors(i, j);
      norm += embed(i, j) * embed(i, j);
    }
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (std::size_t j = 0; j < k; ++j) embed(i, j) /= norm;
    }
  }
  KMeansOptions ko;
  ko.max_iter = opts.kmeans_max_iter;
  ClusterModel model = kmeans_fit(embed, k, seed, ko);
  std::vector<std::size_t> raw = kmeans_assign_all(model, embed);

  // Compact labels in order of first appearance so that every id is used.
  std::vector<int> remap(k, -1);
  int next = 0;
  for (std::size_t c : raw) {
    if (remap[c] < 0) remap[c] = next++;
  }
  SubgraphPartition p;
  p.k = static_cast<std::size_t>(next);
  p.labels.assign(w.size(), static_cast<int>(p.k));
  for (std::size_t i = 0; i < m; ++i) p.labels[lap.nodes[i]] = remap[raw[i]];
  if (m < w.size()) p.residual_label = static_cast<int>(p.k);
  return {std::move(p), std::move(eig.values)};
}

SubgraphPartition expand_to_states(const SubgraphPartition& p, const Affinity& w) {
  if (p.labels.size() != w.size()) throw ShapeError("partition does not match affinity size");
  SubgraphPartition out;
  out.k = p.k;
  out.labels.assign(w.n_states, static_cast<int>(p.k));
  for (std::size_t i = 0; i < w.size(); ++i) out.labels[w.index_map[i]] = p.labels[i];
  bool residual = false;
  for (int l : out.labels) residual = residual || l == static_cast<int>(p.k);
  if (residual) out.residual_label = static_cast<int>(p.k);
  return out;
}

std::size_t eigengap_suggest(const Affinity& w, std::size_t k_max) {
  if (k_max < 2) throw ValidationError("eigengap needs k_max >= 2");
  return eigengap_suggest(normalized_spectrum(w), k_max);
}

std::size_t eigengap_suggest(const std::vector<double>& lambda, std::size_t k_max) {
  if (k_max < 2) throw ValidationError("eigengap needs k_max >= 2");
  if (k_max + 1 > lambda.size()) {
    throw ValidationError("k_max=" + std::to_string(k_max) + " needs at least " +
                          std::to_string(k_max + 1) + " connected nodes, have " +
                          std::to_string(lambda.size()));
  }
  std::size_t best = 2;
  double best_gap = lambda[1] - lambda[2];
  for (std::size_t k = 3; k <= k_max; ++k) {
    const double gap = lambda[k - 1] - lambda[k];
    if (gap > best_gap + 1e-9) {
      best_gap = gap;
      best = k;
    }
  }
  // A spectrum whose widest gap follows the leading eigenvalue is one connected
  // blob; the floor value stands in for "no structure".
  if (lambda[0] - lambda[1] >= best_gap) return 2;
  return best;
}

std::string SubgraphPartition::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["labels"] = labels;
  j["residual_label"] = residual_label ? nlohmann::json(*residual_label) : nlohmann::json(nullptr);
  return j.dump();
}

SubgraphPartition SubgraphPartition::from_json(const std::string& text) {
  SubgraphPartition p;
  try {
    auto j = nlohmann::json::parse(text);
    p.k = j.at("k").get<std::size_t>();
    p.labels = j.at("labels").get<std::vector<int>>();
    if (!j.at("residual_label").is_null()) p.residual_label = j.at("residual_label").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad partition JSON: ") + e.what());
  }
  return p;
}

}  // namespace smc
