#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smc/core/matrix.hpp"

namespace smc {

struct ClusterModel {
  Matrix centroids;  // K x D
  double inertia = 0.0;
  // Inertia measured after each assignment step, one entry per Lloyd iteration.
  std::vector<double> inertia_trace;
  std::size_t iterations = 0;
  bool converged = false;

  std::size_t k() const { return centroids.rows(); }
  std::size_t dim() const { return centroids.cols(); }
};

struct KMeansOptions {
  std::size_t max_iter = 300;
  double tol = 1e-6;  // on the largest centroid displacement
};

// Lloyd iterations from a k-means++ start. Deterministic for a given seed.
ClusterModel kmeans_fit(const Matrix& points, std::size_t k, std::uint64_t seed,
                        const KMeansOptions& opts = {});

// Same algorithm over points carrying positive multiplicities. Feeding distinct
// points with their counts is equivalent to feeding the expanded data set and
// much cheaper when the data repeat a lot.
ClusterModel kmeans_fit_weighted(const Matrix& points, const std::vector<double>& weights,
                                 std::size_t k, std::uint64_t seed,
                                 const KMeansOptions& opts = {});

// Nearest centroid; ties go to the lowest index.
std::size_t kmeans_assign(const ClusterModel& model, std::span<const double> point);
std::vector<std::size_t> kmeans_assign_all(const ClusterModel& model, const Matrix& points);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace smc
