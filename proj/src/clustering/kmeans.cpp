#include "smc/clustering/kmeans.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "smc/core/error.hpp"
#include "smc/core/rng.hpp"

namespace smc {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace {

std::size_t nearest(const Matrix& centroids, std::span<const double> p, double* dist) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(p, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

void copy_row(Matrix& dst, std::size_t r, std::span<const double> src) {
  auto out = dst.row(r);
  for (std::size_t i = 0; i < src.size(); ++i) out[i] = src[i];
}

// Greedy k-means++: each new centre is the best of a few D^2-weighted candidates,
// judged by the weighted potential it leaves behind.
Matrix plusplus_init(const Matrix& points, const std::vector<double>& w, std::size_t k,
                     Rng& rng) {
  const std::size_t n = points.rows();
  Matrix centroids(k, points.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(n, false);
  const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));

  auto pick = [&](double total, const std::vector<double>& mass) -> std::size_t {
    double r = rng.uniform01() * total;
    std::size_t last = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (mass[i] <= 0.0) continue;
      last = i;
      if (r < mass[i]) return i;
      r -= mass[i];
    }
    return last;  // rounding pushed r past the end
  };

  double wsum = 0.0;
  for (double x : w) wsum += x;
  std::size_t next = pick(wsum, w);
  std::vector<double> mass(n), cand_d2(n), best_d2(n);
  for (std::size_t c = 0;; ++c) {
    chosen[next] = true;
    copy_row(centroids, c, points.row(next));
    if (c == 0) {
      for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points.row(i), centroids.row(0));
    }
    if (c + 1 == k) break;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mass[i] = w[i] * d2[i];
      total += mass[i];
    }
    if (!(total > 0.0)) {
      // Fewer distinct points than clusters: fall back to the next unused index.
      next = 0;
      while (chosen[next]) ++next;
      for (std::size_t i = 0; i < n; ++i) {
        d2[i] = std::min(d2[i], squared_distance(points.row(i), points.row(next)));
      }
      continue;
    }
    double best_pot = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      const std::size_t cand = pick(total, mass);
      double pot = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cand_d2[i] = std::min(d2[i], squared_distance(points.row(i), points.row(cand)));
        pot += w[i] * cand_d2[i];
      }
      if (pot < best_pot) {
        best_pot = pot;
        next = cand;
        best_d2.swap(cand_d2);
      }
    }
    d2.swap(best_d2);
  }
  return centroids;
}

}  // namespace

ClusterModel kmeans_fit_weighted(const Matrix& points, const std::vector<double>& weights,
                                 std::size_t k, std::uint64_t seed, const KMeansOptions& opts) {
  const std::size_t n = points.rows();
  const std::size_t dim = points.cols();
  if (k == 0) throw ValidationError("k-means needs k >= 1");
  if (weights.size() != n) throw ShapeError("weight vector length differs from point count");
  if (n < k) {
    throw InsufficientDataError("k-means with k=" + std::to_string(k) + " on " +
                                std::to_string(n) + " points");
  }
  for (double v : points.data()) {
    if (!std::isfinite(v)) throw ValidationError("k-means input contains a non-finite value");
  }
  for (double x : weights) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("k-means weights must be positive");
  }

  Rng rng = Rng::stream(seed, "kmeans++");
  ClusterModel model;
  model.centroids = plusplus_init(points, weights, k, rng);

  std::vector<std::size_t> label(n, 0);
  std::vector<double> dist(n, 0.0);
  Matrix sums(k, dim);
  std::vector<double> mass(k, 0.0);

  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      label[i] = nearest(model.centroids, points.row(i), &dist[i]);
      inertia += weights[i] * dist[i];
    }
    model.inertia_trace.push_back(inertia);
    ++model.iterations;

    std::fill(sums.data().begin(), sums.data().end(), 0.0);
    std::fill(mass.begin(), mass.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto s = sums.row(label[i]);
      auto p = points.row(i);
      for (std::size_t j = 0; j < dim; ++j) s[j] += weights[i] * p[j];
      mass[label[i]] += weights[i];
    }

    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (mass[c] == 0.0) continue;
      auto cen = model.centroids.row(c);
      double d = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double v = sums(c, j) / mass[c];
        d += (v - cen[j]) * (v - cen[j]);
        cen[j] = v;
      }
      shift = std::max(shift, std::sqrt(d));
    }
    // Empty clusters move to the point worst served by its current centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (mass[c] != 0.0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = squared_distance(points.row(i), model.centroids.row(label[i]));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far_d <= 0.0) continue;  // every point already sits on a centroid
      auto cen = model.centroids.row(c);
      shift = std::max(shift, std::sqrt(squared_distance(cen, points.row(far))));
      copy_row(model.centroids, c, points.row(far));
      label[far] = c;
    }
    if (shift < opts.tol) {
      model.converged = true;
      break;
    }
  }

  double inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    nearest(model.centroids, points.row(i), &d);
    inertia += weights[i] * d;
  }
  model.inertia = inertia;
  return model;
}

ClusterModel kmeans_fit(const Matrix& points, std::size_t k, std::uint64_t seed,
                        const KMeansOptions& opts) {
  return kmeans_fit_weighted(points, std::vector<double>(points.rows(), 1.0), k, seed, opts);
}

std::size_t kmeans_assign(const ClusterModel& model, std::span<const double> point) {
  if (point.size() != model.dim()) {
    throw ShapeError("point has dimension " + std::to_string(point.size()) + ", model expects " +
                     std::to_string(model.dim()));
  }
  return nearest(model.centroids, point, nullptr);
}

std::vector<std::size_t> kmeans_assign_all(const ClusterModel& model, const Matrix& points) {
  std::vector<std::size_t> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) out[i] = kmeans_assign(model, points.row(i));
  return out;
}

}  // namespace smc
