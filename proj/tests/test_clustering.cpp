#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oracles.hpp"
#include "smc/clustering/eigen.hpp"
#include "smc/clustering/kmeans.hpp"
#include "smc/clustering/spectral.hpp"
#include "smc/core/error.hpp"
#include "smc/experiments/metrics.hpp"

using namespace smc;

namespace {

Matrix random_points(std::size_t n, std::size_t d, Rng& rng) {
  Matrix m(n, d);
  for (double& v : m.data()) v = rng.uniform01() * 10.0;
  return m;
}

// Exhaustive optimum of 2-means: every split into two non-empty groups.
double best_two_partition_inertia(const Matrix& pts) {
  const std::size_t n = pts.rows();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    double total = 0.0;
    for (int side = 0; side < 2; ++side) {
      std::vector<double> mean(pts.cols(), 0.0);
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (((mask >> i) & 1U) != static_cast<std::size_t>(side)) continue;
        ++count;
        for (std::size_t d = 0; d < pts.cols(); ++d) mean[d] += pts(i, d);
      }
      for (double& m : mean) m /= static_cast<double>(count);
      for (std::size_t i = 0; i < n; ++i) {
        if (((mask >> i) & 1U) == static_cast<std::size_t>(side)) total += squared_distance(pts.row(i), mean);
      }
    }
    best = std::min(best, total);
  }
  return best;
}

Matrix cliques(std::size_t n_cliques, std::size_t size) {
  return oracle::planted_blocks(n_cliques, size, 1.0, 0.0);
}

Matrix permute(const Matrix& w, const std::vector<std::size_t>& perm) {
  Matrix out(w.rows(), w.cols());
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) out(i, j) = w(perm[i], perm[j]);
  }
  return out;
}

}  // namespace

TEST(KMeans, SingleClusterIsTheMean) {
  Rng rng(1);
  const Matrix pts = random_points(50, 3, rng);
  const auto m = kmeans_fit(pts, 1, 0);
  for (std::size_t d = 0; d < 3; ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 50; ++i) mean += pts(i, d);
    EXPECT_NEAR(m.centroids(0, d), mean / 50.0, 1e-12);
  }
}

TEST(KMeans, OneClusterPerPointHasZeroInertia) {
  Rng rng(2);
  const Matrix pts = random_points(12, 2, rng);
  const auto m = kmeans_fit(pts, 12, 3);
  EXPECT_EQ(m.inertia, 0.0);
  const auto labels = kmeans_assign_all(m, pts);
  EXPECT_EQ(std::set<std::size_t>(labels.begin(), labels.end()).size(), 12u);
}

TEST(KMeans, FourPointsTwoClustersMatchExhaustiveOptimum) {
  Matrix pts(4, 2);
  const double xy[4][2] = {{0, 0}, {0, 1}, {10, 0}, {10, 1}};
  for (std::size_t i = 0; i < 4; ++i) {
    pts(i, 0) = xy[i][0];
    pts(i, 1) = xy[i][1];
  }
  const double optimum = best_two_partition_inertia(pts);
  EXPECT_DOUBLE_EQ(optimum, 1.0);
  const auto m = kmeans_fit(pts, 2, 0);
  EXPECT_NEAR(m.inertia, optimum, 1e-12);
  std::vector<std::pair<double, double>> c = {{m.centroids(0, 0), m.centroids(0, 1)},
                                              {m.centroids(1, 0), m.centroids(1, 1)}};
  std::sort(c.begin(), c.end());
  EXPECT_NEAR(c[0].first, 0.0, 1e-12);
  EXPECT_NEAR(c[0].second, 0.5, 1e-12);
  EXPECT_NEAR(c[1].first, 10.0, 1e-12);
  EXPECT_NEAR(c[1].second, 0.5, 1e-12);
}

TEST(KMeans, InertiaNeverIncreasesAcrossIterations) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 30 + rng.uniform_index(100);
    const std::size_t k = 2 + rng.uniform_index(8);
    const auto m = kmeans_fit(random_points(n, 1 + rng.uniform_index(4), rng), k, trial);
    for (std::size_t i = 1; i < m.inertia_trace.size(); ++i) {
      ASSERT_LE(m.inertia_trace[i], m.inertia_trace[i - 1] * (1 + 1e-12));
    }
  }
}

TEST(KMeans, SameSeedSameModel) {
  Rng rng(4);
  const Matrix pts = random_points(200, 2, rng);
  const auto a = kmeans_fit(pts, 7, 42);
  const auto b = kmeans_fit(pts, 7, 42);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.inertia, b.inertia);
}

TEST(KMeans, WeightsEqualRepeatedPoints) {
  Matrix distinct(3, 1);
  distinct(0, 0) = 0.0;
  distinct(1, 0) = 1.0;
  distinct(2, 0) = 5.0;
  const auto m = kmeans_fit_weighted(distinct, {3.0, 1.0, 2.0}, 1, 0);
  EXPECT_NEAR(m.centroids(0, 0), (0.0 * 3 + 1.0 + 5.0 * 2) / 6.0, 1e-12);
}

TEST(KMeans, RejectsBadInput) {
  Matrix pts(3, 2, 1.0);
  EXPECT_THROW(kmeans_fit(pts, 4, 0), InsufficientDataError);
  pts(1, 1) = std::nan("");
  EXPECT_THROW(kmeans_fit(pts, 2, 0), ValidationError);
}

TEST(KMeansAssign, PointOnCentroidAndTieBreak) {
  ClusterModel m;
  m.centroids = Matrix(5, 1);
  for (std::size_t i = 0; i < 5; ++i) m.centroids(i, 0) = static_cast<double>(i) * 10.0;
  const double on3[] = {30.0};
  EXPECT_EQ(kmeans_assign(m, on3), 3u);
  // Centroid 4 moved so that 1 and 4 are equidistant from 15.
  m.centroids(4, 0) = 20.0;
  m.centroids(2, 0) = 100.0;
  const double mid[] = {15.0};
  EXPECT_EQ(kmeans_assign(m, mid), 1u);
  const double wrong[] = {1.0, 2.0};
  EXPECT_THROW(kmeans_assign(m, wrong), ShapeError);
}

TEST(KMeansAssign, MatchesBruteForceArgmin) {
  Rng rng(5);
  const auto model = kmeans_fit(random_points(300, 3, rng), 9, 1);
  const Matrix pts = random_points(1000, 3, rng);
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.k(); ++c) {
      double d = 0.0;
      for (std::size_t j = 0; j < 3; ++j) d += std::pow(pts(i, j) - model.centroids(c, j), 2);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    ASSERT_EQ(kmeans_assign(model, pts.row(i)), best);
  }
}

TEST(Symmetrize, SymmetricInputIsUnchanged) {
  Matrix t(3, 3);
  t(0, 1) = t(1, 0) = 0.5;
  t(0, 0) = 0.5;
  t(1, 1) = 0.5;
  t(2, 2) = 1.0;
  const auto w = symmetrize(ProbabilityMatrix::from_dense(t, {true, true, true}));
  EXPECT_EQ(w.w, t);
}

TEST(Symmetrize, OneWayEdgeIsHalved) {
  Matrix t(2, 2);
  t(0, 1) = 1.0;
  t(1, 1) = 1.0;
  const auto w = symmetrize(ProbabilityMatrix::from_dense(t, {true, true}));
  EXPECT_EQ(w.w(0, 1), 0.5);
  EXPECT_EQ(w.w(1, 0), 0.5);
}

TEST(Symmetrize, MaskedRowsAreDroppedWithIndexMap) {
  TransitionCounts c(4, 4);
  c.set(0, 2, 0, 1);
  c.set(2, 0, 0, 1);
  c.set(3, 3, 0, 1);
  const auto w = symmetrize(normalize(c));
  EXPECT_EQ(w.index_map, (std::vector<std::size_t>{0, 2, 3}));
  EXPECT_EQ(w.n_states, 4u);
  EXPECT_THROW(symmetrize(normalize(TransitionCounts(2, 3))), ShapeError);
}

TEST(Symmetrize, RandomMatricesAreExactlySymmetric) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    TransitionCounts c(50, 50);
    for (int i = 0; i < 2000; ++i) c.record(rng.uniform_index(50), rng.uniform_index(50));
    const auto w = symmetrize(normalize(c));
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (std::size_t j = 0; j < w.size(); ++j) ASSERT_EQ(w.w(i, j), w.w(j, i));
    }
  }
}

TEST(Eigen, IdentityAndDiagonal) {
  const auto id = symmetric_eigen(Matrix::identity(3));
  EXPECT_EQ(id.values, (std::vector<double>{1, 1, 1}));
  Matrix d(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  const auto e = symmetric_eigen(d);
  EXPECT_EQ(e.values, (std::vector<double>{3, 2, 1}));
  const std::size_t axis[3] = {0, 2, 1};
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(e.vectors(i, j), i == axis[j] ? 1.0 : 0.0);
  }
}

TEST(Eigen, RejectsAsymmetricInput) {
  Matrix a(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(symmetric_eigen(a), ValidationError);
}

TEST(Eigen, ReconstructsRandomSymmetricMatrices) {
  Rng rng(7);
  for (std::size_t n : {1u, 2u, 5u, 30u, 64u}) {
    const Matrix a = oracle::random_symmetric(n, rng);
    const auto e = symmetric_eigen(a);
    const auto [residual, reconstruction] = oracle::eigen_errors(a, e.values, e.vectors);
    const double norm = frobenius_norm(a);
    EXPECT_LE(residual, 1e-8 * norm) << n;
    EXPECT_LE(reconstruction, 1e-8 * norm) << n;
    EXPECT_TRUE(std::is_sorted(e.values.rbegin(), e.values.rend()));
  }
}

TEST(Eigen, VectorsAreOrthonormal) {
  Rng rng(8);
  const Matrix a = oracle::random_symmetric(40, rng);
  const auto e = symmetric_eigen(a);
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = i; j < 40; ++j) {
      double dot = 0.0;
      for (std::size_t r = 0; r < 40; ++r) dot += e.vectors(r, i) * e.vectors(r, j);
      if (i == j) {
        ASSERT_LE(std::abs(std::sqrt(dot) - 1.0), 1e-10);
      } else {
        ASSERT_LE(std::abs(dot), 1e-8);
      }
    }
  }
}

TEST(Eigen, AgreesWithEigenLibrary) {
  Rng rng(9);
  const std::size_t n = 48;
  const Matrix a = oracle::random_symmetric(n, rng);
  Eigen::MatrixXd ea(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ea(i, j) = a(i, j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ea);
  const auto ours = symmetric_eigen(a);
  for (std::size_t j = 0; j < n; ++j) {
    EXPECT_NEAR(ours.values[j], solver.eigenvalues()(static_cast<Eigen::Index>(n - 1 - j)), 1e-10);
  }
}

TEST(Spectral, TwoDisconnectedCliquesSplitExactly) {
  const auto w = make_affinity(cliques(2, 5));
  const auto p = spectral_cluster(w, 2, 0);
  EXPECT_EQ(p.k, 2u);
  EXPECT_FALSE(p.residual_label.has_value());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(p.labels[i] == p.labels[0], i < 5) << i;
}

TEST(Spectral, CompleteGraphUsesBothLabels) {
  const auto p = spectral_cluster(make_affinity(cliques(1, 10)), 2, 0);
  EXPECT_EQ(std::set<int>(p.labels.begin(), p.labels.end()).size(), 2u);
}

TEST(Spectral, PlantedThreeBlocksRecoveredForFiveSeeds) {
  const auto w = make_affinity(oracle::planted_blocks(3, 20, 1.0, 0.05));
  std::vector<int> truth(60);
  for (std::size_t i = 0; i < 60; ++i) truth[i] = static_cast<int>(i / 20);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = spectral_cluster(w, 3, seed);
    EXPECT_EQ(adjusted_rand_index(p.labels, truth), 1.0) << seed;
  }
}

TEST(Spectral, RelabelingNodesPermutesThePartition) {
  Rng rng(10);
  Matrix w = oracle::planted_blocks(4, 12, 0.0, 0.0);
  for (std::size_t i = 0; i < 48; ++i) {
    for (std::size_t j = i + 1; j < 48; ++j) {
      const double base = (i / 12 == j / 12) ? 0.8 : 0.05;
      w(i, j) = w(j, i) = base * (0.5 + rng.uniform01());
    }
  }
  std::vector<std::size_t> perm(48);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 47; i > 0; --i) std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
  const auto a = spectral_cluster(make_affinity(w), 4, 3);
  const auto b = spectral_cluster(make_affinity(permute(w, perm)), 4, 3);
  std::vector<int> a_permuted(48);
  for (std::size_t i = 0; i < 48; ++i) a_permuted[i] = a.labels[perm[i]];
  EXPECT_EQ(adjusted_rand_index(a_permuted, b.labels), 1.0);
}

TEST(Spectral, IsolatedNodesGetResidualLabel) {
  Matrix w = cliques(2, 4);
  Matrix padded(9, 9);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) padded(i, j) = w(i, j);
  }
  const auto p = spectral_cluster(make_affinity(padded), 2, 0);
  ASSERT_TRUE(p.residual_label.has_value());
  EXPECT_EQ(*p.residual_label, 2);
  EXPECT_EQ(p.labels[8], 2);
  EXPECT_NE(p.labels[0], p.labels[4]);
}

TEST(Spectral, RejectsTooManyClusters) {
  EXPECT_THROW(spectral_cluster(make_affinity(cliques(1, 3)), 4, 0), InsufficientDataError);
  EXPECT_THROW(spectral_cluster(make_affinity(cliques(1, 3)), 1, 0), ValidationError);
}

TEST(Spectral, BlockDiagonalTopEigenvaluesAreOne) {
  for (std::size_t k : {2u, 3u, 6u}) {
    const auto spectrum = normalized_spectrum(make_affinity(oracle::planted_blocks(k, 5, 0.7, 0.0)));
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(spectrum[i], 1.0, 1e-8);
    EXPECT_LT(spectrum[k], 1.0 - 1e-3);
  }
}

TEST(Eigengap, CountsDisconnectedCliques) {
  EXPECT_EQ(eigengap_suggest(make_affinity(cliques(2, 5)), 5), 2u);
  EXPECT_EQ(eigengap_suggest(make_affinity(cliques(15, 4)), 20), 15u);
  EXPECT_EQ(eigengap_suggest(make_affinity(cliques(1, 10)), 5), 2u);
  EXPECT_THROW(eigengap_suggest(make_affinity(cliques(1, 3)), 1), ValidationError);
}

TEST(Eigengap, TiesGoToSmallestK) {
  EXPECT_EQ(eigengap_suggest(std::vector<double>{1.0, 1.0, 0.6, 0.2, -0.2}, 3), 2u);
  EXPECT_EQ(eigengap_suggest(std::vector<double>{1.0, 1.0, 1.0, 0.2, -0.2}, 3), 3u);
}

TEST(Eigengap, SingleBlobFallsBackToTwo) {
  EXPECT_EQ(eigengap_suggest(std::vector<double>{1.0, 0.1, 0.05, -0.3, -0.4}, 3), 2u);
}

TEST(SubgraphPartition, JsonRoundTrip) {
  SubgraphPartition p{3, {0, 1, 2, 3, 1}, 3};
  EXPECT_EQ(SubgraphPartition::from_json(p.to_json()), p);
  SubgraphPartition q{2, {0, 1}, std::nullopt};
  EXPECT_EQ(SubgraphPartition::from_json(q.to_json()), q);
}
