#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "oracles.hpp"
#include "smc/core/error.hpp"
#include "smc/experiments/env_discovery.hpp"
#include "smc/experiments/metrics.hpp"
#include "smc/experiments/object_discovery.hpp"
#include "smc/experiments/visual_field.hpp"

using namespace smc;

namespace {

EnvDiscoveryConfig desk_env(std::size_t n_states, std::uint64_t seed) {
  EnvDiscoveryConfig c;
  c.wall.n_env_states = n_states;
  c.K = 60;
  c.k_subgraphs = n_states;
  c.steps = 20000;
  c.seed = seed;
  return c;
}

ObjectDiscoveryConfig desk_objects() {
  ObjectDiscoveryConfig c;
  c.grid.width = 40;
  c.grid.height = 40;
  c.grid.object_side = 8;
  c.n_scenes = 60;
  c.steps_per_scene = 2000;
  c.initial_steps = 20000;
  c.tau_samples = 20000;
  c.link_radius = 5;
  c.link_horizon = 200;
  return c;
}

// Counts where every correspondence entry of every saccade carries `on`
// transitions and every other entry `off`.
TransitionCounts correspondence_counts(std::size_t k, std::uint64_t on, std::uint64_t off) {
  RetinaWorldConfig rc;
  const std::size_t n = kRetinaFields * k;
  TransitionCounts c(n, n, kSaccades);
  for (std::size_t q = 0; q < kSaccades; ++q) {
    const auto pairs = correspondence_table(rc, MotorDelta{q});
    for (std::size_t f = 0; f < n; ++f) {
      for (std::size_t t = 0; t < n; ++t) {
        c.set(f, t, q, on_correspondence(f, t, k, pairs) ? on : off);
      }
    }
  }
  return c;
}

}  // namespace

TEST(Ari, IdenticalAndRelabeledPartitionsScoreOne) {
  const std::vector<int> x = {0, 0, 1, 1, 2, 2, 2, 0, 1};
  std::vector<int> renamed;
  for (int v : x) renamed.push_back((v + 1) * 7 % 5);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(x, x), 1.0);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(x, renamed), 1.0);
}

TEST(Ari, MatchesPairCountingOnFixedLabelings) {
  const std::vector<int> a = {0, 0, 0, 1, 1, 1, 2, 2, 2, 2};
  const std::vector<int> b = {0, 0, 1, 1, 1, 2, 2, 2, 0, 2};
  EXPECT_NEAR(adjusted_rand_index(a, b), oracle::pair_count_ari(a, b), 1e-12);
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> u(40), v(40);
    for (auto& x : u) x = static_cast<int>(rng.uniform_index(4));
    for (auto& x : v) x = static_cast<int>(rng.uniform_index(3));
    ASSERT_NEAR(adjusted_rand_index(u, v), oracle::pair_count_ari(u, v), 1e-12);
  }
  EXPECT_THROW(adjusted_rand_index(a, std::vector<int>{0}), ShapeError);
}

TEST(Purity, Examples) {
  const std::vector<int> t = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(purity(t, t), 1.0);
  EXPECT_DOUBLE_EQ(purity({5, 5, 5, 5}, t), 0.5);
  EXPECT_THROW(purity({0}, t), ShapeError);
}

TEST(Purity, RandomLabelsNearOneThird) {
  Rng rng(2);
  std::vector<int> pred(3000), truth(3000);
  for (std::size_t i = 0; i < 3000; ++i) {
    truth[i] = static_cast<int>(i % 3);
    pred[i] = static_cast<int>(rng.uniform_index(3));
  }
  EXPECT_NEAR(purity(pred, truth), 1.0 / 3.0, 0.03);
}

TEST(Contingency, CountsPairs) {
  const auto c = contingency({1, 1, 0, 2}, {5, 6, 5, 5});
  EXPECT_EQ(c.row_ids, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(c.col_ids, (std::vector<int>{5, 6}));
  EXPECT_EQ(c.table, (std::vector<std::vector<long>>{{1, 0}, {1, 1}, {1, 0}}));
  EXPECT_EQ(c.total(), 4);
}

TEST(DiagonalDominance, PerfectCorrespondenceHasNoRatio) {
  const std::size_t k = 10;
  const auto t = normalize_grouped(correspondence_counts(k, 3, 0), k);
  std::vector<FieldPairs> tables;
  for (std::size_t q = 0; q < kSaccades; ++q) tables.push_back(correspondence_table({}, MotorDelta{q}));
  for (const auto& d : diagonal_dominance(t, k, tables)) {
    EXPECT_DOUBLE_EQ(d.mean_on, 1.0);
    EXPECT_DOUBLE_EQ(d.mean_off, 0.0);
    EXPECT_FALSE(d.ratio.has_value());
  }
}

TEST(DiagonalDominance, UniformMatrixHasRatioOne) {
  const std::size_t k = 10;
  const auto t = normalize_grouped(correspondence_counts(k, 1, 1), k);
  std::vector<FieldPairs> tables;
  for (std::size_t q = 0; q < kSaccades; ++q) tables.push_back(correspondence_table({}, MotorDelta{q}));
  for (const auto& d : diagonal_dominance(t, k, tables)) {
    ASSERT_TRUE(d.ratio.has_value());
    EXPECT_NEAR(*d.ratio, 1.0, 1e-12);
  }
}

TEST(EnvDiscovery, TwoStatesDeskScaleIsRecoveredExactly) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto r = run_env_discovery(desk_env(2, seed));
    EXPECT_EQ(r.ari, 1.0) << seed;
    EXPECT_EQ(r.purity, 1.0) << seed;
    EXPECT_EQ(r.n_transitions, 19999u);
  }
}

TEST(EnvDiscovery, StaticWallIsDegenerate) {
  auto c = desk_env(3, 0);
  c.wall.p_env = 0.0;
  c.K = 20;
  c.k_subgraphs = 0;
  const auto r = run_env_discovery(c);
  EXPECT_EQ(r.analysis.eigengap_k, 2u);
  EXPECT_EQ(r.analysis.k_used, 2u);
  EXPECT_TRUE(r.analysis.degenerate);
}

TEST(EnvDiscovery, TooManyClustersIsInsufficientData) {
  auto c = desk_env(2, 0);
  c.steps = 50;
  c.K = 200;
  EXPECT_THROW(run_env_discovery(c), InsufficientDataError);
}

TEST(EnvDiscovery, AnalysisIsAFunctionOfTheCounts) {
  const auto r = run_env_discovery(desk_env(3, 4));
  const auto again = analyze_env_counts(r.counts, 3, 20, 4);
  EXPECT_EQ(again.partition, r.analysis.partition);
  EXPECT_EQ(again.transitions, r.analysis.transitions);
}

TEST(ObjectDiscovery, SingleObjectWithChangingBackground) {
  auto c = desk_objects();
  c.grid.n_objects = 1;
  c.grid.p_env_redraw = 1.0;
  c.k_subgraphs = 2;
  const auto r = run_object_discovery(c);
  ASSERT_EQ(r.matches.size(), 1u);
  const auto& m = r.matches[0];
  EXPECT_GE(m.purity, 0.95);
  EXPECT_GE(m.coverage, 0.9);
  double object_p = 0.0, other_p = 1.0;
  for (const auto& s : r.analysis.subgraphs) {
    if (s.label == m.label) object_p = s.mean_tried_probability;
    else other_p = std::min(other_p, s.mean_tried_probability);
  }
  EXPECT_GT(object_p, 0.9);
  EXPECT_LT(other_p, object_p);
  // Background states are either masked out or left in a separate subgraph.
  for (std::size_t i = 0; i < r.n_states; ++i) {
    if (r.state_truth[i] == kTruthBackground) EXPECT_NE(r.analysis.partition.labels[i], m.label) << i;
  }
}

TEST(ObjectDiscovery, RigidObjectLinksAlwaysSucceed) {
  auto c = desk_objects();
  c.grid.n_objects = 2;
  c.overlap = false;
  c.salient_fraction = 0.5;  // more interior states, more links to check
  const auto r = run_object_discovery(c);
  std::size_t checked = 0;
  for (const auto& l : r.links) {
    const int a = r.state_truth[l.from];
    if (a < 0 || r.state_truth[l.to] != a || l.trials == 0) continue;
    ++checked;
    EXPECT_EQ(l.successes, l.trials) << l.from << "->" << l.to;
  }
  EXPECT_GT(checked, 500u);
}

TEST(ObjectDiscovery, OneSceneIsInsufficientEvidence) {
  auto c = desk_objects();
  c.n_scenes = 1;
  EXPECT_THROW(run_object_discovery(c), InsufficientDataError);
}

TEST(ObjectDiscovery, AnalysisIsAFunctionOfTheLinks) {
  const auto c = desk_objects();
  const auto r = run_object_discovery(c);
  const auto again = analyze_object_links(r.n_states, r.links, c.min_trials, c.k_subgraphs,
                                          c.regularization, c.seed);
  EXPECT_EQ(again.partition, r.analysis.partition);
  EXPECT_EQ(again.pair_trials, r.analysis.pair_trials);
}

TEST(ObjectDiscovery, SubgraphSummaryMeans) {
  SubgraphPartition p{2, {0, 0, 1}, std::nullopt};
  // 3x3 row-major trials / successes.
  const std::vector<std::uint64_t> trials = {0, 10, 2, 4, 0, 0, 0, 0, 0};
  const std::vector<std::uint64_t> successes = {0, 8, 2, 2, 0, 0, 0, 0, 0};
  const auto s = summarize_subgraphs(p, trials, successes, 5);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].size, 2u);
  EXPECT_EQ(s[0].observed_entries, 1u);
  EXPECT_DOUBLE_EQ(s[0].mean_probability, 0.8);
  EXPECT_EQ(s[0].tried_entries, 2u);
  EXPECT_DOUBLE_EQ(s[0].mean_tried_probability, (0.8 + 0.5) / 2);
  EXPECT_EQ(s[1].tried_entries, 0u);
}

TEST(VisualField, ConstantInputPredictsItself) {
  const std::size_t k = 2;
  const std::size_t n = kRetinaFields * k;
  RetinaWorldConfig rc;
  // Every patch falls in cluster 0, as on an all-black scene.
  TransitionCounts c(n, n, kSaccades);
  for (std::size_t q = 0; q < kSaccades; ++q) {
    for (std::size_t a = 0; a < kRetinaFields; ++a) {
      for (std::size_t b = 0; b < kRetinaFields; ++b) c.set(a * k, b * k, q, 25);
    }
  }
  const auto a = analyze_visual_counts(c, rc, k, 10);
  for (std::size_t q = 0; q < kSaccades; ++q) {
    for (const auto& [fa, fb] : a.tables[q]) EXPECT_EQ(a.transitions.at(fa * k, fb * k, q), 1.0);
    EXPECT_DOUBLE_EQ(a.dominance[q].mean_on, 1.0);
  }
}

TEST(VisualField, BlackScenesHaveTooFewPatches) {
  VisualFieldConfig c;
  c.retina.square_count = 0;
  c.n_scenes = 2;
  c.steps_per_scene = 100;
  EXPECT_THROW(run_visual_field(c), InsufficientDataError);
}

TEST(VisualField, WrongShapeIsRejected) {
  EXPECT_THROW(analyze_visual_counts(TransitionCounts(40, 40, 4), {}, 10, 50), ShapeError);
}

TEST(VisualField, NoiseScenesKeepOnlyCorrespondence) {
  VisualFieldConfig c;
  c.retina.noise_mode = true;
  c.n_scenes = 20;
  const auto r = run_visual_field(c);
  EXPECT_TRUE(r.analysis.rows_dominate);
  for (const auto& e : r.analysis.high_entries) EXPECT_TRUE(e.on_diagonal);
  EXPECT_EQ(r.counts.total(), r.n_transitions * kRetinaFields * kRetinaFields);
}

TEST(Parallel, SceneLoopsDoNotDependOnThreadCount) {
  VisualFieldConfig v;
  v.n_scenes = 12;
  v.steps_per_scene = 500;
  auto v4 = v;
  v4.jobs = 4;
  EXPECT_EQ(run_visual_field(v).counts, run_visual_field(v4).counts);

  auto o = desk_objects();
  auto o4 = o;
  o4.jobs = 4;
  const auto a = run_object_discovery(o);
  const auto b = run_object_discovery(o4);
  EXPECT_EQ(a.analysis.pair_trials, b.analysis.pair_trials);
  EXPECT_EQ(a.analysis.partition, b.analysis.partition);
}
