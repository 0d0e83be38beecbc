#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "smc/core/transitions.hpp"

namespace smc {

// Cross-tabulation of two labelings. Row ids come from `pred`, column ids from
// `truth`, both sorted ascending.
struct Contingency {
  std::vector<int> row_ids;
  std::vector<int> col_ids;
  std::vector<std::vector<long>> table;

  long total() const;
  bool operator==(const Contingency&) const = default;
};

Contingency contingency(const std::vector<int>& pred, const std::vector<int>& truth);

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);
double adjusted_rand_index(const Contingency& c);

double purity(const std::vector<int>& pred, const std::vector<int>& truth);
double purity(const Contingency& c);

struct DominanceStats {
  double mean_on = 0.0;
  double mean_off = 0.0;
  std::optional<double> ratio;  // empty when mean_off == 0
  std::size_t n_on = 0;
  std::size_t n_off = 0;
};

using FieldPairs = std::vector<std::pair<std::size_t, std::size_t>>;

// `t` has (field, cluster) states, index field * k + cluster, and one command
// slice per entry of `tables`. On-entries are (a,c) -> (b,c) for every listed
// field pair (a,b); everything else observed is off.
std::vector<DominanceStats> diagonal_dominance(const ProbabilityMatrix& t, std::size_t k,
                                               const std::vector<FieldPairs>& tables);

bool on_correspondence(std::size_t from, std::size_t to, std::size_t k, const FieldPairs& pairs);

}  // namespace smc
