#include "smc/experiments/metrics.hpp"

#include <algorithm>
#include <map>

#include "smc/core/error.hpp"

namespace smc {

namespace {

double choose2(double n) { return n * (n - 1.0) / 2.0; }

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

long Contingency::total() const {
  long n = 0;
  for (const auto& r : table) {
    for (long c : r) n += c;
  }
  return n;
}

Contingency contingency(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) throw ShapeError("labelings differ in length");
  Contingency c;
  c.row_ids = sorted_unique(pred);
  c.col_ids = sorted_unique(truth);
  std::map<int, std::size_t> ri, ci;
  for (std::size_t i = 0; i < c.row_ids.size(); ++i) ri[c.row_ids[i]] = i;
  for (std::size_t i = 0; i < c.col_ids.size(); ++i) ci[c.col_ids[i]] = i;
  c.table.assign(c.row_ids.size(), std::vector<long>(c.col_ids.size(), 0));
  for (std::size_t i = 0; i < pred.size(); ++i) ++c.table[ri[pred[i]]][ci[truth[i]]];
  return c;
}

double adjusted_rand_index(const Contingency& c) {
  const double n = static_cast<double>(c.total());
  double index = 0.0;
  std::vector<double> rows(c.row_ids.size(), 0.0);
  std::vector<double> cols(c.col_ids.size(), 0.0);
  for (std::size_t i = 0; i < c.table.size(); ++i) {
    for (std::size_t j = 0; j < c.table[i].size(); ++j) {
      const double v = static_cast<double>(c.table[i][j]);
      index += choose2(v);
      rows[i] += v;
      cols[j] += v;
    }
  }
  double sum_a = 0.0, sum_b = 0.0;
  for (double a : rows) sum_a += choose2(a);
  for (double b : cols) sum_b += choose2(b);
  const double pairs = choose2(n);
  if (pairs == 0.0) return 1.0;
  const double expected = sum_a * sum_b / pairs;
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return 1.0;
  return (index - expected) / denom;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  return adjusted_rand_index(contingency(a, b));
}

double purity(const Contingency& c) {
  const long n = c.total();
  if (n == 0) throw InsufficientDataError("purity of an empty labeling");
  long hit = 0;
  for (const auto& r : c.table) hit += *std::max_element(r.begin(), r.end());
  return static_cast<double>(hit) / static_cast<double>(n);
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  return purity(contingency(pred, truth));
}

bool on_correspondence(std::size_t from, std::size_t to, std::size_t k, const FieldPairs& pairs) {
  if (from % k != to % k) return false;
  for (auto [a, b] : pairs) {
    if (from / k == a && to / k == b) return true;
  }
  return false;
}

std::vector<DominanceStats> diagonal_dominance(const ProbabilityMatrix& t, std::size_t k,
                                               const std::vector<FieldPairs>& tables) {
  if (k == 0 || t.n_from() % k != 0 || t.n_to() % k != 0) {
    throw ShapeError("state count is not a multiple of the cluster count");
  }
  if (tables.size() != t.n_cmd()) throw ShapeError("one correspondence table per command");
  std::vector<DominanceStats> out(t.n_cmd());
  for (std::size_t q = 0; q < t.n_cmd(); ++q) {
    double on = 0.0, off = 0.0;
    auto& s = out[q];
    for (std::size_t f = 0; f < t.n_from(); ++f) {
      for (std::size_t to = 0; to < t.n_to(); ++to) {
        if (!t.entry_observed(f, to, q)) continue;
        const double p = t.at(f, to, q);
        if (on_correspondence(f, to, k, tables[q])) {
          on += p;
          ++s.n_on;
        } else {
          off += p;
          ++s.n_off;
        }
      }
    }
    s.mean_on = s.n_on ? on / static_cast<double>(s.n_on) : 0.0;
    s.mean_off = s.n_off ? off / static_cast<double>(s.n_off) : 0.0;
    if (s.mean_off > 0.0) s.ratio = s.mean_on / s.mean_off;
  }
  return out;
}

}  // namespace smc
