#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "smc/core/matrix.hpp"

namespace smc {

// Dense count tensor shaped n_from x n_to x n_cmd (n_cmd = 1 for the absolute
// form). Counts are order-free sufficient statistics: partial counts built
// independently merge with operator+=.
class TransitionCounts {
 public:
  TransitionCounts() = default;
  TransitionCounts(std::size_t n_from, std::size_t n_to, std::size_t n_cmd = 1);

  void record(std::size_t from, std::size_t to, std::size_t cmd = 0);

  std::uint64_t at(std::size_t from, std::size_t to, std::size_t cmd = 0) const;
  std::span<const std::uint64_t> row(std::size_t from, std::size_t cmd = 0) const;
  std::uint64_t total() const { return total_; }

  std::size_t n_from() const { return n_from_; }
  std::size_t n_to() const { return n_to_; }
  std::size_t n_cmd() const { return n_cmd_; }

  TransitionCounts& operator+=(const TransitionCounts& other);
  bool operator==(const TransitionCounts&) const = default;

  // Direct write used when loading counts from disk.
  void set(std::size_t from, std::size_t to, std::size_t cmd, std::uint64_t value);

 private:
  std::size_t offset(std::size_t from, std::size_t to, std::size_t cmd) const;

  std::size_t n_from_ = 0;
  std::size_t n_to_ = 0;
  std::size_t n_cmd_ = 0;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> counts_;
};

// Functional form: returns `counts` with one extra transition recorded.
TransitionCounts record_transition(TransitionCounts counts, std::size_t from, std::size_t to,
                                   std::size_t cmd = 0);

// Row-normalized maximum-likelihood estimate of P(to | from, cmd).
//
// Columns may be split into equal groups of `group_size`; each group of a row is
// then normalized (and masked) on its own. The ordinary case has a single group
// spanning all columns. Unobserved (from, cmd, group) cells are all-zero and
// masked.
class ProbabilityMatrix {
 public:
  ProbabilityMatrix() = default;
  ProbabilityMatrix(std::size_t n_from, std::size_t n_to, std::size_t n_cmd,
                    std::size_t group_size);

  // 2D matrix from explicit values; rows flagged false are forced to zero.
  static ProbabilityMatrix from_dense(const Matrix& probs, const std::vector<bool>& observed);

  double at(std::size_t from, std::size_t to, std::size_t cmd = 0) const;
  std::span<const double> row(std::size_t from, std::size_t cmd = 0) const;

  bool observed(std::size_t from, std::size_t cmd = 0, std::size_t group = 0) const;
  // True when any group of the row is observed.
  bool row_observed(std::size_t from, std::size_t cmd = 0) const;
  bool entry_observed(std::size_t from, std::size_t to, std::size_t cmd = 0) const {
    return observed(from, cmd, to / group_size_);
  }

  std::size_t n_from() const { return n_from_; }
  std::size_t n_to() const { return n_to_; }
  std::size_t n_cmd() const { return n_cmd_; }
  std::size_t group_size() const { return group_size_; }
  std::size_t n_groups() const { return n_to_ / group_size_; }
  bool square() const { return n_from_ == n_to_; }

  // Copy of one command slice as a dense n_from x n_to matrix.
  Matrix slice(std::size_t cmd = 0) const;

  bool operator==(const ProbabilityMatrix&) const = default;

  void set(std::size_t from, std::size_t to, std::size_t cmd, double value);
  void set_observed(std::size_t from, std::size_t cmd, std::size_t group, bool value);

 private:
  std::size_t offset(std::size_t from, std::size_t to, std::size_t cmd) const;

  std::size_t n_from_ = 0;
  std::size_t n_to_ = 0;
  std::size_t n_cmd_ = 0;
  std::size_t group_size_ = 1;
  std::vector<double> probs_;
  std::vector<bool> observed_;
};

ProbabilityMatrix normalize(const TransitionCounts& counts);
ProbabilityMatrix normalize_grouped(const TransitionCounts& counts, std::size_t group_size);

// CSV layout: header row and first column carry state ids; masked cells are
// written as "NA". 2D tensors go to `<stem>.csv`, 3D tensors to one file per
// command slice, `<stem>_cmd<q>.csv`. Values use 17 significant digits so a
// round trip is exact.
std::vector<std::filesystem::path> write_csv(const ProbabilityMatrix& probs,
                                             const std::filesystem::path& stem);
std::vector<std::filesystem::path> write_csv(const TransitionCounts& counts,
                                             const std::filesystem::path& stem);

// Reads one 2D probability CSV. "NA" cells mark the row unobserved.
ProbabilityMatrix read_probability_csv(const std::filesystem::path& path);
// Reads count CSVs written by write_csv (one file for 2D, n_cmd slices otherwise).
TransitionCounts read_counts_csv(const std::filesystem::path& stem, std::size_t n_cmd);

}  // namespace smc
