#include "smc/core/transitions.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "smc/core/error.hpp"

namespace smc {

namespace {

std::string index_error(std::size_t from, std::size_t to, std::size_t cmd, std::size_t nf,
                        std::size_t nt, std::size_t nc) {
  std::ostringstream os;
  os << "transition (" << from << ", " << to << ", " << cmd << ") outside shape " << nf << "x"
     << nt << "x" << nc;
  return os.str();
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw ValidationError(path.string() + ": empty CSV");
  const std::size_t width = rows.front().size();
  if (width < 2) throw ValidationError(path.string() + ": no columns");
  for (const auto& r : rows) {
    if (r.size() != width) throw ValidationError(path.string() + ": ragged CSV");
  }
  return rows;
}

std::vector<std::filesystem::path> slice_paths(const std::filesystem::path& stem,
                                               std::size_t n_cmd) {
  std::vector<std::filesystem::path> paths;
  if (n_cmd == 1) {
    paths.push_back(stem.string() + ".csv");
  } else {
    for (std::size_t q = 0; q < n_cmd; ++q) {
      paths.push_back(stem.string() + "_cmd" + std::to_string(q) + ".csv");
    }
  }
  return paths;
}

void write_header(std::ostream& out, std::size_t n_to) {
  out << "from\\to";
  for (std::size_t t = 0; t < n_to; ++t) out << ',' << t;
  out << '\n';
}

}  // namespace

TransitionCounts::TransitionCounts(std::size_t n_from, std::size_t n_to, std::size_t n_cmd)
    : n_from_(n_from), n_to_(n_to), n_cmd_(n_cmd), counts_(n_from * n_to * n_cmd, 0) {
  if (n_cmd == 0) throw ShapeError("transition counts need at least one command slice");
}

std::size_t TransitionCounts::offset(std::size_t from, std::size_t to, std::size_t cmd) const {
  if (from >= n_from_ || to >= n_to_ || cmd >= n_cmd_) {
    throw ShapeError(index_error(from, to, cmd, n_from_, n_to_, n_cmd_));
  }
  return (cmd * n_from_ + from) * n_to_ + to;
}

void TransitionCounts::record(std::size_t from, std::size_t to, std::size_t cmd) {
  ++counts_[offset(from, to, cmd)];
  ++total_;
}

void TransitionCounts::set(std::size_t from, std::size_t to, std::size_t cmd,
                           std::uint64_t value) {
  auto& slot = counts_[offset(from, to, cmd)];
  total_ = total_ - slot + value;
  slot = value;
}

std::uint64_t TransitionCounts::at(std::size_t from, std::size_t to, std::size_t cmd) const {
  return counts_[offset(from, to, cmd)];
}

std::span<const std::uint64_t> TransitionCounts::row(std::size_t from, std::size_t cmd) const {
  if (n_to_ == 0) return {};
  return {counts_.data() + offset(from, 0, cmd), n_to_};
}

TransitionCounts& TransitionCounts::operator+=(const TransitionCounts& other) {
  if (other.n_from_ != n_from_ || other.n_to_ != n_to_ || other.n_cmd_ != n_cmd_) {
    throw ShapeError("cannot merge transition counts of different shapes");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
  return *this;
}

TransitionCounts record_transition(TransitionCounts counts, std::size_t from, std::size_t to,
                                   std::size_t cmd) {
  counts.record(from, to, cmd);
  return counts;
}

ProbabilityMatrix::ProbabilityMatrix(std::size_t n_from, std::size_t n_to, std::size_t n_cmd,
                                     std::size_t group_size)
    : n_from_(n_from),
      n_to_(n_to),
      n_cmd_(n_cmd),
      group_size_(group_size),
      probs_(n_from * n_to * n_cmd, 0.0) {
  if (n_cmd == 0) throw ShapeError("probability matrix needs at least one command slice");
  if (group_size == 0 || n_to % group_size != 0) {
    throw ShapeError("column group size must divide the number of columns");
  }
  observed_.assign(n_from * n_cmd * (n_to / group_size), false);
}

ProbabilityMatrix ProbabilityMatrix::from_dense(const Matrix& probs,
                                                const std::vector<bool>& observed) {
  if (observed.size() != probs.rows()) throw ShapeError("row mask length mismatch");
  if (probs.cols() == 0) throw ShapeError("probability matrix without columns");
  ProbabilityMatrix out(probs.rows(), probs.cols(), 1, probs.cols());
  for (std::size_t f = 0; f < probs.rows(); ++f) {
    out.set_observed(f, 0, 0, observed[f]);
    if (!observed[f]) continue;
    for (std::size_t t = 0; t < probs.cols(); ++t) out.set(f, t, 0, probs(f, t));
  }
  return out;
}

std::size_t ProbabilityMatrix::offset(std::size_t from, std::size_t to, std::size_t cmd) const {
  if (from >= n_from_ || to >= n_to_ || cmd >= n_cmd_) {
    throw ShapeError(index_error(from, to, cmd, n_from_, n_to_, n_cmd_));
  }
  return (cmd * n_from_ + from) * n_to_ + to;
}

double ProbabilityMatrix::at(std::size_t from, std::size_t to, std::size_t cmd) const {
  return probs_[offset(from, to, cmd)];
}

std::span<const double> ProbabilityMatrix::row(std::size_t from, std::size_t cmd) const {
  return {probs_.data() + offset(from, 0, cmd), n_to_};
}

void ProbabilityMatrix::set(std::size_t from, std::size_t to, std::size_t cmd, double value) {
  probs_[offset(from, to, cmd)] = value;
}

bool ProbabilityMatrix::observed(std::size_t from, std::size_t cmd, std::size_t group) const {
  if (from >= n_from_ || cmd >= n_cmd_ || group >= n_groups()) {
    throw ShapeError("observed-row query out of range");
  }
  return observed_[(cmd * n_from_ + from) * n_groups() + group];
}

bool ProbabilityMatrix::row_observed(std::size_t from, std::size_t cmd) const {
  for (std::size_t g = 0; g < n_groups(); ++g) {
    if (observed(from, cmd, g)) return true;
  }
  return false;
}

void ProbabilityMatrix::set_observed(std::size_t from, std::size_t cmd, std::size_t group,
                                     bool value) {
  if (from >= n_from_ || cmd >= n_cmd_ || group >= n_groups()) {
    throw ShapeError("observed-row index out of range");
  }
  observed_[(cmd * n_from_ + from) * n_groups() + group] = value;
}

Matrix ProbabilityMatrix::slice(std::size_t cmd) const {
  Matrix m(n_from_, n_to_);
  for (std::size_t f = 0; f < n_from_; ++f) {
    auto r = row(f, cmd);
    for (std::size_t t = 0; t < n_to_; ++t) m(f, t) = r[t];
  }
  return m;
}

ProbabilityMatrix normalize_grouped(const TransitionCounts& counts, std::size_t group_size) {
  ProbabilityMatrix out(counts.n_from(), counts.n_to(), counts.n_cmd(), group_size);
  for (std::size_t q = 0; q < counts.n_cmd(); ++q) {
    for (std::size_t f = 0; f < counts.n_from(); ++f) {
      auto r = counts.row(f, q);
      for (std::size_t g = 0; g < out.n_groups(); ++g) {
        const std::size_t lo = g * group_size;
        std::uint64_t sum = 0;
        for (std::size_t t = lo; t < lo + group_size; ++t) sum += r[t];
        if (sum == 0) continue;
        out.set_observed(f, q, g, true);
        const double denom = static_cast<double>(sum);
        for (std::size_t t = lo; t < lo + group_size; ++t) {
          out.set(f, t, q, static_cast<double>(r[t]) / denom);
        }
      }
    }
  }
  return out;
}

ProbabilityMatrix normalize(const TransitionCounts& counts) {
  if (counts.n_to() == 0) throw ShapeError("cannot normalize counts without columns");
  return normalize_grouped(counts, counts.n_to());
}

std::vector<std::filesystem::path> write_csv(const ProbabilityMatrix& probs,
                                             const std::filesystem::path& stem) {
  auto paths = slice_paths(stem, probs.n_cmd());
  for (std::size_t q = 0; q < probs.n_cmd(); ++q) {
    std::ofstream out(paths[q]);
    if (!out) throw ConfigError("cannot write " + paths[q].string());
    write_header(out, probs.n_to());
    for (std::size_t f = 0; f < probs.n_from(); ++f) {
      out << f;
      for (std::size_t t = 0; t < probs.n_to(); ++t) {
        out << ',';
        if (probs.entry_observed(f, t, q)) {
          out << fmt_double(probs.at(f, t, q));
        } else {
          out << "NA";
        }
      }
      out << '\n';
    }
  }
  return paths;
}

std::vector<std::filesystem::path> write_csv(const TransitionCounts& counts,
                                             const std::filesystem::path& stem) {
  auto paths = slice_paths(stem, counts.n_cmd());
  for (std::size_t q = 0; q < counts.n_cmd(); ++q) {
    std::ofstream out(paths[q]);
    if (!out) throw ConfigError("cannot write " + paths[q].string());
    write_header(out, counts.n_to());
    for (std::size_t f = 0; f < counts.n_from(); ++f) {
      out << f;
      for (auto c : counts.row(f, q)) out << ',' << c;
      out << '\n';
    }
  }
  return paths;
}

ProbabilityMatrix read_probability_csv(const std::filesystem::path& path) {
  auto rows = read_table(path);
  const std::size_t n_to = rows.front().size() - 1;
  const std::size_t n_from = rows.size() - 1;
  Matrix m(n_from, n_to);
  std::vector<bool> observed(n_from, true);
  for (std::size_t f = 0; f < n_from; ++f) {
    const auto& r = rows[f + 1];
    for (std::size_t t = 0; t < n_to; ++t) {
      const std::string& cell = r[t + 1];
      if (cell == "NA") {
        observed[f] = false;
        continue;
      }
      try {
        std::size_t used = 0;
        m(f, t) = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ValidationError(path.string() + ": bad probability cell '" + cell + "'");
      }
    }
  }
  return ProbabilityMatrix::from_dense(m, observed);
}

TransitionCounts read_counts_csv(const std::filesystem::path& stem, std::size_t n_cmd) {
  auto paths = slice_paths(stem, n_cmd);
  TransitionCounts counts;
  for (std::size_t q = 0; q < n_cmd; ++q) {
    auto rows = read_table(paths[q]);
    const std::size_t n_to = rows.front().size() - 1;
    const std::size_t n_from = rows.size() - 1;
    if (q == 0) {
      counts = TransitionCounts(n_from, n_to, n_cmd);
    } else if (n_from != counts.n_from() || n_to != counts.n_to()) {
      throw ShapeError(paths[q].string() + ": slice shape differs from the first slice");
    }
    for (std::size_t f = 0; f < n_from; ++f) {
      for (std::size_t t = 0; t < n_to; ++t) {
        const std::string& cell = rows[f + 1][t + 1];
        try {
          std::size_t used = 0;
          auto v = std::stoull(cell, &used);
          if (used != cell.size() || cell.front() == '-') throw std::invalid_argument(cell);
          counts.set(f, t, q, v);
        } catch (const std::exception&) {
          throw ValidationError(paths[q].string() + ": bad count cell '" + cell + "'");
        }
      }
    }
  }
  return counts;
}

}  // namespace smc
