#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "smc/core/matrix.hpp"
#include "smc/core/transitions.hpp"

namespace smc {

struct Heatmap {
  Matrix values;
  std::vector<bool> masked;          // row-major, drawn grey
  std::vector<std::size_t> row_ids;  // axis labels
  std::vector<std::size_t> col_ids;
  std::string title;
};

// Rows and columns taken in `order` (all states when empty).
Heatmap make_heatmap(const ProbabilityMatrix& t, std::size_t cmd,
                     const std::vector<std::size_t>& order = {});
Heatmap make_heatmap(const Matrix& t, const std::vector<bool>& observed,
                     const std::vector<std::size_t>& order = {});

// States sorted by subgraph label, then by id.
std::vector<std::size_t> order_by_label(const std::vector<int>& labels);

// Black-to-red over [0, max]; keeps the first max_cells rows and columns
// (0 keeps everything). Byte-deterministic.
std::string heatmap_svg(const Heatmap& h, std::size_t max_cells);
void write_heatmap(const Heatmap& h, std::size_t max_cells, const std::filesystem::path& path);

}  // namespace smc
