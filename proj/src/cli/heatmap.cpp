#include "smc/cli/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "smc/core/error.hpp"

namespace smc {

namespace {

std::vector<std::size_t> all_states(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

Heatmap make_heatmap(const ProbabilityMatrix& t, std::size_t cmd, const std::vector<std::size_t>& order) {
  if (t.n_from() != t.n_to()) throw ShapeError("heatmap ordering needs a square matrix");
  const auto idx = order.empty() ? all_states(t.n_from()) : order;
  Heatmap h;
  h.values = Matrix(idx.size(), idx.size());
  h.masked.assign(idx.size() * idx.size(), false);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (!t.entry_observed(idx[i], idx[j], cmd)) {
        h.masked[i * idx.size() + j] = true;
      } else {
        h.values(i, j) = t.at(idx[i], idx[j], cmd);
      }
    }
  }
  h.row_ids = idx;
  h.col_ids = idx;
  return h;
}

Heatmap make_heatmap(const Matrix& t, const std::vector<bool>& observed,
                     const std::vector<std::size_t>& order) {
  const std::size_t n = t.rows();
  if (t.cols() != n || observed.size() != n * n) throw ShapeError("heatmap needs a square matrix and mask");
  const auto idx = order.empty() ? all_states(n) : order;
  Heatmap h;
  h.values = Matrix(idx.size(), idx.size());
  h.masked.assign(idx.size() * idx.size(), false);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (!observed[idx[i] * n + idx[j]]) {
        h.masked[i * idx.size() + j] = true;
      } else {
        h.values(i, j) = t(idx[i], idx[j]);
      }
    }
  }
  h.row_ids = idx;
  h.col_ids = idx;
  return h;
}

std::vector<std::size_t> order_by_label(const std::vector<int>& labels) {
  auto idx = all_states(labels.size());
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  return idx;
}

std::string heatmap_svg(const Heatmap& h, std::size_t max_cells) {
  const std::size_t rows = max_cells ? std::min(max_cells, h.values.rows()) : h.values.rows();
  const std::size_t cols = max_cells ? std::min(max_cells, h.values.cols()) : h.values.cols();
  if (h.masked.size() != h.values.rows() * h.values.cols()) throw ShapeError("heatmap mask size mismatch");

  double vmax = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (!h.masked[i * h.values.cols() + j]) vmax = std::max(vmax, h.values(i, j));
    }
  }
  const std::size_t span = std::max(rows, cols);
  const std::size_t cell = span ? std::clamp<std::size_t>(720 / span, 1, 24) : 1;
  const std::size_t margin = 48;
  const std::size_t width = margin + cols * cell + 8;
  const std::size_t height = margin + rows * cell + 8;
  const std::size_t tick = std::max<std::size_t>(1, (span + 19) / 20);

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
       std::to_string(height) + "\" font-family=\"monospace\" font-size=\"8\">\n";
  s += "<desc>rows=" + std::to_string(rows) + " cols=" + std::to_string(cols) + " max=" + fmt("%.6f", vmax) +
       "</desc>\n";
  if (!h.title.empty()) s += "<text x=\"4\" y=\"12\">" + escape(h.title) + "</text>\n";
  s += "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::string fill = "#808080";
      if (!h.masked[i * h.values.cols() + j]) {
        const double v = vmax > 0.0 ? h.values(i, j) / vmax : 0.0;
        const int red = static_cast<int>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
        char buf[8];
        std::snprintf(buf, sizeof buf, "#%02x0000", red);
        fill = buf;
      }
      s += "<rect x=\"" + std::to_string(margin + j * cell) + "\" y=\"" + std::to_string(margin + i * cell) +
           "\" width=\"" + std::to_string(cell) + "\" height=\"" + std::to_string(cell) + "\" fill=\"" + fill +
           "\"/>\n";
    }
  }
  s += "</g>\n";
  for (std::size_t j = 0; j < cols; j += tick) {
    const std::size_t x = margin + j * cell + cell / 2;
    s += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(margin - 4) +
         "\" text-anchor=\"middle\">" + std::to_string(h.col_ids.empty() ? j : h.col_ids[j]) + "</text>\n";
  }
  for (std::size_t i = 0; i < rows; i += tick) {
    const std::size_t y = margin + i * cell + cell / 2 + 3;
    s += "<text x=\"" + std::to_string(margin - 4) + "\" y=\"" + std::to_string(y) +
         "\" text-anchor=\"end\">" + std::to_string(h.row_ids.empty() ? i : h.row_ids[i]) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void write_heatmap(const Heatmap& h, std::size_t max_cells, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << heatmap_svg(h, max_cells);
  if (!f) throw Error("write failed: " + path.string());
}

}  // namespace smc
