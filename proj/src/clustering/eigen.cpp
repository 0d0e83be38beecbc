#include "smc/clustering/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smc/core/error.hpp"

namespace smc {

namespace {

constexpr std::size_t kMaxSweeps = 50;
constexpr double kRelOffTol = 1e-10;
constexpr double kSymTol = 1e-12;

double max_off_diagonal(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  }
  return m;
}

struct Rotation {
  std::size_t p, q;
  double c, s;
};

void rotate_rows(Matrix& a, const std::vector<Rotation>& rots) {
  const std::size_t n = a.cols();
  for (const auto& r : rots) {
    double* rp = a.row(r.p).data();
    double* rq = a.row(r.q).data();
    for (std::size_t k = 0; k < n; ++k) {
      const double x = rp[k];
      const double y = rq[k];
      rp[k] = r.c * x - r.s * y;
      rq[k] = r.s * x + r.c * y;
    }
  }
}

void transpose_in_place(Matrix& a) {
  constexpr std::size_t kBlock = 32;
  const std::size_t n = a.rows();
  for (std::size_t ib = 0; ib < n; ib += kBlock) {
    for (std::size_t jb = ib; jb < n; jb += kBlock) {
      const std::size_t ie = std::min(ib + kBlock, n);
      const std::size_t je = std::min(jb + kBlock, n);
      for (std::size_t i = ib; i < ie; ++i) {
        for (std::size_t j = (ib == jb ? i + 1 : jb); j < je; ++j) std::swap(a(i, j), a(j, i));
      }
    }
  }
}

}  // namespace

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

EigenDecomposition symmetric_eigen(const Matrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw ValidationError("eigen decomposition needs a square matrix");
  for (double v : input.data()) {
    if (!std::isfinite(v)) throw ValidationError("matrix contains a non-finite value");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > kSymTol) {
        throw ValidationError("matrix is not symmetric");
      }
    }
  }

  Matrix a = input;
  // Symmetrize exactly so rotations only need the upper triangle to be right.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = a(j, i) = m;
    }
  }
  // Rows of vt are the eigenvectors.
  Matrix vt = Matrix::identity(n);
  const double threshold = kRelOffTol * frobenius_norm(input);

  // Cyclic Jacobi in round-robin order: each round rotates n/2 disjoint index
  // pairs at once, so A' = J^T A J is two passes of row rotations around a
  // transpose, all on contiguous memory. A sweep (n-1 rounds with n even)
  // visits every pair exactly once.
  const std::size_t m = n + (n % 2);
  std::vector<std::size_t> ring(m);
  std::iota(ring.begin(), ring.end(), 0);
  std::vector<Rotation> rots;
  rots.reserve(m / 2);

  std::size_t sweeps = 0;
  while (threshold > 0.0 && max_off_diagonal(a) >= threshold) {
    if (sweeps == kMaxSweeps) {
      throw NumericalError("Jacobi eigen solver did not converge in 50 sweeps");
    }
    ++sweeps;
    for (std::size_t round = 0; round + 1 < m; ++round) {
      rots.clear();
      for (std::size_t i = 0; i < m / 2; ++i) {
        std::size_t p = ring[i];
        std::size_t q = ring[m - 1 - i];
        if (p >= n || q >= n) continue;  // padding slot for odd n
        if (p > q) std::swap(p, q);
        const double apq = a(p, q);
        // Entries far below the stopping threshold are not worth a rotation.
        if (std::abs(apq) < 1e-3 * threshold) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        rots.push_back({p, q, c, t * c});
      }
      if (!rots.empty()) {
        rotate_rows(a, rots);
        transpose_in_place(a);
        rotate_rows(a, rots);
        for (const auto& r : rots) a(r.p, r.q) = a(r.q, r.p) = 0.0;
        rotate_rows(vt, rots);
      }
      std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.sweeps = sweeps;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.values[j] = a(src, src);
    double sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(vt(src, k)) > 1e-12) {
        sign = vt(src, k) < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = sign * vt(src, k);
  }
  return out;
}

}  // namespace smc
