// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference evaluations used only by tests. Everything here works on dense
// matrices and plain doubles, independent of the library's sparse paths.

#ifndef SOFTSPACE_TESTS_ORACLES_HPP
#define SOFTSPACE_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "softspace/space_model.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix dense(const softspace::space::SpatialWeights& w) {
  Matrix m(w.size(), std::vector<double>(w.size(), 0.0));
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m[i][j] = w.weight(i, j);
  return m;
}

inline Matrix rook_grid(std::size_t rows, std::size_t cols, bool row_standardized) {
  const std::size_t n = rows * cols;
  Matrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t k = r * cols + c;
      if (r > 0) m[k][k - cols] = 1;
      if (r + 1 < rows) m[k][k + cols] = 1;
      if (c > 0) m[k][k - 1] = 1;
      if (c + 1 < cols) m[k][k + 1] = 1;
    }
  if (row_standardized)
    for (auto& row : m) {
      double s = std::accumulate(row.begin(), row.end(), 0.0);
      if (s > 0)
        for (auto& v : row) v /= s;
    }
  return m;
}

inline double mean(const std::vector<double>& y) { return std::accumulate(y.begin(), y.end(), 0.0) / y.size(); }

/// Moran's I by the textbook double loop.
inline double moran_naive(const Matrix& w, const std::vector<double>& y) {
  const std::size_t n = y.size();
  const double ybar = mean(y);
  double s0 = 0, num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (y[i] - ybar) * (y[i] - ybar);
    for (std::size_t j = 0; j < n; ++j) {
      s0 += w[i][j];
      num += w[i][j] * (y[j] - ybar) * (y[i] - ybar);
    }
  }
  return n / s0 * num / den;
}

/// I_i with m = sum (y - mean)^2 / n.
inline double local_naive(const Matrix& w, const std::vector<double>& y, std::size_t i) {
  const std::size_t n = y.size();
  const double ybar = mean(y);
  double m = 0, lag = 0;
  for (std::size_t k = 0; k < n; ++k) m += (y[k] - ybar) * (y[k] - ybar);
  m /= n;
  for (std::size_t j = 0; j < n; ++j) lag += w[i][j] * (y[j] - ybar);
  return (y[i] - ybar) * lag / m;
}

struct Moments {
  double mean = 0;
  double var = 0;
};

/// Exact moments of I_i over every permutation of the values at the other
/// zones (conditional) or at all zones (total).
inline Moments enumerate_local(const Matrix& w, const std::vector<double>& y, std::size_t i, bool conditional) {
  const std::size_t n = y.size();
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < n; ++k)
    if (!conditional || k != i) idx.push_back(k);
  std::sort(idx.begin(), idx.end());
  double s = 0, ss = 0;
  std::size_t count = 0;
  do {
    std::vector<double> perm(n);
    if (conditional) {
      perm[i] = y[i];
      std::size_t t = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (k != i) perm[k] = y[idx[t++]];
    } else {
      for (std::size_t k = 0; k < n; ++k) perm[k] = y[idx[k]];
    }
    double v = local_naive(w, perm, i);
    s += v;
    ss += v * v;
    ++count;
  } while (std::next_permutation(idx.begin(), idx.end()));
  Moments m;
  m.mean = s / count;
  m.var = ss / count - m.mean * m.mean;
  return m;
}

/// Connected random graph (random recursive tree plus extra edges) with
/// random counts in [1, max_count].
inline softspace::space::SoftwareSpaceDataset random_dataset(std::mt19937_64& rng, std::size_t n,
                                                             std::uint64_t max_count = 100) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("Z" + std::to_string(1000 + i));
  std::vector<std::vector<std::size_t>> adj(n);
  auto link = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (std::size_t i = 1; i < n; ++i) link(std::uniform_int_distribution<std::size_t>(0, i - 1)(rng), i);
  std::size_t extra = std::uniform_int_distribution<std::size_t>(0, n)(rng);
  for (std::size_t e = 0; e < extra; ++e) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    link(pick(rng), pick(rng));
  }
  std::vector<std::uint64_t> counts(n);
  std::uniform_int_distribution<std::uint64_t> cd(1, max_count);
  do {
    for (auto& c : counts) c = cd(rng);
  } while (std::all_of(counts.begin(), counts.end(), [&](auto c) { return c == counts[0]; }));
  return {softspace::space::SpatialWeights::from_adjacency(labels, adj), counts};
}

inline softspace::space::SoftwareSpaceDataset grid_dataset(std::size_t rows, std::size_t cols,
                                                           const std::vector<std::uint64_t>& counts) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < rows * cols; ++i) labels.push_back("G" + std::to_string(1000 + i));
  std::vector<std::vector<std::size_t>> adj(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t k = r * cols + c;
      if (c + 1 < cols) {
        adj[k].push_back(k + 1);
        adj[k + 1].push_back(k);
      }
      if (r + 1 < rows) {
        adj[k].push_back(k + cols);
        adj[k + cols].push_back(k);
      }
    }
  return {softspace::space::SpatialWeights::from_adjacency(labels, adj), counts};
}

inline std::vector<double> as_double(std::span<const std::uint64_t> c) { return {c.begin(), c.end()}; }

}  // namespace oracle

#endif  // SOFTSPACE_TESTS_ORACLES_HPP
