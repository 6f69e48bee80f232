// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SOFTSPACE_SPACE_MODEL_HPP
#define SOFTSPACE_SPACE_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "softspace/trace_ingest.hpp"

namespace softspace::space {

enum class WeightsMode { Binary, RowStandardized };

const char* to_string(WeightsMode mode) noexcept;

/// Contiguity weights over labelled zones.
///
/// Stored as sorted neighbour lists of the underlying 0/1 adjacency. In
/// RowStandardized mode every neighbour of zone i carries 1/degree(i), so a
/// single per-row value is enough to recover w_ij.
class SpatialWeights {
 public:
  SpatialWeights() = default;

  /// Validates: neighbour indices in range, no self loops, symmetric.
  /// Neighbour lists are sorted and deduplicated.
  static SpatialWeights from_adjacency(std::vector<std::string> labels,
                                       std::vector<std::vector<std::size_t>> neighbors);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  WeightsMode mode() const noexcept { return mode_; }

  std::span<const std::size_t> neighbors(std::size_t i) const { return adjacency_.at(i); }
  std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }

  /// Weight carried by each neighbour of zone i (0 for isolated zones).
  double neighbor_weight(std::size_t i) const;
  double weight(std::size_t i, std::size_t j) const;
  double row_sum(std::size_t i) const;
  /// Sum of all weights.
  double s0() const;
  /// Number of unordered neighbour pairs.
  std::size_t edge_count() const;

  std::optional<std::size_t> index_of(const std::string& label) const;

  /// Same adjacency, different normalisation.
  SpatialWeights with_mode(WeightsMode mode) const;

  friend bool operator==(const SpatialWeights&, const SpatialWeights&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> adjacency_;
  WeightsMode mode_ = WeightsMode::Binary;
};

SpatialWeights build_weights(std::span<const ingest::CallEdge> edges,
                             std::vector<std::string> modules);

/// Throws Error(InvalidArgument) unless w is Binary.
SpatialWeights row_standardize(const SpatialWeights& w);

/// Proximity weights plus aligned execution counts.
class SoftwareSpaceDataset {
 public:
  SoftwareSpaceDataset() = default;
  /// Throws unless counts align with the zones and are all >= 1.
  SoftwareSpaceDataset(SpatialWeights weights, std::vector<std::uint64_t> counts);

  const SpatialWeights& weights() const noexcept { return weights_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::size_t size() const noexcept { return counts_.size(); }
  const std::vector<std::string>& labels() const noexcept { return weights_.labels(); }

  SoftwareSpaceDataset with_mode(WeightsMode mode) const;
  /// Counts replaced, adjacency kept (used by tests and the synthetic
  /// generator).
  SoftwareSpaceDataset with_counts(std::vector<std::uint64_t> counts) const;

  friend bool operator==(const SoftwareSpaceDataset&, const SoftwareSpaceDataset&) = default;

 private:
  SpatialWeights weights_;
  std::vector<std::uint64_t> counts_;
};

/// Zones are the executed modules in lexicographic order. Edges touching an
/// unexecuted module are dropped.
SoftwareSpaceDataset build_dataset(std::span<const ingest::CallEdge> edges,
                                   const std::map<std::string, std::uint64_t>& counts);

// CSV: the matrix has a header row and a label column with 0/1 cells; the
// counts file has a "module,count" header.
std::string matrix_to_csv(const SpatialWeights& w);
std::string counts_to_csv(const SoftwareSpaceDataset& ds);
std::string edges_to_csv(std::span<const ingest::CallEdge> edges);

SpatialWeights matrix_from_csv(std::istream& in);
std::map<std::string, std::uint64_t> counts_from_csv(std::istream& in);
/// Zones are re-sorted lexicographically; every matrix label needs a count.
SoftwareSpaceDataset dataset_from_csv(std::istream& matrix, std::istream& counts);

}  // namespace softspace::space

#endif  // SOFTSPACE_SPACE_MODEL_HPP
