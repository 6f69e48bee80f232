// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "softspace/space_model.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "softspace/error.hpp"

namespace softspace::space {

const char* to_string(WeightsMode mode) noexcept {
  return mode == WeightsMode::Binary ? "binary" : "row";
}

SpatialWeights SpatialWeights::from_adjacency(std::vector<std::string> labels,
                                              std::vector<std::vector<std::size_t>> neighbors) {
  const std::size_t n = labels.size();
  if (neighbors.size() != n)
    throw Error(ErrorCode::InvalidMatrix, "adjacency has " + std::to_string(neighbors.size()) +
                                              " rows for " + std::to_string(n) + " labels");
  {
    std::vector<std::string> sorted(labels);
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) throw Error(ErrorCode::InvalidMatrix, "duplicate zone label '" + *dup + "'");
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = neighbors[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (std::size_t j : row) {
      if (j >= n) throw Error(ErrorCode::InvalidMatrix, "neighbour index out of range");
      if (j == i) throw Error(ErrorCode::InvalidMatrix, "zone '" + labels[i] + "' is its own neighbour");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : neighbors[i])
      if (!std::binary_search(neighbors[j].begin(), neighbors[j].end(), i))
        throw Error(ErrorCode::InvalidMatrix,
                    "proximity matrix is not symmetric at (" + labels[i] + ", " + labels[j] + ")");
  SpatialWeights w;
  w.labels_ = std::move(labels);
  w.adjacency_ = std::move(neighbors);
  return w;
}

double SpatialWeights::neighbor_weight(std::size_t i) const {
  const auto deg = degree(i);
  if (deg == 0) return 0.0;
  return mode_ == WeightsMode::Binary ? 1.0 : 1.0 / static_cast<double>(deg);
}

double SpatialWeights::weight(std::size_t i, std::size_t j) const {
  const auto& row = adjacency_.at(i);
  return std::binary_search(row.begin(), row.end(), j) ? neighbor_weight(i) : 0.0;
}

double SpatialWeights::row_sum(std::size_t i) const {
  const auto deg = degree(i);
  if (deg == 0) return 0.0;
  return mode_ == WeightsMode::Binary ? static_cast<double>(deg) : 1.0;
}

double SpatialWeights::s0() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) total += row_sum(i);
  return total;
}

std::size_t SpatialWeights::edge_count() const {
  std::size_t twice = 0;
  for (const auto& row : adjacency_) twice += row.size();
  return twice / 2;
}

std::optional<std::size_t> SpatialWeights::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

SpatialWeights SpatialWeights::with_mode(WeightsMode mode) const {
  SpatialWeights w = *this;
  w.mode_ = mode;
  return w;
}

SpatialWeights build_weights(std::span<const ingest::CallEdge> edges, std::vector<std::string> modules) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < modules.size(); ++i)
    if (!index.emplace(modules[i], i).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate module '" + modules[i] + "'");

  std::vector<std::vector<std::size_t>> adjacency(modules.size());
  for (const auto& e : edges) {
    auto a = index.find(e.caller);
    auto b = index.find(e.callee);
    if (a == index.end()) throw Error(ErrorCode::UnknownModule, "unknown module '" + e.caller + "'");
    if (b == index.end()) throw Error(ErrorCode::UnknownModule, "unknown module '" + e.callee + "'");
    if (a->second == b->second) continue;
    adjacency[a->second].push_back(b->second);
    adjacency[b->second].push_back(a->second);
  }
  return SpatialWeights::from_adjacency(std::move(modules), std::move(adjacency));
}

SpatialWeights row_standardize(const SpatialWeights& w) {
  if (w.mode() != WeightsMode::Binary)
    throw Error(ErrorCode::InvalidArgument, "row standardisation expects binary weights");
  return w.with_mode(WeightsMode::RowStandardized);
}

SoftwareSpaceDataset::SoftwareSpaceDataset(SpatialWeights weights, std::vector<std::uint64_t> counts)
    : weights_(std::move(weights)), counts_(std::move(counts)) {
  if (counts_.size() != weights_.size())
    throw Error(ErrorCode::InvalidArgument, "counts do not align with zones");
  for (std::size_t i = 0; i < counts_.size(); ++i)
    if (counts_[i] == 0)
      throw Error(ErrorCode::InvalidArgument, "zone '" + weights_.label(i) + "' was never executed");
}

SoftwareSpaceDataset SoftwareSpaceDataset::with_mode(WeightsMode mode) const {
  return SoftwareSpaceDataset(weights_.with_mode(mode), counts_);
}

SoftwareSpaceDataset SoftwareSpaceDataset::with_counts(std::vector<std::uint64_t> counts) const {
  return SoftwareSpaceDataset(weights_, std::move(counts));
}

SoftwareSpaceDataset build_dataset(std::span<const ingest::CallEdge> edges,
                                   const std::map<std::string, std::uint64_t>& counts) {
  std::vector<std::string> labels;
  std::vector<std::uint64_t> values;
  for (const auto& [module, count] : counts) {  // std::map iterates in label order
    if (count == 0) continue;
    labels.push_back(module);
    values.push_back(count);
  }
  if (labels.empty()) throw Error(ErrorCode::EmptySpace, "no module was executed");

  std::vector<ingest::CallEdge> kept;
  for (const auto& e : edges) {
    auto a = counts.find(e.caller);
    auto b = counts.find(e.callee);
    if (a != counts.end() && a->second > 0 && b != counts.end() && b->second > 0) kept.push_back(e);
  }
  return SoftwareSpaceDataset(build_weights(kept, std::move(labels)), std::move(values));
}

std::string matrix_to_csv(const SpatialWeights& w) {
  std::ostringstream out;
  out << "module";
  for (const auto& l : w.labels()) out << ',' << csv::quote(l);
  out << '\n';
  for (std::size_t i = 0; i < w.size(); ++i) {
    out << csv::quote(w.label(i));
    auto nbrs = w.neighbors(i);
    auto it = nbrs.begin();
    for (std::size_t j = 0; j < w.size(); ++j) {
      bool on = it != nbrs.end() && *it == j;
      if (on) ++it;
      out << (on ? ",1" : ",0");
    }
    out << '\n';
  }
  return out.str();
}

std::string counts_to_csv(const SoftwareSpaceDataset& ds) {
  std::ostringstream out;
  out << "module,count\n";
  for (std::size_t i = 0; i < ds.size(); ++i) out << csv::quote(ds.labels()[i]) << ',' << ds.counts()[i] << '\n';
  return out.str();
}

std::string edges_to_csv(std::span<const ingest::CallEdge> edges) {
  std::ostringstream out;
  out << "caller,callee,count\n";
  for (const auto& e : edges) out << csv::quote(e.caller) << ',' << csv::quote(e.callee) << ',' << e.occurrence_count << '\n';
  return out.str();
}

namespace {

bool blank(const std::vector<std::string>& record) {
  return record.size() == 1 && record[0].empty();
}

std::uint64_t parse_count(const std::string& text, const std::string& module) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(ErrorCode::MalformedRecord, "invalid count '" + text + "' for module '" + module + "'");
  return value;
}

}  // namespace

SpatialWeights matrix_from_csv(std::istream& in) {
  auto header = csv::read_record(in);
  if (!header || header->empty()) throw Error(ErrorCode::InvalidMatrix, "matrix CSV is empty");
  std::vector<std::string> labels(header->begin() + 1, header->end());
  const std::size_t n = labels.size();

  std::vector<std::vector<std::size_t>> adjacency(n);
  std::size_t row = 0;
  while (auto record = csv::read_record(in)) {
    if (blank(*record)) continue;
    if (row >= n) throw Error(ErrorCode::InvalidMatrix, "matrix CSV has more rows than columns");
    if (record->size() != n + 1)
      throw Error(ErrorCode::InvalidMatrix, "matrix row " + std::to_string(row + 1) + " has wrong width");
    if ((*record)[0] != labels[row])
      throw Error(ErrorCode::InvalidMatrix,
                  "row label '" + (*record)[0] + "' does not match column label '" + labels[row] + "'");
    for (std::size_t j = 0; j < n; ++j) {
      const auto& cell = (*record)[j + 1];
      if (cell == "1") {
        adjacency[row].push_back(j);
      } else if (cell != "0") {
        throw Error(ErrorCode::InvalidMatrix, "matrix cell (" + labels[row] + ", " + labels[j] + ") is not 0/1");
      }
    }
    ++row;
  }
  if (row != n) throw Error(ErrorCode::InvalidMatrix, "matrix CSV is not square");
  return SpatialWeights::from_adjacency(std::move(labels), std::move(adjacency));
}

std::map<std::string, std::uint64_t> counts_from_csv(std::istream& in) {
  auto header = csv::read_record(in);
  if (!header || header->size() != 2) throw Error(ErrorCode::MalformedRecord, "counts CSV needs a module,count header");
  std::map<std::string, std::uint64_t> counts;
  while (auto record = csv::read_record(in)) {
    if (blank(*record)) continue;
    if (record->size() != 2) throw Error(ErrorCode::MalformedRecord, "counts row must have two columns");
    if (!counts.emplace((*record)[0], parse_count((*record)[1], (*record)[0])).second)
      throw Error(ErrorCode::MalformedRecord, "duplicate module '" + (*record)[0] + "' in counts");
  }
  return counts;
}

SoftwareSpaceDataset dataset_from_csv(std::istream& matrix, std::istream& counts_in) {
  auto w = matrix_from_csv(matrix);
  auto counts = counts_from_csv(counts_in);
  for (const auto& [module, count] : counts)
    if (!w.index_of(module)) throw Error(ErrorCode::UnknownModule, "module '" + module + "' is not in the matrix");

  std::vector<ingest::CallEdge> edges;
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto it = counts.find(w.label(i));
    if (it == counts.end() || it->second == 0)
      throw Error(ErrorCode::InvalidArgument, "matrix zone '" + w.label(i) + "' has no execution count");
    for (std::size_t j : w.neighbors(i))
      if (i < j) edges.push_back({w.label(i), w.label(j), 1});
  }
  return build_dataset(edges, counts);
}

}  // namespace softspace::space
