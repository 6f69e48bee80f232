// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SOFTSPACE_VIZ_EXPORT_HPP
#define SOFTSPACE_VIZ_EXPORT_HPP

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "softspace/report.hpp"
#include "softspace/space_model.hpp"
#include "softspace/spatial_stats.hpp"
#include "softspace/trace_ingest.hpp"

namespace softspace::viz {

/// Fill colour per cluster label. Defaults: red, blue, gray, green and
/// white for the two unclassified labels.
class ColorScheme {
 public:
  ColorScheme();

  const std::string& operator[](stats::ClusterLabel label) const {
    return colors_[static_cast<std::size_t>(label)];
  }
  void set(stats::ClusterLabel label, std::string color);

  /// "hot=red,cool=#0000ff,high=gray,low=green,neutral=white,isolated=white";
  /// any subset, applied over the defaults.
  static ColorScheme parse(std::string_view spec);

 private:
  std::array<std::string, stats::kClusterLabelCount> colors_;
};

struct GraphOptions {
  bool only_significant = false;
  /// Node area proportional to execution count.
  bool scale_by_count = false;
};

/// Undirected DOT graph, one node per zone, one edge per neighbour pair.
std::string export_dot(const space::SoftwareSpaceDataset& ds,
                       std::span<const stats::LocalMoranRecord> records,
                       const GraphOptions& options = {}, const ColorScheme& scheme = {});

/// GraphML with "cluster", "color", "count" and "significant" node data.
std::string export_graphml(const space::SoftwareSpaceDataset& ds,
                           std::span<const stats::LocalMoranRecord> records,
                           const GraphOptions& options = {}, const ColorScheme& scheme = {});

struct ScatterPoint {
  std::string zone;
  double deviation = 0.0;
  double lag = 0.0;
  stats::ClusterLabel quadrant = stats::ClusterLabel::Neutral;
};

std::vector<ScatterPoint> moran_scatter(const space::SoftwareSpaceDataset& ds,
                                        std::span<const stats::LocalMoranRecord> records);
std::string scatter_to_csv(std::span<const ScatterPoint> points);
std::string scatter_to_svg(std::span<const ScatterPoint> points, const ColorScheme& scheme = {});

/// "day,total_count" rows in day order.
std::string export_timeseries(const ingest::DailySeries& series);

}  // namespace softspace::viz

#endif  // SOFTSPACE_VIZ_EXPORT_HPP
