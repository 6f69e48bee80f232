// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "softspace/viz_export.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csv.hpp"
#include "softspace/error.hpp"

namespace softspace::viz {

using stats::ClusterLabel;

namespace {

void check_aligned(const space::SoftwareSpaceDataset& ds, std::span<const stats::LocalMoranRecord> records) {
  if (records.size() != ds.size())
    throw Error(ErrorCode::InvalidArgument, "report has " + std::to_string(records.size()) + " zones, dataset has " +
                                                std::to_string(ds.size()));
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].zone != ds.labels()[i])
      throw Error(ErrorCode::InvalidArgument,
                  "report zone '" + records[i].zone + "' does not match dataset zone '" + ds.labels()[i] + "'");
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string node_color(const stats::LocalMoranRecord& rec, const GraphOptions& options, const ColorScheme& scheme) {
  if (options.only_significant && !rec.significant) return "white";
  return scheme[rec.cluster];
}

// Node diameter in inches; area proportional to count.
double node_width(std::uint64_t count, std::uint64_t max_count) {
  double w = 1.2 * std::sqrt(static_cast<double>(count) / static_cast<double>(max_count));
  return std::round(std::max(0.2, w) * 1000.0) / 1000.0;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

ColorScheme::ColorScheme() {
  colors_ = {"red", "blue", "gray", "green", "white", "white"};
}

void ColorScheme::set(ClusterLabel label, std::string color) {
  if (color.empty()) throw Error(ErrorCode::InvalidArgument, "empty colour");
  colors_[static_cast<std::size_t>(label)] = std::move(color);
}

ColorScheme ColorScheme::parse(std::string_view spec) {
  ColorScheme scheme;
  while (!spec.empty()) {
    auto comma = spec.find(',');
    auto item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidArgument, "colour entry '" + std::string(item) + "' is not key=value");
    auto key = item.substr(0, eq);
    std::string value(item.substr(eq + 1));
    if (key == "hot") scheme.set(ClusterLabel::HotSpot, value);
    else if (key == "cool") scheme.set(ClusterLabel::CoolSpot, value);
    else if (key == "high") scheme.set(ClusterLabel::HighValueOutlier, value);
    else if (key == "low") scheme.set(ClusterLabel::LowValueOutlier, value);
    else if (key == "neutral") scheme.set(ClusterLabel::Neutral, value);
    else if (key == "isolated") scheme.set(ClusterLabel::Isolated, value);
    else throw Error(ErrorCode::InvalidArgument, "unknown colour key '" + std::string(key) + "'");
  }
  return scheme;
}

std::string export_dot(const space::SoftwareSpaceDataset& ds, std::span<const stats::LocalMoranRecord> records,
                       const GraphOptions& options, const ColorScheme& scheme) {
  check_aligned(ds, records);
  const auto counts = ds.counts();
  const auto max_count = counts.empty() ? 1 : *std::max_element(counts.begin(), counts.end());

  std::ostringstream out;
  out << "graph software_space {\n";
  out << "  node [shape=circle, style=filled, fontsize=10";
  if (options.scale_by_count) out << ", fixedsize=true";
  out << "];\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& rec = records[i];
    const auto name = dot_escape(rec.zone);
    out << "  \"" << name << "\" [label=\"" << name << "\", fillcolor=\"" << dot_escape(node_color(rec, options, scheme))
        << "\", cluster=\"" << stats::to_string(rec.cluster) << "\", significant=" << (rec.significant ? "true" : "false")
        << ", count=" << counts[i];
    if (options.scale_by_count) out << ", width=" << format_double(node_width(counts[i], max_count));
    out << "];\n";
  }
  const auto& w = ds.weights();
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j : w.neighbors(i))
      if (i < j) out << "  \"" << dot_escape(w.label(i)) << "\" -- \"" << dot_escape(w.label(j)) << "\";\n";
  out << "}\n";
  return out.str();
}

std::string export_graphml(const space::SoftwareSpaceDataset& ds, std::span<const stats::LocalMoranRecord> records,
                           const GraphOptions& options, const ColorScheme& scheme) {
  check_aligned(ds, records);
  const auto counts = ds.counts();
  const auto max_count = counts.empty() ? 1 : *std::max_element(counts.begin(), counts.end());

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  out << "  <key id=\"cluster\" for=\"node\" attr.name=\"cluster\" attr.type=\"string\"/>\n";
  out << "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n";
  out << "  <key id=\"count\" for=\"node\" attr.name=\"count\" attr.type=\"long\"/>\n";
  out << "  <key id=\"significant\" for=\"node\" attr.name=\"significant\" attr.type=\"boolean\"/>\n";
  if (options.scale_by_count) out << "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n";
  out << "  <graph id=\"software_space\" edgedefault=\"undirected\">\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& rec = records[i];
    out << "    <node id=\"" << xml_escape(rec.zone) << "\">\n";
    out << "      <data key=\"cluster\">" << stats::to_string(rec.cluster) << "</data>\n";
    out << "      <data key=\"color\">" << xml_escape(node_color(rec, options, scheme)) << "</data>\n";
    out << "      <data key=\"count\">" << counts[i] << "</data>\n";
    out << "      <data key=\"significant\">" << (rec.significant ? "true" : "false") << "</data>\n";
    if (options.scale_by_count)
      out << "      <data key=\"size\">" << format_double(node_width(counts[i], max_count)) << "</data>\n";
    out << "    </node>\n";
  }
  const auto& w = ds.weights();
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j : w.neighbors(i))
      if (i < j)
        out << "    <edge source=\"" << xml_escape(w.label(i)) << "\" target=\"" << xml_escape(w.label(j)) << "\"/>\n";
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::vector<ScatterPoint> moran_scatter(const space::SoftwareSpaceDataset& ds,
                                        std::span<const stats::LocalMoranRecord> records) {
  check_aligned(ds, records);
  std::vector<ScatterPoint> points;
  points.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    points.push_back({rec.zone, rec.deviation, rec.lag,
                      stats::cluster_of(sign_of(rec.deviation), sign_of(rec.lag), ds.weights().degree(i) > 0)});
  }
  return points;
}

std::string scatter_to_csv(std::span<const ScatterPoint> points) {
  std::ostringstream out;
  out << "zone,deviation,lag,quadrant\n";
  for (const auto& p : points)
    out << csv::quote(p.zone) << ',' << format_double(p.deviation) << ',' << format_double(p.lag) << ','
        << stats::to_string(p.quadrant) << '\n';
  return out.str();
}

std::string scatter_to_svg(std::span<const ScatterPoint> points, const ColorScheme& scheme) {
  constexpr double size = 480.0;
  constexpr double margin = 40.0;
  constexpr double half = (size - 2.0 * margin) / 2.0;
  double max_x = 0.0;
  double max_y = 0.0;
  for (const auto& p : points) {
    max_x = std::max(max_x, std::abs(p.deviation));
    max_y = std::max(max_y, std::abs(p.lag));
  }
  if (max_x == 0.0) max_x = 1.0;
  if (max_y == 0.0) max_y = 1.0;
  auto px = [&](double x) { return std::round((size / 2.0 + x / max_x * half) * 100.0) / 100.0; };
  auto py = [&](double y) { return std::round((size / 2.0 - y / max_y * half) * 100.0) / 100.0; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
  out << "  <rect width=\"480\" height=\"480\" fill=\"white\"/>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"240\" x2=\"" << size - margin
      << "\" y2=\"240\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"240\" y1=\"" << margin << "\" x2=\"240\" y2=\"" << size - margin
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "  <text x=\"" << size - margin << "\" y=\"" << size - 12
      << "\" font-size=\"12\" text-anchor=\"end\">deviation</text>\n";
  out << "  <text x=\"12\" y=\"" << margin - 12 << "\" font-size=\"12\">spatial lag</text>\n";
  for (const auto& p : points) {
    out << "  <circle cx=\"" << format_double(px(p.deviation)) << "\" cy=\"" << format_double(py(p.lag))
        << "\" r=\"4\" fill=\"" << xml_escape(scheme[p.quadrant]) << "\" stroke=\"black\" stroke-width=\"0.5\"><title>"
        << xml_escape(p.zone) << "</title></circle>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string export_timeseries(const ingest::DailySeries& series) {
  std::ostringstream out;
  out << "day,total_count\n";
  for (const auto& [day, count] : series) out << ingest::format_day(day) << ',' << count << '\n';
  return out.str();
}

}  // namespace softspace::viz
