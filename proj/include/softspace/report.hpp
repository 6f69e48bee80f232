// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SOFTSPACE_REPORT_HPP
#define SOFTSPACE_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "softspace/spatial_stats.hpp"

namespace softspace::viz {

/// Settings that produced a report, echoed verbatim into every export.
struct AnalysisParameters {
  space::WeightsMode weights = space::WeightsMode::RowStandardized;
  stats::MMode m_mode = stats::MMode::Standard;
  stats::InferenceMethod inference = stats::InferenceMethod::Permutation;
  stats::MomentsMode moments = stats::MomentsMode::Conditional;
  double alpha = 0.05;
  std::size_t permutations = 999;
  std::uint64_t seed = 0;
  bool fdr = false;

  static AnalysisParameters from(const stats::AnalysisOptions& options);
  stats::AnalysisOptions to_options(unsigned threads = 1) const;

  friend bool operator==(const AnalysisParameters&, const AnalysisParameters&) = default;
};

struct ClusterRow {
  stats::ClusterLabel label;
  std::size_t count = 0;
  double percent = 0.0;

  friend bool operator==(const ClusterRow&, const ClusterRow&) = default;
};

struct SignificanceRow {
  stats::ClusterLabel label;
  std::size_t significant = 0;

  friend bool operator==(const SignificanceRow&, const SignificanceRow&) = default;
};

struct AnalysisReport {
  AnalysisParameters parameters;
  stats::GlobalMoranResult global;
  std::vector<stats::LocalMoranRecord> zones;
  /// One row per ClusterLabel, in enum order.
  std::vector<ClusterRow> cluster_table;
  std::vector<SignificanceRow> significance_table;
  std::size_t total_significant = 0;
  double significant_percent = 0.0;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

AnalysisReport make_report(stats::Analysis analysis, const AnalysisParameters& parameters);

enum class ReportFormat { Json, Csv, Markdown };

ReportFormat parse_report_format(const std::string& text);

std::string export_report(const AnalysisReport& report, ReportFormat format);

/// Inverse of the JSON export. Throws Error(MalformedRecord) on schema
/// violations.
AnalysisReport report_from_json(std::string_view json);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace softspace::viz

#endif  // SOFTSPACE_REPORT_HPP
