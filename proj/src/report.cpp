// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "softspace/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "softspace/error.hpp"

namespace softspace::viz {

using nlohmann::json;
using stats::ClusterLabel;

namespace {

constexpr const char* kSchema = "softspace-report/1";

const char* table_name(ClusterLabel label) {
  switch (label) {
    case ClusterLabel::HotSpot: return "Hot spot";
    case ClusterLabel::CoolSpot: return "Cool spot";
    case ClusterLabel::HighValueOutlier: return "High-value outlier";
    case ClusterLabel::LowValueOutlier: return "Low-value outlier";
    case ClusterLabel::Neutral: return "Neutral";
    case ClusterLabel::Isolated: return "Isolated";
  }
  return "";
}

const char* default_color(ClusterLabel label) {
  switch (label) {
    case ClusterLabel::HotSpot: return "red";
    case ClusterLabel::CoolSpot: return "blue";
    case ClusterLabel::HighValueOutlier: return "gray";
    case ClusterLabel::LowValueOutlier: return "green";
    default: return "white";
  }
}

std::string count_with_percent(std::size_t count, std::size_t total) {
  long pct = total == 0 ? 0 : std::lround(100.0 * static_cast<double>(count) / static_cast<double>(total));
  return std::to_string(count) + " (" + std::to_string(pct) + "%)";
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json to_json(const AnalysisReport& r) {
  json j;
  j["schema"] = kSchema;
  const auto& p = r.parameters;
  j["parameters"] = {
      {"weights", space::to_string(p.weights)},
      {"m_mode", stats::to_string(p.m_mode)},
      {"inference", stats::to_string(p.inference)},
      {"moments", stats::to_string(p.moments)},
      {"alpha", p.alpha},
      {"permutations", p.permutations},
      {"seed", p.seed},
      {"fdr", p.fdr},
  };
  j["global"] = {{"i", r.global.i_value}, {"n", r.global.n}, {"s0", r.global.s0}, {"mean_y", r.global.mean_y}};
  json zones = json::array();
  for (const auto& z : r.zones) {
    zones.push_back({
        {"zone", z.zone},
        {"i_local", z.i_local},
        {"deviation", z.deviation},
        {"lag", z.lag},
        {"m", z.m_constant},
        {"e_null", z.e_null},
        {"var_null", z.var_null},
        {"z", optional_number(z.z)},
        {"p_value", z.p_value},
        {"cluster", stats::to_string(z.cluster)},
        {"significant", z.significant},
        {"permutation_mean", optional_number(z.permutation_mean)},
        {"permutation_sd", optional_number(z.permutation_sd)},
    });
  }
  j["zones"] = std::move(zones);
  json clusters = json::array();
  for (const auto& row : r.cluster_table)
    clusters.push_back({{"cluster", stats::to_string(row.label)}, {"count", row.count}, {"percent", row.percent}});
  j["cluster_table"] = std::move(clusters);
  json sig = json::array();
  for (const auto& row : r.significance_table)
    sig.push_back({{"cluster", stats::to_string(row.label)}, {"significant", row.significant}});
  j["significance_table"] = {
      {"rows", std::move(sig)}, {"total", r.total_significant}, {"percent", r.significant_percent}};
  return j;
}

std::optional<double> read_optional(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

AnalysisReport from_json(const json& j) {
  if (j.at("schema").get<std::string>() != kSchema)
    throw Error(ErrorCode::MalformedRecord, "unsupported report schema");
  AnalysisReport r;
  const auto& p = j.at("parameters");
  r.parameters.weights = stats::parse_weights_mode(p.at("weights").get<std::string>());
  r.parameters.m_mode = stats::parse_m_mode(p.at("m_mode").get<std::string>());
  r.parameters.inference = stats::parse_inference(p.at("inference").get<std::string>());
  r.parameters.moments = stats::parse_moments_mode(p.at("moments").get<std::string>());
  r.parameters.alpha = p.at("alpha").get<double>();
  r.parameters.permutations = p.at("permutations").get<std::size_t>();
  r.parameters.seed = p.at("seed").get<std::uint64_t>();
  r.parameters.fdr = p.at("fdr").get<bool>();

  const auto& g = j.at("global");
  r.global.i_value = g.at("i").get<double>();
  r.global.n = g.at("n").get<std::size_t>();
  r.global.s0 = g.at("s0").get<double>();
  r.global.mean_y = g.at("mean_y").get<double>();

  for (const auto& z : j.at("zones")) {
    stats::LocalMoranRecord rec;
    rec.zone = z.at("zone").get<std::string>();
    rec.i_local = z.at("i_local").get<double>();
    rec.deviation = z.at("deviation").get<double>();
    rec.lag = z.at("lag").get<double>();
    rec.m_constant = z.at("m").get<double>();
    rec.e_null = z.at("e_null").get<double>();
    rec.var_null = z.at("var_null").get<double>();
    rec.z = read_optional(z, "z");
    rec.p_value = z.at("p_value").get<double>();
    rec.cluster = stats::parse_cluster_label(z.at("cluster").get<std::string>());
    rec.significant = z.at("significant").get<bool>();
    rec.permutation_mean = read_optional(z, "permutation_mean");
    rec.permutation_sd = read_optional(z, "permutation_sd");
    r.zones.push_back(std::move(rec));
  }
  for (const auto& row : j.at("cluster_table"))
    r.cluster_table.push_back({stats::parse_cluster_label(row.at("cluster").get<std::string>()),
                               row.at("count").get<std::size_t>(), row.at("percent").get<double>()});
  const auto& sig = j.at("significance_table");
  for (const auto& row : sig.at("rows"))
    r.significance_table.push_back({stats::parse_cluster_label(row.at("cluster").get<std::string>()),
                                    row.at("significant").get<std::size_t>()});
  r.total_significant = sig.at("total").get<std::size_t>();
  r.significant_percent = sig.at("percent").get<double>();
  return r;
}

std::string to_csv(const AnalysisReport& r) {
  std::ostringstream out;
  out << "zone,i_local,deviation,lag,m,e_null,var_null,z,p_value,cluster,significant,permutation_mean,"
         "permutation_sd\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& z : r.zones) {
    out << csv::quote(z.zone) << ',' << format_double(z.i_local) << ',' << format_double(z.deviation) << ','
        << format_double(z.lag) << ',' << format_double(z.m_constant) << ',' << format_double(z.e_null) << ','
        << format_double(z.var_null) << ',' << opt(z.z) << ',' << format_double(z.p_value) << ','
        << stats::to_string(z.cluster) << ',' << (z.significant ? 1 : 0) << ',' << opt(z.permutation_mean) << ','
        << opt(z.permutation_sd) << '\n';
  }
  return out.str();
}

std::string to_markdown(const AnalysisReport& r) {
  const std::size_t total = r.zones.size();
  const auto& p = r.parameters;
  std::ostringstream out;
  out << "# Software space analysis\n\n";
  out << "| Parameter | Value |\n|---|---|\n";
  out << "| Weights | " << space::to_string(p.weights) << " |\n";
  out << "| m constant | " << stats::to_string(p.m_mode) << " |\n";
  out << "| Inference | " << stats::to_string(p.inference) << " |\n";
  out << "| Null moments | " << stats::to_string(p.moments) << " |\n";
  out << "| Alpha | " << format_double(p.alpha) << " |\n";
  if (p.inference == stats::InferenceMethod::Permutation) {
    out << "| Permutations | " << p.permutations << " |\n";
    out << "| Seed | " << p.seed << " |\n";
  }
  out << "| FDR correction | " << (p.fdr ? "on" : "off") << " |\n\n";
  out << "Global Moran's I = " << format_double(r.global.i_value) << " (N = " << r.global.n
      << ", S0 = " << format_double(r.global.s0) << ")\n\n";

  std::size_t unclassified = 0;
  std::size_t unclassified_sig = 0;
  out << "## Spatial clusters\n\n";
  out << "| Cluster type (color) | Zones |\n|---|---:|\n";
  for (const auto& row : r.cluster_table) {
    if (row.label == ClusterLabel::Neutral || row.label == ClusterLabel::Isolated) {
      unclassified += row.count;
      continue;
    }
    out << "| " << table_name(row.label) << " (" << default_color(row.label) << ") | "
        << count_with_percent(row.count, total) << " |\n";
  }
  if (unclassified > 0) out << "| Unclassified (white) | " << count_with_percent(unclassified, total) << " |\n";
  out << "| **No. of zones** | " << count_with_percent(total, total) << " |\n\n";

  out << "## Statistically significant zones (p <= " << format_double(p.alpha) << ")\n\n";
  out << "| Cluster type | Zones |\n|---|---:|\n";
  for (const auto& row : r.significance_table) {
    if (row.label == ClusterLabel::Neutral || row.label == ClusterLabel::Isolated) {
      unclassified_sig += row.significant;
      continue;
    }
    out << "| " << table_name(row.label) << " | " << row.significant << " |\n";
  }
  if (unclassified_sig > 0) out << "| Unclassified | " << unclassified_sig << " |\n";
  out << "| **Sum** | " << count_with_percent(r.total_significant, total) << " |\n";
  out << "| **No. of zones** | " << count_with_percent(total, total) << " |\n";
  return out.str();
}

}  // namespace

AnalysisParameters AnalysisParameters::from(const stats::AnalysisOptions& options) {
  AnalysisParameters p;
  p.weights = options.weights;
  p.m_mode = options.m_mode;
  p.inference = options.inference.method;
  p.moments = options.inference.moments;
  p.alpha = options.inference.alpha;
  p.permutations = options.inference.permutations;
  p.seed = options.inference.seed;
  p.fdr = options.inference.fdr;
  return p;
}

stats::AnalysisOptions AnalysisParameters::to_options(unsigned threads) const {
  stats::AnalysisOptions o;
  o.weights = weights;
  o.m_mode = m_mode;
  o.inference.method = inference;
  o.inference.moments = moments;
  o.inference.alpha = alpha;
  o.inference.permutations = permutations;
  o.inference.seed = seed;
  o.inference.fdr = fdr;
  o.inference.threads = threads;
  return o;
}

AnalysisReport make_report(stats::Analysis analysis, const AnalysisParameters& parameters) {
  AnalysisReport r;
  r.parameters = parameters;
  r.global = analysis.global;
  r.zones = std::move(analysis.zones);
  const std::size_t total = r.zones.size();
  for (std::size_t k = 0; k < stats::kClusterLabelCount; ++k) {
    auto label = static_cast<ClusterLabel>(k);
    std::size_t count = 0;
    std::size_t significant = 0;
    for (const auto& z : r.zones) {
      if (z.cluster != label) continue;
      ++count;
      if (z.significant) ++significant;
    }
    double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
    r.cluster_table.push_back({label, count, pct});
    r.significance_table.push_back({label, significant});
    r.total_significant += significant;
  }
  r.significant_percent =
      total == 0 ? 0.0 : 100.0 * static_cast<double>(r.total_significant) / static_cast<double>(total);
  return r;
}

ReportFormat parse_report_format(const std::string& text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "md" || text == "markdown") return ReportFormat::Markdown;
  throw Error(ErrorCode::InvalidArgument, "unknown report format '" + text + "' (json|csv|md)");
}

std::string export_report(const AnalysisReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return to_json(report).dump(2) + "\n";
    case ReportFormat::Csv: return to_csv(report);
    case ReportFormat::Markdown: return to_markdown(report);
  }
  return {};
}

AnalysisReport report_from_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::MalformedRecord, "report is not valid JSON");
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("report JSON does not match the schema: ") + e.what());
  }
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace softspace::viz
