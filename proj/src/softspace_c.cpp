// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "softspace/softspace.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "softspace/error.hpp"
#include "softspace/report.hpp"
#include "softspace/space_model.hpp"
#include "softspace/spatial_stats.hpp"
#include "softspace/synth.hpp"
#include "softspace/trace_ingest.hpp"
#include "softspace/viz_export.hpp"

using namespace softspace;

struct softspace_ingest {
  ingest::LogReader reader;
  ingest::CallReconstructor calls;
  ingest::DailySeriesBuilder daily;

  softspace_ingest(ingest::Strictness strictness, ingest::FieldMap fields, std::chrono::minutes offset)
      : reader(strictness, std::move(fields)), daily(offset) {}

  void feed(std::istream& in) {
    reader.read(in, [this](ingest::TraceEvent&& ev) {
      calls.consume(ev);
      daily.add(ev);
    });
  }
};

struct softspace_dataset {
  space::SoftwareSpaceDataset value;
};

struct softspace_report {
  viz::AnalysisReport value;
};

namespace {

thread_local std::string last_error;

softspace_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return SOFTSPACE_ERR_INVALID_ARGUMENT;
    case ErrorCode::Io: return SOFTSPACE_ERR_IO;
    case ErrorCode::MalformedRecord: return SOFTSPACE_ERR_PARSE;
    case ErrorCode::InvalidMatrix: return SOFTSPACE_ERR_INVALID_MATRIX;
    case ErrorCode::UnknownModule: return SOFTSPACE_ERR_UNKNOWN_MODULE;
    case ErrorCode::EmptySpace: return SOFTSPACE_ERR_EMPTY_SPACE;
    case ErrorCode::DegenerateVariance: return SOFTSPACE_ERR_DEGENERATE_VARIANCE;
    case ErrorCode::EmptyWeights: return SOFTSPACE_ERR_EMPTY_WEIGHTS;
    case ErrorCode::NonpositiveM: return SOFTSPACE_ERR_NONPOSITIVE_M;
    case ErrorCode::TooFewZones: return SOFTSPACE_ERR_TOO_FEW_ZONES;
    case ErrorCode::ZeroVariance: return SOFTSPACE_ERR_ZERO_VARIANCE;
  }
  return SOFTSPACE_ERR_INTERNAL;
}

softspace_status fail(softspace_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename Fn>
softspace_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return SOFTSPACE_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SOFTSPACE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SOFTSPACE_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, std::string("cannot open '") + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, std::string("cannot read '") + path + "'");
  return buf.str();
}

stats::AnalysisOptions to_options(const softspace_options& o) {
  stats::AnalysisOptions a;
  require(o.weights == SOFTSPACE_WEIGHTS_BINARY || o.weights == SOFTSPACE_WEIGHTS_ROW, "invalid weights mode");
  require(o.m_mode == SOFTSPACE_M_STANDARD || o.m_mode == SOFTSPACE_M_LITERAL, "invalid m mode");
  require(o.inference == SOFTSPACE_INFERENCE_PERMUTATION || o.inference == SOFTSPACE_INFERENCE_ANALYTIC,
          "invalid inference method");
  require(o.moments == SOFTSPACE_MOMENTS_CONDITIONAL || o.moments == SOFTSPACE_MOMENTS_TOTAL, "invalid moments mode");
  a.weights = o.weights == SOFTSPACE_WEIGHTS_BINARY ? space::WeightsMode::Binary : space::WeightsMode::RowStandardized;
  a.m_mode = o.m_mode == SOFTSPACE_M_STANDARD ? stats::MMode::Standard : stats::MMode::PaperLiteral;
  a.inference.method = o.inference == SOFTSPACE_INFERENCE_PERMUTATION ? stats::InferenceMethod::Permutation
                                                                      : stats::InferenceMethod::Analytic;
  a.inference.moments =
      o.moments == SOFTSPACE_MOMENTS_CONDITIONAL ? stats::MomentsMode::Conditional : stats::MomentsMode::Total;
  a.inference.alpha = o.alpha;
  a.inference.permutations = static_cast<std::size_t>(o.permutations);
  a.inference.seed = o.seed;
  a.inference.fdr = o.fdr != 0;
  a.inference.threads = o.threads;
  return a;
}

viz::GraphOptions to_graph_options(const softspace_graph_options* o) {
  viz::GraphOptions g;
  if (o) {
    g.only_significant = o->only_significant != 0;
    g.scale_by_count = o->scale_by_count != 0;
  }
  return g;
}

}  // namespace

extern "C" {

const char* softspace_last_error(void) { return last_error.c_str(); }

const char* softspace_status_name(softspace_status status) {
  switch (status) {
    case SOFTSPACE_OK: return "ok";
    case SOFTSPACE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SOFTSPACE_ERR_IO: return "I/O failure";
    case SOFTSPACE_ERR_PARSE: return "malformed record";
    case SOFTSPACE_ERR_INVALID_MATRIX: return "invalid proximity matrix";
    case SOFTSPACE_ERR_UNKNOWN_MODULE: return "unknown module";
    case SOFTSPACE_ERR_EMPTY_SPACE: return "empty software space";
    case SOFTSPACE_ERR_DEGENERATE_VARIANCE: return "degenerate variance";
    case SOFTSPACE_ERR_EMPTY_WEIGHTS: return "empty weights";
    case SOFTSPACE_ERR_NONPOSITIVE_M: return "non-positive m constant";
    case SOFTSPACE_ERR_TOO_FEW_ZONES: return "too few zones";
    case SOFTSPACE_ERR_ZERO_VARIANCE: return "zero variance";
    case SOFTSPACE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void softspace_string_free(char* s) { std::free(s); }

const char* softspace_version(void) { return "0.1.0"; }

softspace_status softspace_ingest_create(const softspace_ingest_config* config, softspace_ingest** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = nullptr;
    ingest::FieldMap fields;
    auto strictness = ingest::Strictness::Lenient;
    std::chrono::minutes offset{0};
    if (config) {
      if (config->field_map) fields = ingest::FieldMap::parse(config->field_map);
      if (config->strict) strictness = ingest::Strictness::Strict;
      offset = std::chrono::minutes{config->day_offset_minutes};
    }
    *out = new softspace_ingest(strictness, std::move(fields), offset);
  });
}

void softspace_ingest_destroy(softspace_ingest* ingest) { delete ingest; }

softspace_status softspace_ingest_file(softspace_ingest* ingest, const char* path) {
  return guarded([&] {
    require(ingest && path, "null argument");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, std::string("cannot open '") + path + "'");
    try {
      ingest->feed(in);
    } catch (const MalformedRecord& e) {
      throw Error(ErrorCode::MalformedRecord, std::string(path) + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Io) throw Error(ErrorCode::Io, std::string(path) + ": " + e.what());
      throw;
    }
  });
}

softspace_status softspace_ingest_buffer(softspace_ingest* ingest, const char* data, size_t length) {
  return guarded([&] {
    require(ingest && (data || length == 0), "null argument");
    std::istringstream in(std::string(data ? data : "", length));
    ingest->feed(in);
  });
}

softspace_status softspace_ingest_get_summary(const softspace_ingest* ingest, softspace_ingest_summary* out) {
  return guarded([&] {
    require(ingest && out, "null argument");
    const auto& parsed = ingest->reader.summary();
    auto rebuilt = ingest->calls.summary();
    out->events_parsed = parsed.events_parsed;
    out->events_rejected = parsed.events_rejected;
    out->unmatched_exits = rebuilt.unmatched_exits;
    out->unclosed_entries = rebuilt.unclosed_entries;
    out->threads_seen = rebuilt.threads_seen;
  });
}

softspace_status softspace_ingest_edges_csv(const softspace_ingest* ingest, char** out) {
  return guarded([&] {
    require(ingest && out, "null argument");
    *out = dup_string(space::edges_to_csv(ingest->calls.edges()));
  });
}

softspace_status softspace_ingest_daily_csv(const softspace_ingest* ingest, char** out) {
  return guarded([&] {
    require(ingest && out, "null argument");
    *out = dup_string(viz::export_timeseries(ingest->daily.build()));
  });
}

softspace_status softspace_ingest_build_dataset(const softspace_ingest* ingest, softspace_dataset** out) {
  return guarded([&] {
    require(ingest && out, "null argument");
    *out = nullptr;
    auto edges = ingest->calls.edges();
    *out = new softspace_dataset{space::build_dataset(edges, ingest->calls.counts())};
  });
}

softspace_status softspace_dataset_from_csv(const char* matrix_csv, const char* counts_csv, softspace_dataset** out) {
  return guarded([&] {
    require(matrix_csv && counts_csv && out, "null argument");
    *out = nullptr;
    std::istringstream m(matrix_csv);
    std::istringstream c(counts_csv);
    *out = new softspace_dataset{space::dataset_from_csv(m, c)};
  });
}

softspace_status softspace_dataset_load(const char* matrix_path, const char* counts_path, softspace_dataset** out) {
  return guarded([&] {
    require(matrix_path && counts_path && out, "null argument");
    *out = nullptr;
    std::istringstream m(read_file(matrix_path));
    std::istringstream c(read_file(counts_path));
    *out = new softspace_dataset{space::dataset_from_csv(m, c)};
  });
}

void softspace_dataset_destroy(softspace_dataset* ds) { delete ds; }

size_t softspace_dataset_size(const softspace_dataset* ds) { return ds ? ds->value.size() : 0; }

softspace_status softspace_dataset_label(const softspace_dataset* ds, size_t zone, const char** out) {
  return guarded([&] {
    require(ds && out, "null argument");
    require(zone < ds->value.size(), "zone index out of range");
    *out = ds->value.labels()[zone].c_str();
  });
}

softspace_status softspace_dataset_count(const softspace_dataset* ds, size_t zone, uint64_t* out) {
  return guarded([&] {
    require(ds && out, "null argument");
    require(zone < ds->value.size(), "zone index out of range");
    *out = ds->value.counts()[zone];
  });
}

softspace_status softspace_dataset_weight(const softspace_dataset* ds, size_t i, size_t j, double* out) {
  return guarded([&] {
    require(ds && out, "null argument");
    require(i < ds->value.size() && j < ds->value.size(), "zone index out of range");
    *out = ds->value.weights().with_mode(space::WeightsMode::Binary).weight(i, j);
  });
}

softspace_status softspace_dataset_matrix_csv(const softspace_dataset* ds, char** out) {
  return guarded([&] {
    require(ds && out, "null argument");
    *out = dup_string(space::matrix_to_csv(ds->value.weights()));
  });
}

softspace_status softspace_dataset_counts_csv(const softspace_dataset* ds, char** out) {
  return guarded([&] {
    require(ds && out, "null argument");
    *out = dup_string(space::counts_to_csv(ds->value));
  });
}

void softspace_options_default(softspace_options* options) {
  if (!options) return;
  options->weights = SOFTSPACE_WEIGHTS_ROW;
  options->m_mode = SOFTSPACE_M_STANDARD;
  options->inference = SOFTSPACE_INFERENCE_PERMUTATION;
  options->moments = SOFTSPACE_MOMENTS_CONDITIONAL;
  options->alpha = 0.05;
  options->permutations = 999;
  options->seed = 0;
  options->fdr = 0;
  options->threads = 1;
}

softspace_status softspace_analyze(const softspace_dataset* ds, const softspace_options* options,
                                   softspace_report** out) {
  return guarded([&] {
    require(ds && options && out, "null argument");
    *out = nullptr;
    auto opts = to_options(*options);
    auto analysis = stats::analyze(ds->value, opts);
    *out = new softspace_report{viz::make_report(std::move(analysis), viz::AnalysisParameters::from(opts))};
  });
}

softspace_status softspace_report_from_json(const char* json, softspace_report** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = nullptr;
    *out = new softspace_report{viz::report_from_json(json)};
  });
}

void softspace_report_destroy(softspace_report* report) { delete report; }

softspace_status softspace_report_render(const softspace_report* report, softspace_report_format format, char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    viz::ReportFormat f;
    switch (format) {
      case SOFTSPACE_REPORT_JSON: f = viz::ReportFormat::Json; break;
      case SOFTSPACE_REPORT_CSV: f = viz::ReportFormat::Csv; break;
      case SOFTSPACE_REPORT_MARKDOWN: f = viz::ReportFormat::Markdown; break;
      default: throw Error(ErrorCode::InvalidArgument, "invalid report format");
    }
    *out = dup_string(viz::export_report(report->value, f));
  });
}

softspace_status softspace_report_global(const softspace_report* report, softspace_global_view* out) {
  return guarded([&] {
    require(report && out, "null argument");
    const auto& g = report->value.global;
    *out = {g.i_value, g.n, g.s0, g.mean_y};
  });
}

size_t softspace_report_zone_count(const softspace_report* report) { return report ? report->value.zones.size() : 0; }

softspace_status softspace_report_zone(const softspace_report* report, size_t index, softspace_zone_view* out) {
  return guarded([&] {
    require(report && out, "null argument");
    require(index < report->value.zones.size(), "zone index out of range");
    const auto& z = report->value.zones[index];
    out->zone = z.zone.c_str();
    out->i_local = z.i_local;
    out->deviation = z.deviation;
    out->lag = z.lag;
    out->m_constant = z.m_constant;
    out->e_null = z.e_null;
    out->var_null = z.var_null;
    out->has_z = z.z.has_value();
    out->z = z.z.value_or(std::numeric_limits<double>::quiet_NaN());
    out->p_value = z.p_value;
    out->cluster = static_cast<softspace_cluster>(z.cluster);
    out->significant = z.significant;
  });
}

softspace_status softspace_export_graph(const softspace_dataset* ds, const softspace_report* report,
                                        softspace_graph_format format, const softspace_graph_options* options,
                                        char** out) {
  return guarded([&] {
    require(ds && report && out, "null argument");
    auto scheme = options && options->colors ? viz::ColorScheme::parse(options->colors) : viz::ColorScheme{};
    auto g = to_graph_options(options);
    switch (format) {
      case SOFTSPACE_GRAPH_DOT: *out = dup_string(viz::export_dot(ds->value, report->value.zones, g, scheme)); break;
      case SOFTSPACE_GRAPH_GRAPHML:
        *out = dup_string(viz::export_graphml(ds->value, report->value.zones, g, scheme));
        break;
      default: throw Error(ErrorCode::InvalidArgument, "invalid graph format");
    }
  });
}

softspace_status softspace_export_scatter_csv(const softspace_dataset* ds, const softspace_report* report,
                                              char** out) {
  return guarded([&] {
    require(ds && report && out, "null argument");
    *out = dup_string(viz::scatter_to_csv(viz::moran_scatter(ds->value, report->value.zones)));
  });
}

softspace_status softspace_export_scatter_svg(const softspace_dataset* ds, const softspace_report* report,
                                              const char* colors, char** out) {
  return guarded([&] {
    require(ds && report && out, "null argument");
    auto scheme = colors ? viz::ColorScheme::parse(colors) : viz::ColorScheme{};
    *out = dup_string(viz::scatter_to_svg(viz::moran_scatter(ds->value, report->value.zones), scheme));
  });
}

softspace_status softspace_synth(const softspace_synth_options* options, char** log_jsonl, char** manifest) {
  return guarded([&] {
    require(options && log_jsonl, "null argument");
    require(options->topology >= SOFTSPACE_TOPOLOGY_GRID && options->topology <= SOFTSPACE_TOPOLOGY_RANDOM,
            "invalid topology");
    require(options->pattern >= SOFTSPACE_PATTERN_BLOCK && options->pattern <= SOFTSPACE_PATTERN_PLANTED_LOW_OUTLIER,
            "invalid count pattern");
    synth::SynthOptions o;
    o.topology = static_cast<synth::Topology>(options->topology);
    o.pattern = static_cast<synth::CountPattern>(options->pattern);
    o.n = static_cast<std::size_t>(options->n);
    o.threads = static_cast<std::size_t>(options->threads);
    o.seed = options->seed;
    std::string log = synth::generate_log(o);
    std::string plan = manifest ? synth::plan_to_json(synth::plan(o), o) : std::string();
    *log_jsonl = dup_string(log);
    if (manifest) *manifest = dup_string(plan);
  });
}

}  // extern "C"
