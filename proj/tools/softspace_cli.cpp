// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0
//
// softspace: execution logs -> software space dataset -> spatial statistics.
// Talks to the library only through the C API.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "softspace/softspace.h"

namespace {

namespace fs = std::filesystem;

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kParse = 3,
  kDegenerate = 4,
  kIo = 5,
  kEmptySpace = 6,
};

constexpr const char* kConfigEnv = "SOFTSPACE_CONFIG";

/// Thrown inside command handlers; carries the exit code.
struct Failure {
  int code;
  std::string message;
};

int exit_code_for(softspace_status s) {
  switch (s) {
    case SOFTSPACE_OK: return kOk;
    case SOFTSPACE_ERR_INVALID_ARGUMENT: return kUsage;
    case SOFTSPACE_ERR_IO: return kIo;
    case SOFTSPACE_ERR_PARSE:
    case SOFTSPACE_ERR_INVALID_MATRIX:
    case SOFTSPACE_ERR_UNKNOWN_MODULE: return kParse;
    case SOFTSPACE_ERR_EMPTY_SPACE: return kEmptySpace;
    case SOFTSPACE_ERR_DEGENERATE_VARIANCE:
    case SOFTSPACE_ERR_EMPTY_WEIGHTS:
    case SOFTSPACE_ERR_NONPOSITIVE_M:
    case SOFTSPACE_ERR_TOO_FEW_ZONES:
    case SOFTSPACE_ERR_ZERO_VARIANCE: return kDegenerate;
    case SOFTSPACE_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

std::string hint_for(softspace_status s) {
  switch (s) {
    case SOFTSPACE_ERR_DEGENERATE_VARIANCE:
      return " (every module has the same execution count, so there is no variation to test)";
    case SOFTSPACE_ERR_EMPTY_WEIGHTS: return " (no call relationships between executed modules were found)";
    case SOFTSPACE_ERR_NONPOSITIVE_M: return " (try --m-mode standard)";
    case SOFTSPACE_ERR_TOO_FEW_ZONES: return " (at least 3 executed modules are needed for significance tests)";
    case SOFTSPACE_ERR_EMPTY_SPACE: return " (the logs contain no entry events)";
    default: return "";
  }
}

void check(softspace_status s) {
  if (s != SOFTSPACE_OK) throw Failure{exit_code_for(s), std::string(softspace_last_error()) + hint_for(s)};
}

struct StringDeleter {
  void operator()(char* p) const { softspace_string_free(p); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct IngestDeleter {
  void operator()(softspace_ingest* p) const { softspace_ingest_destroy(p); }
};
struct DatasetDeleter {
  void operator()(softspace_dataset* p) const { softspace_dataset_destroy(p); }
};
struct ReportDeleter {
  void operator()(softspace_report* p) const { softspace_report_destroy(p); }
};
using IngestHandle = std::unique_ptr<softspace_ingest, IngestDeleter>;
using DatasetHandle = std::unique_ptr<softspace_dataset, DatasetDeleter>;
using ReportHandle = std::unique_ptr<softspace_report, ReportDeleter>;

template <typename Fn>
std::string take_string(Fn&& fn) {
  char* raw = nullptr;
  check(fn(&raw));
  OwnedString owned(raw);
  return std::string(raw);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kIo, "cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw Failure{kIo, "cannot write '" + path.string() + "'"};
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{kIo, "cannot create output directory '" + dir + "': " + ec.message()};
  return fs::path(dir);
}

/// Optional JSON config: flags > config file > defaults.
class Config {
 public:
  void load(const std::string& explicit_path) {
    std::string path = explicit_path;
    if (path.empty())
      if (const char* env = std::getenv(kConfigEnv)) path = env;
    if (path.empty()) return;
    auto parsed = nlohmann::json::parse(read_text(path), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) throw Failure{kParse, "config '" + path + "' is not a JSON object"};
    json_ = std::move(parsed);
  }

  bool has(const char* key) const { return json_.contains(key); }

  template <typename T>
  void apply(const CLI::Option* flag, const char* key, T& target) const {
    if (flag->count() > 0 || !json_.contains(key)) return;
    try {
      target = json_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw Failure{kUsage, std::string("config key '") + key + "' has the wrong type"};
    }
  }

 private:
  nlohmann::json json_ = nlohmann::json::object();
};

struct IngestArgs {
  std::vector<std::string> inputs;
  std::string field_map;
  bool strict = false;
  int day_offset = 0;
};

IngestHandle run_ingest(const IngestArgs& args) {
  softspace_ingest_config cfg{args.field_map.empty() ? nullptr : args.field_map.c_str(), args.strict ? 1 : 0,
                              static_cast<int32_t>(args.day_offset)};
  softspace_ingest* raw = nullptr;
  check(softspace_ingest_create(&cfg, &raw));
  IngestHandle handle(raw);
  for (const auto& path : args.inputs) check(softspace_ingest_file(handle.get(), path.c_str()));

  softspace_ingest_summary s{};
  check(softspace_ingest_get_summary(handle.get(), &s));
  std::cerr << "events_parsed=" << s.events_parsed << " events_rejected=" << s.events_rejected
            << " unmatched_exits=" << s.unmatched_exits << " unclosed_entries=" << s.unclosed_entries
            << " threads_seen=" << s.threads_seen << "\n";
  return handle;
}

DatasetHandle build_dataset(const softspace_ingest* ingest) {
  softspace_dataset* raw = nullptr;
  check(softspace_ingest_build_dataset(ingest, &raw));
  return DatasetHandle(raw);
}

DatasetHandle load_dataset(const std::string& matrix, const std::string& counts) {
  softspace_dataset* raw = nullptr;
  check(softspace_dataset_load(matrix.c_str(), counts.c_str(), &raw));
  return DatasetHandle(raw);
}

ReportHandle load_report(const std::string& path) {
  auto text = read_text(path);
  softspace_report* raw = nullptr;
  check(softspace_report_from_json(text.c_str(), &raw));
  return ReportHandle(raw);
}

void write_dataset(const softspace_dataset* ds, const fs::path& dir) {
  write_text(dir / "matrix.csv", take_string([&](char** o) { return softspace_dataset_matrix_csv(ds, o); }));
  write_text(dir / "counts.csv", take_string([&](char** o) { return softspace_dataset_counts_csv(ds, o); }));
}

struct GraphArgs {
  bool only_significant = false;
  bool scale_by_count = false;
  std::string colors;

  softspace_graph_options view() const {
    return {only_significant ? 1 : 0, scale_by_count ? 1 : 0, colors.empty() ? nullptr : colors.c_str()};
  }
};

struct Export {
  std::string file;
  std::string text;
};

Export render(const std::string& format, const softspace_dataset* ds, const softspace_report* report,
              const GraphArgs& g) {
  auto opts = g.view();
  if (format == "json")
    return {"report.json", take_string([&](char** o) { return softspace_report_render(report, SOFTSPACE_REPORT_JSON, o); })};
  if (format == "md" || format == "markdown")
    return {"report.md", take_string([&](char** o) { return softspace_report_render(report, SOFTSPACE_REPORT_MARKDOWN, o); })};
  if (format == "csv")
    return {"zones.csv", take_string([&](char** o) { return softspace_report_render(report, SOFTSPACE_REPORT_CSV, o); })};
  if (!ds) throw Failure{kUsage, "format '" + format + "' needs the dataset (--matrix/--counts)"};
  if (format == "dot")
    return {"graph.dot", take_string([&](char** o) { return softspace_export_graph(ds, report, SOFTSPACE_GRAPH_DOT, &opts, o); })};
  if (format == "graphml")
    return {"graph.graphml",
            take_string([&](char** o) { return softspace_export_graph(ds, report, SOFTSPACE_GRAPH_GRAPHML, &opts, o); })};
  if (format == "scatter")
    return {"scatter.csv", take_string([&](char** o) { return softspace_export_scatter_csv(ds, report, o); })};
  if (format == "svg")
    return {"scatter.svg", take_string([&](char** o) {
              return softspace_export_scatter_svg(ds, report, g.colors.empty() ? nullptr : g.colors.c_str(), o);
            })};
  throw Failure{kUsage, "unknown format '" + format + "' (json|md|csv|dot|graphml|scatter|svg)"};
}

template <typename E>
E pick(const std::string& value, std::initializer_list<std::pair<const char*, E>> choices, const char* what) {
  for (const auto& [name, e] : choices)
    if (value == name) return e;
  throw Failure{kUsage, std::string("invalid ") + what + " '" + value + "'"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial statistics over software execution logs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", softspace_version());

  // ingest
  IngestArgs ingest_args;
  std::string ingest_out = ".";
  auto* ingest = app.add_subcommand("ingest", "Build the software space dataset (matrix + counts) from JSONL logs");
  ingest->add_option("--input,-i", ingest_args.inputs, "JSONL log file(s), read in order")->required();
  ingest->add_option("--field-map", ingest_args.field_map, "Field renames, e.g. time=ts,thread=tid,entry=ENTER");
  ingest->add_flag("--strict", ingest_args.strict, "Fail on the first malformed record");
  ingest->add_option("--day-offset", ingest_args.day_offset, "Minutes from UTC for daily buckets");
  ingest->add_option("--out-dir,-o", ingest_out, "Output directory");

  // analyze
  IngestArgs an_ingest;
  std::string an_matrix, an_counts, an_out_dir, an_config;
  std::string weights = "row", m_mode = "standard", inference = "perm", moments = "conditional";
  double alpha = 0.05;
  std::uint64_t perms = 999;
  std::uint64_t seed = 0;
  bool fdr = false;
  unsigned threads = 1;
  GraphArgs an_graph;
  std::vector<std::string> an_formats;
  auto* analyze = app.add_subcommand("analyze", "Run global/local Moran's I, significance tests and clustering");
  auto* an_input = analyze->add_option("--input,-i", an_ingest.inputs, "JSONL log file(s)");
  auto* an_field_map = analyze->add_option("--field-map", an_ingest.field_map, "Field renames for log input");
  auto* an_strict = analyze->add_flag("--strict", an_ingest.strict, "Fail on the first malformed record");
  auto* an_m = analyze->add_option("--matrix", an_matrix, "Proximity matrix CSV");
  auto* an_c = analyze->add_option("--counts", an_counts, "Execution count CSV");
  an_m->needs(an_c);
  an_c->needs(an_m);
  an_input->excludes(an_m);
  auto* o_weights = analyze->add_option("--weights", weights, "binary|row");
  auto* o_m = analyze->add_option("--m-mode", m_mode, "standard|literal");
  auto* o_inf = analyze->add_option("--inference", inference, "perm|analytic");
  auto* o_mom = analyze->add_option("--moments", moments, "conditional|total");
  auto* o_alpha = analyze->add_option("--alpha", alpha, "Significance level");
  auto* o_perms = analyze->add_option("--perms", perms, "Permutations per zone");
  auto* o_seed = analyze->add_option("--seed", seed, "Seed for the permutation engine");
  auto* o_fdr = analyze->add_flag("--fdr", fdr, "Benjamini-Hochberg correction");
  auto* o_threads = analyze->add_option("--threads", threads, "Worker threads (0 = all cores)");
  auto* o_sig = analyze->add_flag("--only-significant", an_graph.only_significant, "Colour significant zones only");
  auto* o_scale = analyze->add_flag("--scale-by-count", an_graph.scale_by_count, "Node size by execution count");
  auto* o_colors = analyze->add_option("--colors", an_graph.colors, "hot=red,cool=blue,high=gray,low=green,...");
  auto* o_format = analyze->add_option("--format", an_formats, "json,md,csv,dot,graphml,scatter,svg")->delimiter(',');
  analyze->add_option("--out-dir,-o", an_out_dir, "Write report.json and selected exports here");
  analyze->add_option("--config", an_config, std::string("JSON config file (default: $") + kConfigEnv + ")");

  // export
  std::string ex_matrix, ex_counts, ex_report, ex_format = "dot", ex_out;
  GraphArgs ex_graph;
  auto* exp = app.add_subcommand("export", "Render graph or scatter exports from a dataset and a report");
  exp->add_option("--matrix", ex_matrix, "Proximity matrix CSV")->required();
  exp->add_option("--counts", ex_counts, "Execution count CSV")->required();
  exp->add_option("--report", ex_report, "report.json from analyze")->required();
  exp->add_option("--format", ex_format, "dot|graphml|scatter|svg");
  exp->add_flag("--only-significant", ex_graph.only_significant, "Colour significant zones only");
  exp->add_flag("--scale-by-count", ex_graph.scale_by_count, "Node size by execution count");
  exp->add_option("--colors", ex_graph.colors, "hot=red,cool=blue,high=gray,low=green,...");
  exp->add_option("--out,-o", ex_out, "Output file (default stdout)");

  // report
  std::string rp_report, rp_format = "md", rp_out;
  auto* rep = app.add_subcommand("report", "Render a report.json as JSON, CSV or Markdown tables");
  rep->add_option("--report", rp_report, "report.json from analyze")->required();
  rep->add_option("--format", rp_format, "json|csv|md");
  rep->add_option("--out,-o", rp_out, "Output file (default stdout)");

  // synth
  std::string sy_topology = "grid", sy_pattern = "uniform", sy_out, sy_manifest;
  std::uint64_t sy_n = 16, sy_threads = 1, sy_seed = 0;
  auto* syn = app.add_subcommand("synth", "Generate a synthetic multi-threaded entry/exit log");
  syn->add_option("--topology", sy_topology, "grid|tree|god-object|random");
  syn->add_option("--n", sy_n, "Number of modules");
  syn->add_option("--pattern", sy_pattern, "block|checkerboard|uniform|planted-hot-spot|planted-low-outlier");
  syn->add_option("--threads", sy_threads, "Number of threads in the log");
  syn->add_option("--seed", sy_seed, "Generator seed");
  syn->add_option("--out,-o", sy_out, "Output JSONL file (default stdout)");
  syn->add_option("--manifest", sy_manifest, "Also write the intended dataset as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest) {
      auto handle = run_ingest(ingest_args);
      auto ds = build_dataset(handle.get());
      auto dir = prepare_dir(ingest_out);
      write_dataset(ds.get(), dir);
      write_text(dir / "edges.csv", take_string([&](char** o) { return softspace_ingest_edges_csv(handle.get(), o); }));
      write_text(dir / "daily.csv", take_string([&](char** o) { return softspace_ingest_daily_csv(handle.get(), o); }));
      return kOk;
    }

    if (*analyze) {
      Config cfg;
      cfg.load(an_config);
      cfg.apply(an_field_map, "field_map", an_ingest.field_map);
      cfg.apply(an_strict, "strict", an_ingest.strict);
      cfg.apply(o_weights, "weights", weights);
      cfg.apply(o_m, "m_mode", m_mode);
      cfg.apply(o_inf, "inference", inference);
      cfg.apply(o_mom, "moments", moments);
      cfg.apply(o_alpha, "alpha", alpha);
      cfg.apply(o_perms, "perms", perms);
      cfg.apply(o_seed, "seed", seed);
      cfg.apply(o_fdr, "fdr", fdr);
      cfg.apply(o_threads, "threads", threads);
      cfg.apply(o_sig, "only_significant", an_graph.only_significant);
      cfg.apply(o_scale, "scale_by_count", an_graph.scale_by_count);
      cfg.apply(o_colors, "colors", an_graph.colors);
      cfg.apply(o_format, "format", an_formats);

      softspace_options opts;
      softspace_options_default(&opts);
      opts.weights = pick<softspace_weights>(weights, {{"binary", SOFTSPACE_WEIGHTS_BINARY}, {"row", SOFTSPACE_WEIGHTS_ROW}}, "weights mode");
      opts.m_mode = pick<softspace_m_mode>(m_mode, {{"standard", SOFTSPACE_M_STANDARD}, {"literal", SOFTSPACE_M_LITERAL}}, "m mode");
      opts.inference = pick<softspace_inference>(
          inference, {{"perm", SOFTSPACE_INFERENCE_PERMUTATION}, {"analytic", SOFTSPACE_INFERENCE_ANALYTIC}}, "inference method");
      opts.moments = pick<softspace_moments>(
          moments, {{"conditional", SOFTSPACE_MOMENTS_CONDITIONAL}, {"total", SOFTSPACE_MOMENTS_TOTAL}}, "moments mode");
      if (!(alpha > 0.0 && alpha < 1.0)) throw Failure{kUsage, "--alpha must lie in (0, 1)"};
      if (opts.inference == SOFTSPACE_INFERENCE_PERMUTATION) {
        if (perms < 99) throw Failure{kUsage, "--perms must be at least 99"};
        if (o_seed->count() == 0 && !cfg.has("seed"))
          throw Failure{kUsage, "--seed is required for permutation inference"};
      }
      opts.alpha = alpha;
      opts.permutations = perms;
      opts.seed = seed;
      opts.fdr = fdr ? 1 : 0;
      opts.threads = threads;

      DatasetHandle ds;
      if (!an_ingest.inputs.empty()) {
        auto handle = run_ingest(an_ingest);
        ds = build_dataset(handle.get());
      } else if (!an_matrix.empty()) {
        ds = load_dataset(an_matrix, an_counts);
      } else {
        throw Failure{kUsage, "analyze needs --input logs or --matrix/--counts"};
      }

      softspace_report* raw = nullptr;
      check(softspace_analyze(ds.get(), &opts, &raw));
      ReportHandle report(raw);

      if (an_out_dir.empty()) {
        auto format = an_formats.empty() ? std::string("json") : an_formats.front();
        std::cout << render(format, ds.get(), report.get(), an_graph).text;
        return kOk;
      }
      auto dir = prepare_dir(an_out_dir);
      if (!an_ingest.inputs.empty()) write_dataset(ds.get(), dir);
      auto main_report = render("json", ds.get(), report.get(), an_graph);
      write_text(dir / main_report.file, main_report.text);
      for (const auto& format : an_formats) {
        if (format == "json") continue;
        auto e = render(format, ds.get(), report.get(), an_graph);
        write_text(dir / e.file, e.text);
      }
      return kOk;
    }

    if (*exp) {
      auto ds = load_dataset(ex_matrix, ex_counts);
      auto report = load_report(ex_report);
      emit(ex_out, render(ex_format, ds.get(), report.get(), ex_graph).text);
      return kOk;
    }

    if (*rep) {
      auto report = load_report(rp_report);
      if (rp_format != "json" && rp_format != "csv" && rp_format != "md" && rp_format != "markdown")
        throw Failure{kUsage, "unknown report format '" + rp_format + "' (json|csv|md)"};
      emit(rp_out, render(rp_format, nullptr, report.get(), {}).text);
      return kOk;
    }

    if (*syn) {
      softspace_synth_options so{};
      so.topology = pick<softspace_topology>(sy_topology,
                                             {{"grid", SOFTSPACE_TOPOLOGY_GRID},
                                              {"tree", SOFTSPACE_TOPOLOGY_TREE},
                                              {"god-object", SOFTSPACE_TOPOLOGY_GOD_OBJECT},
                                              {"random", SOFTSPACE_TOPOLOGY_RANDOM}},
                                             "topology");
      so.pattern = pick<softspace_pattern>(sy_pattern,
                                           {{"block", SOFTSPACE_PATTERN_BLOCK},
                                            {"checkerboard", SOFTSPACE_PATTERN_CHECKERBOARD},
                                            {"uniform", SOFTSPACE_PATTERN_UNIFORM},
                                            {"planted-hot-spot", SOFTSPACE_PATTERN_PLANTED_HOT_SPOT},
                                            {"planted-low-outlier", SOFTSPACE_PATTERN_PLANTED_LOW_OUTLIER}},
                                           "pattern");
      so.n = sy_n;
      so.threads = sy_threads;
      so.seed = sy_seed;
      char* log = nullptr;
      char* manifest = nullptr;
      check(softspace_synth(&so, &log, sy_manifest.empty() ? nullptr : &manifest));
      OwnedString log_owned(log);
      OwnedString manifest_owned(manifest);
      emit(sy_out, log);
      if (manifest) write_text(sy_manifest, manifest);
      return kOk;
    }
  } catch (const Failure& f) {
    std::cerr << "softspace: " << f.message << "\n";
    return f.code;
  }
  return kOk;
}
