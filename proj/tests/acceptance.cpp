// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "softspace/report.hpp"
#include "softspace/spatial_stats.hpp"
#include "softspace/synth.hpp"
#include "softspace/trace_ingest.hpp"
#include "softspace/viz_export.hpp"

using namespace softspace;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool in_time = secs <= budget_s;
  bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s  %-34s %s (%.2fs of %.0fs)%s\n", pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs, budget_s,
              in_time ? "" : " over budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

unsigned cores() { return std::max(1u, std::thread::hardware_concurrency()); }

space::SoftwareSpaceDataset ingest_text(const std::string& log) {
  std::istringstream in(log);
  auto parsed = ingest::parse_log(in, ingest::Strictness::Strict);
  auto g = ingest::reconstruct_calls(parsed.events);
  return space::build_dataset(g.edges, g.counts);
}

std::string all_exports(const space::SoftwareSpaceDataset& ds, const stats::AnalysisOptions& opt) {
  auto report = viz::make_report(stats::analyze(ds, opt), viz::AnalysisParameters::from(opt));
  auto binary = ds.with_mode(space::WeightsMode::Binary);
  viz::GraphOptions g;
  g.scale_by_count = true;
  auto points = viz::moran_scatter(ds.with_mode(opt.weights), report.zones);
  return viz::export_report(report, viz::ReportFormat::Json) + viz::export_report(report, viz::ReportFormat::Csv) +
         viz::export_report(report, viz::ReportFormat::Markdown) + viz::export_dot(binary, report.zones, g) +
         viz::export_graphml(binary, report.zones, g) + viz::scatter_to_csv(points) + viz::scatter_to_svg(points);
}

}  // namespace

int main() {
  criterion("schematic fidelity", 1, [] {
    std::ifstream in(SOFTSPACE_TEST_DATA "/schematic.jsonl");
    auto parsed = ingest::parse_log(in, ingest::Strictness::Strict);
    auto g = ingest::reconstruct_calls(parsed.events);
    auto ds = space::build_dataset(g.edges, g.counts);
    bool edges = g.edges == std::vector<ingest::CallEdge>{{"A", "B", 3}, {"B", "D", 1}};
    bool counts = g.counts == std::map<std::string, std::uint64_t>{{"A", 3}, {"B", 4}, {"D", 1}};
    const double expected[3][3] = {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
    bool matrix = ds.labels() == std::vector<std::string>{"A", "B", "D"};
    for (std::size_t i = 0; i < 3 && matrix; ++i)
      for (std::size_t j = 0; j < 3; ++j) matrix = matrix && ds.weights().weight(i, j) == expected[i][j];
    return Outcome{edges && counts && matrix, std::string("edges ") + (edges ? "ok" : "wrong") + ", counts " +
                                                  (counts ? "ok" : "wrong") + ", matrix " + (matrix ? "ok" : "wrong")};
  });

  criterion("decomposition identity", 10, [] {
    std::mt19937_64 rng(20240401);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
      auto ds = oracle::random_dataset(rng, 3 + rng() % 48).with_mode(space::WeightsMode::RowStandardized);
      auto local = stats::local_moran(ds);
      double sum = 0;
      for (auto& l : local) sum += l.i_local;
      worst = std::max(worst, std::abs(stats::global_moran(ds).i_value - sum / ds.size()));
    }
    return Outcome{worst <= 1e-9, fmt("1000 datasets, max |I - mean(I_i)| = %.3g (tol 1e-9)", worst)};
  });

  criterion("oracle equivalence", 10, [] {
    std::mt19937_64 rng(77);
    double worst = 0;
    for (int t = 0; t < 500; ++t) {
      auto ds = oracle::random_dataset(rng, 2 + rng() % 60, 1 + rng() % 5000);
      if (t % 2) ds = ds.with_mode(space::WeightsMode::RowStandardized);
      double naive = oracle::moran_naive(oracle::dense(ds.weights()), oracle::as_double(ds.counts()));
      worst = std::max(worst, std::abs(stats::global_moran(ds).i_value - naive));
    }
    return Outcome{worst <= 1e-12, fmt("500 instances, max |sparse - dense| = %.3g (tol 1e-12)", worst)};
  });

  criterion("sign behaviour", 1, [] {
    std::vector<std::uint64_t> cb, blk;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        cb.push_back((r + c) % 2 ? 9 : 2);
        blk.push_back(r < 2 ? 9 : 2);
      }
    double i_cb = stats::global_moran(oracle::grid_dataset(4, 4, cb)).i_value;
    double i_blk = stats::global_moran(oracle::grid_dataset(4, 4, blk)).i_value;
    return Outcome{i_cb < 0 && i_blk > 0, fmt("checkerboard I = %.6g, half block I = %.6g", i_cb, i_blk)};
  });

  criterion("two-zone hand value", 1, [] {
    auto w = space::SpatialWeights::from_adjacency({"Z1", "Z2"}, {{1}, {0}});
    const double y[] = {0.0, 1.0};
    double i = stats::moran_i(w, y);
    double i_ds = stats::global_moran(space::SoftwareSpaceDataset(w, {1, 2})).i_value;
    bool ok = std::abs(i + 1) <= 1e-12 && std::abs(i_ds + 1) <= 1e-12;
    return Outcome{ok, fmt("y=(0,1): I = %.17g; counts (1,2): I = %.17g", i, i_ds)};
  });

  criterion("null calibration", 120, [] {
    std::mt19937_64 rng(99);
    std::size_t significant = 0, total = 0;
    for (int t = 0; t < 100; ++t) {
      std::vector<std::uint64_t> y(100);
      std::uniform_int_distribution<std::uint64_t> d(1, 1000);
      for (auto& v : y) v = d(rng);
      stats::AnalysisOptions opt;
      opt.inference.permutations = 999;
      opt.inference.seed = 1000 + t;
      opt.inference.threads = cores();
      auto a = stats::analyze(oracle::grid_dataset(10, 10, y), opt);
      for (auto& z : a.zones) significant += z.significant;
      total += a.zones.size();
    }
    double frac = static_cast<double>(significant) / total;
    return Outcome{std::abs(frac - 0.05) <= 0.02,
                   fmt("100 trials x 100 zones, significant fraction = %.4f (target 0.05 +/- 0.02)", frac)};
  });

  criterion("analytic/permutation agreement", 120, [] {
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> gauss(1000.0, 100.0);
    std::vector<std::uint64_t> y(100);
    for (auto& v : y) v = static_cast<std::uint64_t>(std::max(1.0, std::round(gauss(rng))));
    auto ds = oracle::grid_dataset(10, 10, y).with_mode(space::WeightsMode::RowStandardized);
    auto local = stats::local_moran(ds);
    stats::InferenceOptions perm;
    perm.permutations = 9999;
    perm.seed = 17;
    perm.threads = cores();
    stats::InferenceOptions analytic;
    analytic.method = stats::InferenceMethod::Analytic;
    auto p = stats::classify_clusters(ds, local, perm);
    auto a = stats::classify_clusters(ds, local, analytic);
    std::size_t close = 0;
    double worst = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      double d = std::abs(p[i].p_value - a[i].p_value);
      worst = std::max(worst, d);
      close += d <= 0.05;
    }
    double share = static_cast<double>(close) / ds.size();
    return Outcome{share >= 0.95, fmt("%.0f%% of zones within 0.05 (need 95%%), max diff %.4f", 100 * share, worst)};
  });

  criterion("planted cluster recovery", 30, [] {
    std::string detail;
    bool ok = true;
    const std::pair<synth::CountPattern, stats::ClusterLabel> cases[] = {
        {synth::CountPattern::PlantedHotSpot, stats::ClusterLabel::HotSpot},
        {synth::CountPattern::PlantedLowOutlier, stats::ClusterLabel::LowValueOutlier}};
    for (auto topo : {synth::Topology::Grid, synth::Topology::Tree, synth::Topology::Random})
      for (auto [pattern, want] : cases)
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
          synth::SynthOptions so;
          so.topology = topo;
          so.pattern = pattern;
          so.n = 64;
          so.threads = 4;
          so.seed = seed;
          auto plan = synth::plan(so);
          auto ds = ingest_text(synth::generate_log(so));
          stats::AnalysisOptions opt;
          opt.inference.seed = seed;
          opt.inference.threads = cores();
          auto a = stats::analyze(ds, opt);
          auto idx = *ds.weights().index_of(*plan.planted);
          const auto& z = a.zones[idx];
          if (z.cluster != want || !(z.p_value <= 0.05)) {
            ok = false;
            detail += std::string(" ") + synth::to_string(topo) + "/" + synth::to_string(pattern) + "/seed" +
                      std::to_string(seed) + ": " + stats::to_string(z.cluster) + " p=" + viz::format_double(z.p_value);
          }
        }
    return Outcome{ok, ok ? "18 fixtures (grid, tree, random; 3 seeds each) labelled and p <= 0.05" : "missed:" + detail};
  });

  criterion("report table structure", 5, [] {
    auto ds = fixtures::ten_zones();
    auto opt = fixtures::ten_zone_options();
    auto report = viz::make_report(stats::analyze(ds, opt), viz::AnalysisParameters::from(opt));
    auto md = viz::export_report(report, viz::ReportFormat::Markdown);
    auto golden = fixtures::slurp(SOFTSPACE_GOLDEN_DIR "/ten_zones_report.md");
    std::size_t sum = 0;
    for (auto& row : report.cluster_table) sum += row.count;
    bool ok = !golden.empty() && md == golden && sum == ds.size();
    return Outcome{ok, std::string("markdown ") + (md == golden ? "matches" : "differs from") + " golden file"};
  });

  criterion("determinism", 60, [] {
    synth::SynthOptions so;
    so.n = 100;
    so.pattern = synth::CountPattern::PlantedHotSpot;
    so.threads = 4;
    so.seed = 7;
    bool log_same = synth::generate_log(so) == synth::generate_log(so);
    auto ds = ingest_text(synth::generate_log(so));
    stats::AnalysisOptions opt;
    opt.inference.seed = 31;
    opt.inference.fdr = true;
    opt.inference.threads = 1;
    auto base = all_exports(ds, opt);
    bool same = log_same && base == all_exports(ds, opt);
    for (unsigned t : {2u, 3u, 8u, cores()}) {
      opt.inference.threads = t;
      same = same && all_exports(ds, opt) == base;
    }
    return Outcome{same, std::string("log, report and exports ") + (same ? "byte-identical" : "differ") +
                             " across runs and 1/2/3/8/" + std::to_string(cores()) + " threads"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
