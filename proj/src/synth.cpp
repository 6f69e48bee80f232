// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "softspace/synth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <set>

#include <json.hpp>

#include "random.hpp"
#include "softspace/error.hpp"
#include "softspace/trace_ingest.hpp"

namespace softspace::synth {

namespace {

constexpr std::uint64_t kSpread = 50;
constexpr std::uint64_t kPlantedLift = 10 * kSpread;

// Streams drawn from the seed, one per concern, so changing one part of
// the generator does not reshuffle the others.
enum Stream : std::uint64_t { kTopologyStream = 1, kCountStream = 2, kTraceStream = 3 };

using Adjacency = std::vector<std::set<std::size_t>>;

std::vector<std::string> make_labels(std::size_t n) {
  std::size_t width = std::max<std::size_t>(3, std::to_string(n - 1).size());
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto digits = std::to_string(i);
    labels.push_back("M" + std::string(width - digits.size(), '0') + digits);
  }
  return labels;
}

std::pair<std::size_t, std::size_t> grid_shape(std::size_t n) {
  std::size_t rows = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (rows > 1 && n % rows != 0) --rows;
  return {rows, n / rows};
}

void connect(Adjacency& adj, std::size_t a, std::size_t b) {
  if (a == b) return;
  adj[a].insert(b);
  adj[b].insert(a);
}

Adjacency make_topology(const SynthOptions& o) {
  const std::size_t n = o.n;
  Adjacency adj(n);
  auto rng = detail::make_stream(o.seed, kTopologyStream);
  switch (o.topology) {
    case Topology::Grid: {
      auto [rows, cols] = grid_shape(n);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          if (c + 1 < cols) connect(adj, r * cols + c, r * cols + c + 1);
          if (r + 1 < rows) connect(adj, r * cols + c, (r + 1) * cols + c);
        }
      break;
    }
    case Topology::Tree:
      for (std::size_t i = 1; i < n; ++i) connect(adj, detail::uniform_below(rng, i), i);
      break;
    case Topology::GodObject:
      // hub plus a chain through the remaining modules
      for (std::size_t i = 1; i < n; ++i) connect(adj, 0, i);
      for (std::size_t i = 1; i + 1 < n; ++i) connect(adj, i, i + 1);
      break;
    case Topology::Random:
      for (std::size_t i = 1; i < n; ++i) connect(adj, detail::uniform_below(rng, i), i);
      for (std::size_t extra = 0; extra < n; ++extra)
        connect(adj, detail::uniform_below(rng, n), detail::uniform_below(rng, n));
      break;
  }
  return adj;
}

std::optional<std::size_t> planted_zone(const SynthOptions& o, const Adjacency& adj) {
  if (o.pattern != CountPattern::PlantedHotSpot && o.pattern != CountPattern::PlantedLowOutlier) return std::nullopt;
  if (o.topology == Topology::Grid) {
    auto [rows, cols] = grid_shape(o.n);
    return (rows / 2) * cols + cols / 2;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < adj.size(); ++i)
    if (adj[i].size() > adj[best].size()) best = i;
  return best;
}

// Edges are oriented from the lower to the higher index. A module needs one
// execution per incoming call plus one to act as a caller.
std::vector<std::uint64_t> minimum_counts(const Adjacency& adj) {
  std::vector<std::uint64_t> req(adj.size(), 0);
  for (std::size_t u = 0; u < adj.size(); ++u) {
    bool calls = false;
    for (std::size_t v : adj[u]) {
      if (v > u) {
        calls = true;
        ++req[v];
      }
    }
    if (calls) ++req[u];
  }
  return req;
}

std::vector<std::uint64_t> make_counts(const SynthOptions& o, const Adjacency& adj, std::optional<std::size_t> planted) {
  const std::size_t n = o.n;
  auto req = minimum_counts(adj);
  const std::uint64_t base = std::max<std::uint64_t>(1, *std::max_element(req.begin(), req.end()));
  auto rng = detail::make_stream(o.seed, kCountStream);
  std::vector<std::uint64_t> counts(n, base);

  switch (o.pattern) {
    case CountPattern::Uniform:
      for (auto& c : counts) c = base + detail::uniform_below(rng, kSpread + 1);
      break;
    case CountPattern::Block:
      for (std::size_t i = n / 2; i < n; ++i) counts[i] = base + kSpread;
      break;
    case CountPattern::Checkerboard: {
      // two-colouring by breadth-first depth from zone 0
      std::vector<std::size_t> depth(n, SIZE_MAX);
      std::queue<std::size_t> q;
      for (std::size_t root = 0; root < n; ++root) {
        if (depth[root] != SIZE_MAX) continue;
        depth[root] = 0;
        q.push(root);
        while (!q.empty()) {
          auto u = q.front();
          q.pop();
          for (auto v : adj[u])
            if (depth[v] == SIZE_MAX) {
              depth[v] = depth[u] + 1;
              q.push(v);
            }
        }
      }
      for (std::size_t i = 0; i < n; ++i) counts[i] = base + (depth[i] % 2 == 1 ? kSpread : 0);
      break;
    }
    case CountPattern::PlantedHotSpot:
      for (auto& c : counts) c = base + detail::uniform_below(rng, kSpread + 1);
      counts[*planted] = base + kPlantedLift;
      for (auto v : adj[*planted]) counts[v] = base + kPlantedLift;
      break;
    case CountPattern::PlantedLowOutlier:
      for (auto& c : counts) c = base + detail::uniform_below(rng, kSpread + 1);
      counts[*planted] = base;
      for (auto v : adj[*planted]) counts[v] = base + kPlantedLift;
      break;
  }
  return counts;
}

void validate(const SynthOptions& o) {
  if (o.n < 2) throw Error(ErrorCode::InvalidArgument, "synthetic space needs n >= 2");
  if (o.threads == 0) throw Error(ErrorCode::InvalidArgument, "synthetic log needs at least one thread");
  if (o.topology == Topology::GodObject && o.n < 3)
    throw Error(ErrorCode::InvalidArgument, "god-object topology needs n >= 3");
}

struct Event {
  std::size_t module;
  bool entry;
  bool root;
};

}  // namespace

Topology parse_topology(const std::string& text) {
  if (text == "grid") return Topology::Grid;
  if (text == "tree") return Topology::Tree;
  if (text == "god-object" || text == "godobject") return Topology::GodObject;
  if (text == "random") return Topology::Random;
  throw Error(ErrorCode::InvalidArgument, "unknown topology '" + text + "' (grid|tree|god-object|random)");
}

CountPattern parse_pattern(const std::string& text) {
  if (text == "block") return CountPattern::Block;
  if (text == "checkerboard") return CountPattern::Checkerboard;
  if (text == "uniform") return CountPattern::Uniform;
  if (text == "planted-hot-spot") return CountPattern::PlantedHotSpot;
  if (text == "planted-low-outlier") return CountPattern::PlantedLowOutlier;
  throw Error(ErrorCode::InvalidArgument, "unknown count pattern '" + text +
                                              "' (block|checkerboard|uniform|planted-hot-spot|planted-low-outlier)");
}

const char* to_string(Topology t) noexcept {
  switch (t) {
    case Topology::Grid: return "grid";
    case Topology::Tree: return "tree";
    case Topology::GodObject: return "god-object";
    case Topology::Random: return "random";
  }
  return "";
}

const char* to_string(CountPattern p) noexcept {
  switch (p) {
    case CountPattern::Block: return "block";
    case CountPattern::Checkerboard: return "checkerboard";
    case CountPattern::Uniform: return "uniform";
    case CountPattern::PlantedHotSpot: return "planted-hot-spot";
    case CountPattern::PlantedLowOutlier: return "planted-low-outlier";
  }
  return "";
}

SynthPlan plan(const SynthOptions& options) {
  validate(options);
  auto adj = make_topology(options);
  auto planted = planted_zone(options, adj);
  auto counts = make_counts(options, adj, planted);
  auto labels = make_labels(options.n);

  std::vector<std::vector<std::size_t>> neighbors(options.n);
  for (std::size_t i = 0; i < options.n; ++i) neighbors[i].assign(adj[i].begin(), adj[i].end());
  SynthPlan p{space::SoftwareSpaceDataset(space::SpatialWeights::from_adjacency(labels, std::move(neighbors)),
                                          std::move(counts)),
              std::nullopt};
  if (planted) p.planted = labels[*planted];
  return p;
}

std::string generate_log(const SynthOptions& options) {
  auto p = plan(options);
  const auto& w = p.dataset.weights();
  const std::size_t n = w.size();
  auto counts = std::vector<std::uint64_t>(p.dataset.counts().begin(), p.dataset.counts().end());

  // One trace per caller covering all of its outgoing edges, then single
  // entry/exit traces for the remaining executions.
  std::vector<std::vector<Event>> traces;
  std::vector<std::uint64_t> used(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<Event> trace{{u, true, true}};
    for (std::size_t v : w.neighbors(u)) {
      if (v <= u) continue;
      trace.push_back({v, true, false});
      trace.push_back({v, false, false});
      ++used[v];
    }
    if (trace.size() == 1) continue;
    trace.push_back({u, false, true});
    ++used[u];
    traces.push_back(std::move(trace));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint64_t k = used[i]; k < counts[i]; ++k) traces.push_back({{i, true, true}, {i, false, true}});

  auto rng = detail::make_stream(options.seed, kTraceStream);
  for (std::size_t k = traces.size(); k > 1; --k) std::swap(traces[k - 1], traces[detail::uniform_below(rng, k)]);

  std::vector<std::deque<Event>> per_thread(options.threads);
  for (std::size_t t = 0; t < traces.size(); ++t)
    per_thread[t % options.threads].insert(per_thread[t % options.threads].end(), traces[t].begin(), traces[t].end());

  std::vector<std::size_t> live;
  for (std::size_t t = 0; t < per_thread.size(); ++t)
    if (!per_thread[t].empty()) live.push_back(t);

  const auto& labels = w.labels();
  ingest::Timestamp clock = std::chrono::sys_days{std::chrono::year{2024} / 1 / 1};
  std::string out;
  while (!live.empty()) {
    std::size_t slot = detail::uniform_below(rng, live.size());
    std::size_t t = live[slot];
    Event ev = per_thread[t].front();
    per_thread[t].pop_front();
    if (per_thread[t].empty()) live.erase(live.begin() + static_cast<std::ptrdiff_t>(slot));

    out += "{\"time\":\"";
    out += ingest::format_timestamp(clock);
    out += "\",\"thread\":\"T";
    out += std::to_string(t + 1);
    out += "\",\"class\":\"";
    out += labels[ev.module];
    out += "\",\"method\":\"";
    out += ev.root ? "run" : "handle";
    out += "\",\"event\":\"";
    out += ev.entry ? "entry" : "exit";
    out += "\"}\n";
    clock += std::chrono::milliseconds{1};
  }
  return out;
}

std::string plan_to_json(const SynthPlan& plan, const SynthOptions& options) {
  nlohmann::ordered_json j;
  j["topology"] = to_string(options.topology);
  j["pattern"] = to_string(options.pattern);
  j["n"] = options.n;
  j["threads"] = options.threads;
  j["seed"] = options.seed;
  j["labels"] = plan.dataset.labels();
  j["counts"] = std::vector<std::uint64_t>(plan.dataset.counts().begin(), plan.dataset.counts().end());
  auto edges = nlohmann::ordered_json::array();
  const auto& w = plan.dataset.weights();
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t k : w.neighbors(i))
      if (i < k) edges.push_back({w.label(i), w.label(k)});
  j["edges"] = std::move(edges);
  j["planted"] = plan.planted ? nlohmann::ordered_json(*plan.planted) : nlohmann::ordered_json(nullptr);
  return j.dump(2) + "\n";
}

}  // namespace softspace::synth
