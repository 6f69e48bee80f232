// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SOFTSPACE_SYNTH_HPP
#define SOFTSPACE_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "softspace/space_model.hpp"

namespace softspace::synth {

enum class Topology { Grid, Tree, GodObject, Random };
enum class CountPattern { Block, Checkerboard, Uniform, PlantedHotSpot, PlantedLowOutlier };

Topology parse_topology(const std::string& text);
CountPattern parse_pattern(const std::string& text);
const char* to_string(Topology t) noexcept;
const char* to_string(CountPattern p) noexcept;

struct SynthOptions {
  Topology topology = Topology::Grid;
  std::size_t n = 16;
  CountPattern pattern = CountPattern::Uniform;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
};

/// What a generated log is meant to reconstruct to.
struct SynthPlan {
  space::SoftwareSpaceDataset dataset;  ///< binary weights
  /// Zone holding the planted value, for the planted patterns.
  std::optional<std::string> planted;
};

/// Topology and counts only; no log text. Grid uses the most square
/// rows x cols factorisation of n.
SynthPlan plan(const SynthOptions& options);

/// Well-nested JSON Lines log whose reconstruction yields plan(options)
/// exactly. Threads are interleaved event by event.
std::string generate_log(const SynthOptions& options);

/// JSON description of plan(options): labels, counts, edges, planted zone.
std::string plan_to_json(const SynthPlan& plan, const SynthOptions& options);

}  // namespace softspace::synth

#endif  // SOFTSPACE_SYNTH_HPP
