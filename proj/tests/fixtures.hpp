// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SOFTSPACE_TESTS_FIXTURES_HPP
#define SOFTSPACE_TESTS_FIXTURES_HPP

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "softspace/space_model.hpp"
#include "softspace/spatial_stats.hpp"

namespace fixtures {

// Ten modules: a hot pair of linked blocks at one end, a cool tail, one
// outlier in each direction.
inline softspace::space::SoftwareSpaceDataset ten_zones() {
  using softspace::ingest::CallEdge;
  std::vector<CallEdge> edges = {
      {"Z01", "Z02", 1}, {"Z01", "Z03", 1}, {"Z02", "Z03", 1}, {"Z03", "Z04", 1}, {"Z04", "Z05", 1},
      {"Z05", "Z06", 1}, {"Z06", "Z07", 1}, {"Z07", "Z08", 1}, {"Z08", "Z09", 1}, {"Z08", "Z10", 1},
      {"Z02", "Z04", 1}, {"Z09", "Z10", 1}};
  std::map<std::string, std::uint64_t> counts = {{"Z01", 420}, {"Z02", 390}, {"Z03", 450}, {"Z04", 35},
                                                 {"Z05", 60},  {"Z06", 12},  {"Z07", 8},   {"Z08", 300},
                                                 {"Z09", 10},  {"Z10", 9}};
  return softspace::space::build_dataset(edges, counts);
}

inline softspace::stats::AnalysisOptions ten_zone_options() {
  softspace::stats::AnalysisOptions opt;
  opt.inference.method = softspace::stats::InferenceMethod::Permutation;
  opt.inference.permutations = 999;
  opt.inference.seed = 2024;
  return opt;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Golden file content. With SOFTSPACE_UPDATE_GOLDEN set the file is
/// rewritten from `actual` first.
inline std::string golden(const std::string& name, const std::string& actual) {
  const std::string path = std::string(SOFTSPACE_GOLDEN_DIR) + "/" + name;
  if (std::getenv("SOFTSPACE_UPDATE_GOLDEN")) std::ofstream(path, std::ios::binary) << actual;
  return slurp(path);
}

}  // namespace fixtures

#endif  // SOFTSPACE_TESTS_FIXTURES_HPP
