// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SOFTSPACE_SPATIAL_STATS_HPP
#define SOFTSPACE_SPATIAL_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "softspace/space_model.hpp"

namespace softspace::stats {

/// How the scaling constant m of the local statistic is computed.
///   Standard:     m = sum_k (y_k - mean)^2 / N, so that mean(I_i) = I under
///                 row-standardised weights.
///   PaperLiteral: m_i = sum_{j != i} (y_j - mean)^2 / (N - 1) - mean^2,
///                 evaluated per zone.
enum class MMode { Standard, PaperLiteral };

/// Null model for the analytic moments of I_i.
///   Conditional: y_i fixed, the other N-1 values randomly permuted. Same
///                null as the permutation test.
///   Total:       all N values randomly permuted; E[I_i] = -w_i / (N - 1).
enum class MomentsMode { Conditional, Total };

enum class InferenceMethod { Permutation, Analytic };

enum class ClusterLabel { HotSpot, CoolSpot, HighValueOutlier, LowValueOutlier, Neutral, Isolated };

inline constexpr std::size_t kClusterLabelCount = 6;

const char* to_string(MMode mode) noexcept;
const char* to_string(MomentsMode mode) noexcept;
const char* to_string(InferenceMethod method) noexcept;
const char* to_string(ClusterLabel label) noexcept;
/// Inverse of the to_string functions above; throws Error(InvalidArgument).
MMode parse_m_mode(const std::string& text);
MomentsMode parse_moments_mode(const std::string& text);
InferenceMethod parse_inference(const std::string& text);
ClusterLabel parse_cluster_label(const std::string& text);
space::WeightsMode parse_weights_mode(const std::string& text);

struct GlobalMoranResult {
  double i_value = 0.0;
  std::size_t n = 0;
  double s0 = 0.0;
  double mean_y = 0.0;

  friend bool operator==(const GlobalMoranResult&, const GlobalMoranResult&) = default;
};

/// Moran's I over the dataset's current weights mode.
/// Errors: TooFewZones (n < 2), DegenerateVariance, EmptyWeights.
GlobalMoranResult global_moran(const space::SoftwareSpaceDataset& ds);

/// Global Moran's I for arbitrary real values on a weights matrix. Values may
/// be zero or negative, unlike dataset counts.
double moran_i(const space::SpatialWeights& w, std::span<const double> values);

struct LocalMoran {
  std::string zone;
  double i_local = 0.0;
  double deviation = 0.0;
  double lag = 0.0;
  double m_constant = 0.0;
};

/// Deviation and lag are exactly 0.0 whenever their true value is zero;
/// the sign is decided in integer arithmetic on the counts.
std::vector<LocalMoran> local_moran(const space::SoftwareSpaceDataset& ds,
                                    MMode m_mode = MMode::Standard);

struct NullMoments {
  double e_null = 0.0;
  double var_null = 0.0;
};

/// Closed-form mean and variance of I_i under the chosen randomisation null.
/// Errors: TooFewZones (n < 3), DegenerateVariance, NonpositiveM.
NullMoments analytic_moments(const space::SoftwareSpaceDataset& ds, std::size_t zone,
                             MomentsMode moments = MomentsMode::Conditional,
                             MMode m_mode = MMode::Standard);

struct PermutationResult {
  double pseudo_p = 1.0;
  double permutation_mean = 0.0;
  double permutation_sd = 0.0;
};

/// Conditional permutation test for one zone. The random stream depends only
/// on (seed, zone), never on evaluation order.
/// Errors: TooFewZones (n < 3), InvalidArgument (r < 99).
PermutationResult permutation_test(const space::SoftwareSpaceDataset& ds, std::size_t zone,
                                   std::size_t replications, std::uint64_t seed,
                                   MMode m_mode = MMode::Standard);

/// All zones, optionally spread over worker threads (0 = hardware
/// concurrency). Output is identical for any thread count.
std::vector<PermutationResult> permutation_test_all(const space::SoftwareSpaceDataset& ds,
                                                    std::size_t replications, std::uint64_t seed,
                                                    MMode m_mode = MMode::Standard,
                                                    unsigned threads = 1);

/// (i_local - e_null) / sqrt(var_null). Throws ZeroVariance if var_null <= 0.
double z_score(double i_local, double e_null, double var_null);

double two_sided_normal_p(double z) noexcept;

/// Quadrant rule on the signs of deviation and lag.
ClusterLabel cluster_of(int deviation_sign, int lag_sign, bool has_neighbors) noexcept;

/// Exact signs of y_i - mean and of the spatial lag, from integer counts.
int deviation_sign(const space::SoftwareSpaceDataset& ds, std::size_t zone);
int lag_sign(const space::SoftwareSpaceDataset& ds, std::size_t zone);

struct LocalMoranRecord {
  std::string zone;
  double i_local = 0.0;
  double deviation = 0.0;
  double lag = 0.0;
  double m_constant = 0.0;
  double e_null = 0.0;
  double var_null = 0.0;
  std::optional<double> z;  ///< empty when var_null == 0
  double p_value = 1.0;
  ClusterLabel cluster = ClusterLabel::Neutral;
  bool significant = false;
  std::optional<double> permutation_mean;
  std::optional<double> permutation_sd;

  friend bool operator==(const LocalMoranRecord&, const LocalMoranRecord&) = default;
};

struct InferenceOptions {
  InferenceMethod method = InferenceMethod::Permutation;
  MomentsMode moments = MomentsMode::Conditional;
  double alpha = 0.05;
  std::size_t permutations = 999;
  std::uint64_t seed = 0;
  bool fdr = false;  ///< Benjamini-Hochberg over zones that have neighbours
  unsigned threads = 1;
};

/// Attaches moments, z, p, cluster label and significance to local results
/// computed on the same dataset.
std::vector<LocalMoranRecord> classify_clusters(const space::SoftwareSpaceDataset& ds,
                                                std::span<const LocalMoran> local,
                                                const InferenceOptions& options,
                                                MMode m_mode = MMode::Standard);

struct AnalysisOptions {
  space::WeightsMode weights = space::WeightsMode::RowStandardized;
  MMode m_mode = MMode::Standard;
  InferenceOptions inference;
};

struct Analysis {
  GlobalMoranResult global;
  std::vector<LocalMoranRecord> zones;
};

/// Full pipeline: reweight, global I, local I, inference, labels.
Analysis analyze(const space::SoftwareSpaceDataset& ds, const AnalysisOptions& options);

}  // namespace softspace::stats

#endif  // SOFTSPACE_SPATIAL_STATS_HPP
