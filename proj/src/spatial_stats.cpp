// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "softspace/spatial_stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "random.hpp"
#include "softspace/error.hpp"

namespace softspace::stats {

namespace {

__extension__ typedef __int128 int128;

int sign_of(int128 v) { return (v > 0) - (v < 0); }

/// Counts centred on their mean. Deviations are computed from the exact
/// integer numerator n*y_i - sum(y), so they are unchanged by adding a
/// constant to every count.
struct Centered {
  std::size_t n = 0;
  int128 total = 0;
  double mean = 0.0;
  std::vector<int128> numerators;  // n * (y_i - mean)
  std::vector<double> z;           // y_i - mean
  double sum_sq = 0.0;             // sum z_i^2

  explicit Centered(const space::SoftwareSpaceDataset& ds) : n(ds.size()) {
    for (auto y : ds.counts()) total += y;
    mean = static_cast<double>(total) / static_cast<double>(n);
    numerators.reserve(n);
    z.reserve(n);
    for (auto y : ds.counts()) {
      int128 num = static_cast<int128>(n) * y - total;
      numerators.push_back(num);
      z.push_back(static_cast<double>(num) / static_cast<double>(n));
      sum_sq += z.back() * z.back();
    }
  }

  bool degenerate() const {
    return std::all_of(numerators.begin(), numerators.end(), [](int128 v) { return v == 0; });
  }
};

int128 lag_numerator(const space::SoftwareSpaceDataset& ds, const Centered& c, std::size_t i) {
  int128 acc = 0;
  for (std::size_t j : ds.weights().neighbors(i)) acc += c.numerators[j];
  return acc;
}

double lag_value(const space::SoftwareSpaceDataset& ds, const Centered& c, std::size_t i) {
  if (ds.weights().degree(i) == 0) return 0.0;
  return ds.weights().neighbor_weight(i) * static_cast<double>(lag_numerator(ds, c, i)) /
         static_cast<double>(c.n);
}

void require_variance(const Centered& c) {
  if (c.degenerate())
    throw Error(ErrorCode::DegenerateVariance, "all execution counts are equal; Moran's I is undefined");
}

double m_constant(const Centered& c, std::size_t i, MMode mode) {
  if (mode == MMode::Standard) return c.sum_sq / static_cast<double>(c.n);
  double m = (c.sum_sq - c.z[i] * c.z[i]) / static_cast<double>(c.n - 1) - c.mean * c.mean;
  if (!(m > 0.0))
    throw Error(ErrorCode::NonpositiveM, "literal m constant is not positive (" + std::to_string(m) +
                                             "); use the standard m mode");
  return m;
}

PermutationResult permute_zone(const space::SoftwareSpaceDataset& ds, const Centered& c, std::size_t i,
                               double m, std::size_t replications, std::uint64_t seed) {
  const auto& w = ds.weights();
  const std::size_t k = w.degree(i);
  const double scale = c.z[i] * w.neighbor_weight(i) / m;
  const double observed = c.z[i] * lag_value(ds, c, i) / m;

  // Conditional null is a point mass: nothing to permute, or nothing that
  // changes the statistic.
  bool others_equal = true;
  for (std::size_t j = 0, first = (i == 0 ? 1 : 0); j < c.n; ++j)
    if (j != i && c.numerators[j] != c.numerators[first]) others_equal = false;
  if (k == 0 || k + 1 == c.n || c.numerators[i] == 0 || others_equal) return {1.0, observed, 0.0};

  std::vector<double> pool;
  pool.reserve(c.n - 1);
  for (std::size_t j = 0; j < c.n; ++j)
    if (j != i) pool.push_back(c.z[j]);

  auto rng = detail::make_stream(seed, i);
  std::vector<double> draws(replications);
  const std::size_t others = pool.size();
  for (std::size_t r = 0; r < replications; ++r) {
    double s = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
      std::size_t pick = t + static_cast<std::size_t>(detail::uniform_below(rng, others - t));
      std::swap(pool[t], pool[pick]);
      s += pool[t];
    }
    draws[r] = scale * s;
  }

  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= static_cast<double>(replications);
  double ss = 0.0;
  for (double d : draws) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / static_cast<double>(replications - 1));

  const double observed_dev = std::abs(observed - mean);
  const double tolerance = 1e-12 * (std::abs(observed) + std::abs(mean));
  std::size_t extreme = 0;
  for (double d : draws)
    if (std::abs(d - mean) >= observed_dev - tolerance) ++extreme;
  const double p = static_cast<double>(1 + extreme) / static_cast<double>(replications + 1);
  return {p, mean, sd};
}

void check_permutation_args(const space::SoftwareSpaceDataset& ds, std::size_t replications) {
  if (ds.size() < 3) throw Error(ErrorCode::TooFewZones, "permutation test needs at least 3 zones");
  if (replications < 99) throw Error(ErrorCode::InvalidArgument, "permutation test needs at least 99 replications");
}

}  // namespace

const char* to_string(MMode mode) noexcept { return mode == MMode::Standard ? "standard" : "literal"; }

const char* to_string(MomentsMode mode) noexcept {
  return mode == MomentsMode::Conditional ? "conditional" : "total";
}

const char* to_string(InferenceMethod method) noexcept {
  return method == InferenceMethod::Permutation ? "perm" : "analytic";
}

const char* to_string(ClusterLabel label) noexcept {
  switch (label) {
    case ClusterLabel::HotSpot: return "hot_spot";
    case ClusterLabel::CoolSpot: return "cool_spot";
    case ClusterLabel::HighValueOutlier: return "high_value_outlier";
    case ClusterLabel::LowValueOutlier: return "low_value_outlier";
    case ClusterLabel::Neutral: return "neutral";
    case ClusterLabel::Isolated: return "isolated";
  }
  return "neutral";
}

MMode parse_m_mode(const std::string& text) {
  if (text == "standard") return MMode::Standard;
  if (text == "literal") return MMode::PaperLiteral;
  throw Error(ErrorCode::InvalidArgument, "unknown m mode '" + text + "' (standard|literal)");
}

MomentsMode parse_moments_mode(const std::string& text) {
  if (text == "conditional") return MomentsMode::Conditional;
  if (text == "total") return MomentsMode::Total;
  throw Error(ErrorCode::InvalidArgument, "unknown moments mode '" + text + "' (conditional|total)");
}

InferenceMethod parse_inference(const std::string& text) {
  if (text == "perm" || text == "permutation") return InferenceMethod::Permutation;
  if (text == "analytic") return InferenceMethod::Analytic;
  throw Error(ErrorCode::InvalidArgument, "unknown inference method '" + text + "' (perm|analytic)");
}

ClusterLabel parse_cluster_label(const std::string& text) {
  for (std::size_t k = 0; k < kClusterLabelCount; ++k) {
    auto label = static_cast<ClusterLabel>(k);
    if (text == to_string(label)) return label;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown cluster label '" + text + "'");
}

space::WeightsMode parse_weights_mode(const std::string& text) {
  if (text == "binary") return space::WeightsMode::Binary;
  if (text == "row") return space::WeightsMode::RowStandardized;
  throw Error(ErrorCode::InvalidArgument, "unknown weights mode '" + text + "' (binary|row)");
}

GlobalMoranResult global_moran(const space::SoftwareSpaceDataset& ds) {
  if (ds.size() < 2) throw Error(ErrorCode::TooFewZones, "Moran's I needs at least 2 zones");
  Centered c(ds);
  require_variance(c);
  const double s0 = ds.weights().s0();
  if (!(s0 > 0.0)) throw Error(ErrorCode::EmptyWeights, "proximity matrix has no neighbour pairs");

  double cross = 0.0;
  for (std::size_t i = 0; i < c.n; ++i) cross += c.z[i] * lag_value(ds, c, i);
  GlobalMoranResult r;
  r.n = c.n;
  r.s0 = s0;
  r.mean_y = c.mean;
  r.i_value = static_cast<double>(c.n) / s0 * cross / c.sum_sq;
  return r;
}

double moran_i(const space::SpatialWeights& w, std::span<const double> values) {
  const std::size_t n = values.size();
  if (n != w.size()) throw Error(ErrorCode::InvalidArgument, "values do not align with zones");
  if (n < 2) throw Error(ErrorCode::TooFewZones, "Moran's I needs at least 2 zones");
  const double s0 = w.s0();
  if (!(s0 > 0.0)) throw Error(ErrorCode::EmptyWeights, "proximity matrix has no neighbour pairs");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double sum_sq = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = values[i] - mean;
    sum_sq += zi * zi;
    double lag = 0.0;
    for (std::size_t j : w.neighbors(i)) lag += values[j] - mean;
    cross += zi * lag * w.neighbor_weight(i);
  }
  if (!(sum_sq > 0.0)) throw Error(ErrorCode::DegenerateVariance, "all values are equal");
  return static_cast<double>(n) / s0 * cross / sum_sq;
}

std::vector<LocalMoran> local_moran(const space::SoftwareSpaceDataset& ds, MMode m_mode) {
  if (ds.size() < 2) throw Error(ErrorCode::TooFewZones, "local Moran's I needs at least 2 zones");
  Centered c(ds);
  require_variance(c);
  std::vector<LocalMoran> out;
  out.reserve(c.n);
  for (std::size_t i = 0; i < c.n; ++i) {
    LocalMoran lm;
    lm.zone = ds.labels()[i];
    lm.deviation = c.z[i];
    lm.lag = lag_value(ds, c, i);
    lm.m_constant = m_constant(c, i, m_mode);
    lm.i_local = lm.deviation * lm.lag / lm.m_constant;
    out.push_back(std::move(lm));
  }
  return out;
}

NullMoments analytic_moments(const space::SoftwareSpaceDataset& ds, std::size_t zone, MomentsMode moments,
                             MMode m_mode) {
  if (ds.size() < 3) throw Error(ErrorCode::TooFewZones, "null moments need at least 3 zones");
  if (zone >= ds.size()) throw Error(ErrorCode::InvalidArgument, "zone index out of range");
  Centered c(ds);
  require_variance(c);
  const double m = m_constant(c, zone, m_mode);
  const auto& w = ds.weights();
  const auto k = static_cast<double>(w.degree(zone));
  if (k == 0.0) return {0.0, 0.0};

  const auto n = static_cast<double>(c.n);
  const double a = w.neighbor_weight(zone);
  const double wi = a * k;       // sum_j w_ij
  const double wi2 = a * a * k;  // sum_j w_ij^2
  const double zi = c.z[zone];

  if (moments == MomentsMode::Conditional) {
    // The N-1 other deviations, drawn without replacement into the k
    // neighbour slots.
    const double mu = -zi / (n - 1.0);
    const double sigma2 = (c.sum_sq - zi * zi) / (n - 1.0) - mu * mu;
    const double var_lag = sigma2 * ((n - 1.0) * wi2 - wi * wi) / (n - 2.0);
    return {zi * wi * mu / m, std::max(0.0, zi * zi * var_lag / (m * m))};
  }

  // Total randomisation. For the literal m the observed m_i is used as
  // a fixed scale.
  const double m2 = c.sum_sq / n;
  double m4 = 0.0;
  for (double v : c.z) m4 += v * v * v * v;
  m4 /= n;
  const double b2 = m4 / (m2 * m2);
  const double e_raw = -wi * m2 / (n - 1.0);
  const double var_raw = m2 * m2 *
                         (wi2 * (n - b2) / (n - 1.0) + (wi * wi - wi2) * (2.0 * b2 - n) / ((n - 1.0) * (n - 2.0)) -
                          wi * wi / ((n - 1.0) * (n - 1.0)));
  return {e_raw / m, std::max(0.0, var_raw / (m * m))};
}

PermutationResult permutation_test(const space::SoftwareSpaceDataset& ds, std::size_t zone,
                                   std::size_t replications, std::uint64_t seed, MMode m_mode) {
  check_permutation_args(ds, replications);
  if (zone >= ds.size()) throw Error(ErrorCode::InvalidArgument, "zone index out of range");
  Centered c(ds);
  require_variance(c);
  return permute_zone(ds, c, zone, m_constant(c, zone, m_mode), replications, seed);
}

std::vector<PermutationResult> permutation_test_all(const space::SoftwareSpaceDataset& ds,
                                                    std::size_t replications, std::uint64_t seed, MMode m_mode,
                                                    unsigned threads) {
  check_permutation_args(ds, replications);
  Centered c(ds);
  require_variance(c);
  std::vector<double> ms(c.n);
  for (std::size_t i = 0; i < c.n; ++i) ms[i] = m_constant(c, i, m_mode);

  std::vector<PermutationResult> out(c.n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, c.n));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < c.n; i = next++) out[i] = permute_zone(ds, c, i, ms[i], replications, seed);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

double z_score(double i_local, double e_null, double var_null) {
  if (!(var_null > 0.0)) throw Error(ErrorCode::ZeroVariance, "null variance is zero; z is undefined");
  return (i_local - e_null) / std::sqrt(var_null);
}

double two_sided_normal_p(double z) noexcept { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

ClusterLabel cluster_of(int deviation_sign, int lag_sign, bool has_neighbors) noexcept {
  if (!has_neighbors) return ClusterLabel::Isolated;
  if (deviation_sign == 0 || lag_sign == 0) return ClusterLabel::Neutral;
  if (deviation_sign > 0) return lag_sign > 0 ? ClusterLabel::HotSpot : ClusterLabel::HighValueOutlier;
  return lag_sign < 0 ? ClusterLabel::CoolSpot : ClusterLabel::LowValueOutlier;
}

int deviation_sign(const space::SoftwareSpaceDataset& ds, std::size_t zone) {
  Centered c(ds);
  return sign_of(c.numerators.at(zone));
}

int lag_sign(const space::SoftwareSpaceDataset& ds, std::size_t zone) {
  Centered c(ds);
  return sign_of(lag_numerator(ds, c, zone));
}

std::vector<LocalMoranRecord> classify_clusters(const space::SoftwareSpaceDataset& ds,
                                                std::span<const LocalMoran> local, const InferenceOptions& options,
                                                MMode m_mode) {
  if (local.size() != ds.size()) throw Error(ErrorCode::InvalidArgument, "local results do not match the dataset");
  for (std::size_t i = 0; i < local.size(); ++i)
    if (local[i].zone != ds.labels()[i])
      throw Error(ErrorCode::InvalidArgument, "local result for '" + local[i].zone + "' is out of order");
  if (!(options.alpha > 0.0 && options.alpha < 1.0))
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");

  Centered c(ds);
  std::vector<PermutationResult> perms;
  if (options.method == InferenceMethod::Permutation)
    perms = permutation_test_all(ds, options.permutations, options.seed, m_mode, options.threads);

  std::vector<LocalMoranRecord> out;
  out.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    LocalMoranRecord rec;
    rec.zone = local[i].zone;
    rec.i_local = local[i].i_local;
    rec.deviation = local[i].deviation;
    rec.lag = local[i].lag;
    rec.m_constant = local[i].m_constant;
    auto mom = analytic_moments(ds, i, options.moments, m_mode);
    rec.e_null = mom.e_null;
    rec.var_null = mom.var_null;
    if (mom.var_null > 0.0) rec.z = z_score(rec.i_local, rec.e_null, rec.var_null);
    if (options.method == InferenceMethod::Permutation) {
      rec.p_value = perms[i].pseudo_p;
      rec.permutation_mean = perms[i].permutation_mean;
      rec.permutation_sd = perms[i].permutation_sd;
    } else {
      rec.p_value = rec.z ? two_sided_normal_p(*rec.z) : 1.0;
    }
    const bool has_neighbors = ds.weights().degree(i) > 0;
    rec.cluster = cluster_of(sign_of(c.numerators[i]), sign_of(lag_numerator(ds, c, i)), has_neighbors);
    out.push_back(std::move(rec));
  }

  if (!options.fdr) {
    for (auto& rec : out) rec.significant = rec.p_value <= options.alpha;
    return out;
  }
  // Benjamini-Hochberg step-up over zones with neighbours.
  std::vector<double> ps;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (ds.weights().degree(i) > 0) ps.push_back(out[i].p_value);
  std::sort(ps.begin(), ps.end());
  double threshold = -1.0;
  for (std::size_t r = 0; r < ps.size(); ++r)
    if (ps[r] <= options.alpha * static_cast<double>(r + 1) / static_cast<double>(ps.size())) threshold = ps[r];
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].significant = ds.weights().degree(i) > 0 && out[i].p_value <= threshold;
  return out;
}

Analysis analyze(const space::SoftwareSpaceDataset& ds, const AnalysisOptions& options) {
  auto weighted = ds.with_mode(options.weights);
  Analysis a;
  a.global = global_moran(weighted);
  auto local = local_moran(weighted, options.m_mode);
  a.zones = classify_clusters(weighted, local, options.inference, options.m_mode);
  return a;
}

}  // namespace softspace::stats
