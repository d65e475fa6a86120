#pragma once

#include <cstdint>
#include <vector>

#include "tapa/attention.hpp"
#include "tapa/sampler.hpp"
#include "tapa/stats.hpp"
#include "tapa/theory.hpp"

namespace tapa {

/// Distance-bias histogram setup: per trial, a fresh (q, k) pair is scored
/// at a short distance and a long distance (key at position 0, query at the
/// sampled distance) and the difference of raw scores is binned.
struct HistogramSpec {
  std::int64_t short_lo = 0, short_hi = 100;      // inclusive integer interval
  std::int64_t long_lo = 10000, long_hi = 10100;  // inclusive, disjoint from short
  std::int64_t n_pairs = 10000;                   // >= 1000
  int bins = 40;                                  // >= 10
  AttentionConfig encoding;
  SamplerSpec sampler;
};

struct BiasHistogram {
  std::vector<double> bin_edges;       // bins + 1, strictly increasing
  std::vector<std::int64_t> counts;    // sums to n
  double mean = 0.0;
  double stddev = 0.0;
  std::int64_t n = 0;
};

BiasHistogram run_bias_histogram(const HistogramSpec& spec,
                                 const McOptions& opts = {});

/// Deterministic mean of the score difference under the spec: the average
/// of the per-distance expected score over the short interval minus the
/// long interval (exact sums for rotary, closed form for the split score).
double expected_histogram_mean(const HistogramSpec& spec);

/// Per-encoding curves of estimated mean normalized score vs distance,
/// with confidence intervals and the deterministic oracle column.
std::vector<DecayCurve> run_decay_comparison(
    const std::vector<AttentionConfig>& encodings,
    const std::vector<double>& distances, const SamplerSpec& sampler,
    std::int64_t n_samples, const McOptions& opts = {});

}  // namespace tapa
