#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace tapa {

struct SummaryStats {
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double ci95_half_width = 0.0;
};

/// Exact mean / unbiased variance / 1.96*sqrt(var/n). Throws
/// InsufficientDataError when fewer than two samples are given.
SummaryStats summarize(std::span<const double> samples);

/// Streaming first/second moments. Partials are kept per stream and merged
/// in stream order, so totals do not depend on scheduling.
struct MomentAccumulator {
  std::int64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const MomentAccumulator& other) {
    n += other.n;
    sum += other.sum;
    sum_sq += other.sum_sq;
  }
  SummaryStats stats() const;
};

/// Moments up to fourth order, enough for a large-sample confidence
/// interval on the sample variance.
struct VarianceAccumulator {
  std::int64_t n = 0;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;

  void add(double x) {
    ++n;
    const double x2 = x * x;
    s1 += x;
    s2 += x2;
    s3 += x2 * x;
    s4 += x2 * x2;
  }
  void merge(const VarianceAccumulator& o) {
    n += o.n;
    s1 += o.s1;
    s2 += o.s2;
    s3 += o.s3;
    s4 += o.s4;
  }
  double variance() const;          // unbiased
  double variance_ci95() const;     // half-width, asymptotic normal
};

/// Options for stream-partitioned Monte Carlo loops.
struct McOptions {
  int threads = 1;          // worker threads; 0 = hardware concurrency
  int streams = 64;         // fixed partition count (not tied to threads)
  std::uint64_t stream_base = 0;  // first stream index used by this job
};

namespace detail {
// Runs `work(chunk_index)` for chunk_index in [0, chunks) on a small worker
// pool. Each chunk writes only its own slot, so output is order-independent.
void run_chunked(int chunks, int threads, const std::function<void(int)>& work);
}  // namespace detail

/// Splits `n_samples` over `opts.streams` fixed chunks, runs
/// `fn(stream_index, samples_for_chunk, partial)` possibly concurrently,
/// and merges partials in stream order. Partial must have merge().
template <class Partial, class Fn>
Partial mc_run(std::int64_t n_samples, const McOptions& opts, Fn&& fn) {
  const int chunks = opts.streams;
  const std::int64_t base = n_samples / chunks;
  const std::int64_t rem = n_samples % chunks;
  std::vector<Partial> parts(static_cast<std::size_t>(chunks));
  detail::run_chunked(chunks, opts.threads, [&](int c) {
    const std::int64_t count = base + (c < rem ? 1 : 0);
    fn(opts.stream_base + static_cast<std::uint64_t>(c), count,
       parts[static_cast<std::size_t>(c)]);
  });
  Partial total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace tapa
