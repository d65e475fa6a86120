#include "tapa/stats.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "tapa/errors.hpp"

namespace tapa {

SummaryStats summarize(std::span<const double> samples) {
  const std::int64_t n = static_cast<std::int64_t>(samples.size());
  if (n < 2) {
    throw InsufficientDataError("summarize requires at least 2 samples");
  }
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    ss += d * d;
  }
  SummaryStats s;
  s.n = n;
  s.mean = mean;
  s.variance = ss / static_cast<double>(n - 1);
  s.ci95_half_width = 1.96 * std::sqrt(s.variance / static_cast<double>(n));
  return s;
}

SummaryStats MomentAccumulator::stats() const {
  if (n < 2) {
    throw InsufficientDataError("moment accumulator holds fewer than 2 samples");
  }
  const double dn = static_cast<double>(n);
  SummaryStats s;
  s.n = n;
  s.mean = sum / dn;
  s.variance = (sum_sq - dn * s.mean * s.mean) / (dn - 1.0);
  if (s.variance < 0.0) s.variance = 0.0;  // rounding guard for constant data
  s.ci95_half_width = 1.96 * std::sqrt(s.variance / dn);
  return s;
}

double VarianceAccumulator::variance() const {
  if (n < 2) {
    throw InsufficientDataError("variance accumulator holds fewer than 2 samples");
  }
  const double dn = static_cast<double>(n);
  const double mean = s1 / dn;
  double v = (s2 - dn * mean * mean) / (dn - 1.0);
  return v < 0.0 ? 0.0 : v;
}

double VarianceAccumulator::variance_ci95() const {
  const double dn = static_cast<double>(n);
  const double mean = s1 / dn;
  const double m2 = s2 / dn - mean * mean;
  // central fourth moment from raw sums
  const double m4 = (s4 - 4.0 * mean * s3 + 6.0 * mean * mean * s2) / dn -
                    3.0 * mean * mean * mean * mean;
  double var_of_var = (m4 - m2 * m2) / dn;
  if (var_of_var < 0.0) var_of_var = 0.0;
  return 1.96 * std::sqrt(var_of_var);
}

namespace detail {

void run_chunked(int chunks, int threads, const std::function<void(int)>& work) {
  if (threads == 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  if (threads <= 1 || chunks <= 1) {
    for (int c = 0; c < chunks; ++c) work(c);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      work(c);
    }
  };
  std::vector<std::thread> pool;
  const int spawn = std::min(threads, chunks);
  pool.reserve(static_cast<std::size_t>(spawn));
  for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace detail
}  // namespace tapa
