#include "tapa/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "tapa/errors.hpp"

namespace tapa {
namespace {

void validate_encoding_sampler(const AttentionConfig& cfg,
                               const SamplerSpec& sampler) {
  validate(sampler);
  if (cfg.is_rope()) {
    const auto& p = std::get<RoPEParams>(cfg.params);
    validate(p);
    if (p.dim != sampler.dim) throw ConfigError("sampler dim must match rope dim");
  } else {
    const auto& t = std::get<TAPAParams>(cfg.params);
    validate(t);
    if (t.dim != sampler.dim) throw ConfigError("sampler dim must match tapa dim");
    if (t.phase != PhaseKind::quadratic_split) {
      throw ConfigError("experiments support the quadratic split form only");
    }
    if (sampler.nu0 != 0.0 && t.amp_dim() % 2 != 0) {
      throw ConfigError("nu0 != 0 needs an even amplitude width");
    }
  }
}

struct ValueChunk {
  std::vector<double> values;
  void merge(const ValueChunk& o) {
    values.insert(values.end(), o.values.begin(), o.values.end());
  }
};

void draw_pair(const AttentionConfig& cfg, const SamplerSpec& sampler,
               RandomStream& rs, std::span<double> q, std::span<double> k) {
  if (cfg.is_rope()) {
    sample_pair_into(sampler, rs, q, k);
  } else {
    sample_tapa_pair_into(sampler, std::get<TAPAParams>(cfg.params), rs, q, k);
  }
}

double raw_score(const AttentionConfig& cfg, std::span<const double> q,
                 std::span<const double> k, double dist) {
  if (cfg.is_rope()) {
    return rope_score_expanded(q, k, dist, 0.0, std::get<RoPEParams>(cfg.params));
  }
  return tapa_score_split(q, k, dist, 0.0, std::get<TAPAParams>(cfg.params));
}

}  // namespace

BiasHistogram run_bias_histogram(const HistogramSpec& spec,
                                 const McOptions& opts) {
  validate_encoding_sampler(spec.encoding, spec.sampler);
  if (spec.short_lo > spec.short_hi || spec.long_lo > spec.long_hi) {
    throw ConfigError("histogram intervals must be non-empty");
  }
  const bool disjoint =
      spec.short_hi < spec.long_lo || spec.long_hi < spec.short_lo;
  if (!disjoint) throw ConfigError("histogram intervals must be disjoint");
  if (spec.n_pairs < 1000) throw ConfigError("n_pairs must be >= 1000");
  if (spec.bins < 10) throw ConfigError("bins must be >= 10");

  const int dim = spec.encoding.dim();
  auto chunk = mc_run<ValueChunk>(
      spec.n_pairs, opts,
      [&](std::uint64_t stream, std::int64_t count, ValueChunk& out) {
        RandomStream rs(spec.sampler.seed, stream);
        std::vector<double> q(static_cast<std::size_t>(dim));
        std::vector<double> k(static_cast<std::size_t>(dim));
        out.values.reserve(static_cast<std::size_t>(count));
        for (std::int64_t i = 0; i < count; ++i) {
          const double near = static_cast<double>(rs.next_int(spec.short_lo, spec.short_hi));
          const double far = static_cast<double>(rs.next_int(spec.long_lo, spec.long_hi));
          draw_pair(spec.encoding, spec.sampler, rs, q, k);
          out.values.push_back(raw_score(spec.encoding, q, k, near) -
                               raw_score(spec.encoding, q, k, far));
        }
      });

  const auto& vals = chunk.values;
  const SummaryStats st = summarize(vals);

  double lo = *std::min_element(vals.begin(), vals.end());
  double hi = *std::max_element(vals.begin(), vals.end());
  if (lo == hi) {  // degenerate data range
    lo -= 0.5;
    hi += 0.5;
  }

  BiasHistogram h;
  h.n = st.n;
  h.mean = st.mean;
  h.stddev = std::sqrt(st.variance);
  h.bin_edges.resize(static_cast<std::size_t>(spec.bins) + 1);
  const double width = (hi - lo) / spec.bins;
  for (int i = 0; i <= spec.bins; ++i) {
    h.bin_edges[static_cast<std::size_t>(i)] = lo + width * i;
  }
  h.bin_edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(spec.bins), 0);
  for (double v : vals) {
    int idx = static_cast<int>((v - lo) / width);
    if (idx < 0) idx = 0;
    if (idx >= spec.bins) idx = spec.bins - 1;
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

double expected_histogram_mean(const HistogramSpec& spec) {
  validate_encoding_sampler(spec.encoding, spec.sampler);
  auto interval_mean = [&](std::int64_t lo, std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t d = lo; d <= hi; ++d) {
      const double dist = static_cast<double>(d);
      if (spec.encoding.is_rope()) {
        const auto& p = std::get<RoPEParams>(spec.encoding.params);
        s += std::sqrt(static_cast<double>(p.dim)) *
             rope_mean_bias(dist, spec.sampler.mu0, spec.sampler.nu0, p.theta0,
                            p.dim);
      } else {
        s += tapa_expected_score(dist, spec.sampler.mu0,
                                 std::get<TAPAParams>(spec.encoding.params));
      }
    }
    return s / static_cast<double>(hi - lo + 1);
  };
  return interval_mean(spec.short_lo, spec.short_hi) -
         interval_mean(spec.long_lo, spec.long_hi);
}

std::vector<DecayCurve> run_decay_comparison(
    const std::vector<AttentionConfig>& encodings,
    const std::vector<double>& distances, const SamplerSpec& sampler,
    std::int64_t n_samples, const McOptions& opts) {
  if (encodings.empty()) throw ConfigError("decay comparison needs at least one encoding");
  if (distances.empty()) throw ConfigError("distances must be non-empty");
  if (n_samples < 2) throw ConfigError("n_samples must be >= 2");
  for (const auto& cfg : encodings) validate_encoding_sampler(cfg, sampler);

  std::vector<DecayCurve> curves;
  std::uint64_t base = opts.stream_base;
  for (const auto& cfg : encodings) {
    DecayCurve curve;
    curve.encoding = cfg.is_rope() ? "rope" : "tapa";
    const int dim = cfg.dim();
    const double norm = cfg.is_rope() ? 1.0 / std::sqrt(static_cast<double>(dim)) : 1.0;
    for (double dist : distances) {
      McOptions point_opts = opts;
      point_opts.stream_base = base;
      base += static_cast<std::uint64_t>(opts.streams);
      auto acc = mc_run<MomentAccumulator>(
          n_samples, point_opts,
          [&](std::uint64_t stream, std::int64_t count, MomentAccumulator& a) {
            RandomStream rs(sampler.seed, stream);
            std::vector<double> q(static_cast<std::size_t>(dim));
            std::vector<double> k(static_cast<std::size_t>(dim));
            for (std::int64_t i = 0; i < count; ++i) {
              draw_pair(cfg, sampler, rs, q, k);
              a.add(norm * raw_score(cfg, q, k, dist));
            }
          });
      const SummaryStats st = acc.stats();
      DecayPoint pt;
      pt.distance = dist;
      pt.estimate = st.mean;
      pt.ci95_half_width = st.ci95_half_width;
      if (cfg.is_rope()) {
        const auto& p = std::get<RoPEParams>(cfg.params);
        pt.oracle = rope_mean_bias(dist, sampler.mu0, sampler.nu0, p.theta0, p.dim);
      } else {
        pt.oracle = tapa_expected_score(dist, sampler.mu0,
                                        std::get<TAPAParams>(cfg.params));
      }
      curve.points.push_back(pt);
    }
    std::vector<double> lx, ly;
    for (const auto& pt : curve.points) {
      if (pt.distance > 0.0 && pt.oracle != 0.0) {
        lx.push_back(std::log(pt.distance));
        ly.push_back(std::log(std::abs(pt.oracle)));
      }
    }
    if (lx.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(lx.size());
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
      }
      curve.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace tapa
