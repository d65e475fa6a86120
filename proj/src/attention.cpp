#include "tapa/attention.hpp"

#include <cmath>

#include "tapa/errors.hpp"
#include "tapa/rng.hpp"

namespace tapa {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double score_one(const AttentionConfig& cfg, std::span<const double> q,
                 std::span<const double> k, double pos_q, double pos_k) {
  if (cfg.is_rope()) {
    return rope_score_expanded(q, k, pos_q, pos_k, std::get<RoPEParams>(cfg.params));
  }
  return tapa_score(q, k, pos_q, pos_k, std::get<TAPAParams>(cfg.params));
}

}  // namespace

int AttentionConfig::dim() const {
  return is_rope() ? std::get<RoPEParams>(params).dim
                   : std::get<TAPAParams>(params).dim;
}

ScoreMatrix score_matrix(const AttentionInput& input) {
  const int rows = static_cast<int>(input.queries.size());
  if (rows < 1) throw ConfigError("attention input needs at least one row");
  if (input.keys.size() != input.queries.size() ||
      input.positions.size() != input.queries.size()) {
    throw ConfigError("attention input: queries, keys, positions must share length");
  }
  const int dim = input.config.dim();
  for (const auto& row : input.queries) {
    if (static_cast<int>(row.size()) != dim) throw ConfigError("query row width != dim");
  }
  for (const auto& row : input.keys) {
    if (static_cast<int>(row.size()) != dim) throw ConfigError("key row width != dim");
  }

  ScoreMatrix s;
  s.rows = rows;
  s.cols = rows;
  s.values.assign(static_cast<std::size_t>(rows) * rows, ScoreMatrix::kMasked);
  for (int m = 0; m < rows; ++m) {
    for (int n = 0; n <= m; ++n) {
      const double v = score_one(input.config, input.queries[m], input.keys[n],
                                 input.positions[m], input.positions[n]);
      if (!std::isfinite(v)) throw ConfigError("attention produced a non-finite score");
      s.at(m, n) = v;
    }
  }
  return s;
}

ScoreMatrix softmax_rows(const ScoreMatrix& scores) {
  ScoreMatrix out;
  out.rows = scores.rows;
  out.cols = scores.cols;
  out.values.assign(scores.values.size(), 0.0);
  for (int r = 0; r < scores.rows; ++r) {
    double maxv = ScoreMatrix::kMasked;
    for (int c = 0; c < scores.cols; ++c) {
      if (!scores.masked(r, c) && scores.at(r, c) > maxv) maxv = scores.at(r, c);
    }
    if (maxv == ScoreMatrix::kMasked) {
      throw DomainError("softmax_rows: fully masked row " + std::to_string(r));
    }
    double denom = 0.0;
    for (int c = 0; c < scores.cols; ++c) {
      if (!scores.masked(r, c)) denom += std::exp(scores.at(r, c) - maxv);
    }
    for (int c = 0; c < scores.cols; ++c) {
      if (!scores.masked(r, c)) {
        out.at(r, c) = std::exp(scores.at(r, c) - maxv) / denom;
      }
    }
  }
  return out;
}

ScoreGradient tapa_score_grad(std::span<const double> q,
                              std::span<const double> k, double m, double n,
                              const TAPAParams& t) {
  validate(t);
  if (t.phase != PhaseKind::quadratic_split) {
    throw ConfigError("tapa_score_grad supports the quadratic split form only");
  }
  if (static_cast<int>(q.size()) != t.dim || static_cast<int>(k.size()) != t.dim) {
    throw DomainError("tapa_score_grad: vector length does not match dim");
  }
  const int da = t.amp_dim();
  const int dp = t.phase_dim();
  const double amp_scale = 1.0 / std::sqrt(static_cast<double>(da));
  const double phase_scale = 1.0 / std::sqrt(static_cast<double>(dp));

  double amp_dot = 0.0;
  for (int i = 0; i < da; ++i) amp_dot += q[i] * k[i];
  double phase_dot = 0.0;
  for (int i = da; i < t.dim; ++i) phase_dot += q[i] * k[i];

  const double dist_pow = distance_power(m, n, t.alpha);
  const double phi = kTwoPi * dist_pow * phase_dot * phase_scale;
  const double cos_phi = std::cos(phi);
  const double sin_phi = std::sin(phi);
  const double amp = amp_dot * amp_scale;
  const double phase_coef = -amp * sin_phi * kTwoPi * dist_pow * phase_scale;

  ScoreGradient g;
  g.d_q.assign(static_cast<std::size_t>(t.dim), 0.0);
  g.d_k.assign(static_cast<std::size_t>(t.dim), 0.0);
  for (int i = 0; i < da; ++i) {
    g.d_q[i] = k[i] * cos_phi * amp_scale;
    g.d_k[i] = q[i] * cos_phi * amp_scale;
  }
  for (int i = da; i < t.dim; ++i) {
    g.d_q[i] = phase_coef * k[i];
    g.d_k[i] = phase_coef * q[i];
  }
  return g;
}

std::vector<GradCheckTrial> run_gradient_check(int trials, std::uint64_t seed,
                                               double fd_step) {
  if (trials < 1) throw ConfigError("gradient check needs at least one trial");
  std::vector<GradCheckTrial> out;
  out.reserve(static_cast<std::size_t>(trials));

  constexpr int kDims[] = {4, 8, 16, 32};
  constexpr double kFractions[] = {0.25, 0.5, 0.75};

  for (int trial = 0; trial < trials; ++trial) {
    RandomStream rs(seed, static_cast<std::uint64_t>(trial));
    TAPAParams t;
    t.dim = kDims[rs.next_int(0, 3)];
    t.amp_fraction = kFractions[rs.next_int(0, 2)];
    t.alpha = 0.05 + 0.20 * rs.next_uniform();
    t.phase = PhaseKind::quadratic_split;

    const double n_pos = static_cast<double>(rs.next_int(0, 1000));
    const double m_pos = n_pos + static_cast<double>(rs.next_int(1, 1000000));

    std::vector<double> q(static_cast<std::size_t>(t.dim));
    std::vector<double> k(static_cast<std::size_t>(t.dim));
    for (auto& x : q) x = rs.next_normal();
    for (auto& x : k) x = rs.next_normal();

    const ScoreGradient g = tapa_score_grad(q, k, m_pos, n_pos, t);
    double worst = 0.0;
    auto probe = [&](std::vector<double>& v, int i, double analytic) {
      const double saved = v[static_cast<std::size_t>(i)];
      v[static_cast<std::size_t>(i)] = saved + fd_step;
      const double hi = tapa_score_split(q, k, m_pos, n_pos, t);
      v[static_cast<std::size_t>(i)] = saved - fd_step;
      const double lo = tapa_score_split(q, k, m_pos, n_pos, t);
      v[static_cast<std::size_t>(i)] = saved;
      const double fd = (hi - lo) / (2.0 * fd_step);
      const double err = std::abs(analytic - fd) / std::max(std::abs(analytic), 1e-3);
      if (err > worst) worst = err;
    };
    for (int i = 0; i < t.dim; ++i) probe(q, i, g.d_q[static_cast<std::size_t>(i)]);
    for (int i = 0; i < t.dim; ++i) probe(k, i, g.d_k[static_cast<std::size_t>(i)]);
    out.push_back({trial, worst});
  }
  return out;
}

}  // namespace tapa
