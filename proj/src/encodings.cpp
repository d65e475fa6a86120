#include "tapa/encodings.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>

#include "tapa/errors.hpp"

namespace tapa {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_length(std::span<const double> v, int dim, const char* what) {
  if (static_cast<int>(v.size()) != dim) {
    throw DomainError(std::string(what) + ": vector length does not match dim");
  }
}

double dot(std::span<const double> a, std::span<const double> b, int lo, int hi) {
  double s = 0.0;
  for (int i = lo; i < hi; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

int TAPAParams::amp_dim() const {
  return static_cast<int>(std::llround(amp_fraction * dim));
}

int TAPAParams::phase_dim() const { return dim - amp_dim(); }

void validate(const RoPEParams& p) {
  if (p.dim < 2 || p.dim % 2 != 0) throw ConfigError("rope dim must be even and >= 2");
  if (!(p.theta0 > 0.0 && p.theta0 < 1.0)) throw ConfigError("rope theta0 must lie in (0, 1)");
}

void validate(const TAPAParams& t) {
  if (t.dim < 2) throw ConfigError("tapa dim must be >= 2");
  if (!(t.amp_fraction > 0.0 && t.amp_fraction < 1.0)) {
    throw ConfigError("tapa amp_fraction must lie in (0, 1)");
  }
  const double exact = t.amp_fraction * t.dim;
  if (std::abs(exact - std::llround(exact)) > 1e-9) {
    throw ConfigError("tapa split is not integral: amp_fraction * dim must be an integer");
  }
  if (t.amp_dim() < 1 || t.phase_dim() < 1) {
    throw ConfigError("tapa split leaves an empty segment");
  }
  if (!(t.alpha > 0.0)) throw ConfigError("tapa alpha must be positive");
}

void validate(const GeneralTAPA& g) {
  const auto n = static_cast<std::size_t>(g.dim) * static_cast<std::size_t>(g.dim);
  if (g.dim < 1 || g.amp_matrix.size() != n || g.phase_matrix.size() != n) {
    throw ConfigError("general tapa matrices must be dim x dim");
  }
  if (!(g.alpha > 0.0)) throw ConfigError("tapa alpha must be positive");
}

void validate(const PositionMap& m) {
  if (m.kind == PositionMap::Kind::interpolation && !(m.scale >= 1.0)) {
    throw ConfigError("interpolation scale must be >= 1");
  }
}

double rope_theta_d(int d, const RoPEParams& p) {
  validate(p);
  if (d < 0 || d > p.dim / 2 - 1) throw DomainError("rope_theta_d: d out of [0, D/2 - 1]");
  return std::pow(p.theta0, 2.0 * d / p.dim);
}

std::pair<double, double> ab_coefficients(std::span<const double> q,
                                          std::span<const double> k, int d) {
  if (q.size() != k.size()) throw DomainError("ab_coefficients: length mismatch");
  if (d < 0 || 2 * d + 1 >= static_cast<int>(q.size())) {
    throw DomainError("ab_coefficients: pair index out of range");
  }
  const double a = q[2 * d] * k[2 * d] + q[2 * d + 1] * k[2 * d + 1];
  const double b = q[2 * d] * k[2 * d + 1] - q[2 * d + 1] * k[2 * d];
  return {a, b};
}

double rope_score_complex(std::span<const double> q, std::span<const double> k,
                          double m, double n, const RoPEParams& p) {
  validate(p);
  check_length(q, p.dim, "rope_score");
  check_length(k, p.dim, "rope_score");
  const double lambda = m - n;
  std::complex<double> acc(0.0, 0.0);
  for (int d = 0; d < p.dim / 2; ++d) {
    const std::complex<double> qc(q[2 * d], q[2 * d + 1]);
    const std::complex<double> kc(k[2 * d], k[2 * d + 1]);
    const double theta_d = std::pow(p.theta0, 2.0 * d / p.dim);
    acc += qc * std::conj(kc) * std::polar(1.0, kTwoPi * lambda * theta_d);
  }
  return acc.real() / std::sqrt(static_cast<double>(p.dim));
}

double rope_score_expanded(std::span<const double> q, std::span<const double> k,
                           double m, double n, const RoPEParams& p) {
  validate(p);
  check_length(q, p.dim, "rope_score");
  check_length(k, p.dim, "rope_score");
  const double lambda = m - n;
  double acc = 0.0;
  for (int d = 0; d < p.dim / 2; ++d) {
    const double theta_d = std::pow(p.theta0, 2.0 * d / p.dim);
    const double ang = kTwoPi * lambda * theta_d;
    const double a = q[2 * d] * k[2 * d] + q[2 * d + 1] * k[2 * d + 1];
    const double b = q[2 * d] * k[2 * d + 1] - q[2 * d + 1] * k[2 * d];
    acc += a * std::cos(ang) + b * std::sin(ang);
  }
  return acc / std::sqrt(static_cast<double>(p.dim));
}

double apply_position_map(double pos, const PositionMap& map) {
  validate(map);
  return map.kind == PositionMap::Kind::interpolation ? pos / map.scale : pos;
}

double distance_power(double m, double n, double alpha) {
  const double dist = std::abs(m - n);
  return dist == 0.0 ? 0.0 : std::pow(dist, alpha);
}

double tapa_score_general(std::span<const double> q, std::span<const double> k,
                          double m, double n, const GeneralTAPA& g) {
  validate(g);
  check_length(q, g.dim, "tapa_score_general");
  check_length(k, g.dim, "tapa_score_general");
  double amp = 0.0, phase = 0.0;
  for (int i = 0; i < g.dim; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * g.dim;
    double ma = 0.0, mp = 0.0;
    for (int j = 0; j < g.dim; ++j) {
      ma += g.amp_matrix[row + j] * k[j];
      mp += g.phase_matrix[row + j] * k[j];
    }
    amp += q[i] * ma;
    phase += q[i] * mp;
  }
  return amp * std::cos(kTwoPi * distance_power(m, n, g.alpha) * phase);
}

double tapa_score_split(std::span<const double> q, std::span<const double> k,
                        double m, double n, const TAPAParams& t) {
  validate(t);
  check_length(q, t.dim, "tapa_score_split");
  check_length(k, t.dim, "tapa_score_split");
  const int da = t.amp_dim();
  const double amp = dot(q, k, 0, da) / std::sqrt(static_cast<double>(da));
  const double phase =
      dot(q, k, da, t.dim) / std::sqrt(static_cast<double>(t.phase_dim()));
  return amp * std::cos(kTwoPi * distance_power(m, n, t.alpha) * phase);
}

double linear_phase(std::span<const double> q, std::span<const double> k,
                    const TAPAParams& t) {
  validate(t);
  check_length(q, t.dim, "linear_phase");
  check_length(k, t.dim, "linear_phase");
  const int da = t.amp_dim();
  double s = 0.0;
  for (int i = da; i < t.dim; ++i) s += q[i] + k[i];
  return s / std::sqrt(static_cast<double>(t.phase_dim()));
}

double tapa_score(std::span<const double> q, std::span<const double> k,
                  double m, double n, const TAPAParams& t) {
  switch (t.phase) {
    case PhaseKind::quadratic_split:
      return tapa_score_split(q, k, m, n, t);
    case PhaseKind::linear: {
      validate(t);
      check_length(q, t.dim, "tapa_score");
      check_length(k, t.dim, "tapa_score");
      const int da = t.amp_dim();
      const double amp = dot(q, k, 0, da) / std::sqrt(static_cast<double>(da));
      return amp * std::cos(kTwoPi * distance_power(m, n, t.alpha) *
                            linear_phase(q, k, t));
    }
    case PhaseKind::general:
      throw ConfigError("tapa_score: general phase requires explicit matrices");
  }
  throw ConfigError("tapa_score: unknown phase kind");
}

GeneralTAPA split_as_general(const TAPAParams& t) {
  validate(t);
  GeneralTAPA g;
  g.dim = t.dim;
  g.alpha = t.alpha;
  const auto n = static_cast<std::size_t>(t.dim) * static_cast<std::size_t>(t.dim);
  g.amp_matrix.assign(n, 0.0);
  g.phase_matrix.assign(n, 0.0);
  const int da = t.amp_dim();
  const double amp_scale = 1.0 / std::sqrt(static_cast<double>(da));
  const double phase_scale = 1.0 / std::sqrt(static_cast<double>(t.phase_dim()));
  for (int i = 0; i < da; ++i) {
    g.amp_matrix[static_cast<std::size_t>(i) * t.dim + i] = amp_scale;
  }
  for (int i = da; i < t.dim; ++i) {
    g.phase_matrix[static_cast<std::size_t>(i) * t.dim + i] = phase_scale;
  }
  return g;
}

}  // namespace tapa
