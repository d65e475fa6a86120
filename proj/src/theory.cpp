#include "tapa/theory.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "tapa/errors.hpp"

namespace tapa {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Above this product the double path would lose more than ~1e-10 of angle
// to rounding, so the fractional part is computed at 256-bit precision.
constexpr double kExtendedArgThreshold = 65536.0;  // 2^16

// Reusable 256-bit workspace for frac(lambda * theta0^(num/den)).
class ExtendedFrac {
 public:
  ExtendedFrac() { mpfr_inits2(256, exp_, val_, static_cast<mpfr_ptr>(nullptr)); }
  ~ExtendedFrac() { mpfr_clears(exp_, val_, static_cast<mpfr_ptr>(nullptr)); }
  ExtendedFrac(const ExtendedFrac&) = delete;
  ExtendedFrac& operator=(const ExtendedFrac&) = delete;

  double operator()(double lambda, double theta0, long num, long den) {
    mpfr_set_si(exp_, num, MPFR_RNDN);
    mpfr_div_si(exp_, exp_, den, MPFR_RNDN);
    mpfr_set_d(val_, theta0, MPFR_RNDN);
    mpfr_pow(val_, val_, exp_, MPFR_RNDN);
    mpfr_mul_d(val_, val_, lambda, MPFR_RNDN);
    mpfr_frac(val_, val_, MPFR_RNDN);
    return mpfr_get_d(val_, MPFR_RNDN);
  }

 private:
  mpfr_t exp_, val_;
};

void validate_sum_args(const SumParams& p) {
  if (p.dim < 2 || p.dim % 2 != 0) throw ConfigError("sum dim must be even and >= 2");
  if (!(p.theta0 > 0.0 && p.theta0 < 1.0)) throw ConfigError("sum theta0 must lie in (0, 1)");
  if (!std::isfinite(p.lambda)) throw ConfigError("sum lambda must be finite");
}

void require_bound_regime(const SumParams& p) {
  if (!(p.theta0 < 0.1)) throw PreconditionError("theta0 < 1/10");
  if (!(p.dim > 4.0 * std::abs(std::log(p.theta0)))) {
    throw PreconditionError("dim > 4*|log(theta0)|");
  }
  if (!(p.lambda > 1.0)) throw PreconditionError("lambda > 1");
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw PreconditionError("alpha in (0, 1)");
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<CheckParam> sum_params_list(const SumParams& p) {
  return {{"lambda", p.lambda},
          {"theta0", p.theta0},
          {"dim", static_cast<double>(p.dim)},
          {"alpha", p.alpha}};
}

}  // namespace

std::pair<double, double> cosine_sine_sum(const SumParams& p) {
  validate_sum_args(p);
  const int half = p.dim / 2;
  ExtendedFrac extended_frac;
  double c = 0.0, s = 0.0;
  for (int d = 0; d < half; ++d) {
    const double theta_d = std::pow(p.theta0, 2.0 * d / p.dim);
    const double x = p.lambda * theta_d;
    double ang;
    if (std::abs(x) > kExtendedArgThreshold) {
      ang = kTwoPi * extended_frac(p.lambda, p.theta0, 2L * d, p.dim);
    } else {
      ang = kTwoPi * x;
    }
    c += std::cos(ang);
    s += std::sin(ang);
  }
  return {c / p.dim, s / p.dim};
}

double cosine_sum(const SumParams& p) { return cosine_sine_sum(p).first; }

double sine_sum(const SumParams& p) { return cosine_sine_sum(p).second; }

double riemann_slack(const SumParams& p) {
  validate_sum_args(p);
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw ConfigError("slack alpha must lie in (0, 1)");
  return p.alpha +
         4.0 * M_PI * p.lambda * std::pow(p.theta0, p.alpha) / p.dim;
}

std::pair<TheoryCheckReport, TheoryCheckReport> sum_upper_bound_check(
    const SumParams& p) {
  validate_sum_args(p);
  require_bound_regime(p);
  const auto [c, s] = cosine_sine_sum(p);
  const double slack = riemann_slack(p);
  const double log_t = std::abs(std::log(p.theta0));

  TheoryCheckReport cos_report;
  cos_report.name = "cos-sum-upper";
  cos_report.params = sum_params_list(p);
  cos_report.lhs = std::abs(c);
  cos_report.rhs = 2.0 / (p.theta0 * log_t * p.lambda * M_PI) + slack;
  cos_report.margin = cos_report.rhs - cos_report.lhs;
  cos_report.pass = cos_report.lhs <= cos_report.rhs;

  TheoryCheckReport sin_report;
  sin_report.name = "sin-sum-upper";
  sin_report.params = sum_params_list(p);
  sin_report.lhs = std::abs(s);
  sin_report.rhs = 2.0 / log_t + slack;
  sin_report.margin = sin_report.rhs - sin_report.lhs;
  sin_report.pass = sin_report.lhs <= sin_report.rhs;

  return {cos_report, sin_report};
}

TheoryCheckReport cosine_lower_bound_check(const SumParams& p) {
  validate_sum_args(p);
  require_bound_regime(p);
  if (!(p.eps0 > 0.0 && p.eps0 < 1.0)) throw PreconditionError("eps0 in (0, 1)");
  const double scaled = p.lambda * std::pow(p.theta0, p.eps0);
  if (!(scaled < 0.25)) throw PreconditionError("lambda * theta0^eps0 < 1/4");

  const double c = cosine_sum(p);
  const double slack = riemann_slack(p);
  const double log_t = std::abs(std::log(p.theta0));

  TheoryCheckReport r;
  r.name = "cos-sum-lower";
  r.params = sum_params_list(p);
  r.params.push_back({"eps0", p.eps0});
  r.lhs = c;
  r.rhs = 0.5 * (1.0 - p.eps0) * std::cos(kTwoPi * scaled) - 1.0 / log_t - slack;
  r.margin = r.lhs - r.rhs;
  r.pass = r.lhs > r.rhs;
  return r;
}

double rope_mean_bias(double lambda, double mu0, double nu0, double theta0,
                      int dim) {
  if (mu0 == 0.0 && nu0 == 0.0) return 0.0;
  SumParams p;
  p.lambda = lambda;
  p.theta0 = theta0;
  p.dim = dim;
  const auto [c, s] = cosine_sine_sum(p);
  return mu0 * c + nu0 * s;
}

SummaryStats monte_carlo_rope_bias(double lambda, const SamplerSpec& spec,
                                   const RoPEParams& p, std::int64_t n_samples,
                                   const McOptions& opts) {
  validate(spec);
  validate(p);
  if (spec.dim != p.dim) throw ConfigError("sampler dim must match rope dim");
  if (n_samples < 1000) throw PreconditionError("n_samples >= 1000");

  const int half = p.dim / 2;
  std::vector<double> cos_tab(static_cast<std::size_t>(half));
  std::vector<double> sin_tab(static_cast<std::size_t>(half));
  for (int d = 0; d < half; ++d) {
    const double ang = kTwoPi * lambda * std::pow(p.theta0, 2.0 * d / p.dim);
    cos_tab[static_cast<std::size_t>(d)] = std::cos(ang);
    sin_tab[static_cast<std::size_t>(d)] = std::sin(ang);
  }

  const double inv_dim = 1.0 / p.dim;
  auto total = mc_run<MomentAccumulator>(
      n_samples, opts,
      [&](std::uint64_t stream, std::int64_t count, MomentAccumulator& acc) {
        RandomStream rs(spec.seed, stream);
        std::vector<double> q(static_cast<std::size_t>(p.dim));
        std::vector<double> k(static_cast<std::size_t>(p.dim));
        for (std::int64_t i = 0; i < count; ++i) {
          sample_pair_into(spec, rs, q, k);
          double v = 0.0;
          for (int d = 0; d < half; ++d) {
            const double a = q[2 * d] * k[2 * d] + q[2 * d + 1] * k[2 * d + 1];
            const double b = q[2 * d] * k[2 * d + 1] - q[2 * d + 1] * k[2 * d];
            v += a * cos_tab[static_cast<std::size_t>(d)] +
                 b * sin_tab[static_cast<std::size_t>(d)];
          }
          acc.add(v * inv_dim);
        }
      });
  return total.stats();
}

TheoryCheckReport distance_gap_check(const GapParams& g, bool strict_regime) {
  if (!(g.theta0 > 0.0 && g.theta0 < 1.0)) throw ConfigError("theta0 must lie in (0, 1)");
  if (g.dim < 2 || g.dim % 2 != 0) throw ConfigError("dim must be even and >= 2");
  if (g.mu0 == 0.0) throw PreconditionError("mu0 != 0");
  if (!(g.lambda_near > 1.0)) throw PreconditionError("lambda_near > 1");
  if (!(g.lambda_far > 1.0 / g.theta0)) throw PreconditionError("lambda_far > theta0^-1");
  if (strict_regime) {
    const double cap =
        std::exp(-64.0 * (std::abs(g.mu0) + std::abs(g.nu0)) / std::abs(g.mu0));
    if (!(g.theta0 < cap)) {
      throw PreconditionError("theta0 < exp(-64*(|mu0|+|nu0|)/|mu0|)");
    }
    if (!(g.lambda_near < std::pow(g.theta0, -0.25) / 8.0)) {
      throw PreconditionError("lambda_near < theta0^(-1/4)/8");
    }
  }

  const double bias_near =
      rope_mean_bias(g.lambda_near, g.mu0, g.nu0, g.theta0, g.dim);
  const double bias_far =
      rope_mean_bias(g.lambda_far, g.mu0, g.nu0, g.theta0, g.dim);
  const double sign = g.mu0 > 0.0 ? 1.0 : -1.0;

  TheoryCheckReport r;
  r.name = "distance-gap";
  r.params = {{"lambda_near", g.lambda_near}, {"lambda_far", g.lambda_far},
              {"mu0", g.mu0},                 {"nu0", g.nu0},
              {"theta0", g.theta0},           {"dim", static_cast<double>(g.dim)},
              {"strict", strict_regime ? 1.0 : 0.0}};
  r.lhs = sign * (bias_near - bias_far);
  r.rhs = std::abs(g.mu0) / 8.0;
  r.margin = r.lhs - r.rhs;
  r.pass = r.lhs > r.rhs;
  return r;
}

ShrinkResult gap_shrink_check(const GapParams& start, double eps, int budget) {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(start.theta0 > 0.0 && start.theta0 < 1.0)) {
    throw ConfigError("theta0 must lie in (0, 1)");
  }
  if (start.dim < 2 || start.dim % 2 != 0) throw ConfigError("dim must be even and >= 2");
  if (budget < 0) throw ConfigError("budget must be non-negative");

  ShrinkResult result;
  double theta0 = start.theta0;
  std::int64_t dim = start.dim;
  double delta = 0.0;
  int steps_used = 0;
  bool reached = false;
  for (int step = 0; step <= budget; ++step) {
    if (step > 0) {
      if (step % 2 == 1) {
        theta0 /= 10.0;  // shrink theta0 first, then grow D
      } else {
        dim *= 2;
      }
    }
    const double bias_near = rope_mean_bias(start.lambda_near, start.mu0,
                                            start.nu0, theta0, static_cast<int>(dim));
    const double bias_far = rope_mean_bias(start.lambda_far, start.mu0,
                                           start.nu0, theta0, static_cast<int>(dim));
    delta = std::abs(bias_near - bias_far);
    result.trace.push_back({theta0, dim, delta});
    steps_used = step;
    if (delta < eps) {
      reached = true;
      break;
    }
  }

  TheoryCheckReport r;
  r.name = "gap-shrink";
  r.params = {{"lambda_near", start.lambda_near},
              {"lambda_far", start.lambda_far},
              {"mu0", start.mu0},
              {"nu0", start.nu0},
              {"theta0_start", start.theta0},
              {"dim_start", static_cast<double>(start.dim)},
              {"theta0_final", theta0},
              {"dim_final", static_cast<double>(dim)},
              {"steps_used", static_cast<double>(steps_used)},
              {"budget", static_cast<double>(budget)}};
  r.lhs = delta;
  r.rhs = eps;
  r.margin = r.rhs - r.lhs;
  r.pass = reached;
  result.report = r;
  return result;
}

double phase_offset(double mu0, double nu0) { return std::atan2(mu0, nu0); }

SearchResult subconvergence_search(double gamma_target, double mu0, double nu0,
                                   const RoPEParams& p,
                                   std::int64_t lambda_max) {
  validate(p);
  if (lambda_max < 1) throw ConfigError("lambda_max must be >= 1");
  const double reach = std::sqrt(mu0 * mu0 + nu0 * nu0);
  if (!(std::abs(gamma_target) <= reach)) {
    throw DomainError("gamma target exceeds sqrt(mu0^2 + nu0^2)");
  }

  const int half = p.dim / 2;
  std::vector<double> theta(static_cast<std::size_t>(half));
  for (int d = 0; d < half; ++d) {
    theta[static_cast<std::size_t>(d)] = std::pow(p.theta0, 2.0 * d / p.dim);
  }

  SearchResult best;
  best.best_error = std::numeric_limits<double>::infinity();
  const double scale = 2.0 / p.dim;
  for (std::int64_t lambda = 1; lambda <= lambda_max; ++lambda) {
    double v = 0.0;
    const double l = static_cast<double>(lambda);
    for (int d = 0; d < half; ++d) {
      const double ang = kTwoPi * l * theta[static_cast<std::size_t>(d)];
      v += mu0 * std::cos(ang);
      if (nu0 != 0.0) v += nu0 * std::sin(ang);
    }
    const double err = std::abs(scale * v - gamma_target);
    if (err < best.best_error) {
      best.best_error = err;
      best.best_lambda = lambda;
    }
  }
  return best;
}

double tapa_expected_cos(double distance, double alpha, int phase_dim) {
  if (phase_dim < 0) throw ConfigError("phase_dim must be non-negative");
  if (phase_dim == 0) return 1.0;
  const double c = kTwoPi * distance_power(distance, 0.0, alpha) /
                   std::sqrt(static_cast<double>(phase_dim));
  return std::pow(1.0 + c * c, -0.5 * phase_dim);
}

double tapa_expected_score(double distance, double mu0, const TAPAParams& t) {
  validate(t);
  return mu0 * std::sqrt(static_cast<double>(t.amp_dim())) / 2.0 *
         tapa_expected_cos(distance, t.alpha, t.phase_dim());
}

void sample_tapa_pair_into(const SamplerSpec& spec, const TAPAParams& t,
                           RandomStream& rs, std::span<double> q,
                           std::span<double> k) {
  const int da = t.amp_dim();
  const double half_mu = 0.5 * spec.mu0;
  const double half_nu = 0.5 * spec.nu0;
  const double b = spec.noise_scale;
  for (int i = 0; i < da; ++i) q[i] = rs.next_normal();
  if (spec.nu0 == 0.0) {
    for (int i = 0; i < da; ++i) k[i] = half_mu * q[i] + b * rs.next_normal();
  } else {
    for (int i = 0; i < da; i += 2) {
      const double e0 = rs.next_normal();
      const double e1 = rs.next_normal();
      k[i] = half_mu * q[i] - half_nu * q[i + 1] + b * e0;
      k[i + 1] = half_mu * q[i + 1] + half_nu * q[i] + b * e1;
    }
  }
  for (int i = da; i < t.dim; ++i) q[i] = rs.next_normal();
  for (int i = da; i < t.dim; ++i) k[i] = rs.next_normal();
}

namespace {

void validate_segmented_sampler(const SamplerSpec& spec, const TAPAParams& t) {
  validate(spec);
  validate(t);
  if (spec.dim != t.dim) throw ConfigError("sampler dim must match tapa dim");
  if (t.phase != PhaseKind::quadratic_split) {
    throw ConfigError("segmented checks support the quadratic split form only");
  }
  if (spec.nu0 != 0.0 && t.amp_dim() % 2 != 0) {
    throw ConfigError("nu0 != 0 needs an even amplitude width");
  }
}

}  // namespace

DecayCheckResult tapa_decay_check(const TAPAParams& t, const SamplerSpec& spec,
                                  const std::vector<double>& distances,
                                  std::int64_t n_samples,
                                  const McOptions& opts) {
  validate_segmented_sampler(spec, t);
  if (spec.mu0 == 0.0) throw PreconditionError("mu0 != 0");
  if (distances.empty()) throw ConfigError("distances must be non-empty");
  if (n_samples < 2) throw ConfigError("n_samples must be >= 2");

  const int da = t.amp_dim();
  const int dp = t.phase_dim();
  const double amp_scale = 1.0 / std::sqrt(static_cast<double>(da));
  const double phase_scale = 1.0 / std::sqrt(static_cast<double>(dp));

  DecayCheckResult out;
  out.curve.encoding = "tapa";
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double dist = distances[i];
    const double dist_pow = distance_power(dist, 0.0, t.alpha);
    McOptions point_opts = opts;
    point_opts.stream_base =
        opts.stream_base + i * static_cast<std::uint64_t>(opts.streams);
    auto acc = mc_run<MomentAccumulator>(
        n_samples, point_opts,
        [&](std::uint64_t stream, std::int64_t count, MomentAccumulator& a) {
          RandomStream rs(spec.seed, stream);
          std::vector<double> q(static_cast<std::size_t>(t.dim));
          std::vector<double> k(static_cast<std::size_t>(t.dim));
          for (std::int64_t s = 0; s < count; ++s) {
            sample_tapa_pair_into(spec, t, rs, q, k);
            double amp_dot = 0.0;
            for (int j = 0; j < da; ++j) amp_dot += q[j] * k[j];
            double phase_dot = 0.0;
            for (int j = da; j < t.dim; ++j) phase_dot += q[j] * k[j];
            const double amp = amp_dot * amp_scale;
            const double phase = phase_dot * phase_scale;
            a.add(amp * std::cos(kTwoPi * dist_pow * phase));
          }
        });
    const SummaryStats st = acc.stats();
    DecayPoint pt;
    pt.distance = dist;
    pt.estimate = st.mean;
    pt.ci95_half_width = st.ci95_half_width;
    pt.oracle = tapa_expected_score(dist, spec.mu0, t);
    out.curve.points.push_back(pt);
    const double diff = std::abs(pt.estimate - pt.oracle);
    const double ratio = pt.ci95_half_width > 0.0
                             ? diff / pt.ci95_half_width
                             : (diff == 0.0 ? 0.0
                                            : std::numeric_limits<double>::infinity());
    worst_ratio = std::max(worst_ratio, ratio);
  }

  std::vector<double> log_d, log_o;
  for (const auto& pt : out.curve.points) {
    if (pt.distance > 0.0 && pt.oracle != 0.0) {
      log_d.push_back(std::log(pt.distance));
      log_o.push_back(std::log(std::abs(pt.oracle)));
    }
  }
  if (log_d.size() < 2) {
    throw ConfigError("decay check needs at least two positive distances");
  }
  out.curve.fitted_slope = fit_slope(log_d, log_o);

  std::vector<CheckParam> shared = {
      {"alpha", t.alpha},
      {"amp_fraction", t.amp_fraction},
      {"dim", static_cast<double>(t.dim)},
      {"mu0", spec.mu0},
      {"nu0", spec.nu0},
      {"noise_scale", spec.noise_scale},
      {"n_samples", static_cast<double>(n_samples)},
      {"n_distances", static_cast<double>(distances.size())}};

  out.pointwise.name = "tapa-decay-pointwise";
  out.pointwise.params = shared;
  out.pointwise.lhs = worst_ratio;
  out.pointwise.rhs = 4.0;
  out.pointwise.margin = out.pointwise.rhs - out.pointwise.lhs;
  out.pointwise.pass = out.pointwise.lhs <= out.pointwise.rhs;

  const double target = -t.alpha * static_cast<double>(dp);
  out.slope.name = "tapa-decay-slope";
  out.slope.params = shared;
  out.slope.params.push_back({"slope_target", target});
  out.slope.lhs = out.curve.fitted_slope;
  out.slope.rhs = target;
  out.slope.margin = 0.2 - std::abs(out.slope.lhs - out.slope.rhs);
  out.slope.pass = out.slope.margin >= 0.0;
  return out;
}

TheoryCheckReport tapa_variance_floor_check(const TAPAParams& t,
                                            const SamplerSpec& spec,
                                            double distance,
                                            std::int64_t n_samples,
                                            const McOptions& opts) {
  validate_segmented_sampler(spec, t);
  if (spec.mu0 != 0.0 || spec.nu0 != 0.0) {
    throw PreconditionError("mu0 = 0 and nu0 = 0 (uncorrelated amplitude)");
  }
  if (!(distance >= 1e3)) throw PreconditionError("distance >= 1e3");
  if (n_samples < 2) throw ConfigError("n_samples must be >= 2");

  const int da = t.amp_dim();
  const double amp_scale = 1.0 / std::sqrt(static_cast<double>(da));
  const double phase_scale = 1.0 / std::sqrt(static_cast<double>(t.phase_dim()));
  const double dist_pow = distance_power(distance, 0.0, t.alpha);

  auto acc = mc_run<VarianceAccumulator>(
      n_samples, opts,
      [&](std::uint64_t stream, std::int64_t count, VarianceAccumulator& a) {
        RandomStream rs(spec.seed, stream);
        std::vector<double> q(static_cast<std::size_t>(t.dim));
        std::vector<double> k(static_cast<std::size_t>(t.dim));
        for (std::int64_t s = 0; s < count; ++s) {
          sample_tapa_pair_into(spec, t, rs, q, k);
          double amp_dot = 0.0;
          for (int j = 0; j < da; ++j) amp_dot += q[j] * k[j];
          double phase_dot = 0.0;
          for (int j = da; j < t.dim; ++j) phase_dot += q[j] * k[j];
          a.add(amp_dot * amp_scale *
                std::cos(kTwoPi * dist_pow * phase_dot * phase_scale));
        }
      });

  const double sigma0_sq = sampler_sigma0_sq(spec);
  TheoryCheckReport r;
  r.name = "tapa-variance-floor";
  r.params = {{"distance", distance},
              {"alpha", t.alpha},
              {"amp_fraction", t.amp_fraction},
              {"dim", static_cast<double>(t.dim)},
              {"noise_scale", spec.noise_scale},
              {"sigma0_sq", sigma0_sq},
              {"n_samples", static_cast<double>(n_samples)},
              {"var_ci95", acc.variance_ci95()}};
  r.lhs = acc.variance();
  r.rhs = 0.45 * sigma0_sq;
  r.margin = r.lhs - r.rhs;
  r.pass = r.lhs >= r.rhs;
  return r;
}

}  // namespace tapa
