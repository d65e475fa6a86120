#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tapa/encodings.hpp"
#include "tapa/sampler.hpp"
#include "tapa/stats.hpp"

namespace tapa {

/// Arguments of the dimension-averaged trigonometric sums and their bounds.
struct SumParams {
  double lambda = 0.0;  // relative distance
  double theta0 = 0.0;  // inverse base frequency, in (0, 1)
  int dim = 0;          // head dimension D, even
  double alpha = 0.1;   // slack exponent, in (0, 1)
  double eps0 = 0.25;   // lower-bound exponent, in (0, 1)
};

struct CheckParam {
  std::string name;
  double value = 0.0;
};

/// One verified inequality: lhs vs rhs with the signed margin in the
/// passing direction (margin >= 0 iff pass).
struct TheoryCheckReport {
  std::string name;
  std::vector<CheckParam> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
};

/// C(lambda) = (1/D) sum_{d<D/2} cos(2*pi*lambda*theta0^(2d/D)).
/// Arguments whose product exceeds 2^16 go through a 256-bit fractional-part
/// reduction; below that, plain doubles already keep the angle to ~1e-10.
double cosine_sum(const SumParams& p);

/// Sine analogue of cosine_sum (odd in lambda).
double sine_sum(const SumParams& p);

/// Both sums in one pass.
std::pair<double, double> cosine_sine_sum(const SumParams& p);

/// Riemann-sum slack alpha + 4*pi*lambda*theta0^alpha / D.
double riemann_slack(const SumParams& p);

/// Upper bounds on |C| and |S|:
///   |C| <= 2 / (theta0 |log theta0| lambda pi) + slack
///   |S| <= 2 / |log theta0| + slack
/// Requires theta0 < 1/10, D > 4|log theta0|, lambda > 1 (natural logs).
std::pair<TheoryCheckReport, TheoryCheckReport> sum_upper_bound_check(
    const SumParams& p);

/// Lower bound on C when lambda*theta0^eps0 < 1/4:
///   C > (1/2)(1 - eps0) cos(2*pi*lambda*theta0^eps0) - 1/|log theta0| - slack.
TheoryCheckReport cosine_lower_bound_check(const SumParams& p);

/// Deterministic mean of the normalized rotary score under the sampler
/// moments: mu0 * C(lambda) + nu0 * S(lambda).
double rope_mean_bias(double lambda, double mu0, double nu0, double theta0,
                      int dim);

/// Monte Carlo estimate of the normalized rotary score mean at distance
/// lambda; agrees with rope_mean_bias within its confidence interval.
SummaryStats monte_carlo_rope_bias(double lambda, const SamplerSpec& spec,
                                   const RoPEParams& p, std::int64_t n_samples,
                                   const McOptions& opts = {});

/// Near/far distance pair for the attention-gap checks.
struct GapParams {
  double lambda_near = 0.0;
  double lambda_far = 0.0;
  double mu0 = 0.0;
  double nu0 = 0.0;
  double theta0 = 0.0;
  int dim = 0;
};

/// Checks sgn(mu0) * (bias(lambda_near) - bias(lambda_far)) > |mu0| / 8.
/// Always requires lambda_near > 1, lambda_far > 1/theta0, mu0 != 0.
/// With strict_regime the admissibility window of the statement is enforced
/// as well: theta0 < exp(-64(|mu0|+|nu0|)/|mu0|) and
/// lambda_near < theta0^(-1/4)/8.
TheoryCheckReport distance_gap_check(const GapParams& g, bool strict_regime);

struct ShrinkStep {
  double theta0 = 0.0;
  std::int64_t dim = 0;
  double delta = 0.0;
};

struct ShrinkResult {
  TheoryCheckReport report;
  std::vector<ShrinkStep> trace;
};

/// Drives |bias(lambda_near) - bias(lambda_far)| below eps by alternately
/// dividing theta0 by 10 and doubling D, starting from the given params.
/// Budget exhaustion reports pass = false with the full trace.
ShrinkResult gap_shrink_check(const GapParams& start, double eps,
                              int budget = 40);

/// sin-form phase offset: atan2(mu0, nu0) (two-argument form; well defined
/// at nu0 = 0).
double phase_offset(double mu0, double nu0);

struct SearchResult {
  std::int64_t best_lambda = 0;
  double best_error = 0.0;
};

/// Scans integer distances 1..lambda_max for the one whose doubled mean
/// bias comes closest to gamma_target. Requires
/// |gamma_target| <= sqrt(mu0^2 + nu0^2).
SearchResult subconvergence_search(double gamma_target, double mu0, double nu0,
                                   const RoPEParams& p,
                                   std::int64_t lambda_max);

/// E[cos(c * qP.kP)] for independent standard-normal phase segments:
/// (1 + c^2)^(-phase_dim/2) with c = 2*pi*distance^alpha / sqrt(phase_dim).
/// phase_dim = 0 is accepted and yields the constant 1.
double tapa_expected_cos(double distance, double alpha, int phase_dim);

/// Full expected split score under the segmented sampler: the cosine factor
/// times the amplitude mean mu0 * sqrt(amp_dim) / 2.
double tapa_expected_score(double distance, double mu0, const TAPAParams& t);

/// Segmented sampler for split-form checks: the amplitude block follows the
/// moment construction of sample_pair; phase blocks of q and k are i.i.d.
/// standard normal, independent of everything else.
void sample_tapa_pair_into(const SamplerSpec& spec, const TAPAParams& t,
                           RandomStream& rs, std::span<double> q,
                           std::span<double> k);

struct DecayPoint {
  double distance = 0.0;
  double estimate = 0.0;
  double ci95_half_width = 0.0;
  double oracle = 0.0;
};

struct DecayCurve {
  std::string encoding;
  std::vector<DecayPoint> points;
  double fitted_slope = 0.0;  // log-log least squares on |oracle|
};

struct DecayCheckResult {
  DecayCurve curve;
  TheoryCheckReport pointwise;  // max |estimate-oracle| / ci_half vs 4
  TheoryCheckReport slope;      // fitted slope vs -alpha*(1-theta)*D, +-0.2
};

/// Monte Carlo decay check of the split score against the closed-form
/// oracle. Requires mu0 != 0 (a nonzero amplitude mean).
DecayCheckResult tapa_decay_check(const TAPAParams& t, const SamplerSpec& spec,
                                  const std::vector<double>& distances,
                                  std::int64_t n_samples,
                                  const McOptions& opts = {});

/// Long-range variance floor: empirical Var(score) >= 0.45 * sigma0^2 at the
/// given distance. Requires mu0 = nu0 = 0 (uncorrelated amplitude segments)
/// and distance >= 1e3.
TheoryCheckReport tapa_variance_floor_check(const TAPAParams& t,
                                            const SamplerSpec& spec,
                                            double distance,
                                            std::int64_t n_samples,
                                            const McOptions& opts = {});

}  // namespace tapa
