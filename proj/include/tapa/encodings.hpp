#pragma once

#include <span>
#include <utility>
#include <vector>

namespace tapa {

/// Rotary encoding parameters. theta0 is the inverse base frequency
/// (base = 1/theta0); the d-th pair rotates by 2*pi*(m-n)*theta0^(2d/D).
struct RoPEParams {
  int dim = 0;          // head dimension D, even, >= 2
  double theta0 = 0.0;  // in (0, 1)
};

enum class PhaseKind { quadratic_split, linear, general };

/// Split-form phase attention parameters. The first amp_fraction*D
/// coordinates of q and k form the amplitude segment, the rest the phase
/// segment; both products are scaled by the square root of their width.
struct TAPAParams {
  int dim = 0;
  double amp_fraction = 0.5;  // theta in (0, 1); theta*D and (1-theta)*D integral
  double alpha = 0.1;         // distance exponent, > 0
  PhaseKind phase = PhaseKind::quadratic_split;

  int amp_dim() const;
  int phase_dim() const;
};

/// Fully general bilinear form: score = q^T M k * cos(2*pi*|m-n|^alpha * q^T N k).
struct GeneralTAPA {
  int dim = 0;
  std::vector<double> amp_matrix;    // M, row-major dim x dim
  std::vector<double> phase_matrix;  // N, row-major dim x dim
  double alpha = 0.1;
};

/// Positions pass through one of these before scoring.
struct PositionMap {
  enum class Kind { identity, interpolation };
  Kind kind = Kind::identity;
  double scale = 1.0;  // >= 1, interpolation only
};

void validate(const RoPEParams& p);
void validate(const TAPAParams& p);
void validate(const GeneralTAPA& g);
void validate(const PositionMap& m);

/// Rotation argument theta_d = theta0^(2d/D) for 0 <= d <= D/2 - 1.
double rope_theta_d(int d, const RoPEParams& p);

/// Pair products (A_d, B_d) = (q2d*k2d + q2d1*k2d1, q2d*k2d1 - q2d1*k2d).
std::pair<double, double> ab_coefficients(std::span<const double> q,
                                          std::span<const double> k, int d);

/// Rotary score via the complexified form:
/// (1/sqrt(D)) Re sum_d qC_d * conj(kC_d) * exp(i*2*pi*(m-n)*theta_d).
double rope_score_complex(std::span<const double> q, std::span<const double> k,
                          double m, double n, const RoPEParams& p);

/// Same value via the real expansion sum_d A_d cos + B_d sin. Agrees with
/// the complex form to ~1e-12 on any input.
double rope_score_expanded(std::span<const double> q, std::span<const double> k,
                           double m, double n, const RoPEParams& p);

/// identity -> pos; interpolation -> pos / scale.
double apply_position_map(double pos, const PositionMap& map);

/// |m-n|^alpha with the m = n case defined as 0 (so the cosine is 1).
double distance_power(double m, double n, double alpha);

double tapa_score_general(std::span<const double> q, std::span<const double> k,
                          double m, double n, const GeneralTAPA& g);

double tapa_score_split(std::span<const double> q, std::span<const double> k,
                        double m, double n, const TAPAParams& t);

/// Non-stationary phase: sums both phase segments and normalizes by
/// sqrt(phase_dim).
double linear_phase(std::span<const double> q, std::span<const double> k,
                    const TAPAParams& t);

/// Dispatches on t.phase: quadratic_split or linear. PhaseKind::general
/// needs explicit matrices and is rejected here.
double tapa_score(std::span<const double> q, std::span<const double> k,
                  double m, double n, const TAPAParams& t);

/// The block matrices (M, N) that reduce the general form to the split form.
GeneralTAPA split_as_general(const TAPAParams& t);

}  // namespace tapa
