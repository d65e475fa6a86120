#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "tapa/encodings.hpp"

namespace tapa {

/// Which score function an attention pass uses.
struct AttentionConfig {
  std::variant<RoPEParams, TAPAParams> params;

  bool is_rope() const { return std::holds_alternative<RoPEParams>(params); }
  int dim() const;
};

/// One single-head forward-pass input: L query rows, L key rows, positions.
struct AttentionInput {
  std::vector<std::vector<double>> queries;  // L x D
  std::vector<std::vector<double>> keys;     // L x D
  std::vector<double> positions;             // length L
  AttentionConfig config;
};

/// Dense L x L score matrix. Entries above the diagonal carry the masked
/// sentinel (-inf) and are excluded, not merely suppressed, by the softmax.
struct ScoreMatrix {
  static constexpr double kMasked = -std::numeric_limits<double>::infinity();

  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  bool masked(int r, int c) const { return at(r, c) == kMasked; }
};

/// Causal scores: entry (m, n) for n <= m is the configured score of
/// (queries[m], keys[n]) at (positions[m], positions[n]); n > m is masked.
ScoreMatrix score_matrix(const AttentionInput& input);

/// Max-subtracted softmax per row over unmasked entries; masked entries
/// become exactly 0. Throws DomainError on a fully masked row.
ScoreMatrix softmax_rows(const ScoreMatrix& scores);

/// Partials of one split-form score with respect to q and k.
struct ScoreGradient {
  std::vector<double> d_q;
  std::vector<double> d_k;
};

/// Analytic gradient of tapa_score_split. With amp = qA.kA/sqrt(da),
/// phi = 2*pi*|m-n|^alpha * qP.kP/sqrt(dp):
///   d/dqA = kA cos(phi)/sqrt(da)
///   d/dqP = -amp sin(phi) * 2*pi*|m-n|^alpha * kP/sqrt(dp)
/// and symmetrically for k.
ScoreGradient tapa_score_grad(std::span<const double> q,
                              std::span<const double> k, double m, double n,
                              const TAPAParams& t);

struct GradCheckTrial {
  int trial = 0;
  double max_rel_err = 0.0;  // |analytic - fd| / max(|analytic|, 1e-3)
};

/// Random split-form configurations checked against central finite
/// differences with the given step.
std::vector<GradCheckTrial> run_gradient_check(int trials, std::uint64_t seed,
                                               double fd_step = 1e-5);

}  // namespace tapa
