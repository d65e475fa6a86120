#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tapa/rng.hpp"

namespace tapa {

using Vec64 = std::vector<double>;

/// Parameters of the query/key pair sampler.
///
/// The sampler draws q ~ N(0, I_D) and builds
///   k = (mu0/2) q + (nu0/2) R(q) + noise_scale * eps
/// with eps ~ N(0, I_D) independent and R the per-pair quarter turn
/// (x, y) -> (-y, x) on coordinates (2d, 2d+1). This gives, exactly,
///   E[q_{2d} k_{2d} + q_{2d+1} k_{2d+1}] = mu0,
///   E[q_{2d} k_{2d+1} - q_{2d+1} k_{2d}] = nu0,
/// for every pair index d, with closed-form higher moments.
struct SamplerSpec {
  int dim = 0;               // head dimension D, even, >= 4
  double mu0 = 0.0;          // target mean of the symmetric pair product
  double nu0 = 0.0;          // target mean of the antisymmetric pair product
  double noise_scale = 1.0;  // b > 0
  std::uint64_t seed = 1;
};

/// Throws ConfigError if the spec violates its invariants.
void validate(const SamplerSpec& spec);

/// Draws the first (q, k) pair of the given stream. Distinct stream indices
/// yield independent streams under one seed.
std::pair<Vec64, Vec64> sample_pair(const SamplerSpec& spec,
                                    std::uint64_t stream_index);

/// Hot-path variant: fills q and k (size dim each) from an existing stream.
void sample_pair_into(const SamplerSpec& spec, RandomStream& rs,
                      std::span<double> q, std::span<double> k);

/// Per-coordinate second moment sigma0^2 = E|q_d k_d|^2 implied by the
/// sampler: (3/4) mu0^2 + (1/4) nu0^2 + noise_scale^2.
/// (q_d k_d = (mu0/2) q_d^2 + (nu0/2) q_d u + b q_d e with u, e independent
/// standard normals; odd cross terms vanish and E q^4 = 3.)
double sampler_sigma0_sq(const SamplerSpec& spec);

}  // namespace tapa
