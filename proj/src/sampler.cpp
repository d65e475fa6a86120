#include "tapa/sampler.hpp"

#include <cmath>

#include "tapa/errors.hpp"

namespace tapa {

void validate(const SamplerSpec& spec) {
  if (spec.dim < 4 || spec.dim % 2 != 0) {
    throw ConfigError("sampler dim must be even and >= 4");
  }
  if (!(spec.noise_scale > 0.0)) {
    throw ConfigError("sampler noise_scale must be positive");
  }
  if (!std::isfinite(spec.mu0) || !std::isfinite(spec.nu0)) {
    throw ConfigError("sampler mu0/nu0 must be finite");
  }
}

void sample_pair_into(const SamplerSpec& spec, RandomStream& rs,
                      std::span<double> q, std::span<double> k) {
  const int d = spec.dim;
  for (int i = 0; i < d; ++i) q[i] = rs.next_normal();
  const double half_mu = 0.5 * spec.mu0;
  const double half_nu = 0.5 * spec.nu0;
  const double b = spec.noise_scale;
  for (int i = 0; i < d; i += 2) {
    const double e0 = rs.next_normal();
    const double e1 = rs.next_normal();
    k[i] = half_mu * q[i] - half_nu * q[i + 1] + b * e0;
    k[i + 1] = half_mu * q[i + 1] + half_nu * q[i] + b * e1;
  }
}

std::pair<Vec64, Vec64> sample_pair(const SamplerSpec& spec,
                                    std::uint64_t stream_index) {
  validate(spec);
  RandomStream rs(spec.seed, stream_index);
  Vec64 q(static_cast<std::size_t>(spec.dim));
  Vec64 k(static_cast<std::size_t>(spec.dim));
  sample_pair_into(spec, rs, q, k);
  for (int i = 0; i < spec.dim; ++i) {
    if (!std::isfinite(q[static_cast<std::size_t>(i)]) ||
        !std::isfinite(k[static_cast<std::size_t>(i)])) {
      throw ConfigError("sampler produced a non-finite value");
    }
  }
  return {std::move(q), std::move(k)};
}

double sampler_sigma0_sq(const SamplerSpec& spec) {
  validate(spec);
  return 0.75 * spec.mu0 * spec.mu0 + 0.25 * spec.nu0 * spec.nu0 +
         spec.noise_scale * spec.noise_scale;
}

}  // namespace tapa
