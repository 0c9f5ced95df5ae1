#include "nbci/nb_model.hpp"

#include <cmath>
#include <stdexcept>

#include "nbci/special_fns.hpp"

namespace nbci {

NBParams::NBParams(double mu, double theta) : mu_(mu), theta_(theta) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("NBParams: mu must be positive and finite");
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("NBParams: theta must be positive and finite");
  }
}

Sample::Sample(std::vector<Count> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("Sample: at least one observation is required");
  }
  for (Count v : values_) {
    if (v < 0) throw std::invalid_argument("Sample: counts must be non-negative");
    sum_ += v;
    if (v > max_) max_ = v;
    if (v == 0) ++zero_count_;
  }
}

double log_pmf(const NBParams& params, Count x) {
  if (x < 0) throw std::invalid_argument("log_pmf: x must be non-negative");
  const double mu = params.mu();
  const double theta = params.theta();
  // log[Gamma(theta + x) / (Gamma(theta) x!)]. Short ranges use the product
  // form, which stays exact when theta is large relative to x.
  double log_coef = 0.0;
  if (x <= 64) {
    for (Count j = 0; j < x; ++j) {
      log_coef += std::log((theta + static_cast<double>(j)) / static_cast<double>(j + 1));
    }
  } else {
    const double xd = static_cast<double>(x);
    log_coef = log_gamma(theta + xd) - log_gamma(theta) - log_gamma(xd + 1.0);
  }
  const double log_success = -theta * std::log1p(mu / theta);
  if (x == 0) return log_success;
  const double log_ratio = std::log(mu / (mu + theta));
  return log_coef + static_cast<double>(x) * log_ratio + log_success;
}

double pmf(const NBParams& params, Count x) { return std::exp(log_pmf(params, x)); }

Moments moments(const NBParams& params) noexcept {
  const double mu = params.mu();
  return {mu, mu + mu * mu / params.theta()};
}

double zero_probability(const NBParams& params) noexcept {
  return std::exp(-params.theta() * std::log1p(params.mu() / params.theta()));
}

namespace {

double standard_normal(RandomStream& rng) {
  // Marsaglia polar method; the second deviate is discarded so each call
  // consumes a self-contained run of the stream.
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s < 1.0 && s > 0.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

// Marsaglia-Tsang squeeze for shape >= 1, unit scale, log scale result.
double log_gamma_unit_large(double shape, RandomStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z;
    double v;
    do {
      z = standard_normal(rng);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2 ||
        std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) {
      return std::log(d) + std::log(v);
    }
  }
}

// Sequential search from x = 0.
Count poisson_inversion(double lambda, RandomStream& rng) {
  const double u = rng.uniform();
  double p = std::exp(-lambda);
  double cdf = p;
  Count x = 0;
  while (u > cdf) {
    ++x;
    p *= lambda / static_cast<double>(x);
    if (p == 0.0) break;
    cdf += p;
  }
  return x;
}

// Hormann's transformed rejection with squeeze (PTRS).
Count poisson_ptrs(double lambda, RandomStream& rng) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<Count>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lambda + k * loglam - log_gamma(k + 1.0)) {
      return static_cast<Count>(k);
    }
  }
}

}  // namespace

double log_gamma_variate(double shape, double scale, RandomStream& rng) {
  double log_unit;
  if (shape >= 1.0) {
    log_unit = log_gamma_unit_large(shape, rng);
  } else {
    const double boosted = log_gamma_unit_large(shape + 1.0, rng);
    log_unit = boosted + std::log(rng.uniform()) / shape;
  }
  return log_unit + std::log(scale);
}

Count poisson_variate(double lambda, RandomStream& rng) {
  if (!(lambda > 0.0)) return 0;
  if (lambda < kPoissonInversionLimit) return poisson_inversion(lambda, rng);
  return poisson_ptrs(lambda, rng);
}

Count draw(const NBParams& params, RandomStream& rng) {
  const double log_rate =
      log_gamma_variate(params.theta(), params.mu() / params.theta(), rng);
  return poisson_variate(std::exp(log_rate), rng);
}

Sample sample(const NBParams& params, std::size_t n, RandomStream& rng) {
  if (n == 0) throw std::invalid_argument("sample: n must be positive");
  std::vector<Count> values(n);
  for (auto& v : values) v = draw(params, rng);
  return Sample(std::move(values));
}

}  // namespace nbci
