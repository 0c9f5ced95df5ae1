#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nbci/rng.hpp"

namespace nbci {

using Count = std::int64_t;

/// Negative Binomial parameters in the mean/dispersion form.
/// Variance is mu + mu^2 / theta; small theta means heavy dispersion.
class NBParams {
 public:
  /// Throws std::invalid_argument unless mu > 0 and theta > 0 (both finite).
  NBParams(double mu, double theta);

  double mu() const noexcept { return mu_; }
  double theta() const noexcept { return theta_; }

 private:
  double mu_;
  double theta_;
};

struct Moments {
  double mean;
  double variance;
};

/// Immutable sample of non-negative counts with cached integer summaries.
class Sample {
 public:
  /// Throws std::invalid_argument for an empty sample or a negative count.
  explicit Sample(std::vector<Count> values);

  std::span<const Count> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  Count sum() const noexcept { return sum_; }
  Count max() const noexcept { return max_; }
  std::size_t zero_count() const noexcept { return zero_count_; }
  bool all_zero() const noexcept { return sum_ == 0; }

 private:
  std::vector<Count> values_;
  Count sum_ = 0;
  Count max_ = 0;
  std::size_t zero_count_ = 0;
};

double log_pmf(const NBParams& params, Count x);
double pmf(const NBParams& params, Count x);
Moments moments(const NBParams& params) noexcept;

/// P(X = 0) = (1 + mu/theta)^(-theta).
double zero_probability(const NBParams& params) noexcept;

/// Gamma(shape, scale) variate returned on the log scale. Shapes below 1 use
/// the boost G(a) = G(a + 1) * U^(1/a), so tiny shapes never underflow here.
double log_gamma_variate(double shape, double scale, RandomStream& rng);

/// Poisson variate; inversion below kPoissonInversionLimit, PTRS above.
Count poisson_variate(double lambda, RandomStream& rng);

/// Rates at or above this use transformed rejection (PTRS) instead of
/// sequential inversion.
inline constexpr double kPoissonInversionLimit = 30.0;

/// Single draw via the Gamma-Poisson mixture.
Count draw(const NBParams& params, RandomStream& rng);

/// n i.i.d. draws. Output is a pure function of (params, n, rng state).
Sample sample(const NBParams& params, std::size_t n, RandomStream& rng);

}  // namespace nbci
