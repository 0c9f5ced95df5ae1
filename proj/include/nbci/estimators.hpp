#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "nbci/defaults.hpp"
#include "nbci/nb_model.hpp"

namespace nbci {

/// Raised when a sample carries no information for the requested estimate,
/// e.g. an all-zero sample has no identifiable dispersion.
class DegenerateSampleError : public std::domain_error {
 public:
  explicit DegenerateSampleError(const std::string& what) : std::domain_error(what) {}
};

inline constexpr double kThetaFloor = defaults::kThetaFloor;

double sample_mean(const Sample& s) noexcept;

/// Unbiased variance; requires n >= 2.
double sample_variance(const Sample& s);

/// sqrt(sample_variance / n), the standard error of the mean.
double standard_error(const Sample& s);

/// Method-of-moments dispersion, truncated from below at `floor`.
double mom_theta(const Sample& s, double floor = kThetaFloor);

/// n / (n - k); requires 0 <= k < n.
double growth_factor(std::size_t n, double k);

double growth_estimate(const Sample& s, double k);

/// Growth-by-adjustment standard error: growth_factor * s / sqrt(n), with s
/// from the full sample.
double se_gba(const Sample& s, double k);

/// Growth-by-removal standard error. Drops k zeros, then measures deviations
/// about growth_factor * mean, normalized by (n - k - 1)(n - k).
double se_gbr(const Sample& s, std::size_t k);

/// Default number of zeros to discount: min(15, n/10) when theta_hat <= 0.5,
/// otherwise min(5, n/10). Fractional results are intentional.
double select_k(double theta_hat, std::size_t n);

/// Integer removal count for GBR derived from a real-valued k: floored, then
/// capped by the zero count and by n - 2.
std::size_t removal_count(const Sample& s, double k);

/// How the number of discounted zeros is chosen.
class KPolicy {
 public:
  enum class Kind { Default, Misspecified, Aggressive, Fixed };

  static KPolicy default_rule() { return KPolicy(Kind::Default, 0.0); }
  /// min(15, n/5)
  static KPolicy misspecified() { return KPolicy(Kind::Misspecified, 0.0); }
  /// min(50, n/2)
  static KPolicy aggressive() { return KPolicy(Kind::Aggressive, 0.0); }
  static KPolicy fixed(double k);

  /// Parses "default", "misspecified", "aggressive" or "fixed:<k>".
  static KPolicy parse(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  double fixed_k() const noexcept { return k_; }
  bool needs_theta() const noexcept { return kind_ == Kind::Default; }
  std::string to_string() const;

  /// Real-valued k for a sample. Only the default rule consults theta_hat;
  /// it throws DegenerateSampleError when the sample is all zero.
  double resolve(const Sample& s) const;

  friend bool operator==(const KPolicy&, const KPolicy&) = default;

 private:
  KPolicy(Kind kind, double k) : kind_(kind), k_(k) {}
  Kind kind_;
  double k_;
};

}  // namespace nbci
