#include "nbci/intervals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "nbci/special_fns.hpp"

namespace nbci {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
}

double upper_z(double alpha) { return normal_quantile(1.0 - 0.5 * alpha); }

ConfidenceInterval symmetric(Method m, double alpha, double estimate, double margin) {
  return {estimate - margin, estimate + margin, m, alpha, estimate, margin};
}

ConfidenceInterval from_bounds(Method m, double alpha, double estimate, double lower,
                               double upper) {
  return {lower, upper, m, alpha, estimate, 0.5 * (upper - lower)};
}

void require_nonzero(const Sample& s, const char* who) {
  if (s.all_zero()) {
    throw DegenerateSampleError(std::string(who) + ": all-zero sample");
  }
}

}  // namespace

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::Normal: return "Normal";
    case Method::Gamma: return "Gamma";
    case Method::ChiSquare: return "ChiSquare";
    case Method::Bernstein: return "Bernstein";
    case Method::GBA: return "GBA";
    case Method::GBR: return "GBR";
  }
  return "Unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "normal") return Method::Normal;
  if (lower == "gamma") return Method::Gamma;
  if (lower == "chisquare" || lower == "chisq" || lower == "chi-square") return Method::ChiSquare;
  if (lower == "bernstein") return Method::Bernstein;
  if (lower == "gba") return Method::GBA;
  if (lower == "gbr") return Method::GBR;
  return std::nullopt;
}

ConfidenceInterval normal_ci(const Sample& s, double alpha) {
  check_alpha(alpha);
  const double se = standard_error(s);
  return symmetric(Method::Normal, alpha, sample_mean(s), upper_z(alpha) * se);
}

ConfidenceInterval gamma_ci_from_estimates(double mean, double theta_hat, std::size_t n,
                                           double alpha) {
  check_alpha(alpha);
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DegenerateSampleError("gamma_ci: mean estimate must be positive");
  }
  if (!(theta_hat > 0.0) || n == 0) {
    throw std::invalid_argument("gamma_ci: theta_hat and n must be positive");
  }
  const double shape = theta_hat * static_cast<double>(n);
  if (!std::isfinite(shape)) {
    // Variance equal to the mean: no extra-Poisson spread, the limiting
    // Gamma law collapses onto the mean.
    return from_bounds(Method::Gamma, alpha, mean, mean, mean);
  }
  const double rate = shape / mean;
  return from_bounds(Method::Gamma, alpha, mean, gamma_quantile(shape, rate, 0.5 * alpha),
                     gamma_quantile(shape, rate, 1.0 - 0.5 * alpha));
}

ConfidenceInterval gamma_ci(const Sample& s, double alpha) {
  check_alpha(alpha);
  const double theta_hat = mom_theta(s);
  return gamma_ci_from_estimates(sample_mean(s), theta_hat, s.size(), alpha);
}

ConfidenceInterval chisq_ci(const Sample& s, double alpha) {
  check_alpha(alpha);
  if (s.size() < 2) throw std::invalid_argument("chisq_ci: at least two observations are required");
  require_nonzero(s, "chisq_ci");
  const double df = sample_mean(s);
  return from_bounds(Method::ChiSquare, alpha, df, chi_square_quantile(df, 0.5 * alpha),
                     chi_square_quantile(df, 1.0 - 0.5 * alpha));
}

double ratio_statistic(double mu_hat, std::size_t n, double theta_hat) {
  if (!(mu_hat > 0.0) || !(theta_hat > 0.0) || n == 0) {
    throw std::invalid_argument("ratio_statistic: inputs must be positive");
  }
  return mu_hat / (2.0 * static_cast<double>(n) * theta_hat);
}

RatioDiagnostic diagnose_ratio(double ratio) noexcept {
  if (ratio > 1.0) return RatioDiagnostic::TooWide;
  if (ratio < 1.0) return RatioDiagnostic::TooNarrow;
  return RatioDiagnostic::Matched;
}

std::string_view diagnostic_name(RatioDiagnostic d) noexcept {
  switch (d) {
    case RatioDiagnostic::TooNarrow: return "too narrow";
    case RatioDiagnostic::Matched: return "matched";
    case RatioDiagnostic::TooWide: return "too wide";
  }
  return "unknown";
}

double bernstein_half_width(std::size_t n, double variance, double a, double b, double alpha) {
  check_alpha(alpha);
  if (n == 0) throw std::invalid_argument("bernstein: n must be positive");
  if (!(variance >= 0.0)) throw std::invalid_argument("bernstein: variance must be non-negative");
  if (!(b > a)) throw std::invalid_argument("bernstein: bounds must satisfy b > a");
  const double log_tail = std::log(0.5 * alpha);  // negative
  const double range = b - a;
  const double nd = static_cast<double>(n);
  const double linear = -(2.0 / 3.0) * range * log_tail;
  const double radicand =
      (4.0 / 9.0) * range * range * log_tail * log_tail - 8.0 * nd * variance * log_tail;
  return (linear + std::sqrt(radicand)) / (2.0 * nd);
}

ConfidenceInterval bernstein_ci(const Sample& s, double alpha, const BernsteinBounds& bounds) {
  check_alpha(alpha);
  if (!(bounds.b_multiplier > 0.0)) {
    throw std::invalid_argument("bernstein_ci: b multiplier must be positive");
  }
  const double variance = sample_variance(s);
  const double b = bounds.b_multiplier * static_cast<double>(s.max());
  if (!(b > bounds.a)) {
    if (s.all_zero()) {
      throw DegenerateSampleError("bernstein_ci: all-zero sample leaves an empty bounding range");
    }
    throw std::invalid_argument("bernstein_ci: upper bound must exceed the lower bound");
  }
  return symmetric(Method::Bernstein, alpha, sample_mean(s),
                   bernstein_half_width(s.size(), variance, bounds.a, b, alpha));
}

ConfidenceInterval gba_ci(const Sample& s, double alpha, std::optional<double> k) {
  check_alpha(alpha);
  const double zeros = k ? *k : select_k(mom_theta(s), s.size());
  const double g = growth_factor(s.size(), zeros);
  // Same operands as normal_ci so that k = 0 reproduces it exactly.
  const double normal_margin = upper_z(alpha) * standard_error(s);
  return symmetric(Method::GBA, alpha, g * sample_mean(s), g * normal_margin);
}

ConfidenceInterval gbr_ci(const Sample& s, double alpha, std::optional<std::size_t> k) {
  check_alpha(alpha);
  const std::size_t removed = k ? *k : removal_count(s, select_k(mom_theta(s), s.size()));
  const double se = se_gbr(s, removed);
  return symmetric(Method::GBR, alpha, growth_estimate(s, static_cast<double>(removed)),
                   upper_z(alpha) * se);
}

bool covers(const ConfidenceInterval& ci, double mu) noexcept {
  return ci.lower <= mu && mu <= ci.upper;
}

ConfidenceInterval clip_nonnegative(ConfidenceInterval ci) noexcept {
  ci.lower = std::max(ci.lower, 0.0);
  ci.upper = std::max(ci.upper, 0.0);
  return ci;
}

}  // namespace nbci
