#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "nbci/estimators.hpp"
#include "nbci/nb_model.hpp"

namespace nbci {

enum class Method { Normal, Gamma, ChiSquare, Bernstein, GBA, GBR };

inline constexpr std::array<Method, 6> kAllMethods{Method::Normal,    Method::Gamma,
                                                   Method::ChiSquare, Method::Bernstein,
                                                   Method::GBA,       Method::GBR};

std::string_view method_name(Method m) noexcept;

/// Inverse of method_name; also accepts lower-case aliases such as "chisq".
std::optional<Method> parse_method(std::string_view name) noexcept;

/// 1 - alpha interval for the mean. `estimate` is the point estimate the
/// method centres on (the grown mean for GBA/GBR) and `margin` is the exact
/// half-width for the symmetric methods. Gamma and ChiSquare are asymmetric,
/// for them margin is (upper - lower) / 2.
struct ConfidenceInterval {
  double lower;
  double upper;
  Method method;
  double alpha;
  double estimate;
  double margin;

  double length() const noexcept { return upper - lower; }
};

/// Bounding range for the Bernstein interval: b = b_multiplier * sample max.
struct BernsteinBounds {
  double a = defaults::kBernsteinLower;
  double b_multiplier = defaults::kBernsteinMultiplier;
};

ConfidenceInterval normal_ci(const Sample& s, double alpha);

ConfidenceInterval gamma_ci(const Sample& s, double alpha);

/// Gamma interval from plug-in estimates: quantiles of
/// Gamma(shape = theta_hat * n, rate = theta_hat * n / mean).
ConfidenceInterval gamma_ci_from_estimates(double mean, double theta_hat, std::size_t n,
                                           double alpha);

/// Chi-square interval with the sample mean plugged in as degrees of freedom.
ConfidenceInterval chisq_ci(const Sample& s, double alpha);

double ratio_statistic(double mu_hat, std::size_t n, double theta_hat);

enum class RatioDiagnostic { TooNarrow, Matched, TooWide };

/// Above 1 the chi-square interval is too wide; below 1 it is too narrow.
RatioDiagnostic diagnose_ratio(double ratio) noexcept;
std::string_view diagnostic_name(RatioDiagnostic d) noexcept;

/// Half-width of the bounded Bernstein interval for data assumed in (a, b).
double bernstein_half_width(std::size_t n, double variance, double a, double b, double alpha);

ConfidenceInterval bernstein_ci(const Sample& s, double alpha, const BernsteinBounds& bounds = {});

/// Growth-by-adjustment interval. With no k, uses select_k(mom_theta(s), n).
ConfidenceInterval gba_ci(const Sample& s, double alpha, std::optional<double> k = std::nullopt);

/// Growth-by-removal interval. With no k, uses removal_count of the default
/// select_k value.
ConfidenceInterval gbr_ci(const Sample& s, double alpha,
                          std::optional<std::size_t> k = std::nullopt);

/// Closed-interval membership.
bool covers(const ConfidenceInterval& ci, double mu) noexcept;

/// Presentation helper: clamps both endpoints at zero.
ConfidenceInterval clip_nonnegative(ConfidenceInterval ci) noexcept;

}  // namespace nbci
