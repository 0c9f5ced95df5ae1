#pragma once

#include <stdexcept>
#include <string>

namespace nbci {

/// Raised when an iterative special-function routine exhausts its budget.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Natural log of the Gamma function for x > 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(shape, x).
double reg_gamma_p(double shape, double x);

/// Regularized upper incomplete gamma Q(shape, x) = 1 - P(shape, x),
/// computed directly so the upper tail keeps its precision.
double reg_gamma_q(double shape, double x);

/// Standard Normal quantile; rejects p outside (0, 1).
double normal_quantile(double p);

/// Quantile of Gamma(shape, rate) (rate parameterization, mean shape/rate).
///
/// For very small shapes the exact lower quantile can fall below the
/// smallest normal double; in that case 0 is returned, which is the
/// correctly rounded value.
///
/// Throws std::invalid_argument for invalid parameters and ConvergenceError
/// if the root finder fails within its iteration budget.
double gamma_quantile(double shape, double rate, double p);

/// Chi-square quantile with (possibly fractional) degrees of freedom.
double chi_square_quantile(double df, double p);

}  // namespace nbci
