#include "nbci/special_fns.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace nbci {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();
constexpr int kMaxSeriesTerms = 1000000;
// Above this shape the Wilson-Hilferty cube-root transform is accurate to
// well below double rounding of the interval endpoints it feeds.
constexpr double kWilsonHilfertyShape = 1e7;
constexpr int kMaxRootIterations = 200;

// Series for P, valid (and fast) for x < shape + 1.
double lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxSeriesTerms; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) {
      return sum * std::exp(a * std::log(x) - x - log_gamma(a));
    }
  }
  throw ConvergenceError("reg_gamma: series did not converge");
}

// Modified Lentz continued fraction for Q, valid for x >= shape + 1.
double upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxSeriesTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) {
      return std::exp(a * std::log(x) - x - log_gamma(a)) * h;
    }
  }
  throw ConvergenceError("reg_gamma: continued fraction did not converge");
}

void check_gamma_args(double shape, double x) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("incomplete gamma: shape must be positive and finite");
  }
  if (!(x >= 0.0)) {
    throw std::invalid_argument("incomplete gamma: x must be non-negative");
  }
}

// Lower-tail standard Normal quantile for p in (0, 0.5]: rational
// approximation followed by Halley refinement against erfc.
double normal_lower_quantile(double p) {
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLowRegion = 0.02425;

  double x;
  if (p < kLowRegion) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }

  const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);
  for (int step = 0; step < 2; ++step) {
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * sqrt_2pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

// Quantile of the unit-rate Gamma. Works on whichever tail keeps precision:
// solves P(a, x) = p for p <= 0.5 and Q(a, x) = 1 - p otherwise.
double standard_gamma_quantile(double a, double p) {
  const bool use_lower = p <= 0.5;
  const double target = use_lower ? p : 1.0 - p;
  // Increasing in x for both tails.
  auto excess = [&](double x) {
    return use_lower ? reg_gamma_p(a, x) - target : target - reg_gamma_q(a, x);
  };

  const double log_a1 = log_gamma(a + 1.0);
  double x0;
  if (a < 1.0) {
    const double log_x0 = (std::log(p) + log_a1) / a;
    x0 = std::exp(std::max(log_x0, std::log(kTiny)));
  } else {
    const double z = normal_quantile(p);
    const double c = 1.0 / (9.0 * a);
    const double t = 1.0 - c + z * std::sqrt(c);
    x0 = t > 0.0 ? a * t * t * t : std::exp((std::log(p) + log_a1) / a);
    x0 = std::max(x0, kTiny);
  }

  // Bracket the root with geometrically accelerating steps.
  double lo;
  double hi;
  double x = x0;
  double fx = excess(x);
  if (fx < 0.0) {
    lo = x;
    double factor = 2.0;
    for (int i = 0;; ++i) {
      const double y = x * factor;
      if (!std::isfinite(y) || i > 64) {
        throw ConvergenceError("gamma_quantile: could not bracket upper root");
      }
      const double fy = excess(y);
      if (fy >= 0.0) {
        hi = y;
        break;
      }
      lo = y;
      factor *= factor;
    }
  } else {
    hi = x;
    double factor = 2.0;
    for (int i = 0;; ++i) {
      double y = x / factor;
      if (y < kTiny || i > 64) {
        y = kTiny;
        if (excess(kTiny) >= 0.0) {
          // The exact quantile lies below the smallest normal double.
          return 0.0;
        }
        lo = y;
        break;
      }
      const double fy = excess(y);
      if (fy < 0.0) {
        lo = y;
        break;
      }
      hi = y;
      factor *= factor;
    }
    x = hi;
    fx = excess(x);
  }

  const double log_norm = log_gamma(a);
  for (int iter = 0; iter < kMaxRootIterations; ++iter) {
    if (fx == 0.0) return x;
    double next = x;
    const double density = std::exp((a - 1.0) * std::log(x) - x - log_norm);
    if (density > 0.0 && std::isfinite(density)) {
      next = x - fx / density;
    }
    if (!(next > lo && next < hi)) {
      next = (hi > 4.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    }
    const double fnext = excess(next);
    if (fnext < 0.0) {
      lo = next;
    } else {
      hi = next;
    }
    const double step = std::fabs(next - x);
    x = next;
    fx = fnext;
    if (step <= 4.0 * kEps * x || (hi - lo) <= 4.0 * kEps * hi) {
      return x;
    }
  }
  throw ConvergenceError("gamma_quantile: root finder exceeded iteration budget");
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("log_gamma: argument must be positive");
  }
  if (x == 1.0 || x == 2.0) return 0.0;
  if (std::isinf(x)) return x;
  // Lanczos approximation, g = 671/128, 14 terms.
  static constexpr std::array<double, 14> cof{
      57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
      -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
      -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
      .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
      -.261908384015814087e-4, .368991826595316234e-5};
  double y = x;
  double tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (double cj : cof) ser += cj / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

double reg_gamma_p(double shape, double x) {
  check_gamma_args(shape, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < shape + 1.0) return lower_series(shape, x);
  return 1.0 - upper_fraction(shape, x);
}

double reg_gamma_q(double shape, double x) {
  check_gamma_args(shape, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < shape + 1.0) return 1.0 - lower_series(shape, x);
  return upper_fraction(shape, x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  }
  return p <= 0.5 ? normal_lower_quantile(p) : -normal_lower_quantile(1.0 - p);
}

double gamma_quantile(double shape, double rate, double p) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("gamma_quantile: shape must be positive and finite");
  }
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("gamma_quantile: rate must be positive and finite");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("gamma_quantile: p must lie in (0, 1)");
  }
  if (shape > kWilsonHilfertyShape) {
    const double c = 1.0 / (9.0 * shape);
    const double t = 1.0 - c + normal_quantile(p) * std::sqrt(c);
    return shape * t * t * t / rate;
  }
  return standard_gamma_quantile(shape, p) / rate;
}

double chi_square_quantile(double df, double p) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw std::invalid_argument("chi_square_quantile: df must be positive and finite");
  }
  return gamma_quantile(0.5 * df, 0.5, p);
}

}  // namespace nbci
