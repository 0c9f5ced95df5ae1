#include "nbci/estimators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace nbci {

double sample_mean(const Sample& s) noexcept {
  return static_cast<double>(s.sum()) / static_cast<double>(s.size());
}

double sample_variance(const Sample& s) {
  if (s.size() < 2) {
    throw std::invalid_argument("sample_variance: at least two observations are required");
  }
  const double mean = sample_mean(s);
  double ss = 0.0;
  for (Count v : s.values()) {
    const double d = static_cast<double>(v) - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(s.size() - 1);
}

double standard_error(const Sample& s) {
  return std::sqrt(sample_variance(s) / static_cast<double>(s.size()));
}

double mom_theta(const Sample& s, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("mom_theta: floor must be positive");
  const double variance = sample_variance(s);
  if (s.all_zero()) {
    throw DegenerateSampleError("mom_theta: dispersion is unidentifiable for an all-zero sample");
  }
  const double mean = sample_mean(s);
  const double raw = mean / ((variance / mean) - 1.0);
  // Negative estimates (variance below the mean) land on the floor as well.
  return raw >= floor ? raw : floor;
}

double growth_factor(std::size_t n, double k) {
  const double nd = static_cast<double>(n);
  if (!(k >= 0.0) || !(k < nd)) {
    throw std::invalid_argument("growth_factor: k must satisfy 0 <= k < n");
  }
  return nd / (nd - k);
}

double growth_estimate(const Sample& s, double k) {
  return growth_factor(s.size(), k) * sample_mean(s);
}

double se_gba(const Sample& s, double k) {
  return growth_factor(s.size(), k) * standard_error(s);
}

double se_gbr(const Sample& s, std::size_t k) {
  const std::size_t n = s.size();
  if (k > s.zero_count()) {
    throw std::invalid_argument("se_gbr: k exceeds the number of zeros in the sample");
  }
  if (n < k + 2) {
    throw std::invalid_argument("se_gbr: at least two observations must remain after removal");
  }
  // Deviations about the grown mean. Sorting in decreasing order and dropping
  // the last k values removes exactly k zeros, so skipping the first k zeros
  // in storage order visits the same multiset. With k = 0 this is the same
  // loop as sample_variance.
  const double center = growth_estimate(s, static_cast<double>(k));
  std::size_t skipped = 0;
  double ss = 0.0;
  for (Count v : s.values()) {
    if (v == 0 && skipped < k) {
      ++skipped;
      continue;
    }
    const double d = static_cast<double>(v) - center;
    ss += d * d;
  }
  const double m = static_cast<double>(n - k);
  return std::sqrt(ss / (m - 1.0) / m);
}

double select_k(double theta_hat, std::size_t n) {
  const double tenth = static_cast<double>(n) / 10.0;
  const double cap = theta_hat <= 0.5 ? 15.0 : 5.0;
  return std::min(cap, tenth);
}

std::size_t removal_count(const Sample& s, double k) {
  if (!(k >= 0.0)) throw std::invalid_argument("removal_count: k must be non-negative");
  const auto whole = static_cast<std::size_t>(std::floor(k));
  const std::size_t room = s.size() >= 2 ? s.size() - 2 : 0;
  return std::min({whole, s.zero_count(), room});
}

KPolicy KPolicy::fixed(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("KPolicy: fixed k must be non-negative and finite");
  }
  return KPolicy(Kind::Fixed, k);
}

KPolicy KPolicy::parse(const std::string& text) {
  if (text == "default") return default_rule();
  if (text == "misspecified") return misspecified();
  if (text == "aggressive") return aggressive();
  constexpr std::string_view prefix = "fixed:";
  if (text.starts_with(prefix)) {
    const char* first = text.data() + prefix.size();
    const char* last = text.data() + text.size();
    double k = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec == std::errc{} && ptr == last && first != last) return fixed(k);
  }
  throw std::invalid_argument("unknown k policy '" + text +
                              "' (expected default, misspecified, aggressive or fixed:<k>)");
}

std::string KPolicy::to_string() const {
  switch (kind_) {
    case Kind::Default: return "default";
    case Kind::Misspecified: return "misspecified";
    case Kind::Aggressive: return "aggressive";
    case Kind::Fixed: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, k_);
      return "fixed:" + std::string(buf, ptr);
    }
  }
  return "unknown";
}

double KPolicy::resolve(const Sample& s) const {
  const double n = static_cast<double>(s.size());
  switch (kind_) {
    case Kind::Default: return select_k(mom_theta(s), s.size());
    case Kind::Misspecified: return std::min(15.0, n / 5.0);
    case Kind::Aggressive: return std::min(50.0, n / 2.0);
    case Kind::Fixed: return k_;
  }
  return 0.0;
}

}  // namespace nbci
