#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nbci/intervals.hpp"
#include "nbci/simulation.hpp"

namespace nbci {

class CsvError : public std::runtime_error {
 public:
  explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kCsvHeader =
    "mu,theta,n,alpha,k_policy,method,coverage,median_length,sd_length,length_ratio,sd_ratio,"
    "errored_trials,seed";

/// One (cell, method) line of a simulation table. Undefined values (a method
/// unavailable in a cell, a ratio against a zero Normal length) are NaN and
/// are written as NA.
struct ResultRow {
  double mu = 0.0;
  double theta = 0.0;
  std::size_t n = 0;
  double alpha = 0.0;
  std::string k_policy;
  std::string method;
  double coverage = 0.0;
  double median_length = 0.0;
  double sd_length = 0.0;
  double length_ratio = 0.0;
  double sd_ratio = 0.0;
  std::size_t errored_trials = 0;
  std::uint64_t seed = 0;
};

bool same_content(const ResultRow& a, const ResultRow& b) noexcept;

std::vector<ResultRow> to_rows(const ExperimentResult& result);
std::vector<ResultRow> to_rows(const std::vector<ExperimentResult>& results);

/// Shortest round-trip decimal in fixed notation ('.' radix, no exponent);
/// NaN becomes NA.
std::string format_number(double value);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& in);

struct RowFilter {
  std::optional<double> mu;
  std::optional<double> theta;
  std::optional<std::string> k_policy;
  std::optional<double> alpha;

  bool matches(const ResultRow& row) const;
};

std::vector<ResultRow> filter_rows(const std::vector<ResultRow>& rows, const RowFilter& filter);

/// One polyline per method over n plus a dashed reference at 1 - alpha.
/// Rows must describe a single (mu, theta, k_policy, alpha) series.
std::string coverage_svg(const std::vector<ResultRow>& rows);

enum class RatioKind { Median, Sd };

/// Per-method box summary (min, quartiles, max) of length ratios to Normal.
std::string length_ratio_svg(const std::vector<ResultRow>& rows, RatioKind kind);

/// One count per line; surrounding whitespace and blank lines are ignored.
/// Throws std::invalid_argument naming the offending line.
std::vector<Count> read_counts(std::istream& in);

struct CiRequest {
  double alpha = defaults::kAlpha;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::optional<double> k;
  double bernstein_multiplier = defaults::kBernsteinMultiplier;
  bool clip = false;
};

struct CiRow {
  Method method;
  double lower;
  double upper;
  double center;
  double half_width;
  std::optional<double> k;
};

struct CiReport {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double theta_hat = 0.0;
  double ratio = 0.0;
  RatioDiagnostic diagnostic = RatioDiagnostic::Matched;
  std::vector<CiRow> rows;
};

/// Throws std::invalid_argument for fewer than two observations and
/// DegenerateSampleError for all-zero data.
CiReport make_ci_report(const Sample& s, const CiRequest& request);

std::string format_ci_report(const CiReport& report, double alpha);

}  // namespace nbci
