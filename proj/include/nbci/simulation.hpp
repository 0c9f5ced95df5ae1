#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nbci/estimators.hpp"
#include "nbci/intervals.hpp"

namespace nbci {

/// One Monte Carlo cell.
struct ExperimentSpec {
  double mu = 10.0;
  double theta = 0.025;
  std::size_t n = 30;
  double alpha = defaults::kAlpha;
  std::size_t trials = defaults::kTrials;
  std::uint64_t master_seed = defaults::kSeed;
  KPolicy k_policy = KPolicy::default_rule();
  BernsteinBounds bernstein{};
};

/// Throws std::invalid_argument for an unusable cell.
void validate(const ExperimentSpec& spec);

struct MethodSummary {
  Method method = Method::Normal;
  bool available = true;
  double coverage = 0.0;
  double median_length = 0.0;
  double sd_length = 0.0;
  double length_ratio = 0.0;
  double sd_ratio = 0.0;
  std::size_t errored_trials = 0;
  std::size_t valid_trials = 0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::uint64_t cell_seed = 0;
  /// Indexed like kAllMethods.
  std::array<MethodSummary, kAllMethods.size()> methods{};
  /// Trials whose sample mean fell strictly below mu.
  std::size_t mean_below_mu = 0;

  const MethodSummary& summary(Method m) const { return methods[static_cast<std::size_t>(m)]; }
};

struct RunOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Seed for a cell: derive_seed(master, mu bits, theta bits, n, policy kind,
/// policy k bits). Alpha and trial count are excluded on purpose so that
/// cells differing only in those share random numbers.
std::uint64_t cell_seed(const ExperimentSpec& spec) noexcept;

/// Seed for one trial inside a cell.
std::uint64_t trial_seed(std::uint64_t cell, std::uint64_t trial) noexcept;

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Results come back in grid order. Every cell uses its own derived seed, so
/// reordering the grid does not change any cell's result.
std::vector<ExperimentResult> run_grid(std::span<const ExperimentSpec> grid,
                                       const RunOptions& options = {});

/// The standard study grid: 3 means, 13 dispersions, 58 sample sizes.
std::vector<double> default_mu_values();
std::vector<double> default_theta_values();
std::vector<std::size_t> default_n_values();

/// Cartesian product in mu-major, then theta, then n order.
std::vector<ExperimentSpec> make_grid(std::span<const double> mus, std::span<const double> thetas,
                                      std::span<const std::size_t> ns, const ExperimentSpec& base);

struct Quartiles {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

/// Linear-interpolation quartiles; NaN entries are skipped.
Quartiles quartiles(std::vector<double> values);

struct LengthRatioSummary {
  std::array<Quartiles, kAllMethods.size()> median_ratio{};
  std::array<Quartiles, kAllMethods.size()> sd_ratio{};

  const Quartiles& median_of(Method m) const { return median_ratio[static_cast<std::size_t>(m)]; }
  const Quartiles& sd_of(Method m) const { return sd_ratio[static_cast<std::size_t>(m)]; }
};

/// Distribution across cells of each method's length ratios to Normal.
LengthRatioSummary summarize_lengths(std::span<const ExperimentResult> results);

}  // namespace nbci
