#include "nbci/simulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "nbci/special_fns.hpp"

namespace nbci {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMethodCount = kAllMethods.size();

struct TrialRecord {
  std::array<double, kMethodCount> length{};
  // 1 covered, 0 missed, -1 method failed on this sample.
  std::array<std::int8_t, kMethodCount> covered{};
  bool mean_below_mu = false;
};

std::size_t index_of(Method m) { return static_cast<std::size_t>(m); }

TrialRecord run_trial(const ExperimentSpec& spec, const NBParams& params, std::uint64_t seed) {
  RandomStream rng(seed);
  const Sample s = sample(params, spec.n, rng);

  TrialRecord record;
  record.mean_below_mu = sample_mean(s) < spec.mu;

  auto tally = [&](Method m, auto&& build) {
    const std::size_t i = index_of(m);
    try {
      const ConfidenceInterval ci = build();
      record.length[i] = ci.length();
      record.covered[i] = covers(ci, spec.mu) ? 1 : 0;
    } catch (const DegenerateSampleError&) {
      record.covered[i] = -1;
    } catch (const ConvergenceError&) {
      record.covered[i] = -1;
    }
  };

  tally(Method::Normal, [&] { return normal_ci(s, spec.alpha); });
  tally(Method::Gamma, [&] { return gamma_ci(s, spec.alpha); });
  tally(Method::ChiSquare, [&] { return chisq_ci(s, spec.alpha); });
  tally(Method::Bernstein, [&] { return bernstein_ci(s, spec.alpha, spec.bernstein); });

  std::optional<double> k;
  try {
    k = spec.k_policy.resolve(s);
  } catch (const DegenerateSampleError&) {
    record.covered[index_of(Method::GBA)] = -1;
    record.covered[index_of(Method::GBR)] = -1;
  }
  if (k) {
    tally(Method::GBA, [&] { return gba_ci(s, spec.alpha, *k); });
    tally(Method::GBR, [&] { return gbr_ci(s, spec.alpha, removal_count(s, *k)); });
  }
  return record;
}

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

MethodSummary summarize(Method m, const std::vector<TrialRecord>& records) {
  const std::size_t i = index_of(m);
  MethodSummary out;
  out.method = m;
  std::vector<double> lengths;
  lengths.reserve(records.size());
  std::size_t covered = 0;
  for (const auto& r : records) {
    if (r.covered[i] < 0) continue;
    lengths.push_back(r.length[i]);
    covered += static_cast<std::size_t>(r.covered[i]);
  }
  out.valid_trials = lengths.size();
  out.errored_trials = records.size() - lengths.size();
  out.available = out.valid_trials > 0 && 2 * out.errored_trials <= records.size();
  if (!out.available) {
    out.coverage = out.median_length = out.sd_length = kNaN;
    return out;
  }
  out.coverage = static_cast<double>(covered) / static_cast<double>(out.valid_trials);
  out.median_length = median_of(lengths);
  out.sd_length = sd_of(lengths);
  return out;
}

double safe_ratio(double num, double den) {
  if (!std::isfinite(num) || !std::isfinite(den) || den <= 0.0) return kNaN;
  return num / den;
}

unsigned worker_count(const RunOptions& options, std::size_t trials) {
  unsigned threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(threads, trials));
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  NBParams{spec.mu, spec.theta};
  if (spec.n < 2) throw std::invalid_argument("experiment: n must be at least 2");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    throw std::invalid_argument("experiment: alpha must lie in (0, 1)");
  }
  if (spec.trials < 1) throw std::invalid_argument("experiment: trials must be at least 1");
  if (spec.k_policy.kind() == KPolicy::Kind::Fixed &&
      !(spec.k_policy.fixed_k() < static_cast<double>(spec.n))) {
    throw std::invalid_argument("experiment: fixed k must be smaller than n");
  }
  if (!(spec.bernstein.b_multiplier > 0.0)) {
    throw std::invalid_argument("experiment: Bernstein multiplier must be positive");
  }
}

std::uint64_t cell_seed(const ExperimentSpec& spec) noexcept {
  return derive_seed(spec.master_seed,
                     {std::bit_cast<std::uint64_t>(spec.mu), std::bit_cast<std::uint64_t>(spec.theta),
                      static_cast<std::uint64_t>(spec.n),
                      static_cast<std::uint64_t>(spec.k_policy.kind()),
                      std::bit_cast<std::uint64_t>(spec.k_policy.fixed_k())});
}

std::uint64_t trial_seed(std::uint64_t cell, std::uint64_t trial) noexcept {
  return derive_seed(cell, {trial});
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  validate(spec);
  const NBParams params(spec.mu, spec.theta);
  ExperimentResult result;
  result.spec = spec;
  result.cell_seed = cell_seed(spec);

  std::vector<TrialRecord> records(spec.trials);
  const unsigned workers = worker_count(options, spec.trials);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      records[t] = run_trial(spec, params, trial_seed(result.cell_seed, t));
    }
  };

  if (workers <= 1) {
    work(0, spec.trials);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (spec.trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(spec.trials, w * chunk);
      const std::size_t end = std::min(spec.trials, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (const auto& r : records) result.mean_below_mu += r.mean_below_mu ? 1 : 0;
  for (Method m : kAllMethods) result.methods[index_of(m)] = summarize(m, records);

  const MethodSummary& normal = result.methods[index_of(Method::Normal)];
  for (auto& ms : result.methods) {
    if (!ms.available) {
      ms.length_ratio = ms.sd_ratio = kNaN;
    } else if (ms.method == Method::Normal) {
      ms.length_ratio = ms.sd_ratio = 1.0;
    } else {
      ms.length_ratio = safe_ratio(ms.median_length, normal.median_length);
      ms.sd_ratio = safe_ratio(ms.sd_length, normal.sd_length);
    }
  }
  return result;
}

std::vector<ExperimentResult> run_grid(std::span<const ExperimentSpec> grid,
                                       const RunOptions& options) {
  if (grid.empty()) throw std::invalid_argument("run_grid: grid is empty");
  for (const auto& spec : grid) validate(spec);
  std::vector<ExperimentResult> results;
  results.reserve(grid.size());
  for (const auto& spec : grid) results.push_back(run_experiment(spec, options));
  return results;
}

std::vector<double> default_mu_values() { return {2.0, 5.0, 10.0}; }

std::vector<double> default_theta_values() {
  return {0.025, 0.05, 0.075, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
}

std::vector<std::size_t> default_n_values() {
  std::vector<std::size_t> ns;
  for (std::size_t n = 5; n <= 250; n += 5) ns.push_back(n);
  for (std::size_t n = 300; n <= 1000; n += 100) ns.push_back(n);
  return ns;
}

std::vector<ExperimentSpec> make_grid(std::span<const double> mus, std::span<const double> thetas,
                                      std::span<const std::size_t> ns, const ExperimentSpec& base) {
  std::vector<ExperimentSpec> grid;
  grid.reserve(mus.size() * thetas.size() * ns.size());
  for (double mu : mus) {
    for (double theta : thetas) {
      for (std::size_t n : ns) {
        ExperimentSpec spec = base;
        spec.mu = mu;
        spec.theta = theta;
        spec.n = n;
        grid.push_back(spec);
      }
    }
  }
  return grid;
}

Quartiles quartiles(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  Quartiles q;
  q.count = values.size();
  if (values.empty()) {
    q.min = q.q1 = q.median = q.q3 = q.max = kNaN;
    return q;
  }
  std::sort(values.begin(), values.end());
  auto at = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  q.min = values.front();
  q.q1 = at(0.25);
  q.median = at(0.5);
  q.q3 = at(0.75);
  q.max = values.back();
  return q;
}

LengthRatioSummary summarize_lengths(std::span<const ExperimentResult> results) {
  if (results.empty()) throw std::invalid_argument("summarize_lengths: no results");
  LengthRatioSummary summary;
  for (Method m : kAllMethods) {
    std::vector<double> medians;
    std::vector<double> sds;
    for (const auto& r : results) {
      medians.push_back(r.summary(m).length_ratio);
      sds.push_back(r.summary(m).sd_ratio);
    }
    summary.median_ratio[index_of(m)] = quartiles(std::move(medians));
    summary.sd_ratio[index_of(m)] = quartiles(std::move(sds));
  }
  return summary;
}

}  // namespace nbci
