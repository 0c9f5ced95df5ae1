// nbci: confidence intervals for Negative Binomial means and the Monte Carlo
// coverage study behind them.
//
//   nbci ci data.txt --method all
//   nbci simulate --mu 10 --theta 0.025 --n 250 --out cell.csv
//   nbci plot --in cell.csv --kind coverage-vs-n --out coverage.svg

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nbci/defaults.hpp"
#include "nbci/estimators.hpp"
#include "nbci/intervals.hpp"
#include "nbci/report.hpp"
#include "nbci/simulation.hpp"

namespace {

using namespace nbci;

struct CiOptions {
  std::string input = "-";
  std::vector<std::string> methods{"all"};
  double alpha = defaults::kAlpha;
  std::optional<double> k;
  double bernstein_multiplier = defaults::kBernsteinMultiplier;
  bool clip = false;
};

struct SimulateOptions {
  std::vector<double> mus = default_mu_values();
  std::vector<double> thetas = default_theta_values();
  std::vector<std::size_t> ns = default_n_values();
  double alpha = defaults::kAlpha;
  std::size_t trials = defaults::kTrials;
  std::uint64_t seed = defaults::kSeed;
  std::string k_policy = defaults::kKPolicy;
  double bernstein_multiplier = defaults::kBernsteinMultiplier;
  unsigned threads = 0;
  std::string out = "-";
};

struct PlotOptions {
  std::string input;
  std::string kind = "coverage-vs-n";
  std::string ratio = "median";
  std::optional<double> mu;
  std::optional<double> theta;
  std::optional<double> alpha;
  std::optional<std::string> k_policy;
  std::string out = "-";
};

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> methods;
  for (const auto& name : names) {
    if (name == "all") {
      methods.assign(kAllMethods.begin(), kAllMethods.end());
      return methods;
    }
    auto m = parse_method(name);
    if (!m) throw std::invalid_argument("unknown method '" + name + "'");
    methods.push_back(*m);
  }
  return methods;
}

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

int run_ci(const CiOptions& opt) {
  std::istringstream in(read_all(opt.input));
  auto counts = read_counts(in);
  if (counts.size() < 2) {
    throw std::invalid_argument("need at least 2 observations, found " +
                                std::to_string(counts.size()));
  }
  const Sample s(std::move(counts));
  CiRequest request;
  request.alpha = opt.alpha;
  request.methods = parse_methods(opt.methods);
  request.k = opt.k;
  request.bernstein_multiplier = opt.bernstein_multiplier;
  request.clip = opt.clip;
  std::cout << format_ci_report(make_ci_report(s, request), opt.alpha);
  return 0;
}

int run_simulate(const SimulateOptions& opt) {
  ExperimentSpec base;
  base.alpha = opt.alpha;
  base.trials = opt.trials;
  base.master_seed = opt.seed;
  base.k_policy = KPolicy::parse(opt.k_policy);
  base.bernstein.b_multiplier = opt.bernstein_multiplier;
  const auto grid = make_grid(opt.mus, opt.thetas, opt.ns, base);
  const auto results = run_grid(grid, RunOptions{opt.threads});
  std::ostringstream csv;
  write_csv(csv, to_rows(results));
  write_all(opt.out, csv.str());
  std::cerr << "simulated " << grid.size() << " cells x " << opt.trials << " trials\n";
  return 0;
}

int run_plot(const PlotOptions& opt) {
  std::istringstream in(read_all(opt.input));
  const auto rows = read_csv(in);
  RowFilter filter;
  filter.mu = opt.mu;
  filter.theta = opt.theta;
  filter.alpha = opt.alpha;
  if (opt.k_policy) filter.k_policy = KPolicy::parse(*opt.k_policy).to_string();
  const auto selected = filter_rows(rows, filter);
  if (selected.empty()) throw std::invalid_argument("no rows match the filter");
  std::string svg;
  if (opt.kind == "coverage-vs-n") {
    svg = coverage_svg(selected);
  } else {
    svg = length_ratio_svg(selected, opt.ratio == "sd" ? RatioKind::Sd : RatioKind::Median);
  }
  write_all(opt.out, svg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Confidence intervals for the mean of over-dispersed count data"};
  app.require_subcommand(1);

  CiOptions ci;
  auto* ci_cmd = app.add_subcommand("ci", "Compute confidence intervals for a file of counts");
  ci_cmd->add_option("input", ci.input, "File with one non-negative count per line ('-' = stdin)")
      ->capture_default_str();
  ci_cmd->add_option("-m,--method", ci.methods,
                     "Methods: normal, gamma, chisq, bernstein, gba, gbr or all")
      ->delimiter(',')
      ->capture_default_str();
  ci_cmd->add_option("-a,--alpha", ci.alpha, "Significance level (interval has 1 - alpha)")
      ->check(CLI::Range(0.0, 1.0).description("in (0, 1)"))
      ->capture_default_str();
  ci_cmd->add_option("-k,--k", ci.k,
                     "Zeros to discount for GBA/GBR (GBR floors it). Default: select_k rule")
      ->check(CLI::NonNegativeNumber);
  ci_cmd->add_option("--bernstein-multiplier", ci.bernstein_multiplier,
                     "Bernstein upper bound b = multiplier * sample max")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ci_cmd->add_flag("--clip", ci.clip, "Clamp reported endpoints at zero (presentation only)");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the Monte Carlo coverage grid, write CSV");
  sim_cmd->add_option("--mu", sim.mus, "Comma-separated means (default 2,5,10)")->delimiter(',');
  sim_cmd->add_option("--theta", sim.thetas,
                      "Comma-separated dispersions (default 0.025,0.05,0.075,0.1,0.2,...,1)")
      ->delimiter(',');
  sim_cmd->add_option("--n", sim.ns, "Comma-separated sample sizes (default 5,10,...,250,300,...,1000)")
      ->delimiter(',');
  sim_cmd->add_option("--alpha", sim.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sim_cmd->add_option("--trials", sim.trials, "Monte Carlo trials per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--k-policy", sim.k_policy,
                      "default | misspecified (min(15,n/5)) | aggressive (min(50,n/2)) | fixed:<k>")
      ->capture_default_str();
  sim_cmd->add_option("--bernstein-multiplier", sim.bernstein_multiplier,
                      "Bernstein upper bound b = multiplier * sample max")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  sim_cmd->add_option("-o,--out", sim.out, "Output CSV path ('-' = stdout)")->capture_default_str();

  PlotOptions plot;
  auto* plot_cmd = app.add_subcommand("plot", "Draw an SVG figure from a simulation CSV");
  plot_cmd->add_option("-i,--in", plot.input, "Simulation CSV ('-' = stdin)")->required();
  plot_cmd->add_option("--kind", plot.kind, "coverage-vs-n | length-ratio-box")
      ->check(CLI::IsMember({"coverage-vs-n", "length-ratio-box"}))
      ->capture_default_str();
  plot_cmd->add_option("--ratio", plot.ratio, "Ratio for length-ratio-box: median | sd")
      ->check(CLI::IsMember({"median", "sd"}))
      ->capture_default_str();
  plot_cmd->add_option("--mu", plot.mu, "Keep rows with this mu");
  plot_cmd->add_option("--theta", plot.theta, "Keep rows with this theta");
  plot_cmd->add_option("--alpha", plot.alpha, "Keep rows with this alpha");
  plot_cmd->add_option("--k-policy", plot.k_policy, "Keep rows with this k policy");
  plot_cmd->add_option("-o,--out", plot.out, "Output SVG path ('-' = stdout)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ci_cmd) return run_ci(ci);
    if (*sim_cmd) return run_simulate(sim);
    if (*plot_cmd) return run_plot(plot);
  } catch (const std::exception& e) {
    std::cerr << "nbci: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
