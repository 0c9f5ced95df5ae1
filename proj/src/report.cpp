#include "nbci/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace nbci {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_number(double a, double b) noexcept {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, std::size_t line, const char* column) {
  if (text == "NA") return kNaN;
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw CsvError("line " + std::to_string(line) + ": bad number '" + text + "' in column " +
                   column);
  }
  return value;
}

template <typename Int>
Int parse_int(const std::string& text, std::size_t line, const char* column) {
  Int value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw CsvError("line " + std::to_string(line) + ": bad integer '" + text + "' in column " +
                   column);
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, int digits = 2) {
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

constexpr std::array<const char*, kAllMethods.size()> kColors{
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

const char* color_for(std::string_view method) {
  if (auto m = parse_method(method)) return kColors[static_cast<std::size_t>(*m)];
  return "#333333";
}

// Plot frame shared by both figures.
struct Frame {
  double width = 800;
  double height = 500;
  double left = 70;
  double right = 170;
  double top = 50;
  double bottom = 60;
  double x_min = 0;
  double x_max = 1;
  double y_min = 0;
  double y_max = 1;

  double px(double x) const {
    return left + (x - x_min) / (x_max - x_min) * (width - left - right);
  }
  double py(double y) const {
    return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom);
  }
};

std::vector<double> nice_ticks(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::fabs(t) < 1e-12 ? 0.0 : t);
  }
  return ticks;
}

void open_svg(std::ostream& out, const Frame& f, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(f.width, 0)
      << "\" height=\"" << fmt(f.height, 0) << "\" viewBox=\"0 0 " << fmt(f.width, 0) << ' '
      << fmt(f.height, 0) << "\">\n"
      << "<title>" << xml_escape(title) << "</title>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << fmt(f.width, 0) << "\" height=\"" << fmt(f.height, 0)
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << fmt(f.width / 2) << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(title) << "</text>\n";
}

void draw_axes(std::ostream& out, const Frame& f, const std::vector<double>& yticks,
               const std::string& ylabel, const std::string& xlabel, int ydigits) {
  const double x0 = f.px(f.x_min);
  const double x1 = f.px(f.x_max);
  const double y0 = f.py(f.y_min);
  const double y1 = f.py(f.y_max);
  out << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1) << "\" y2=\""
      << fmt(y0) << "\"/>\n"
      << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x0) << "\" y2=\""
      << fmt(y1) << "\"/>\n";
  for (double t : yticks) {
    out << "<line x1=\"" << fmt(x0 - 5) << "\" y1=\"" << fmt(f.py(t)) << "\" x2=\"" << fmt(x0)
        << "\" y2=\"" << fmt(f.py(t)) << "\"/>\n";
  }
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : yticks) {
    out << "<text x=\"" << fmt(x0 - 8) << "\" y=\"" << fmt(f.py(t) + 4)
        << "\" text-anchor=\"end\">" << fmt(t, ydigits) << "</text>\n";
  }
  out << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(f.height - 15)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(xlabel) << "</text>\n"
      << "<text x=\"18\" y=\"" << fmt((y0 + y1) / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << fmt((y0 + y1) / 2) << ")\">" << xml_escape(ylabel)
      << "</text>\n</g>\n";
}

void draw_legend(std::ostream& out, const Frame& f, const std::vector<std::string>& methods) {
  const double x = f.width - f.right + 20;
  double y = f.top + 10;
  out << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (const auto& m : methods) {
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(x + 24)
        << "\" y2=\"" << fmt(y) << "\" stroke=\"" << color_for(m) << "\" stroke-width=\"3\"/>\n"
        << "<text x=\"" << fmt(x + 30) << "\" y=\"" << fmt(y + 4) << "\">" << xml_escape(m)
        << "</text>\n";
    y += 20;
  }
  out << "</g>\n";
}

// Methods present in the rows, in canonical order first then any others.
std::vector<std::string> methods_in(const std::vector<ResultRow>& rows) {
  std::vector<std::string> names;
  for (Method m : kAllMethods) {
    const std::string name(method_name(m));
    if (std::any_of(rows.begin(), rows.end(), [&](const ResultRow& r) { return r.method == name; })) {
      names.push_back(name);
    }
  }
  for (const auto& r : rows) {
    if (std::find(names.begin(), names.end(), r.method) == names.end()) names.push_back(r.method);
  }
  return names;
}

}  // namespace

bool same_content(const ResultRow& a, const ResultRow& b) noexcept {
  return same_number(a.mu, b.mu) && same_number(a.theta, b.theta) && a.n == b.n &&
         same_number(a.alpha, b.alpha) && a.k_policy == b.k_policy && a.method == b.method &&
         same_number(a.coverage, b.coverage) && same_number(a.median_length, b.median_length) &&
         same_number(a.sd_length, b.sd_length) && same_number(a.length_ratio, b.length_ratio) &&
         same_number(a.sd_ratio, b.sd_ratio) && a.errored_trials == b.errored_trials &&
         a.seed == b.seed;
}

std::vector<ResultRow> to_rows(const ExperimentResult& result) {
  std::vector<ResultRow> rows;
  for (const MethodSummary& m : result.methods) {
    ResultRow row;
    row.mu = result.spec.mu;
    row.theta = result.spec.theta;
    row.n = result.spec.n;
    row.alpha = result.spec.alpha;
    row.k_policy = result.spec.k_policy.to_string();
    row.method = std::string(method_name(m.method));
    row.coverage = m.coverage;
    row.median_length = m.median_length;
    row.sd_length = m.sd_length;
    row.length_ratio = m.length_ratio;
    row.sd_ratio = m.sd_ratio;
    row.errored_trials = m.errored_trials;
    row.seed = result.spec.master_seed;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> to_rows(const std::vector<ExperimentResult>& results) {
  std::vector<ResultRow> rows;
  for (const auto& r : results) {
    auto cell = to_rows(r);
    rows.insert(rows.end(), cell.begin(), cell.end());
  }
  return rows;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) throw std::invalid_argument("format_number: infinite value");
  char buf[512];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc{}) throw std::invalid_argument("format_number: value too long");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.mu) << ',' << format_number(r.theta) << ',' << r.n << ','
        << format_number(r.alpha) << ',' << r.k_policy << ',' << r.method << ','
        << format_number(r.coverage) << ',' << format_number(r.median_length) << ','
        << format_number(r.sd_length) << ',' << format_number(r.length_ratio) << ','
        << format_number(r.sd_ratio) << ',' << r.errored_trials << ',' << r.seed << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw CsvError("unexpected CSV header: " + line);
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) {
      throw CsvError("line " + std::to_string(line_no) + ": expected 13 fields, found " +
                     std::to_string(f.size()));
    }
    ResultRow r;
    r.mu = parse_double(f[0], line_no, "mu");
    r.theta = parse_double(f[1], line_no, "theta");
    r.n = parse_int<std::size_t>(f[2], line_no, "n");
    r.alpha = parse_double(f[3], line_no, "alpha");
    r.k_policy = f[4];
    r.method = f[5];
    r.coverage = parse_double(f[6], line_no, "coverage");
    r.median_length = parse_double(f[7], line_no, "median_length");
    r.sd_length = parse_double(f[8], line_no, "sd_length");
    r.length_ratio = parse_double(f[9], line_no, "length_ratio");
    r.sd_ratio = parse_double(f[10], line_no, "sd_ratio");
    r.errored_trials = parse_int<std::size_t>(f[11], line_no, "errored_trials");
    r.seed = parse_int<std::uint64_t>(f[12], line_no, "seed");
    rows.push_back(std::move(r));
  }
  return rows;
}

bool RowFilter::matches(const ResultRow& row) const {
  if (mu && row.mu != *mu) return false;
  if (theta && row.theta != *theta) return false;
  if (k_policy && row.k_policy != *k_policy) return false;
  if (alpha && row.alpha != *alpha) return false;
  return true;
}

std::vector<ResultRow> filter_rows(const std::vector<ResultRow>& rows, const RowFilter& filter) {
  std::vector<ResultRow> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
               [&](const ResultRow& r) { return filter.matches(r); });
  return out;
}

std::string coverage_svg(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("coverage plot: no rows selected");
  const ResultRow& first = rows.front();
  for (const auto& r : rows) {
    if (r.mu != first.mu || r.theta != first.theta || r.k_policy != first.k_policy ||
        r.alpha != first.alpha) {
      throw std::invalid_argument(
          "coverage plot: rows span several (mu, theta, k_policy, alpha) series; filter to one");
    }
  }

  Frame f;
  const auto [nmin, nmax] = std::minmax_element(
      rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) { return a.n < b.n; });
  f.x_min = static_cast<double>(nmin->n);
  f.x_max = static_cast<double>(nmax->n);
  if (f.x_max <= f.x_min) f.x_max = f.x_min + 1.0;
  const double target = 1.0 - first.alpha;
  double lowest = target;
  for (const auto& r : rows) {
    if (!std::isnan(r.coverage)) lowest = std::min(lowest, r.coverage);
  }
  f.y_min = std::max(0.0, std::floor((lowest - 0.02) * 20.0) / 20.0);
  f.y_max = 1.0;

  std::ostringstream out;
  out.imbue(std::locale::classic());
  const std::string title = "Coverage vs n (mu=" + format_number(first.mu) +
                            ", theta=" + format_number(first.theta) + ", k=" + first.k_policy + ")";
  open_svg(out, f, title);
  draw_axes(out, f, nice_ticks(f.y_min, f.y_max, 8), "Coverage probability", "Sample size n", 2);
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : nice_ticks(f.x_min, f.x_max, 8)) {
    out << "<text x=\"" << fmt(f.px(t)) << "\" y=\"" << fmt(f.py(f.y_min) + 16)
        << "\" text-anchor=\"middle\">" << fmt(t, 0) << "</text>\n";
  }
  out << "</g>\n";

  out << "<line class=\"reference\" x1=\"" << fmt(f.px(f.x_min)) << "\" y1=\"" << fmt(f.py(target))
      << "\" x2=\"" << fmt(f.px(f.x_max)) << "\" y2=\"" << fmt(f.py(target))
      << "\" stroke=\"gray\" stroke-dasharray=\"6,4\" data-level=\"" << format_number(target)
      << "\"/>\n";

  const auto methods = methods_in(rows);
  for (const auto& m : methods) {
    std::vector<const ResultRow*> series;
    for (const auto& r : rows) {
      if (r.method == m && !std::isnan(r.coverage)) series.push_back(&r);
    }
    std::sort(series.begin(), series.end(),
              [](const ResultRow* a, const ResultRow* b) { return a->n < b->n; });
    out << "<polyline class=\"series\" data-method=\"" << xml_escape(m) << "\" fill=\"none\" stroke=\""
        << color_for(m) << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (i) out << ' ';
      out << fmt(f.px(static_cast<double>(series[i]->n))) << ',' << fmt(f.py(series[i]->coverage));
    }
    out << "\"/>\n";
  }
  draw_legend(out, f, methods);
  out << "</svg>\n";
  return out.str();
}

std::string length_ratio_svg(const std::vector<ResultRow>& rows, RatioKind kind) {
  if (rows.empty()) throw std::invalid_argument("length ratio plot: no rows selected");
  const auto methods = methods_in(rows);
  std::vector<Quartiles> boxes;
  double lo = 1.0;
  double hi = 1.0;
  for (const auto& m : methods) {
    std::vector<double> values;
    for (const auto& r : rows) {
      if (r.method == m) values.push_back(kind == RatioKind::Median ? r.length_ratio : r.sd_ratio);
    }
    boxes.push_back(quartiles(std::move(values)));
    if (boxes.back().count > 0) {
      lo = std::min(lo, boxes.back().min);
      hi = std::max(hi, boxes.back().max);
    }
  }

  Frame f;
  f.right = 40;
  f.x_min = 0.0;
  f.x_max = static_cast<double>(methods.size());
  const double pad = 0.05 * (hi - lo) + 0.05;
  f.y_min = std::max(0.0, lo - pad);
  f.y_max = hi + pad;

  std::ostringstream out;
  out.imbue(std::locale::classic());
  const std::string title = kind == RatioKind::Median
                                ? "Median interval length relative to Normal"
                                : "SD of interval length relative to Normal";
  open_svg(out, f, title);
  draw_axes(out, f, nice_ticks(f.y_min, f.y_max, 8), "Ratio to Normal", "Method", 2);
  out << "<line class=\"reference\" x1=\"" << fmt(f.px(f.x_min)) << "\" y1=\"" << fmt(f.py(1.0))
      << "\" x2=\"" << fmt(f.px(f.x_max)) << "\" y2=\"" << fmt(f.py(1.0))
      << "\" stroke=\"gray\" stroke-dasharray=\"6,4\" data-level=\"1\"/>\n";

  const double slot = f.px(1.0) - f.px(0.0);
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const double cx = f.px(static_cast<double>(i) + 0.5);
    out << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(f.py(f.y_min) + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(methods[i]) << "</text>\n";
    const Quartiles& q = boxes[i];
    if (q.count == 0) continue;
    const double w = 0.3 * slot;
    const char* color = color_for(methods[i]);
    out << "<g class=\"box\" data-method=\"" << xml_escape(methods[i]) << "\" data-median=\""
        << format_number(q.median) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\">\n"
        << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(f.py(q.min)) << "\" x2=\"" << fmt(cx)
        << "\" y2=\"" << fmt(f.py(q.q1)) << "\"/>\n"
        << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(f.py(q.q3)) << "\" x2=\"" << fmt(cx)
        << "\" y2=\"" << fmt(f.py(q.max)) << "\"/>\n"
        << "<rect x=\"" << fmt(cx - w) << "\" y=\"" << fmt(f.py(q.q3)) << "\" width=\""
        << fmt(2 * w) << "\" height=\"" << fmt(std::max(f.py(q.q1) - f.py(q.q3), 0.5))
        << "\" fill=\"" << color << "\" fill-opacity=\"0.25\"/>\n"
        << "<line class=\"median\" x1=\"" << fmt(cx - w) << "\" y1=\"" << fmt(f.py(q.median))
        << "\" x2=\"" << fmt(cx + w) << "\" y2=\"" << fmt(f.py(q.median))
        << "\" stroke-width=\"3\"/>\n"
        << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<Count> read_counts(std::istream& in) {
  std::vector<Count> counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string token = trim(line);
    if (token.empty()) continue;
    Count value = 0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || value < 0) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected a non-negative integer count, found '" + token + "'");
    }
    counts.push_back(value);
  }
  return counts;
}

CiReport make_ci_report(const Sample& s, const CiRequest& request) {
  if (s.size() < 2) {
    throw std::invalid_argument("need at least 2 observations, found " + std::to_string(s.size()));
  }
  if (s.all_zero()) {
    throw DegenerateSampleError("all observations are zero; the mean and dispersion are not identifiable");
  }
  CiReport report;
  report.n = s.size();
  report.mean = sample_mean(s);
  report.variance = sample_variance(s);
  report.theta_hat = mom_theta(s);
  report.ratio = ratio_statistic(report.mean, s.size(), report.theta_hat);
  report.diagnostic = diagnose_ratio(report.ratio);

  const double default_k = select_k(report.theta_hat, s.size());
  for (Method m : request.methods) {
    ConfidenceInterval ci{};
    std::optional<double> k;
    switch (m) {
      case Method::Normal: ci = normal_ci(s, request.alpha); break;
      case Method::Gamma: ci = gamma_ci(s, request.alpha); break;
      case Method::ChiSquare: ci = chisq_ci(s, request.alpha); break;
      case Method::Bernstein:
        ci = bernstein_ci(s, request.alpha, {defaults::kBernsteinLower, request.bernstein_multiplier});
        break;
      case Method::GBA:
        k = request.k.value_or(default_k);
        ci = gba_ci(s, request.alpha, *k);
        break;
      case Method::GBR: {
        const std::size_t removed = request.k
                                        ? static_cast<std::size_t>(std::floor(*request.k))
                                        : removal_count(s, default_k);
        k = static_cast<double>(removed);
        ci = gbr_ci(s, request.alpha, removed);
        break;
      }
    }
    if (request.clip) ci = clip_nonnegative(ci);
    report.rows.push_back({m, ci.lower, ci.upper, ci.estimate, ci.margin, k});
  }
  return report;
}

std::string format_ci_report(const CiReport& report, double alpha) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "n = " << report.n << "\n"
      << "mean = " << format_number(report.mean) << "\n"
      << "variance = " << format_number(report.variance) << "\n"
      << "theta_hat = " << format_number(report.theta_hat) << "\n"
      << "ratio_statistic = " << format_number(report.ratio) << " ("
      << diagnostic_name(report.diagnostic) << ")\n"
      << "confidence = " << format_number(1.0 - alpha) << "\n"
      << "method,lower,upper,center,half_width,k\n";
  for (const auto& row : report.rows) {
    out << method_name(row.method) << ',' << format_number(row.lower) << ','
        << format_number(row.upper) << ',' << format_number(row.center) << ','
        << format_number(row.half_width) << ',' << (row.k ? format_number(*row.k) : "") << '\n';
  }
  return out.str();
}

}  // namespace nbci
