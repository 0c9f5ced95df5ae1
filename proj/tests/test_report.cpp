#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "nbci/report.hpp"

using namespace nbci;

namespace {

std::vector<ExperimentResult> small_grid() {
  ExperimentSpec base;
  base.trials = 150;
  const std::vector<double> mus{2.0};
  const std::vector<double> thetas{0.025, 0.5};
  const std::vector<std::size_t> ns{5, 20, 60};
  return run_grid(make_grid(mus, thetas, ns, base));
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

// Minimal well-formedness check: every tag is closed in order and attribute
// quotes balance.
bool well_formed_xml(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = doc.find('<', pos)) != std::string::npos) {
    const std::size_t end = doc.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = doc.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    const std::string name = tag.substr(0, tag.find_first_of(" /\n"));
    if (!self_closing) stack.push_back(name);
  }
  return stack.empty();
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(FormatNumber, FixedShortestRoundTrip) {
  EXPECT_EQ(format_number(0.95), "0.95");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(1e-5), "0.00001");
  EXPECT_EQ(format_number(std::nan("")), "NA");
  EXPECT_EQ(std::stod(format_number(0.1 + 0.2)), 0.1 + 0.2);
  EXPECT_EQ(format_number(1e22).find('e'), std::string::npos);
}

TEST(Csv, HeaderAndShape) {
  const auto rows = to_rows(small_grid());
  EXPECT_EQ(rows.size(), 6u * kAllMethods.size());
  const std::string csv = to_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_EQ(count_of(csv, "\n"), rows.size() + 1);
  EXPECT_EQ(rows.front().seed, defaults::kSeed);
  EXPECT_EQ(rows.front().k_policy, "default");
}

TEST(Csv, WriteReadWriteIsByteStable) {
  const std::string first = to_csv(to_rows(small_grid()));
  std::istringstream in(first);
  const auto parsed = read_csv(in);
  EXPECT_EQ(to_csv(parsed), first);
}

TEST(Csv, RowsSurviveRoundTripIncludingNA) {
  const auto rows = to_rows(small_grid());
  bool saw_na = false;
  for (const auto& r : rows) saw_na |= std::isnan(r.coverage);
  ASSERT_TRUE(saw_na) << "the n = 5, theta = 0.025 cell should leave some methods unavailable";
  std::istringstream in(to_csv(rows));
  const auto parsed = read_csv(in);
  ASSERT_EQ(parsed.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_TRUE(same_content(rows[i], parsed[i])) << i;
}

TEST(Csv, NoExponentNotation) {
  const std::string csv = to_csv(to_rows(small_grid()));
  EXPECT_FALSE(std::regex_search(csv, std::regex("[0-9][eE][-+]?[0-9]")));
}

TEST(Csv, ErrorsNameTheLine) {
  std::istringstream bad_header("mu,theta\n1,2\n");
  EXPECT_THROW(read_csv(bad_header), CsvError);
  std::istringstream short_row(std::string(kCsvHeader) + "\n2,0.5,10\n");
  try {
    read_csv(short_row);
    FAIL();
  } catch (const CsvError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream bad_number(std::string(kCsvHeader) +
                                "\n2,0.5,10,0.05,default,Normal,abc,1,1,1,1,0,1\n");
  EXPECT_THROW(read_csv(bad_number), CsvError);
}

TEST(Filter, SelectsOneSeries) {
  const auto rows = to_rows(small_grid());
  RowFilter f;
  f.theta = 0.5;
  const auto kept = filter_rows(rows, f);
  EXPECT_EQ(kept.size(), 3u * kAllMethods.size());
  for (const auto& r : kept) EXPECT_EQ(r.theta, 0.5);
}

TEST(CoverageSvg, SeriesAndReferenceLine) {
  RowFilter f;
  f.theta = 0.5;
  const std::string svg = coverage_svg(filter_rows(to_rows(small_grid()), f));
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("<svg "), std::string::npos);
  EXPECT_EQ(count_of(svg, "<polyline class=\"series\""), 6u);
  for (Method m : kAllMethods) {
    EXPECT_NE(svg.find("data-method=\"" + std::string(method_name(m)) + "\""), std::string::npos);
  }
  EXPECT_NE(svg.find("class=\"reference\""), std::string::npos);
  EXPECT_NE(svg.find("data-level=\"0.95\""), std::string::npos);
  EXPECT_TRUE(well_formed_xml(svg));
}

TEST(CoverageSvg, RejectsMixedSeries) {
  EXPECT_THROW(coverage_svg(to_rows(small_grid())), std::invalid_argument);
  EXPECT_THROW(coverage_svg({}), std::invalid_argument);
}

TEST(LengthRatioSvg, NormalBoxSitsAtOne) {
  const auto rows = to_rows(small_grid());
  for (RatioKind kind : {RatioKind::Median, RatioKind::Sd}) {
    const std::string svg = length_ratio_svg(rows, kind);
    EXPECT_EQ(count_of(svg, "<g class=\"box\""), 6u);
    EXPECT_NE(svg.find("data-method=\"Normal\" data-median=\"1\""), std::string::npos);
    EXPECT_NE(svg.find("data-level=\"1\""), std::string::npos);
    EXPECT_TRUE(well_formed_xml(svg));
  }
}

TEST(ReadCounts, ParsesAndRejects) {
  std::istringstream ok("3\n\n 0 \n12\r\n");
  EXPECT_EQ(read_counts(ok), (std::vector<Count>{3, 0, 12}));
  for (const char* bad : {"1\n2.5\n", "1\n-3\n", "x\n", "4 5\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_counts(in), std::invalid_argument) << bad;
  }
  std::istringstream second("1\nabc\n");
  try {
    read_counts(second);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(CiReport, GbaWithZeroKMatchesNormal) {
  const Sample s({0, 0, 4, 1, 0, 9, 0, 2, 0, 0, 0, 17});
  CiRequest req;
  req.methods = {Method::Normal, Method::GBA};
  req.k = 0.0;
  const auto report = make_ci_report(s, req);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].lower, report.rows[1].lower);
  EXPECT_EQ(report.rows[0].upper, report.rows[1].upper);
  EXPECT_EQ(report.rows[0].center, report.rows[1].center);
  EXPECT_EQ(report.rows[0].half_width, report.rows[1].half_width);
}

TEST(CiReport, SummaryAndDefaults) {
  const Sample s({3, 0, 0});
  const auto report = make_ci_report(s, CiRequest{});
  EXPECT_EQ(report.n, 3u);
  EXPECT_EQ(report.mean, 1.0);
  EXPECT_EQ(report.variance, 3.0);
  EXPECT_DOUBLE_EQ(report.theta_hat, 0.5);
  EXPECT_EQ(report.rows.size(), kAllMethods.size());
  const std::string text = format_ci_report(report, 0.05);
  EXPECT_NE(text.find("confidence = 0.95"), std::string::npos);
  EXPECT_NE(text.find("method,lower,upper,center,half_width,k"), std::string::npos);
}

TEST(CiReport, ClipOnlyTouchesNegativeLowerBounds) {
  const Sample s({3, 0, 0});
  CiRequest req;
  req.methods = {Method::GBR};
  req.k = 1.0;
  const auto raw = make_ci_report(s, req);
  req.clip = true;
  const auto clipped = make_ci_report(s, req);
  EXPECT_LT(raw.rows[0].lower, 0.0);
  EXPECT_EQ(clipped.rows[0].lower, 0.0);
  EXPECT_EQ(clipped.rows[0].upper, raw.rows[0].upper);
  EXPECT_EQ(clipped.rows[0].k, 1.0);
}

TEST(CiReport, RejectsDegenerateInput) {
  EXPECT_THROW(make_ci_report(Sample({4}), CiRequest{}), std::invalid_argument);
  EXPECT_THROW(make_ci_report(Sample({0, 0, 0}), CiRequest{}), DegenerateSampleError);
}
