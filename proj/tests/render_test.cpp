#include "wardwalk/render.hpp"

#include <limits>
#include <string>
#include <vector>

#include <doctest.h>

#include "wardwalk/error.hpp"
#include "wardwalk/outlier.hpp"

using namespace wardwalk;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("p-values render to four decimals without a leading zero") {
  CHECK(render_p_4dp(p_value(2.7e-8)) == ".0002");
  CHECK(render_p_4dp(p_value(1.6e-8)) == ".0002");
  CHECK(render_p_4dp(p_value(1.0e-8)) == ".0001");
  CHECK(render_p_4dp(p_value(3.5e-7)) == ".0008");

  CHECK(render_p_4dp(1.0) == "1.0000");
  CHECK(render_p_4dp(0.5) == ".5000");
  CHECK(render_p_4dp(0.0) == ".0000");
  CHECK(render_p_4dp(0.99999) == "1.0000");

  CHECK_THROWS_WITH_AS(render_p_4dp(-0.1), "p-value out of range", Error);
}

TEST_CASE("report table aligns columns and renders flags") {
  EpsilonReport a;
  a.mode = "perimeter";
  a.enforce_counties = true;
  a.enforce_mm = false;
  a.epsilon = 2.7e-8;
  a.p_value = p_value(2.7e-8);

  EpsilonReport b;
  b.mode = "l1";
  b.enforce_counties = false;
  b.enforce_mm = true;
  b.epsilon = 0.5;
  b.p_value = p_value(0.5);

  const std::vector<EpsilonReport> reports = {a, b};
  const std::string expected =
      "mode       counties  mm   epsilon  p\n"
      "perimeter  yes       no   2.7e-08  .0002\n"
      "l1         no        yes  0.5      1.0000\n";
  CHECK(render_report_table(reports) == expected);
}

TEST_CASE("report table with no rows is just the header") {
  const std::vector<EpsilonReport> none;
  CHECK(render_report_table(none) == "mode  counties  mm  epsilon  p\n");
}

TEST_CASE("histogram bins labels and marks the seed") {
  const std::vector<double> labels = {0.0, 0.0, 1.0, 1.0, 1.0, 3.0};
  const Histogram h = build_histogram(labels, 4.0, 40);

  CHECK(h.lo == 0.0);
  CHECK(h.bin_width == doctest::Approx(0.1));
  CHECK(h.seed_label == 4.0);
  REQUIRE(h.counts.size() == 40);

  std::int64_t total = 0;
  for (std::int64_t c : h.counts) total += c;
  CHECK(total == 6);
  CHECK(h.counts[0] == 2);
  CHECK(h.counts[10] == 3);
  CHECK(h.counts[30] == 1);
}

TEST_CASE("histogram range covers the seed on either side") {
  const std::vector<double> low = {5.0};
  const Histogram below = build_histogram(low, 1.0, 4);
  CHECK(below.lo == 1.0);
  CHECK(below.bin_width == 1.0);
  CHECK(below.counts[3] == 1);

  const std::vector<double> pair = {0.0, 1.0};
  const Histogram above = build_histogram(pair, 10.0, 10);
  CHECK(above.bin_width == 1.0);
  CHECK(above.counts[0] == 1);
  CHECK(above.counts[1] == 1);
  std::int64_t total = 0;
  for (std::int64_t c : above.counts) total += c;
  CHECK(total == 2);
}

TEST_CASE("maximum label lands in the last bin") {
  const std::vector<double> labels = {0.0, 4.0};
  const Histogram h = build_histogram(labels, 2.0, 40);
  CHECK(h.counts[39] == 1);
  CHECK(h.counts[0] == 1);
}

TEST_CASE("zero-range histogram degenerates to a single bin") {
  const std::vector<double> labels = {2.0, 2.0, 2.0};
  const Histogram h = build_histogram(labels, 2.0, 40);
  CHECK(h.bin_width == 0.0);
  REQUIRE(h.counts.size() == 1);
  CHECK(h.counts[0] == 3);
  CHECK(histogram_to_csv(h) == "bin_left,count\n2,3\n");
}

TEST_CASE("histogram rejects bad input") {
  const std::vector<double> labels = {1.0};
  CHECK_THROWS_WITH_AS(build_histogram(labels, 1.0, 0),
                       "histogram needs at least one bin", Error);
  const std::vector<double> bad = {std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_WITH_AS(build_histogram(bad, 1.0, 4),
                       "histogram label is not finite", Error);
  CHECK_THROWS_WITH_AS(
      build_histogram(labels, std::numeric_limits<double>::infinity(), 4),
      "histogram label is not finite", Error);
}

TEST_CASE("histogram csv lists one row per bin") {
  const std::vector<double> labels = {0.0, 0.0, 1.0, 1.0, 1.0, 3.0};
  const Histogram h = build_histogram(labels, 4.0, 40);
  const auto lines = split_lines(histogram_to_csv(h));

  REQUIRE(lines.size() == 41);
  CHECK(lines[0] == "bin_left,count");
  CHECK(lines[1] == "0,2");
  CHECK(lines[11] == "1,3");
  CHECK(lines[31] == "3,1");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (i == 1 || i == 11 || i == 31) continue;
    CHECK(lines[i].substr(lines[i].find(',') + 1) == "0");
  }
}

TEST_CASE("histogram svg is deterministic and marks the seed") {
  const std::vector<double> labels = {0.0, 0.0, 1.0, 1.0, 1.0, 3.0};
  const Histogram h = build_histogram(labels, 4.0, 40);
  const std::string svg = histogram_to_svg(h);

  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>\n") == svg.size() - 7);
  CHECK(count_occurrences(svg, "<rect") == 4);
  CHECK(count_occurrences(svg, "#c0392b") == 2);
  CHECK(svg.find("seed 4</text>") != std::string::npos);
  CHECK(histogram_to_svg(h) == svg);

  const Histogram flat = build_histogram(std::vector<double>{2.0}, 2.0, 40);
  const std::string degenerate = histogram_to_svg(flat);
  CHECK(degenerate.find("</svg>\n") != std::string::npos);
}
