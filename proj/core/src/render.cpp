#include "wardwalk/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "wardwalk/error.hpp"
#include "wardwalk/io.hpp"

namespace wardwalk {

namespace {

std::string fixed2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void append_padded(std::string& out, const std::string& cell, std::size_t width,
                   bool last) {
  out += cell;
  if (!last) out.append(width - cell.size() + 2, ' ');
}

}  // namespace

std::string render_p_4dp(double p) {
  if (!std::isfinite(p) || p < 0.0) throw Error("p-value out of range");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", p);
  std::string text = buf;
  if (p < 1.0 && text.size() >= 2 && text.front() == '0') text.erase(0, 1);
  return text;
}

std::string render_report_table(std::span<const EpsilonReport> reports) {
  const std::array<std::string, 5> header = {"mode", "counties", "mm", "epsilon", "p"};
  std::vector<std::array<std::string, 5>> rows;
  rows.reserve(reports.size());
  for (const EpsilonReport& r : reports) {
    rows.push_back({r.mode, r.enforce_counties ? "yes" : "no",
                    r.enforce_mm ? "yes" : "no", format_double(r.epsilon),
                    render_p_4dp(r.p_value)});
  }

  std::array<std::size_t, 5> widths;
  for (std::size_t c = 0; c < 5; ++c) {
    widths[c] = header[c].size();
    for (const auto& row : rows) widths[c] = std::max(widths[c], row[c].size());
  }

  std::string out;
  const auto emit = [&](const std::array<std::string, 5>& row) {
    for (std::size_t c = 0; c < 5; ++c) append_padded(out, row[c], widths[c], c == 4);
    out += '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out;
}

Histogram build_histogram(std::span<const double> labels, double seed_label,
                          int bins) {
  if (bins < 1) throw Error("histogram needs at least one bin");
  for (double v : labels) {
    if (!std::isfinite(v)) throw Error("histogram label is not finite");
  }
  if (!std::isfinite(seed_label)) throw Error("histogram label is not finite");

  double lo = seed_label;
  double hi = seed_label;
  for (double v : labels) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  Histogram h;
  h.lo = lo;
  h.seed_label = seed_label;
  if (hi == lo) {
    h.bin_width = 0.0;
    h.counts.assign(1, static_cast<std::int64_t>(labels.size()));
    return h;
  }

  h.bin_width = (hi - lo) / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : labels) {
    auto idx = static_cast<std::int64_t>((v - lo) / h.bin_width);
    idx = std::clamp<std::int64_t>(idx, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

std::string histogram_to_csv(const Histogram& histogram) {
  std::string out = "bin_left,count\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out += format_double(histogram.lo + histogram.bin_width * static_cast<double>(i));
    out += ',';
    out += std::to_string(histogram.counts[i]);
    out += '\n';
  }
  return out;
}

std::string histogram_to_svg(const Histogram& histogram) {
  constexpr double kWidth = 640.0, kHeight = 400.0;
  constexpr double kLeft = 60.0, kRight = 20.0, kTop = 20.0, kBottom = 50.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double x_axis = kTop + plot_h;

  const std::size_t bins = histogram.counts.size();
  std::int64_t max_count = 1;
  for (std::int64_t c : histogram.counts) max_count = std::max(max_count, c);
  const double range = histogram.bin_width * static_cast<double>(bins);
  const double hi = histogram.lo + range;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed2(kWidth) +
         "\" height=\"" + fixed2(kHeight) + "\" viewBox=\"0 0 " + fixed2(kWidth) +
         " " + fixed2(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fixed2(kWidth) + "\" height=\"" +
         fixed2(kHeight) + "\" fill=\"#ffffff\"/>\n";

  const double bar_w = plot_w / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    if (histogram.counts[i] <= 0) continue;
    const double frac =
        static_cast<double>(histogram.counts[i]) / static_cast<double>(max_count);
    const double bar_h = frac * plot_h;
    const double x = kLeft + bar_w * static_cast<double>(i);
    svg += "<rect x=\"" + fixed2(x) + "\" y=\"" + fixed2(x_axis - bar_h) +
           "\" width=\"" + fixed2(std::max(bar_w - 1.0, 1.0)) + "\" height=\"" +
           fixed2(bar_h) + "\" fill=\"#4878a8\"/>\n";
  }

  svg += "<line x1=\"" + fixed2(kLeft) + "\" y1=\"" + fixed2(x_axis) + "\" x2=\"" +
         fixed2(kLeft + plot_w) + "\" y2=\"" + fixed2(x_axis) +
         "\" stroke=\"#333333\"/>\n";
  svg += "<line x1=\"" + fixed2(kLeft) + "\" y1=\"" + fixed2(kTop) + "\" x2=\"" +
         fixed2(kLeft) + "\" y2=\"" + fixed2(x_axis) + "\" stroke=\"#333333\"/>\n";

  const double seed_frac =
      range > 0.0
          ? std::clamp((histogram.seed_label - histogram.lo) / range, 0.0, 1.0)
          : 0.5;
  const double seed_x = kLeft + seed_frac * plot_w;
  svg += "<line x1=\"" + fixed2(seed_x) + "\" y1=\"" + fixed2(kTop) + "\" x2=\"" +
         fixed2(seed_x) + "\" y2=\"" + fixed2(x_axis) +
         "\" stroke=\"#c0392b\" stroke-dasharray=\"4 3\"/>\n";
  svg += "<text x=\"" + fixed2(seed_x + 4.0) + "\" y=\"" + fixed2(kTop + 12.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#c0392b\">seed " +
         format_double(histogram.seed_label) + "</text>\n";

  svg += "<text x=\"" + fixed2(kLeft) + "\" y=\"" + fixed2(x_axis + 18.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">" +
         format_double(histogram.lo) + "</text>\n";
  svg += "<text x=\"" + fixed2(kLeft + plot_w) + "\" y=\"" + fixed2(x_axis + 18.0) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#333333\">" +
         format_double(hi) + "</text>\n";
  svg += "<text x=\"" + fixed2(kLeft - 6.0) + "\" y=\"" + fixed2(kTop + 12.0) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#333333\">" +
         std::to_string(max_count) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace wardwalk
