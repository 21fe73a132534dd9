#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "citestat/errors.hpp"
#include "citestat/report.hpp"
#include "text_util.hpp"

namespace citestat {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 80.0;

struct Axis {
  double lo;
  double hi;
  double step;
};

// Rounded tick spacing: 1, 2 or 5 times a power of ten.
Axis nice_axis(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double raw = (hi - lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (raw <= step) break;
  }
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

std::string tick_label(double v, double step) {
  const int decimals = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
  return format_fixed(v, decimals);
}

std::string svg_open(const std::string& title) {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<text class=\"title\" x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"15\">{3}</text>\n",
      kWidth, kHeight, num(kWidth / 2), detail::xml_escape(title));
}

std::string y_axis(const Axis& ax, const std::string& label, auto&& to_y) {
  std::string out;
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", num(kLeft),
                     num(kTop), num(kHeight - kBottom));
  for (double v = ax.lo; v <= ax.hi + ax.step * 1e-9; v += ax.step) {
    const double y = to_y(v);
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#dddddd\"/>\n"
        "<text x=\"{3}\" y=\"{4}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{5}</text>\n",
        num(kLeft), num(y), num(kWidth - kRight), num(kLeft - 6), num(y + 4), tick_label(v, ax.step));
  }
  out += fmt::format(
      "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      "transform=\"rotate(-90 18 {0})\">{1}</text>\n",
      num((kTop + kHeight - kBottom) / 2), detail::xml_escape(label));
  return out;
}

}  // namespace

std::string box_stats_csv(std::span<const std::pair<std::string, BoxStats>> groups) {
  std::string out = "group,n,whisker_low,q1,median,q3,whisker_high,outliers\n";
  for (const auto& [label, b] : groups) {
    std::string outliers;
    for (double v : b.outliers) outliers += (outliers.empty() ? "" : ";") + fmt::format("{}", v);
    out += fmt::format("{},{},{},{},{},{},{},{}\n", detail::csv_field(label), b.n, b.whisker_low, b.q1, b.median,
                       b.q3, b.whisker_high, outliers);
  }
  return out;
}

std::string boxplot_svg(const std::string& title, const std::string& axis_label,
                        std::span<const std::pair<std::string, BoxStats>> groups) {
  double lo = 0.0, hi = 1.0;
  bool first = true;
  for (const auto& [label, b] : groups) {
    double glo = b.whisker_low, ghi = b.whisker_high;
    if (!b.outliers.empty()) {
      glo = std::min(glo, b.outliers.front());
      ghi = std::max(ghi, b.outliers.back());
    }
    lo = first ? glo : std::min(lo, glo);
    hi = first ? ghi : std::max(hi, ghi);
    first = false;
  }
  const Axis ax = nice_axis(lo, hi);
  const double plot_h = kHeight - kTop - kBottom;
  auto to_y = [&](double v) { return kHeight - kBottom - (v - ax.lo) / (ax.hi - ax.lo) * plot_h; };

  std::string svg = svg_open(title);
  svg += y_axis(ax, axis_label, to_y);
  const double slot = (kWidth - kLeft - kRight) / static_cast<double>(std::max<std::size_t>(1, groups.size()));
  const double box_w = std::min(60.0, slot * 0.5);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& [label, b] = groups[g];
    const double cx = kLeft + slot * (static_cast<double>(g) + 0.5);
    svg += fmt::format("<g class=\"group\" data-label=\"{}\">\n", detail::xml_escape(label));
    svg += fmt::format(
        "<line class=\"whisker\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n"
        "<line class=\"whisker\" x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{4}\" stroke=\"black\"/>\n",
        num(cx), num(to_y(b.whisker_low)), num(to_y(b.q1)), num(to_y(b.q3)), num(to_y(b.whisker_high)));
    svg += fmt::format(
        "<rect class=\"box\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#9ecae1\" stroke=\"black\"/>\n",
        num(cx - box_w / 2), num(to_y(b.q3)), num(box_w), num(std::max(0.0, to_y(b.q1) - to_y(b.q3))));
    svg += fmt::format("<line class=\"median\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" "
                       "stroke-width=\"2\"/>\n",
                       num(cx - box_w / 2), num(to_y(b.median)), num(cx + box_w / 2), num(to_y(b.median)));
    for (double v : b.outliers) {
      svg += fmt::format("<circle class=\"outlier\" cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n",
                         num(cx), num(to_y(v)));
    }
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{} (n={})</text>\n",
        num(cx), num(kHeight - kBottom + 18), detail::xml_escape(label), b.n);
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string scatter_svg(const std::string& title, std::span<const double> x, std::span<const double> y,
                        const std::optional<double>& r) {
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const Axis xa = nice_axis(x.empty() ? 0.0 : std::min(0.0, *xmin), x.empty() ? 1.0 : *xmax);
  const Axis ya = nice_axis(y.empty() ? 0.0 : std::min(0.0, *ymin), y.empty() ? 1.0 : *ymax);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto to_x = [&](double v) { return kLeft + (v - xa.lo) / (xa.hi - xa.lo) * plot_w; };
  auto to_y = [&](double v) { return kHeight - kBottom - (v - ya.lo) / (ya.hi - ya.lo) * plot_h; };

  std::string svg = svg_open(title);
  svg += y_axis(ya, "Self-citation proportion", to_y);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", num(kLeft),
                     num(kHeight - kBottom), num(kWidth - kRight));
  for (double v = xa.lo; v <= xa.hi + xa.step * 1e-9; v += xa.step) {
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
        num(to_x(v)), num(kHeight - kBottom + 16), tick_label(v, xa.step));
  }
  svg += fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">H-index</text>\n",
      num(kLeft + plot_w / 2), num(kHeight - kBottom + 34));
  for (std::size_t i = 0; i < x.size(); ++i) {
    svg += fmt::format("<circle class=\"point\" cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"#3182bd\" fill-opacity=\"0.6\"/>\n",
                       num(to_x(x[i])), num(to_y(y[i])));
  }
  const std::string caption = r ? fmt::format("Pearson r = {}", *r) : std::string("Pearson r = undefined");
  svg += fmt::format(
      "<text class=\"caption\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"12\">{}</text>\n",
      num(kWidth / 2), num(kHeight - 14), caption);
  svg += "</svg>\n";
  return svg;
}

FigureFiles emit_figures(std::span<const AnalysisRecord> records, const std::filesystem::path& out_dir,
                         QuantileMethod method) {
  if (records.empty()) throw Error(ErrorCode::InsufficientData, "no records to plot");
  FigureFiles files;
  auto grouped = [&](const auto& groups, auto key_of) {
    std::vector<std::pair<std::string, BoxStats>> out;
    for (const auto g : groups) {
      std::vector<double> h;
      for (const auto& r : records) {
        if (key_of(r) == g) h.push_back(r.h_index);
      }
      if (!h.empty()) out.emplace_back(std::string(display_label(g)), boxplot_stats(h, method));
    }
    return out;
  };
  auto write = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    write_text_file(path, content);
    files.written.push_back(path);
  };

  const auto by_region = grouped(kAllRegions, [](const AnalysisRecord& r) { return r.region; });
  write("fig1_box_by_region.csv", box_stats_csv(by_region));
  write("fig1_box_by_region.svg", boxplot_svg("Box plot of h-indices by region", "H-index", by_region));

  const auto by_cohort = grouped(kAllCohorts, [](const AnalysisRecord& r) { return r.cohort; });
  write("fig2_box_by_cohort.csv", box_stats_csv(by_cohort));
  write("fig2_box_by_cohort.svg",
        boxplot_svg("Box plot of h-index by year of first publication", "H-index", by_cohort));

  std::vector<double> h, s;
  std::string scatter_csv = "h,self_prop\n";
  for (const auto& r : records) {
    h.push_back(r.h_index);
    s.push_back(r.self_prop);
    scatter_csv += fmt::format("{},{}\n", r.h_index, r.self_prop);
  }
  try {
    files.scatter_r = pearson_correlation(h, s);
  } catch (const Error&) {
    files.scatter_r.reset();
  }
  write("fig3_scatter.csv", scatter_csv);
  write("fig3_scatter.svg", scatter_svg("Scatter plot of h-index and self-cite proportion", h, s, files.scatter_r));
  return files;
}

}  // namespace citestat
