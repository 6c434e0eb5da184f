#include "pilotwave/svg.hpp"

#include <algorithm>
#include <cmath>

#include "format_detail.hpp"
#include "pilotwave/types.hpp"

namespace pilotwave {

namespace {

constexpr double kWidth = 960.0, kHeight = 540.0;
constexpr double kLeft = 70.0, kRight = 30.0, kTop = 50.0, kBottom = 55.0;

void append_text(std::string& out, double x, double y, const char* anchor,
                 const std::string& text, const char* extra = "") {
  out += "<text x=\"";
  detail::append_fixed2(out, x);
  out += "\" y=\"";
  detail::append_fixed2(out, y);
  out += "\" text-anchor=\"";
  out += anchor;
  out += "\" font-family=\"sans-serif\" font-size=\"14\"";
  out += extra;
  out += ">";
  out += text;
  out += "</text>\n";
}

}  // namespace

std::string render_line_plot(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<LineSeries>& series) {
  if (series.empty()) throw validation_error("plot needs at least one series");
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  bool first = true;
  for (const auto& s : series) {
    if (s.xs.size() != s.ys.size() || s.xs.empty())
      throw validation_error("series arrays must be non-empty and equal");
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (first) {
        xmin = xmax = s.xs[i];
        ymin = ymax = s.ys[i];
        first = false;
      } else {
        xmin = std::min(xmin, s.xs[i]);
        xmax = std::max(xmax, s.xs[i]);
        ymin = std::min(ymin, s.ys[i]);
        ymax = std::max(ymax, s.ys[i]);
      }
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  ymin = std::min(ymin, 0.0);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) {
    return kTop + ph - (y - ymin) / (ymax - ymin) * ph;
  };

  std::string out;
  out.reserve(4096);
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 960 540\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n";
  out += "<rect x=\"";
  detail::append_fixed2(out, kLeft);
  out += "\" y=\"";
  detail::append_fixed2(out, kTop);
  out += "\" width=\"";
  detail::append_fixed2(out, pw);
  out += "\" height=\"";
  detail::append_fixed2(out, ph);
  out += "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

  append_text(out, kWidth / 2.0, 28.0, "middle", title, " font-size=\"18\"");
  append_text(out, kWidth / 2.0, kHeight - 14.0, "middle", x_label);
  append_text(out, 18.0, kTop - 14.0, "start", y_label);

  // Axis extremes; a zero line when the range crosses zero.
  append_text(out, kLeft, kHeight - kBottom + 20.0, "middle", detail::fmt_double(xmin));
  append_text(out, kWidth - kRight, kHeight - kBottom + 20.0, "middle",
              detail::fmt_double(xmax));
  append_text(out, kLeft - 8.0, py(ymax) + 5.0, "end", detail::fmt_double(ymax));
  append_text(out, kLeft - 8.0, py(ymin) + 5.0, "end", detail::fmt_double(ymin));
  if (ymin < 0.0 && ymax > 0.0) {
    out += "<line x1=\"";
    detail::append_fixed2(out, kLeft);
    out += "\" y1=\"";
    detail::append_fixed2(out, py(0.0));
    out += "\" x2=\"";
    detail::append_fixed2(out, kLeft + pw);
    out += "\" y2=\"";
    detail::append_fixed2(out, py(0.0));
    out += "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  }

  for (const auto& s : series) {
    out += "<polyline fill=\"none\" stroke=\"";
    out += s.color;
    out += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (i) out += ' ';
      detail::append_fixed2(out, px(s.xs[i]));
      out += ',';
      detail::append_fixed2(out, py(s.ys[i]));
    }
    out += "\"/>\n";
  }

  double ly = kTop + 18.0;
  for (const auto& s : series) {
    out += "<line x1=\"";
    detail::append_fixed2(out, kLeft + pw - 170.0);
    out += "\" y1=\"";
    detail::append_fixed2(out, ly - 5.0);
    out += "\" x2=\"";
    detail::append_fixed2(out, kLeft + pw - 140.0);
    out += "\" y2=\"";
    detail::append_fixed2(out, ly - 5.0);
    out += "\" stroke=\"";
    out += s.color;
    out += "\" stroke-width=\"3\"/>\n";
    append_text(out, kLeft + pw - 132.0, ly, "start", s.label);
    ly += 20.0;
  }

  out += "</svg>\n";
  return out;
}

}  // namespace pilotwave
