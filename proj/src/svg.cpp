#include "radialnet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace radialnet {

namespace {

constexpr double kPointRadius = 2.5;
constexpr double kLegendBand = 48.0;

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

class SvgWriter {
 public:
  explicit SvgWriter(int precision) : precision_(precision) {}

  std::string num(double v) const { return format_fixed(v, precision_); }
  std::ostringstream& out() { return out_; }
  std::string str() const { return out_.str(); }

 private:
  int precision_;
  std::ostringstream out_;
};

}  // namespace

void RenderConfig::validate() const {
  if (decimal_precision < 1 || decimal_precision > 6) throw ConfigError("decimal precision must be in 1..6");
  if (!std::isfinite(label_font_size) || label_font_size <= 0.0) throw ConfigError("label font size must be positive");
}

Point2 polar_to_cartesian(double radius, double angle_deg, Point2 centre) {
  const double theta = angle_deg * std::numbers::pi / 180.0;
  return {centre.x + radius * std::cos(theta), centre.y - radius * std::sin(theta)};
}

std::string format_fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string model_title(const std::vector<std::string>& path_outermost_first, double performance, int precision) {
  std::string s = "features=[";
  for (std::size_t i = 0; i < path_outermost_first.size(); ++i) {
    if (i) s += ", ";
    s += path_outermost_first[i];
  }
  return s + "]; performance=" + format_fixed(performance, precision);
}

std::string render_svg(const Layout& layout, const EncodingConfig& enc_in, const RenderConfig& rc) {
  layout.config.validate();
  rc.validate();
  const EncodingConfig enc = enc_in.resolved(layout);
  enc.validate();

  const double cw = layout.config.canvas_width;
  const double ch = layout.config.height();
  const double margin = 4.0 * rc.label_font_size;
  const double total_w = cw + 2.0 * margin;
  const double total_h = ch + 2.0 * margin + (rc.legend ? kLegendBand : 0.0);
  const Point2 centre{cw / 2.0, ch / 2.0};

  SvgWriter w(rc.decimal_precision);
  auto& o = w.out();
  auto at = [&](double r, double deg) { return polar_to_cartesian(r, deg, centre); };

  o << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w.num(total_w) << "\" height=\""
    << w.num(total_h) << "\" viewBox=\"0 0 " << w.num(total_w) << ' ' << w.num(total_h) << "\">\n";
  o << "<rect x=\"" << w.num(0) << "\" y=\"" << w.num(0) << "\" width=\"" << w.num(total_w) << "\" height=\""
    << w.num(total_h) << "\" fill=\"#ffffff\"/>\n";
  o << "<g transform=\"translate(" << w.num(margin) << ' ' << w.num(margin) << ")\">\n";

  o << "<g class=\"arcs\" fill=\"none\">\n";
  for (const auto& arc : layout.arcs) {
    // SVG cannot draw a closed circle with one arc command; sweep is capped at a full turn.
    const double sweep = std::clamp(arc.extent, 0.0, 360.0);
    const auto p0 = at(arc.radius, 0.0);
    o << "<path class=\"arc\" d=\"M " << w.num(p0.x) << ' ' << w.num(p0.y);
    double from = 0.0;
    while (true) {
      const double to = std::min(sweep, from + 180.0);
      const auto p = at(arc.radius, to);
      o << " A " << w.num(arc.radius) << ' ' << w.num(arc.radius) << " 0 0 0 " << w.num(p.x) << ' ' << w.num(p.y);
      from = to;
      if (from >= sweep) break;
    }
    o << "\" stroke=\"" << colour_for(arc.performance, enc).hex() << "\" stroke-width=\""
      << w.num(width_for(arc.performance, enc)) << "\"><title>"
      << xml_escape(model_title({layout.feature_names.at(arc.feature)}, arc.performance, rc.decimal_precision))
      << "</title></path>\n";
  }
  o << "</g>\n";

  o << "<g class=\"lines\" stroke-linecap=\"round\">\n";
  for (const auto& line : layout.lines) {
    const auto a = at(line.start.radius, line.start.angle);
    const auto b = at(line.end.radius, line.end.angle);
    o << "<line class=\"model-line\" x1=\"" << w.num(a.x) << "\" y1=\"" << w.num(a.y) << "\" x2=\"" << w.num(b.x)
      << "\" y2=\"" << w.num(b.y) << "\" stroke=\"" << colour_for(line.performance, enc).hex()
      << "\" stroke-width=\"" << w.num(width_for(line.performance, enc)) << "\"><title>"
      << xml_escape(model_title(layout.path_names(line.subset), line.performance, rc.decimal_precision))
      << "</title></line>\n";
  }
  o << "</g>\n";

  if (rc.show_points) {
    o << "<g class=\"points\" fill=\"#333333\">\n";
    for (const auto& fp : layout.feature_points()) {
      const auto p = at(fp.point.radius, fp.point.angle);
      o << "<circle class=\"feature-point\" cx=\"" << w.num(p.x) << "\" cy=\"" << w.num(p.y) << "\" r=\""
        << w.num(kPointRadius) << "\"/>\n";
    }
    o << "</g>\n";
  }

  o << "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"" << w.num(rc.label_font_size) << "\">\n";
  for (const auto& arc : layout.arcs) {
    const double sweep = std::clamp(arc.extent, 0.0, 360.0);
    const double offset_deg = (0.5 * rc.label_font_size / arc.radius) * 180.0 / std::numbers::pi;
    const auto p = at(arc.radius, sweep + offset_deg);
    o << "<text class=\"feature-label\" x=\"" << w.num(p.x) << "\" y=\"" << w.num(p.y) << "\">"
      << xml_escape(layout.feature_names.at(arc.feature)) << "</text>\n";
  }
  o << "</g>\n";

  if (rc.legend) {
    const double bar_x = cw * 0.25;
    const double bar_w = cw * 0.5;
    const double bar_y = ch + margin;
    const double bar_h = 12.0;
    o << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"" << w.num(rc.label_font_size) << "\">\n";
    o << "<defs><linearGradient id=\"radialnet-legend\" x1=\"0%\" y1=\"0%\" x2=\"100%\" y2=\"0%\">";
    for (const auto& s : enc.stops) {
      o << "<stop offset=\"" << w.num(s.fraction) << "\" stop-color=\"" << s.colour.hex() << "\"/>";
    }
    o << "</linearGradient></defs>\n";
    o << "<rect x=\"" << w.num(bar_x) << "\" y=\"" << w.num(bar_y) << "\" width=\"" << w.num(bar_w) << "\" height=\""
      << w.num(bar_h) << "\" fill=\"url(#radialnet-legend)\" stroke=\"#666666\"/>\n";
    const double ty = bar_y + bar_h + rc.label_font_size + 2.0;
    o << "<text x=\"" << w.num(bar_x) << "\" y=\"" << w.num(ty) << "\" text-anchor=\"middle\">"
      << format_fixed(enc.domain->low, rc.decimal_precision) << "</text>\n";
    o << "<text x=\"" << w.num(bar_x + bar_w) << "\" y=\"" << w.num(ty) << "\" text-anchor=\"middle\">"
      << format_fixed(enc.domain->high, rc.decimal_precision) << "</text>\n";
    o << "</g>\n";
  }

  o << "</g>\n</svg>\n";
  return w.str();
}

}  // namespace radialnet
