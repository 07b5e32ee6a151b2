#include "radialnet/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "radialnet/layout.hpp"
#include "radialnet/model_table.hpp"

namespace radialnet {

std::string Rgb::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

Rgb Rgb::parse(std::string_view text) {
  if (!text.empty() && text.front() == '#') text.remove_prefix(1);
  if (text.size() != 6) throw ConfigError("colour must be #rrggbb, got '" + std::string(text) + "'");
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ConfigError("colour must be #rrggbb, got '" + std::string(text) + "'");
  };
  auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(nibble(text[i]) * 16 + nibble(text[i + 1])); };
  return {byte(0), byte(2), byte(4)};
}

std::vector<ColourStop> default_colour_stops() {
  return {{0.0, {0x21, 0x66, 0xAC}}, {0.5, {0xF7, 0xF7, 0xF7}}, {1.0, {0xB2, 0x18, 0x2B}}};
}

void EncodingConfig::validate() const {
  if (!domain) throw ConfigError("colour/width domain is unresolved (auto domain with no scores)");
  if (!std::isfinite(domain->low) || !std::isfinite(domain->high) || !(domain->low < domain->high)) {
    throw ConfigError("domain low must be strictly below domain high");
  }
  if (!std::isfinite(width_min) || !std::isfinite(width_max) || width_min < 0.0 || !(width_min < width_max)) {
    throw ConfigError("width range must satisfy 0 <= min < max");
  }
  if (stops.size() < 2) throw ConfigError("colour scale needs at least two stops");
  if (stops.front().fraction != 0.0 || stops.back().fraction != 1.0) {
    throw ConfigError("colour stops must start at fraction 0 and end at fraction 1");
  }
  for (std::size_t i = 1; i < stops.size(); ++i) {
    if (!(stops[i - 1].fraction <= stops[i].fraction)) throw ConfigError("colour stops must be sorted by fraction");
  }
}

EncodingConfig EncodingConfig::resolved(const std::vector<double>& scores) const {
  EncodingConfig out = *this;
  if (out.domain || scores.empty()) return out;
  auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  if (*lo < *hi) {
    out.domain = ScoreDomain{*lo, *hi};
  } else {
    out.domain = ScoreDomain{*lo - 0.5, *hi + 0.5};
  }
  return out;
}

EncodingConfig EncodingConfig::resolved(const Layout& layout) const {
  std::vector<double> scores;
  scores.reserve(layout.arcs.size() + layout.lines.size());
  for (const auto& a : layout.arcs) scores.push_back(a.performance);
  for (const auto& l : layout.lines) scores.push_back(l.performance);
  return resolved(scores);
}

double domain_fraction(double performance, const EncodingConfig& cfg) {
  cfg.validate();
  const auto [low, high] = *cfg.domain;
  const double p = std::clamp(performance, low, high);
  return (p - low) / (high - low);
}

double width_for(double performance, const EncodingConfig& cfg) {
  const double t = domain_fraction(performance, cfg);
  return cfg.width_min + t * (cfg.width_max - cfg.width_min);
}

Rgb colour_at_fraction(double t, const std::vector<ColourStop>& stops) {
  t = std::clamp(t, 0.0, 1.0);
  std::size_t hi = 1;
  while (hi + 1 < stops.size() && stops[hi].fraction < t) ++hi;
  const auto& a = stops[hi - 1];
  const auto& b = stops[hi];
  const double span = b.fraction - a.fraction;
  const double u = span > 0.0 ? std::clamp((t - a.fraction) / span, 0.0, 1.0) : 1.0;
  auto channel = [u](std::uint8_t from, std::uint8_t to) {
    const double v = from + (static_cast<double>(to) - from) * u;
    // Half-up; the epsilon absorbs representation error in u (e.g. 174.49999999 for 174.5).
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5 + 1e-9), 0.0, 255.0));
  };
  return {channel(a.colour.r, b.colour.r), channel(a.colour.g, b.colour.g), channel(a.colour.b, b.colour.b)};
}

Rgb colour_for(double performance, const EncodingConfig& cfg) {
  return colour_at_fraction(domain_fraction(performance, cfg), cfg.stops);
}

}  // namespace radialnet
