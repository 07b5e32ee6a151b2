#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace radialnet {

struct Layout;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  /// Lowercase "#rrggbb".
  std::string hex() const;
  /// Parses "#rrggbb" or "rrggbb" (either case); throws ConfigError.
  static Rgb parse(std::string_view text);
  bool operator==(const Rgb&) const = default;
};

struct ColourStop {
  double fraction = 0.0;
  Rgb colour;
};

struct ScoreDomain {
  double low = 0.0;
  double high = 1.0;
};

/// Diverging blue-white-red scale.
std::vector<ColourStop> default_colour_stops();

struct EncodingConfig {
  /// Empty means "auto": resolved from observed scores.
  std::optional<ScoreDomain> domain;
  double width_min = 1.0;
  double width_max = 12.0;
  std::vector<ColourStop> stops = default_colour_stops();

  /// Throws ConfigError on an unresolved or inverted domain, a bad width range or bad stops.
  void validate() const;
  /// Fixes an `auto` domain to [min, max] of the given scores. A zero-width observed
  /// range is widened to [v - 0.5, v + 0.5]. With no scores the domain stays unresolved.
  EncodingConfig resolved(const std::vector<double>& scores) const;
  EncodingConfig resolved(const Layout& layout) const;
};

/// Position of a score within the domain after clamping, in [0, 1].
double domain_fraction(double performance, const EncodingConfig& cfg);
/// Stroke width: linear map of the clamped score onto [width_min, width_max].
double width_for(double performance, const EncodingConfig& cfg);
/// Piecewise-linear sRGB interpolation between stops, channels rounded half-up.
Rgb colour_for(double performance, const EncodingConfig& cfg);
Rgb colour_at_fraction(double t, const std::vector<ColourStop>& stops);

}  // namespace radialnet
