#pragma once

#include <string>
#include <string_view>

#include "polyenc/geometry.hpp"

namespace polyenc {

enum class TextFormat { WKT, GeoJSON };

/// Parses and validates a geometry. Rings come back canonicalized
/// (exterior CCW, holes CW). Throws ParseError, UnsupportedGeometry or
/// ValidationError.
Geometry parse_geometry(std::string_view text, TextFormat format);

/// Picks GeoJSON when the first non-blank character is '{', WKT otherwise.
Geometry parse_geometry(std::string_view text);

/// Shortest round-trip decimal representation of every coordinate.
std::string to_wkt(const Geometry& g);
std::string to_geojson(const Geometry& g);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace polyenc
