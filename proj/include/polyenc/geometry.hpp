#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace polyenc {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class UnsupportedGeometry : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DegenerateBBox : public Error {
public:
    using Error::Error;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

/// Closed vertex sequence, first == last.
using Ring = std::vector<Point2>;

struct Polyline {
    std::vector<Point2> vertices;
    friend bool operator==(const Polyline&, const Polyline&) = default;
};

/// Exterior ring is counter-clockwise, holes are clockwise (enforced by validate()).
struct Polygon {
    Ring exterior;
    std::vector<Ring> holes;
    friend bool operator==(const Polygon&, const Polygon&) = default;
};

struct MultiPolygon {
    std::vector<Polygon> polygons;
    friend bool operator==(const MultiPolygon&, const MultiPolygon&) = default;
};

enum class GeometryKind { Point, Polyline, Polygon, MultiPolygon };

std::string_view kind_name(GeometryKind kind);

class Geometry {
public:
    using Storage = std::variant<Point2, Polyline, Polygon, MultiPolygon>;

    Geometry() = default;
    Geometry(Point2 p) : data_(p) {}
    Geometry(Polyline pl) : data_(std::move(pl)) {}
    Geometry(Polygon pg) : data_(std::move(pg)) {}
    Geometry(MultiPolygon mp) : data_(std::move(mp)) {}

    GeometryKind kind() const { return static_cast<GeometryKind>(data_.index()); }

    const Storage& data() const { return data_; }

    const Point2& point() const { return std::get<Point2>(data_); }
    const Polyline& polyline() const { return std::get<Polyline>(data_); }
    const Polygon& polygon() const { return std::get<Polygon>(data_); }
    const MultiPolygon& multipolygon() const { return std::get<MultiPolygon>(data_); }

    friend bool operator==(const Geometry&, const Geometry&) = default;

private:
    Storage data_;
};

struct BoundingBox {
    double min_x = -1.0;
    double min_y = -1.0;
    double max_x = 1.0;
    double max_y = 1.0;

    bool contains(Point2 p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

/// Shoelace signed area of a closed ring; positive iff counter-clockwise.
double signed_area(const Ring& ring);

/// Reverses vertex order; a closed ring stays closed.
Ring reversed(const Ring& ring);

/// Checks every invariant of the Geometry type and canonicalizes ring
/// orientation (exterior CCW, holes CW). Throws ValidationError.
Geometry validate(Geometry g);

/// Per-axis affine map of `bbox` onto [-1, 1] x [-1, 1].
Geometry normalize(const Geometry& g, const BoundingBox& bbox);
Point2 normalize(Point2 p, const BoundingBox& bbox);

/// Polyline: length-weighted segment midpoints. Polygon: area centroid with
/// holes subtracted. MultiPolygon: area-weighted over members.
Point2 centroid(const Geometry& g);

BoundingBox bounding_box(const Geometry& g);

/// Same shape moved by (dx, dy).
Geometry translated(const Geometry& g, Point2 offset);

/// All vertices, rings included with their closing repeat.
std::vector<Point2> all_vertices(const Geometry& g);

}  // namespace polyenc
