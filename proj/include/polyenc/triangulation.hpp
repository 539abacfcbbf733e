#pragma once

#include <vector>

#include "polyenc/geometry.hpp"

namespace polyenc {

class TriangulationError : public Error {
public:
    using Error::Error;
};

class DegenerateSegment : public Error {
public:
    using Error::Error;
};

class DegenerateTriangle : public Error {
public:
    using Error::Error;
};

/// Minimum length of a segment kept by split_polyline.
inline constexpr double kMinSegmentLength = 1e-12;
/// Minimum |signed area| of an emitted triangle.
inline constexpr double kMinTriangleArea = 1e-14;

struct Segment {
    Point2 q;
    Point2 r;

    double length() const;
};

/// Stored counter-clockwise.
struct Triangle {
    Point2 q;
    Point2 r;
    Point2 s;

    /// Signed area; positive for a counter-clockwise triangle.
    double signed_area() const;
    /// Reorders vertices to counter-clockwise.
    Triangle ccw() const;
};

/// Consecutive vertex pairs in input order, segments no longer than
/// kMinSegmentLength dropped (with a warning). Throws DegenerateSegment when
/// nothing is left.
std::vector<Segment> split_polyline(const Polyline& pl);

/// Ear clipping over the polygon region with holes bridged into the exterior.
/// Every triangle vertex is an input vertex; no Steiner points are added.
/// Orientation tests use the exact predicates from predicates.hpp, so the
/// result does not depend on a tolerance. Throws TriangulationError.
std::vector<Triangle> triangulate(const Polygon& pg);

/// Triangulates every member polygon.
std::vector<Triangle> triangulate(const MultiPolygon& mp);

/// Triangles as a GeoJSON MultiPolygon, for debugging.
std::string triangles_to_geojson(const std::vector<Triangle>& tris);

}  // namespace polyenc
