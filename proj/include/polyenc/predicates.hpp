#pragma once

#include "polyenc/geometry.hpp"

namespace polyenc {

/// Sign of the 2x2 orientation determinant of (a, b, c): +1 when c lies to
/// the left of a->b, -1 to the right, 0 when collinear. The sign is exact:
/// a floating-point filter handles the common case and an exact expansion
/// sum built on fma() resolves everything the filter cannot certify.
int orient(Point2 a, Point2 b, Point2 c);

/// Plain floating-point orientation determinant (twice the signed triangle area).
inline double orient_value(Point2 a, Point2 b, Point2 c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// p lies on the closed segment [a, b].
bool on_segment(Point2 p, Point2 a, Point2 b);

/// Closed segments [a, b] and [c, d] share at least one point.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

/// Segments cross at a single point interior to both.
bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d);

enum class Location { Outside, Boundary, Inside };

/// Location of p relative to the region bounded by a closed ring (either orientation).
Location locate_in_ring(Point2 p, const Ring& ring);

/// Location of p relative to a polygon with holes.
Location locate_in_polygon(Point2 p, const Polygon& pg);

/// p lies in the closed non-degenerate triangle (a, b, c), any orientation.
bool point_in_triangle(Point2 p, Point2 a, Point2 b, Point2 c);

}  // namespace polyenc
