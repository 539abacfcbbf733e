#include "polyenc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyenc/predicates.hpp"

namespace polyenc {

std::string_view kind_name(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::Point: return "Point";
        case GeometryKind::Polyline: return "LineString";
        case GeometryKind::Polygon: return "Polygon";
        case GeometryKind::MultiPolygon: return "MultiPolygon";
    }
    return "Unknown";
}

double signed_area(const Ring& ring) {
    double twice = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        twice += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    }
    return 0.5 * twice;
}

Ring reversed(const Ring& ring) { return Ring(ring.rbegin(), ring.rend()); }

namespace {

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void require_finite(const std::vector<Point2>& pts) {
    for (const Point2& p : pts) {
        if (!finite(p)) throw ValidationError("non-finite coordinate");
    }
}

Ring drop_repeated(const Ring& ring) {
    Ring out;
    out.reserve(ring.size());
    for (const Point2& p : ring) {
        if (out.empty() || !(out.back() == p)) out.push_back(p);
    }
    return out;
}

// Adjacent edges (a, b) and (b, c) of a ring may only share b.
bool adjacent_edges_overlap(Point2 a, Point2 b, Point2 c) {
    if (orient(a, b, c) != 0) return false;
    return on_segment(c, a, b) || on_segment(a, b, c);
}

void require_simple(const Ring& ring) {
    const std::size_t n = ring.size() - 1;  // edge count
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = ring[i];
        const Point2 b = ring[i + 1];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point2 c = ring[j];
            const Point2 d = ring[j + 1];
            const bool next = j == i + 1;
            const bool wrap = i == 0 && j == n - 1;
            if (next) {
                if (adjacent_edges_overlap(a, b, d)) throw ValidationError("ring folds back on itself");
            } else if (wrap) {
                if (adjacent_edges_overlap(c, a, b)) throw ValidationError("ring folds back on itself");
            } else if (segments_intersect(a, b, c, d)) {
                throw ValidationError("self-intersecting ring");
            }
        }
    }
}

Ring validate_ring(const Ring& input, bool want_ccw) {
    require_finite(input);
    Ring ring = drop_repeated(input);
    if (ring.size() < 2 || !(ring.front() == ring.back())) throw ValidationError("ring is not closed");
    if (ring.size() < 4) throw ValidationError("ring needs at least 3 distinct vertices");
    require_simple(ring);
    const double area = signed_area(ring);
    if (!(std::abs(area) > 0.0)) throw ValidationError("ring has zero area");
    if ((area > 0.0) != want_ccw) ring = reversed(ring);
    return ring;
}

bool rings_touch(const Ring& r, const Ring& s) {
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        for (std::size_t j = 0; j + 1 < s.size(); ++j) {
            if (segments_intersect(r[i], r[i + 1], s[j], s[j + 1])) return true;
        }
    }
    return false;
}

Polygon validate_polygon(const Polygon& pg) {
    Polygon out;
    out.exterior = validate_ring(pg.exterior, true);
    for (const Ring& h : pg.holes) {
        Ring hole = validate_ring(h, false);
        for (std::size_t i = 0; i + 1 < hole.size(); ++i) {
            if (locate_in_ring(hole[i], out.exterior) != Location::Inside) {
                throw ValidationError("hole is not strictly inside the exterior ring");
            }
        }
        if (rings_touch(hole, out.exterior)) throw ValidationError("hole touches the exterior ring");
        for (const Ring& other : out.holes) {
            if (rings_touch(hole, other)) throw ValidationError("holes intersect");
            if (locate_in_ring(hole[0], other) != Location::Outside ||
                locate_in_ring(other[0], hole) != Location::Outside) {
                throw ValidationError("nested holes");
            }
        }
        out.holes.push_back(std::move(hole));
    }
    return out;
}

}  // namespace

Geometry validate(Geometry g) {
    switch (g.kind()) {
        case GeometryKind::Point:
            if (!finite(g.point())) throw ValidationError("non-finite coordinate");
            return g;
        case GeometryKind::Polyline: {
            const auto& v = g.polyline().vertices;
            if (v.size() < 2) throw ValidationError("polyline needs at least 2 vertices");
            require_finite(v);
            if (v.front() == v.back()) throw ValidationError("polyline first and last vertex coincide");
            bool any = false;
            for (std::size_t i = 0; i + 1 < v.size(); ++i) {
                any = any || std::hypot(v[i + 1].x - v[i].x, v[i + 1].y - v[i].y) > 1e-12;
            }
            if (!any) throw ValidationError("polyline has no segment of positive length");
            return g;
        }
        case GeometryKind::Polygon: return Geometry(validate_polygon(g.polygon()));
        case GeometryKind::MultiPolygon: {
            const auto& parts = g.multipolygon().polygons;
            if (parts.empty()) throw ValidationError("empty multipolygon");
            MultiPolygon mp;
            for (const Polygon& p : parts) mp.polygons.push_back(validate_polygon(p));
            return Geometry(std::move(mp));
        }
    }
    throw ValidationError("unknown geometry kind");
}

Point2 normalize(Point2 p, const BoundingBox& bbox) {
    if (!(bbox.max_x > bbox.min_x) || !(bbox.max_y > bbox.min_y)) {
        throw DegenerateBBox("bounding box has zero extent");
    }
    return {2.0 * (p.x - bbox.min_x) / (bbox.max_x - bbox.min_x) - 1.0,
            2.0 * (p.y - bbox.min_y) / (bbox.max_y - bbox.min_y) - 1.0};
}

namespace {

template <class Fn>
Geometry map_vertices(const Geometry& g, Fn&& fn) {
    auto map_ring = [&](const std::vector<Point2>& pts) {
        std::vector<Point2> out;
        out.reserve(pts.size());
        for (const Point2& p : pts) out.push_back(fn(p));
        return out;
    };
    auto map_polygon = [&](const Polygon& pg) {
        Polygon out{map_ring(pg.exterior), {}};
        for (const Ring& h : pg.holes) out.holes.push_back(map_ring(h));
        return out;
    };
    switch (g.kind()) {
        case GeometryKind::Point: return Geometry(fn(g.point()));
        case GeometryKind::Polyline: return Geometry(Polyline{map_ring(g.polyline().vertices)});
        case GeometryKind::Polygon: return Geometry(map_polygon(g.polygon()));
        case GeometryKind::MultiPolygon: {
            MultiPolygon mp;
            for (const Polygon& p : g.multipolygon().polygons) mp.polygons.push_back(map_polygon(p));
            return Geometry(std::move(mp));
        }
    }
    return g;
}

struct AreaMoment {
    double area = 0.0;
    double mx = 0.0;
    double my = 0.0;

    void add_ring(const Ring& ring) {
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            const Point2 a = ring[i];
            const Point2 b = ring[i + 1];
            const double cross = a.x * b.y - b.x * a.y;
            area += 0.5 * cross;
            mx += (a.x + b.x) * cross / 6.0;
            my += (a.y + b.y) * cross / 6.0;
        }
    }

    void add_polygon(const Polygon& pg) {
        add_ring(pg.exterior);
        for (const Ring& h : pg.holes) add_ring(h);
    }
};

}  // namespace

Geometry normalize(const Geometry& g, const BoundingBox& bbox) {
    normalize(Point2{}, bbox);  // rejects a degenerate box up front
    return map_vertices(g, [&](Point2 p) { return normalize(p, bbox); });
}

Geometry translated(const Geometry& g, Point2 offset) {
    return map_vertices(g, [&](Point2 p) { return p + offset; });
}

Point2 centroid(const Geometry& g) {
    switch (g.kind()) {
        case GeometryKind::Point: return g.point();
        case GeometryKind::Polyline: {
            const auto& v = g.polyline().vertices;
            double total = 0.0, cx = 0.0, cy = 0.0;
            for (std::size_t i = 0; i + 1 < v.size(); ++i) {
                const double len = std::hypot(v[i + 1].x - v[i].x, v[i + 1].y - v[i].y);
                total += len;
                cx += len * 0.5 * (v[i].x + v[i + 1].x);
                cy += len * 0.5 * (v[i].y + v[i + 1].y);
            }
            return {cx / total, cy / total};
        }
        case GeometryKind::Polygon:
        case GeometryKind::MultiPolygon: {
            AreaMoment m;
            if (g.kind() == GeometryKind::Polygon) {
                m.add_polygon(g.polygon());
            } else {
                for (const Polygon& p : g.multipolygon().polygons) m.add_polygon(p);
            }
            return {m.mx / m.area, m.my / m.area};
        }
    }
    return {};
}

std::vector<Point2> all_vertices(const Geometry& g) {
    std::vector<Point2> out;
    map_vertices(g, [&](Point2 p) {
        out.push_back(p);
        return p;
    });
    return out;
}

BoundingBox bounding_box(const Geometry& g) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    BoundingBox box{inf, inf, -inf, -inf};
    for (const Point2& p : all_vertices(g)) {
        box.min_x = std::min(box.min_x, p.x);
        box.min_y = std::min(box.min_y, p.y);
        box.max_x = std::max(box.max_x, p.x);
        box.max_y = std::max(box.max_y, p.y);
    }
    return box;
}

}  // namespace polyenc
