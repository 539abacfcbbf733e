// Topological, directional and distance labels for geometry pairs. All
// containment and contact decisions go through the exact orientation
// predicate, so labels do not depend on a tolerance.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polyenc/predicates.hpp"
#include "polyenc/tasks.hpp"
#include "polyenc/triangulation.hpp"

namespace polyenc {

std::string relation_name(Relation r) {
    switch (r) {
        case Relation::Disjoint: return "disjoint";
        case Relation::Touches: return "touches";
        case Relation::Intersects: return "intersects";
        case Relation::Contains: return "contains";
        case Relation::Within: return "within";
        case Relation::Equals: return "equals";
    }
    return "?";
}

namespace {

const PairType kAllPairTypes[] = {PairType::PointPoint,       PairType::PointPolyline,   PairType::PointPolygon,
                                  PairType::PolylinePolyline, PairType::PolylinePolygon, PairType::PolygonPolygon};

int dimension(const Geometry& g) {
    switch (g.kind()) {
        case GeometryKind::Point: return 0;
        case GeometryKind::Polyline: return 1;
        default: return 2;
    }
}

struct Edge {
    Point2 a;
    Point2 b;
};

// A polygonal region given as parts with pairwise disjoint interiors.
struct Region {
    std::vector<Polygon> parts;
    std::vector<Edge> edges;
    std::vector<Point2> vertices;
};

Region make_region(const Geometry& g) {
    Region r;
    if (g.kind() == GeometryKind::Polygon) {
        r.parts.push_back(g.polygon());
    } else {
        r.parts = g.multipolygon().polygons;
    }
    auto add_ring = [&](const Ring& ring) {
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            r.edges.push_back({ring[i], ring[i + 1]});
            r.vertices.push_back(ring[i]);
        }
    };
    for (const Polygon& p : r.parts) {
        add_ring(p.exterior);
        for (const Ring& h : p.holes) add_ring(h);
    }
    return r;
}

Location locate(Point2 p, const Region& region) {
    Location best = Location::Outside;
    for (const Polygon& part : region.parts) {
        const Location loc = locate_in_polygon(p, part);
        if (loc == Location::Inside) return loc;
        if (loc == Location::Boundary) best = loc;
    }
    return best;
}

// Which of interior / exterior / boundary of a region a set of segments
// visits.
struct Visits {
    bool in = false;
    bool out = false;
    bool on = false;

    void mark(Location loc) {
        in = in || loc == Location::Inside;
        out = out || loc == Location::Outside;
        on = on || loc == Location::Boundary;
    }
};

// Without proper crossings, the only points where [p, q] meets the region
// boundary are p, q and region vertices lying on it. Between consecutive
// such points the segment is either along a boundary edge or entirely on one
// side of the boundary, so one sample per piece decides it.
void visit_segment(Point2 p, Point2 q, const Region& region, Visits& v) {
    for (const Edge& e : region.edges) {
        if (segments_cross_properly(p, q, e.a, e.b)) {
            v.in = v.out = v.on = true;
            return;
        }
    }
    std::vector<Point2> stops{p, q};
    for (const Point2& w : region.vertices) {
        if (on_segment(w, p, q)) stops.push_back(w);
    }
    const bool by_x = std::abs(q.x - p.x) >= std::abs(q.y - p.y);
    const bool ascending = by_x ? q.x > p.x : q.y > p.y;
    std::sort(stops.begin(), stops.end(), [&](Point2 s, Point2 t) {
        const double ks = by_x ? s.x : s.y;
        const double kt = by_x ? t.x : t.y;
        return ascending ? ks < kt : ks > kt;
    });
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    for (const Point2& s : stops) v.mark(locate(s, region));
    for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
        const Point2 s = stops[i], t = stops[i + 1];
        const bool along_edge = std::any_of(region.edges.begin(), region.edges.end(), [&](const Edge& e) {
            return on_segment(s, e.a, e.b) && on_segment(t, e.a, e.b);
        });
        if (along_edge) {
            v.on = true;
        } else {
            v.mark(locate(0.5 * (s + t), region));
        }
        if (v.in && v.out && v.on) return;
    }
}

Visits visit_vertices_path(const std::vector<Point2>& path, const Region& region) {
    Visits v;
    if (path.size() == 1) v.mark(locate(path.front(), region));
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (path[i] == path[i + 1]) {
            v.mark(locate(path[i], region));
        } else {
            visit_segment(path[i], path[i + 1], region, v);
        }
    }
    return v;
}

Visits visit_boundary(const Region& from, const Region& region) {
    Visits v;
    for (const Edge& e : from.edges) {
        visit_segment(e.a, e.b, region, v);
        if (v.in && v.out && v.on) break;
    }
    return v;
}

// A point strictly inside `pg`: centroid of the largest triangle, falling
// back through smaller ones if rounding puts it on an edge.
Point2 interior_sample(const Polygon& pg) {
    std::vector<Triangle> tris = triangulate(pg);
    std::sort(tris.begin(), tris.end(),
              [](const Triangle& s, const Triangle& t) { return s.signed_area() > t.signed_area(); });
    for (const Triangle& t : tris) {
        const Point2 c{(t.q.x + t.r.x + t.s.x) / 3.0, (t.q.y + t.r.y + t.s.y) / 3.0};
        if (locate_in_polygon(c, pg) == Location::Inside) return c;
    }
    throw Error("no interior sample found for polygon");
}

// Every part of `a` has its interior inside the interior of `b` region.
bool parts_inside(const Region& a, const Region& b) {
    return std::all_of(a.parts.begin(), a.parts.end(),
                       [&](const Polygon& p) { return locate(interior_sample(p), b) == Location::Inside; });
}

bool any_part_inside(const Region& a, const Region& b) {
    return std::any_of(a.parts.begin(), a.parts.end(),
                       [&](const Polygon& p) { return locate(interior_sample(p), b) == Location::Inside; });
}

Relation relate_regions(const Region& a, const Region& b) {
    const Visits ab = visit_boundary(a, b);  // boundary of a against b
    const Visits ba = visit_boundary(b, a);
    const bool meet = ab.in || ab.on || ba.in || ba.on;
    if (!meet) return Relation::Disjoint;
    // A boundary point of one region in the interior of the other forces the
    // interiors to overlap. Otherwise each part's interior lies wholly inside
    // or wholly outside the other region, and one sample settles it.
    const bool interiors = ab.in || ba.in || any_part_inside(a, b) || any_part_inside(b, a);
    if (!interiors) return Relation::Touches;
    const bool a_in_b = !ab.out && !ba.in && parts_inside(a, b);
    const bool b_in_a = !ba.out && !ab.in && parts_inside(b, a);
    if (a_in_b && b_in_a) return Relation::Equals;
    if (a_in_b) return Relation::Within;
    if (b_in_a) return Relation::Contains;
    return Relation::Intersects;
}

bool on_polyline(Point2 p, const Polyline& pl) {
    const auto& v = pl.vertices;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (on_segment(p, v[i], v[i + 1])) return true;
    }
    return false;
}

bool polylines_meet(const Polyline& a, const Polyline& b) {
    const auto& u = a.vertices;
    const auto& w = b.vertices;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        for (std::size_t j = 0; j + 1 < w.size(); ++j) {
            if (segments_intersect(u[i], u[i + 1], w[j], w[j + 1])) return true;
        }
    }
    return false;
}

Relation converse(Relation r) {
    if (r == Relation::Within) return Relation::Contains;
    if (r == Relation::Contains) return Relation::Within;
    return r;
}

}  // namespace

std::string pair_type_name(PairType t) {
    switch (t) {
        case PairType::PointPoint: return "point-point";
        case PairType::PointPolyline: return "point-polyline";
        case PairType::PointPolygon: return "point-polygon";
        case PairType::PolylinePolyline: return "polyline-polyline";
        case PairType::PolylinePolygon: return "polyline-polygon";
        case PairType::PolygonPolygon: return "polygon-polygon";
    }
    return "?";
}

PairType parse_pair_type(const std::string& name) {
    for (PairType t : kAllPairTypes) {
        if (pair_type_name(t) == name) return t;
    }
    throw UnsupportedPair("unknown pair type '" + name + "'");
}

PairType pair_type_of(const Geometry& a, const Geometry& b) {
    const int da = dimension(a), db = dimension(b);
    if (da > db) {
        throw UnsupportedPair("pair order must be lower dimension first, got " + std::string(kind_name(a.kind())) +
                              "-" + std::string(kind_name(b.kind())));
    }
    static const PairType table[3][3] = {
        {PairType::PointPoint, PairType::PointPolyline, PairType::PointPolygon},
        {PairType::PointPoint, PairType::PolylinePolyline, PairType::PolylinePolygon},
        {PairType::PointPoint, PairType::PointPoint, PairType::PolygonPolygon},
    };
    return table[da][db];
}

std::string task_name(Task t) {
    switch (t) {
        case Task::Topo: return "topo";
        case Task::Direction: return "direction";
        case Task::Distance: return "distance";
    }
    return "?";
}

Task parse_task(const std::string& name) {
    for (Task t : {Task::Topo, Task::Direction, Task::Distance}) {
        if (task_name(t) == name) return t;
    }
    throw Error("unknown task '" + name + "' (topo, direction, distance)");
}

const std::vector<Relation>& topo_classes(PairType t) {
    using R = Relation;
    static const std::vector<Relation> none;
    static const std::vector<Relation> binary{R::Disjoint, R::Intersects};
    static const std::vector<Relation> point_polygon{R::Disjoint, R::Contains};
    static const std::vector<Relation> line_polygon{R::Disjoint, R::Touches, R::Intersects, R::Within};
    static const std::vector<Relation> polygon_polygon{R::Disjoint, R::Touches, R::Intersects,
                                                       R::Contains, R::Within,  R::Equals};
    switch (t) {
        case PairType::PointPoint: return none;
        case PairType::PointPolyline: return binary;
        case PairType::PointPolygon: return point_polygon;
        case PairType::PolylinePolyline: return binary;
        case PairType::PolylinePolygon: return line_polygon;
        case PairType::PolygonPolygon: return polygon_polygon;
    }
    return none;
}

int class_count(Task task, PairType t) {
    switch (task) {
        case Task::Topo: return static_cast<int>(topo_classes(t).size());
        case Task::Direction: return 16;
        case Task::Distance: return 0;
    }
    return 0;
}

Relation relate(const Geometry& a, const Geometry& b) {
    if (dimension(a) > dimension(b)) return converse(relate(b, a));
    switch (a.kind()) {
        case GeometryKind::Point: {
            const Point2 p = a.point();
            switch (b.kind()) {
                case GeometryKind::Point: return p == b.point() ? Relation::Equals : Relation::Disjoint;
                case GeometryKind::Polyline: return on_polyline(p, b.polyline()) ? Relation::Intersects : Relation::Disjoint;
                default: {
                    const Location loc = locate(p, make_region(b));
                    if (loc == Location::Inside) return Relation::Within;
                    return loc == Location::Boundary ? Relation::Touches : Relation::Disjoint;
                }
            }
        }
        case GeometryKind::Polyline: {
            if (b.kind() == GeometryKind::Polyline) {
                return polylines_meet(a.polyline(), b.polyline()) ? Relation::Intersects : Relation::Disjoint;
            }
            const Visits v = visit_vertices_path(a.polyline().vertices, make_region(b));
            if (!v.in && !v.on) return Relation::Disjoint;
            if (!v.in) return Relation::Touches;
            if (!v.out) return Relation::Within;
            return Relation::Intersects;
        }
        default: return relate_regions(make_region(a), make_region(b));
    }
}

int topo_label(const Geometry& a, const Geometry& b) {
    const PairType t = pair_type_of(a, b);
    const std::vector<Relation>& classes = topo_classes(t);
    if (classes.empty()) throw UnsupportedPair("no topological classes for " + pair_type_name(t) + " pairs");
    Relation r = relate(a, b);
    auto find = [&](Relation x) { return std::find(classes.begin(), classes.end(), x); };
    auto it = find(r);
    // Point-polygon names its containment class from the polygon's side.
    if (it == classes.end() && (r == Relation::Within || r == Relation::Contains)) it = find(converse(r));
    if (it == classes.end()) {
        throw UnsupportedPair("relation '" + relation_name(r) + "' is not a class of " + pair_type_name(t) + " pairs");
    }
    return static_cast<int>(it - classes.begin());
}

int compass_class(Point2 from, Point2 to) {
    if (from == to) throw CoincidentCentroids("centroids coincide; direction undefined");
    const double theta = std::atan2(to.y - from.y, to.x - from.x) * 180.0 / std::numbers::pi;
    double bearing = std::fmod(90.0 - theta + 11.25, 360.0);
    if (bearing < 0.0) bearing += 360.0;
    return std::min(15, static_cast<int>(std::floor(bearing / 22.5)));
}

int dir_label(const Geometry& a, const Geometry& b) { return compass_class(centroid(a), centroid(b)); }

double dist_label(const Geometry& a, const Geometry& b) {
    const Point2 d = centroid(b) - centroid(a);
    return std::hypot(d.x, d.y);
}

}  // namespace polyenc
