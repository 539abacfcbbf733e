#include "polyenc/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace polyenc {

namespace {

struct Expansion {
    std::array<double, 32> terms{};
    int size = 0;

    // Shewchuk's grow-expansion: exact sum, components non-overlapping and
    // sorted by increasing magnitude.
    void add(double b) {
        double q = b;
        int out = 0;
        for (int i = 0; i < size; ++i) {
            const double e = terms[i];
            const double sum = q + e;
            const double bv = sum - q;
            const double av = sum - bv;
            const double err = (q - av) + (e - bv);
            q = sum;
            if (err != 0.0) terms[out++] = err;
        }
        if (q != 0.0) terms[out++] = q;
        size = out;
    }

    void add_product(double a, double b) {
        const double p = a * b;
        const double err = std::fma(a, b, -p);
        add(err);
        add(p);
    }

    int sign() const {
        if (size == 0) return 0;
        const double top = terms[size - 1];
        return top > 0.0 ? 1 : (top < 0.0 ? -1 : 0);
    }
};

// (3 + 16 eps) eps with eps = 2^-53
constexpr double kOrientErrBound = 3.3306690738754716e-16;

}  // namespace

int orient(Point2 a, Point2 b, Point2 c) {
    const double left = (b.x - a.x) * (c.y - a.y);
    const double right = (b.y - a.y) * (c.x - a.x);
    const double det = left - right;
    const double bound = kOrientErrBound * (std::abs(left) + std::abs(right));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    Expansion e;
    e.add_product(b.x, c.y);
    e.add_product(-b.x, a.y);
    e.add_product(-a.x, c.y);
    e.add_product(-b.y, c.x);
    e.add_product(a.x, b.y);
    e.add_product(a.y, c.x);
    return e.sign();
}

bool on_segment(Point2 p, Point2 a, Point2 b) {
    if (orient(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return (o1 == 0 && on_segment(c, a, b)) || (o2 == 0 && on_segment(d, a, b)) ||
           (o3 == 0 && on_segment(a, c, d)) || (o4 == 0 && on_segment(b, c, d));
}

bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d) {
    return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

Location locate_in_ring(Point2 p, const Ring& ring) {
    int winding = 0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const Point2 a = ring[i];
        const Point2 b = ring[i + 1];
        if (on_segment(p, a, b)) return Location::Boundary;
        if (a.y <= p.y) {
            if (b.y > p.y && orient(a, b, p) > 0) ++winding;
        } else if (b.y <= p.y && orient(a, b, p) < 0) {
            --winding;
        }
    }
    return winding != 0 ? Location::Inside : Location::Outside;
}

Location locate_in_polygon(Point2 p, const Polygon& pg) {
    const Location outer = locate_in_ring(p, pg.exterior);
    if (outer != Location::Inside) return outer;
    for (const Ring& hole : pg.holes) {
        const Location h = locate_in_ring(p, hole);
        if (h == Location::Inside) return Location::Outside;
        if (h == Location::Boundary) return Location::Boundary;
    }
    return Location::Inside;
}

bool point_in_triangle(Point2 p, Point2 a, Point2 b, Point2 c) {
    const int o1 = orient(a, b, p);
    const int o2 = orient(b, c, p);
    const int o3 = orient(c, a, p);
    const bool has_neg = o1 < 0 || o2 < 0 || o3 < 0;
    const bool has_pos = o1 > 0 || o2 > 0 || o3 > 0;
    return !(has_neg && has_pos);
}

}  // namespace polyenc
