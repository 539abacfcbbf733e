#include "polyenc/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "json.hpp"
#include "polyenc/log.hpp"
#include "polyenc/predicates.hpp"

namespace polyenc {

double Segment::length() const { return std::hypot(r.x - q.x, r.y - q.y); }

double Triangle::signed_area() const { return 0.5 * orient_value(q, r, s); }

Triangle Triangle::ccw() const { return orient(q, r, s) < 0 ? Triangle{q, s, r} : *this; }

std::vector<Segment> split_polyline(const Polyline& pl) {
    std::vector<Segment> out;
    std::size_t dropped = 0;
    for (std::size_t i = 0; i + 1 < pl.vertices.size(); ++i) {
        Segment seg{pl.vertices[i], pl.vertices[i + 1]};
        if (seg.length() > kMinSegmentLength) {
            out.push_back(seg);
        } else {
            ++dropped;
        }
    }
    if (out.empty()) throw DegenerateSegment("polyline has no segment of positive length");
    if (dropped > 0) warn("dropped " + std::to_string(dropped) + " degenerate polyline segment(s)");
    return out;
}

namespace {

// Open vertex list (no closing repeat) with the polygon region on the left.
using Loop = std::vector<Point2>;

Loop open_loop(const Ring& ring) {
    Loop loop(ring.begin(), ring.end() - 1);
    return loop;
}

// The region lies to the left of travel along every loop, so the region
// wedge at v (between prev p and next n) contains direction v->t iff:
bool in_region_wedge(Point2 p, Point2 v, Point2 n, Point2 t) {
    const int turn = orient(p, v, n);
    const int left_in = orient(p, v, t);
    const int left_out = orient(v, n, t);
    if (turn > 0) return left_in > 0 && left_out > 0;
    return left_in > 0 || left_out > 0;
}

// Segments (a, b) and (c, d) share exactly the single point p, an endpoint of both.
bool meet_only_at(Point2 p, Point2 a, Point2 b, Point2 c, Point2 d) {
    const bool p_on_ab = p == a || p == b;
    const bool p_on_cd = p == c || p == d;
    if (!p_on_ab || !p_on_cd) return false;
    const Point2 ab_other = p == a ? b : a;
    const Point2 cd_other = p == c ? d : c;
    return !on_segment(cd_other, a, b) && !on_segment(ab_other, c, d);
}

bool bridge_blocked(Point2 h, Point2 o, const Loop& loop, const Point2* allowed) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 c = loop[i];
        const Point2 d = loop[(i + 1) % n];
        if (!segments_intersect(h, o, c, d)) continue;
        if (allowed && meet_only_at(*allowed, h, o, c, d)) continue;
        return true;
    }
    return false;
}

Loop bridge_hole(const Loop& outer, const Loop& hole, const std::vector<Loop>& pending) {
    struct Candidate {
        double dist2;
        std::size_t hi;
        std::size_t oj;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(outer.size() * hole.size());
    for (std::size_t hi = 0; hi < hole.size(); ++hi) {
        for (std::size_t oj = 0; oj < outer.size(); ++oj) {
            const double dx = outer[oj].x - hole[hi].x;
            const double dy = outer[oj].y - hole[hi].y;
            candidates.push_back({dx * dx + dy * dy, hi, oj});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
        if (a.hi != b.hi) return a.hi < b.hi;
        return a.oj < b.oj;
    });

    const std::size_t m = hole.size();
    const std::size_t n = outer.size();
    for (const Candidate& cand : candidates) {
        const Point2 h = hole[cand.hi];
        const Point2 o = outer[cand.oj];
        if (h == o) continue;
        if (!in_region_wedge(outer[(cand.oj + n - 1) % n], o, outer[(cand.oj + 1) % n], h)) continue;
        if (!in_region_wedge(hole[(cand.hi + m - 1) % m], h, hole[(cand.hi + 1) % m], o)) continue;
        if (bridge_blocked(h, o, outer, &o)) continue;
        if (bridge_blocked(h, o, hole, &h)) continue;
        bool blocked = false;
        for (const Loop& other : pending) {
            if (bridge_blocked(h, o, other, nullptr)) {
                blocked = true;
                break;
            }
        }
        if (blocked) continue;

        Loop merged;
        merged.reserve(n + m + 2);
        merged.insert(merged.end(), outer.begin(), outer.begin() + static_cast<std::ptrdiff_t>(cand.oj) + 1);
        for (std::size_t k = 0; k <= m; ++k) merged.push_back(hole[(cand.hi + k) % m]);
        merged.insert(merged.end(), outer.begin() + static_cast<std::ptrdiff_t>(cand.oj), outer.end());
        return merged;
    }
    throw TriangulationError("no valid bridge from hole to exterior");
}

class EarClipper {
public:
    explicit EarClipper(Loop loop) : pts_(std::move(loop)) {
        const std::size_t n = pts_.size();
        prev_.resize(n);
        next_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            prev_[i] = (i + n - 1) % n;
            next_[i] = (i + 1) % n;
        }
        removed_.assign(n, 0);
        alive_ = n;
    }

    std::vector<Triangle> run() {
        std::vector<Triangle> out;
        std::size_t cur = 0;
        std::size_t since_progress = 0;
        while (alive_ > 3) {
            const std::size_t a = prev_[cur];
            const std::size_t c = next_[cur];
            if (is_ear(a, cur, c)) {
                emit(out, a, cur, c);
                remove(cur);
                cur = next_[c];
                since_progress = 0;
                continue;
            }
            if (is_spike(a, cur, c)) {
                remove(cur);
                cur = c;
                since_progress = 0;
                continue;
            }
            cur = c;
            if (++since_progress > alive_) {
                // Only straight-through vertices can block every ear of a valid
                // loop; dropping one keeps the region unchanged.
                if (!drop_straight_vertex()) throw TriangulationError("ear clipping stalled; polygon is invalid");
                since_progress = 0;
                cur = first_alive();
            }
        }
        const std::size_t a = prev_[cur];
        emit(out, a, cur, next_[cur]);
        return out;
    }

private:
    int turn(std::size_t i) const { return orient(pts_[prev_[i]], pts_[i], pts_[next_[i]]); }

    bool is_ear(std::size_t a, std::size_t b, std::size_t c) const {
        const Point2 pa = pts_[a], pb = pts_[b], pc = pts_[c];
        if (orient(pa, pb, pc) <= 0) return false;
        for (std::size_t p = next_[c]; p != a; p = next_[p]) {
            const Point2 pp = pts_[p];
            if (pp == pa || pp == pb || pp == pc) continue;
            if (turn(p) <= 0 && point_in_triangle(pp, pa, pb, pc)) return false;
        }
        return true;
    }

    bool is_spike(std::size_t a, std::size_t b, std::size_t c) const {
        const Point2 pa = pts_[a], pb = pts_[b], pc = pts_[c];
        if (pa == pb || pb == pc) return true;
        if (orient(pa, pb, pc) != 0) return false;
        return on_segment(pc, pa, pb) || on_segment(pa, pb, pc);
    }

    bool drop_straight_vertex() {
        std::size_t i = first_alive();
        for (std::size_t k = 0; k < alive_; ++k, i = next_[i]) {
            if (turn(i) == 0) {
                remove(i);
                return true;
            }
        }
        return false;
    }

    std::size_t first_alive() const {
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            if (!removed_[i]) return i;
        }
        return 0;
    }

    void remove(std::size_t i) {
        next_[prev_[i]] = next_[i];
        prev_[next_[i]] = prev_[i];
        removed_[i] = 1;
        --alive_;
    }

    void emit(std::vector<Triangle>& out, std::size_t a, std::size_t b, std::size_t c) const {
        Triangle t{pts_[a], pts_[b], pts_[c]};
        if (std::abs(t.signed_area()) > kMinTriangleArea) out.push_back(t.ccw());
    }

    Loop pts_;
    std::vector<std::size_t> prev_;
    std::vector<std::size_t> next_;
    std::vector<char> removed_;
    std::size_t alive_ = 0;
};

}  // namespace

std::vector<Triangle> triangulate(const Polygon& pg) {
    if (pg.exterior.size() < 4) throw TriangulationError("exterior ring has fewer than 3 vertices");
    if (signed_area(pg.exterior) <= 0.0) throw TriangulationError("exterior ring must be counter-clockwise");

    Loop outer = open_loop(pg.exterior);
    std::vector<Loop> holes;
    for (const Ring& h : pg.holes) {
        if (signed_area(h) >= 0.0) throw TriangulationError("hole ring must be clockwise");
        holes.push_back(open_loop(h));
    }
    auto max_x = [](const Loop& l) {
        return std::max_element(l.begin(), l.end(), [](Point2 a, Point2 b) { return a.x < b.x; })->x;
    };
    std::stable_sort(holes.begin(), holes.end(),
                     [&](const Loop& a, const Loop& b) { return max_x(a) > max_x(b); });
    for (std::size_t i = 0; i < holes.size(); ++i) {
        std::vector<Loop> pending(holes.begin() + static_cast<std::ptrdiff_t>(i) + 1, holes.end());
        outer = bridge_hole(outer, holes[i], pending);
    }
    return EarClipper(std::move(outer)).run();
}

std::vector<Triangle> triangulate(const MultiPolygon& mp) {
    std::vector<Triangle> out;
    for (const Polygon& pg : mp.polygons) {
        auto part = triangulate(pg);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::string triangles_to_geojson(const std::vector<Triangle>& tris) {
    nlohmann::json coords = nlohmann::json::array();
    for (const Triangle& t : tris) {
        nlohmann::json ring = nlohmann::json::array();
        for (Point2 p : {t.q, t.r, t.s, t.q}) ring.push_back({p.x, p.y});
        coords.push_back(nlohmann::json::array({ring}));
    }
    return nlohmann::json{{"type", "MultiPolygon"}, {"coordinates", coords}}.dump();
}

}  // namespace polyenc
