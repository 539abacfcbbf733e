#include "polyenc/oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <queue>

namespace polyenc::oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct RulePoint {
    double l1, l2, l3, weight;
};

// Dunavant's 13-point rule, exact through degree 7. Weights sum to 1.
const std::array<RulePoint, 13>& rule() {
    static const std::array<RulePoint, 13> pts = [] {
        std::array<RulePoint, 13> r{};
        const double w0 = -0.149570044467682, w1 = 0.175615257433208, w2 = 0.053347235608838,
                     w3 = 0.077113760890257;
        const double a1 = 0.479308067841920, b1 = 0.260345966079040;
        const double a2 = 0.869739794195568, b2 = 0.065130102902216;
        const double a3 = 0.048690315425316, b3 = 0.312865496004874, c3 = 0.638444188569810;
        int k = 0;
        r[k++] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, w0};
        r[k++] = {a1, b1, b1, w1};
        r[k++] = {b1, a1, b1, w1};
        r[k++] = {b1, b1, a1, w1};
        r[k++] = {a2, b2, b2, w2};
        r[k++] = {b2, a2, b2, w2};
        r[k++] = {b2, b2, a2, w2};
        r[k++] = {a3, b3, c3, w3};
        r[k++] = {a3, c3, b3, w3};
        r[k++] = {b3, a3, c3, w3};
        r[k++] = {b3, c3, a3, w3};
        r[k++] = {c3, a3, b3, w3};
        r[k++] = {c3, b3, a3, w3};
        return r;
    }();
    return pts;
}

template <class Fn>
auto apply_rule(const Triangle& t, Fn&& f) {
    const double area = 0.5 * std::abs((t.r.x - t.q.x) * (t.s.y - t.q.y) - (t.r.y - t.q.y) * (t.s.x - t.q.x));
    decltype(f(0.0, 0.0)) sum{};
    for (const RulePoint& p : rule()) {
        const double x = p.l1 * t.q.x + p.l2 * t.r.x + p.l3 * t.s.x;
        const double y = p.l1 * t.q.y + p.l2 * t.r.y + p.l3 * t.s.y;
        sum += p.weight * f(x, y);
    }
    return area * sum;
}

// Midpoint ("red") refinement into four congruent children. Bisection is
// not used: halves cut along a level line of the phase keep the full phase
// range, so coarse and fine estimates can agree while both are wrong.
std::array<Triangle, 4> split4(const Triangle& t) {
    const Point2 a = 0.5 * (t.q + t.r);
    const Point2 b = 0.5 * (t.r + t.s);
    const Point2 c = 0.5 * (t.s + t.q);
    return {Triangle{t.q, a, c}, Triangle{a, t.r, b}, Triangle{c, b, t.s}, Triangle{a, b, c}};
}

struct Cell {
    Triangle tri;
    Complex fine;
    double error;
    bool operator<(const Cell& other) const { return error < other.error; }
};

template <class Fn>
Cell make_cell(const Triangle& tri, Fn& f) {
    const Complex coarse = apply_rule(tri, f);
    Complex fine = 0.0;
    for (const Triangle& child : split4(tri)) fine += apply_rule(child, f);
    return {tri, fine, std::abs(fine - coarse)};
}

const std::array<std::pair<double, double>, 16>& gauss_legendre_16() {
    static const auto nodes = [] {
        constexpr int n = 16;
        std::array<std::pair<double, double>, n> out{};
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            out[static_cast<std::size_t>(i)] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return out;
    }();
    return nodes;
}

}  // namespace

QuadResult quad_triangle_detailed(const Triangle& tri, double u, double v, double tol) {
    if (!(tol > 1e-12 && tol < 1e-3)) throw Error("quadrature tolerance must lie in (1e-12, 1e-3)");
    auto f = [&](double x, double y) {
        const double theta = kTwoPi * (u * x + v * y);
        return Complex(std::cos(theta), -std::sin(theta));
    };
    std::priority_queue<Cell> heap;
    heap.push(make_cell(tri, f));
    Complex total = heap.top().fine;
    double error = heap.top().error;
    std::size_t cells = 1;
    while (error > tol * (1.0 + std::abs(total))) {
        if (cells + 3 > kCellBudget) throw NoConvergence("triangle quadrature exceeded its cell budget");
        const Cell worst = heap.top();
        heap.pop();
        total -= worst.fine;
        error -= worst.error;
        for (const Triangle& child : split4(worst.tri)) {
            Cell c = make_cell(child, f);
            total += c.fine;
            error += c.error;
            heap.push(std::move(c));
        }
        cells += 3;
        if (error < 0.0) error = 0.0;
    }
    // Re-add from the leaves to shed the drift of the running sum.
    Complex exact_total = 0.0;
    double exact_error = 0.0;
    while (!heap.empty()) {
        exact_total += heap.top().fine;
        exact_error += heap.top().error;
        heap.pop();
    }
    return {exact_total, exact_error, cells};
}

Complex quad_triangle(const Triangle& tri, double u, double v, double tol) {
    return quad_triangle_detailed(tri, u, v, tol).value;
}

Complex quad_segment(const Segment& seg, double u, double v, int n) {
    if (n < 64) throw Error("segment quadrature needs at least 64 nodes");
    const int panels = (n + 15) / 16;
    const double len = std::hypot(seg.r.x - seg.q.x, seg.r.y - seg.q.y);
    Complex sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels;
        const double b = static_cast<double>(p + 1) / panels;
        Complex panel = 0.0;
        for (const auto& [node, weight] : gauss_legendre_16()) {
            const double t = 0.5 * (a + b) + 0.5 * (b - a) * node;
            const double x = seg.q.x + t * (seg.r.x - seg.q.x);
            const double y = seg.q.y + t * (seg.r.y - seg.q.y);
            const double theta = kTwoPi * (u * x + v * y);
            panel += weight * Complex(std::cos(theta), -std::sin(theta));
        }
        sum += 0.5 * (b - a) * panel;
    }
    return len * sum;
}

Complex quad_triangles(const std::vector<Triangle>& tris, double u, double v, double tol) {
    Complex sum = 0.0;
    for (const Triangle& t : tris) sum += quad_triangle(t, u, v, tol);
    return sum;
}

Complex quad_polygon(const Polygon& pg, double u, double v, double tol) {
    return quad_triangles(triangulate(pg), u, v, tol);
}

double cubature_rule_monomial(const Triangle& tri, int i, int j) {
    return apply_rule(tri, [&](double x, double y) { return std::pow(x, i) * std::pow(y, j); });
}

}  // namespace polyenc::oracle
