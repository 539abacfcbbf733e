#include "polyenc/spectral.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>

#include "binary_io.hpp"
#include "polyenc/io.hpp"

namespace polyenc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kJ{0.0, 1.0};

// Inside |u|, |v| <= kSeriesRadius the closed form cancels catastrophically
// near the origin, so the Taylor series is used instead.
constexpr double kSeriesRadius = 0.25;

// exp(-j 2 pi phase)
Complex unit_phasor(double phase) {
    const double theta = kTwoPi * phase;
    return {std::cos(theta), -std::sin(theta)};
}

// Pairwise summation of part(lo..hi), each a vector of `width` values.
template <class PartFn>
std::vector<Complex> pairwise_sum(std::size_t lo, std::size_t hi, std::size_t width, PartFn& part) {
    if (hi - lo == 1) return part(lo);
    const std::size_t mid = lo + (hi - lo) / 2;
    std::vector<Complex> left = pairwise_sum(lo, mid, width, part);
    const std::vector<Complex> right = pairwise_sum(mid, hi, width, part);
    for (std::size_t i = 0; i < width; ++i) left[i] += right[i];
    return left;
}

template <class ValueFn>
Complex pairwise_sum_scalar(std::size_t lo, std::size_t hi, ValueFn& value) {
    if (hi - lo == 1) return value(lo);
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum_scalar(lo, mid, value) + pairwise_sum_scalar(mid, hi, value);
}

template <class Fn>
ComplexSpectrum evaluate_on(const FrequencyGrid& grid, Fn&& fn) {
    ComplexSpectrum out;
    out.grid_id = grid.id();
    out.values.reserve(grid.size());
    for (const Frequency& f : grid.samples()) out.values.push_back(fn(f.u, f.v));
    return out;
}

}  // namespace

double sinc(double t) {
    const double x = kPi * t;
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

Complex point_transform(Point2 p, double u, double v) { return unit_phasor(p.x * u + p.y * v); }

Complex segment_transform(const Segment& seg, double u, double v) { return segment_transform(seg, u, v, sinc); }

Complex segment_transform(const Segment& seg, double u, double v, SincFn sinc_fn) {
    const double dx = seg.r.x - seg.q.x;
    const double dy = seg.r.y - seg.q.y;
    const double len2 = dx * dx + dy * dy;
    const double mx = 0.5 * (seg.q.x + seg.r.x);
    const double my = 0.5 * (seg.q.y + seg.r.y);
    return len2 * unit_phasor(mx * u + my * v) * sinc_fn(dx * u + dy * v);
}

namespace detail {

Complex unit_moment(int n, double w) {
    const Complex a{0.0, -kTwoPi * w};
    if (std::abs(a) <= 1.0) {
        Complex term = 1.0;  // a^k / k!
        Complex sum = 0.0;
        for (int k = 0; k < 30; ++k) {
            sum += term / static_cast<double>(n + k + 1);
            term *= a / static_cast<double>(k + 1);
        }
        return sum;
    }
    const Complex ea = std::exp(a);
    Complex p = (ea - 1.0) / a;
    for (int k = 1; k <= n; ++k) p = (ea - static_cast<double>(k) * p) / a;
    return p;
}

Complex canonical_triangle_closed_form(double u, double v) {
    const double w = u + v;
    const double c1 = std::cos(kTwoPi * u);
    const double s1 = std::sin(kTwoPi * u);
    const double c2 = std::cos(kTwoPi * w);
    const double s2 = std::sin(kTwoPi * w);
    const double denom = 4.0 * kPi * kPi * u * v * w;
    return Complex(w * c1 - u * c2 - v, -(w * s1 - u * s2)) / denom;
}

Complex canonical_triangle_u_zero(double v) {
    const double t = kTwoPi * v;
    return -(kJ * t + std::cos(t) - kJ * std::sin(t) - 1.0) / (4.0 * kPi * kPi * v * v);
}

Complex canonical_triangle_v_zero(double u) {
    const double t = kTwoPi * u;
    return Complex(std::cos(t) + t * std::sin(t) - 1.0, -(std::sin(t) - t * std::cos(t))) /
           (4.0 * kPi * kPi * u * u);
}

Complex canonical_triangle_anti_diagonal(double v) {
    const double t = kTwoPi * v;
    return -(-kJ * t + std::cos(t) + kJ * std::sin(t) - 1.0) / (4.0 * kPi * kPi * v * v);
}

Complex canonical_triangle_series(double u, double v) {
    // sum_{m,n} a^m b^n / (m! n!) * 1 / ((n + 1)(m + n + 2)), a = -j2pi u, b = -j2pi v
    constexpr int kOrder = 34;
    const Complex a{0.0, -kTwoPi * u};
    const Complex b{0.0, -kTwoPi * v};
    std::array<Complex, kOrder + 1> am{}, bn{};
    am[0] = bn[0] = 1.0;
    for (int k = 1; k <= kOrder; ++k) {
        am[k] = am[k - 1] * a / static_cast<double>(k);
        bn[k] = bn[k - 1] * b / static_cast<double>(k);
    }
    Complex sum = 0.0;
    for (int total = kOrder; total >= 0; --total) {
        for (int n = 0; n <= total; ++n) {
            const int m = total - n;
            sum += am[m] * bn[n] / static_cast<double>((n + 1) * (total + 2));
        }
    }
    return sum;
}

}  // namespace detail

Complex canonical_triangle_transform(double u, double v) {
    using namespace detail;
    if (u == 0.0 && v == 0.0) return 0.5;
    if (std::abs(u) <= kSeriesRadius && std::abs(v) <= kSeriesRadius) return canonical_triangle_series(u, v);
    const Complex minus_j_pi{0.0, -kPi};
    if (std::abs(v) < kSingularEps) {
        return canonical_triangle_v_zero(u) + v * minus_j_pi * unit_moment(2, u);
    }
    if (std::abs(u) < kSingularEps) {
        return canonical_triangle_u_zero(v) + u * minus_j_pi * (unit_moment(0, v) - unit_moment(2, v));
    }
    const double s = u + v;
    if (std::abs(s) < kSingularEps) {
        return canonical_triangle_anti_diagonal(v) + s * minus_j_pi * (unit_moment(0, -v) - unit_moment(2, -v));
    }
    return canonical_triangle_closed_form(u, v);
}

Complex triangle_transform(const Triangle& tri, double u, double v) {
    // x = q + (r - q) t1 + (s - r) t2 maps the canonical triangle onto tri.
    const double e1x = tri.r.x - tri.q.x, e1y = tri.r.y - tri.q.y;
    const double e2x = tri.s.x - tri.r.x, e2y = tri.s.y - tri.r.y;
    const double jacobian = std::abs(e1x * e2y - e1y * e2x);
    const double cu = e1x * u + e1y * v;
    const double cv = e2x * u + e2y * v;
    return jacobian * unit_phasor(tri.q.x * u + tri.q.y * v) * canonical_triangle_transform(cu, cv);
}

namespace {

std::vector<Triangle> triangles_of(const Geometry& g) {
    return g.kind() == GeometryKind::Polygon ? triangulate(g.polygon()) : triangulate(g.multipolygon());
}

}  // namespace

Complex transform_at(const Geometry& g, double u, double v) {
    switch (g.kind()) {
        case GeometryKind::Point: return point_transform(g.point(), u, v);
        case GeometryKind::Polyline: {
            const auto segs = split_polyline(g.polyline());
            auto value = [&](std::size_t i) { return segment_transform(segs[i], u, v); };
            return pairwise_sum_scalar(0, segs.size(), value);
        }
        case GeometryKind::Polygon:
        case GeometryKind::MultiPolygon: {
            const auto tris = triangles_of(g);
            if (tris.empty()) return 0.0;
            auto value = [&](std::size_t i) { return triangle_transform(tris[i], u, v); };
            return pairwise_sum_scalar(0, tris.size(), value);
        }
    }
    return 0.0;
}

ComplexSpectrum cft_point(Point2 p, const FrequencyGrid& grid) {
    return evaluate_on(grid, [&](double u, double v) { return point_transform(p, u, v); });
}

ComplexSpectrum cft_segment(const Segment& seg, const FrequencyGrid& grid) {
    if (!(seg.length() > kMinSegmentLength)) throw DegenerateSegment("segment has zero length");
    return evaluate_on(grid, [&](double u, double v) { return segment_transform(seg, u, v); });
}

ComplexSpectrum cft_triangle(const Triangle& tri, const FrequencyGrid& grid) {
    if (!(std::abs(tri.signed_area()) > kMinTriangleArea)) throw DegenerateTriangle("triangle has zero area");
    return evaluate_on(grid, [&](double u, double v) { return triangle_transform(tri, u, v); });
}

ComplexSpectrum cft_polyline(const Polyline& pl, const FrequencyGrid& grid) {
    const auto segs = split_polyline(pl);
    auto part = [&](std::size_t i) { return cft_segment(segs[i], grid).values; };
    return {pairwise_sum(0, segs.size(), grid.size(), part), grid.id()};
}

ComplexSpectrum cft_triangles(const std::vector<Triangle>& tris, const FrequencyGrid& grid) {
    if (tris.empty()) return {std::vector<Complex>(grid.size()), grid.id()};
    auto part = [&](std::size_t i) { return cft_triangle(tris[i], grid).values; };
    return {pairwise_sum(0, tris.size(), grid.size(), part), grid.id()};
}

ComplexSpectrum cft_polygon(const Polygon& pg, const FrequencyGrid& grid) {
    return cft_triangles(triangulate(pg), grid);
}

ComplexSpectrum cft_polygon(const MultiPolygon& mp, const FrequencyGrid& grid) {
    return cft_triangles(triangulate(mp), grid);
}

ComplexSpectrum encode_spectrum(const Geometry& g, const FrequencyGrid& grid) {
    switch (g.kind()) {
        case GeometryKind::Point: return cft_point(g.point(), grid);
        case GeometryKind::Polyline: return cft_polyline(g.polyline(), grid);
        case GeometryKind::Polygon: return cft_polygon(g.polygon(), grid);
        case GeometryKind::MultiPolygon: return cft_polygon(g.multipolygon(), grid);
    }
    return {};
}

std::string spectrum_to_csv(const ComplexSpectrum& spec, const FrequencyGrid& grid) {
    if (spec.values.size() != grid.size()) throw Error("spectrum and grid sizes differ");
    std::string out = "index,u,v,re,im\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += std::to_string(i) + "," + format_double(grid[i].u) + "," + format_double(grid[i].v) + "," +
               format_double(spec.values[i].real()) + "," + format_double(spec.values[i].imag()) + "\n";
    }
    return out;
}

using binio::get_le;
using binio::put_le;

void write_spectrum_binary(std::ostream& out, const ComplexSpectrum& spec) {
    out.write("P2VS", 4);
    put_le<std::uint32_t>(out, 1);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.values.size()));
    for (const Complex& c : spec.values) {
        put_le<double>(out, c.real());
        put_le<double>(out, c.imag());
    }
}

ComplexSpectrum read_spectrum_binary(std::istream& in) {
    binio::expect_magic(in, "P2VS");
    const auto version = get_le<std::uint32_t>(in);
    if (version != 1) throw ParseError("unsupported P2VS version " + std::to_string(version));
    const auto count = get_le<std::uint32_t>(in);
    ComplexSpectrum spec;
    spec.values.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const double re = get_le<double>(in);
        const double im = get_le<double>(in);
        spec.values.emplace_back(re, im);
    }
    return spec;
}

}  // namespace polyenc
