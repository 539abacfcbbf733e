#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polyenc/frequency_grid.hpp"
#include "polyenc/geometry.hpp"
#include "polyenc/triangulation.hpp"

namespace polyenc {

using Complex = std::complex<double>;

/// CFT values aligned index-for-index with the samples of the grid whose id
/// is stored in grid_id.
struct ComplexSpectrum {
    std::vector<Complex> values;
    std::uint64_t grid_id = 0;
};

/// Normalized cardinal sine sin(pi t) / (pi t), 1 at t = 0.
double sinc(double t);

/// Below this magnitude u, v or u + v is treated as lying on a singular line
/// of the closed-form canonical-triangle transform.
inline constexpr double kSingularEps = 1e-6;

// Single-frequency transforms. Each is the integral of exp(-j 2 pi (u x + v y))
// against the shape's measure: a Dirac mass for a point, squared length times
// the unit line density for a segment, the indicator function for a triangle.

/// exp(-j 2 pi (x u + y v)); unit magnitude everywhere.
Complex point_transform(Point2 p, double u, double v);

/// |r - q|^2 exp(-j 2 pi m.(u, v)) sinc((r - q).(u, v)), m the midpoint.
/// The value at the origin is the squared length.
Complex segment_transform(const Segment& seg, double u, double v);

/// Same formula with a caller-supplied sinc; lets verification substitute a
/// deliberately wrong one.
using SincFn = double (*)(double);
Complex segment_transform(const Segment& seg, double u, double v, SincFn sinc_fn);

/// Transform of the indicator of {0 <= x <= 1, 0 <= y <= x}. Total function:
/// near-singular arguments switch to limit formulas with a first-order
/// correction, and a power series covers the neighbourhood of the origin.
Complex canonical_triangle_transform(double u, double v);

/// Affine lift of the canonical triangle onto `tri`; value at the origin is
/// the triangle area.
Complex triangle_transform(const Triangle& tri, double u, double v);

/// Dispatch over the geometry kind at an arbitrary frequency, including
/// (0, 0) which the default grid excludes.
Complex transform_at(const Geometry& g, double u, double v);

ComplexSpectrum cft_point(Point2 p, const FrequencyGrid& grid);
ComplexSpectrum cft_segment(const Segment& seg, const FrequencyGrid& grid);
ComplexSpectrum cft_triangle(const Triangle& tri, const FrequencyGrid& grid);
/// Sum of segment spectra over split_polyline(pl).
ComplexSpectrum cft_polyline(const Polyline& pl, const FrequencyGrid& grid);
/// Sum of triangle spectra over triangulate(pg).
ComplexSpectrum cft_polygon(const Polygon& pg, const FrequencyGrid& grid);
ComplexSpectrum cft_polygon(const MultiPolygon& mp, const FrequencyGrid& grid);
/// Sum over an explicit partition into triangles.
ComplexSpectrum cft_triangles(const std::vector<Triangle>& tris, const FrequencyGrid& grid);

ComplexSpectrum encode_spectrum(const Geometry& g, const FrequencyGrid& grid);

/// "index,u,v,re,im" rows with a header line.
std::string spectrum_to_csv(const ComplexSpectrum& spec, const FrequencyGrid& grid);

/// Little-endian: magic "P2VS", version u32, count u32, then (re, im) f64 pairs.
void write_spectrum_binary(std::ostream& out, const ComplexSpectrum& spec);
ComplexSpectrum read_spectrum_binary(std::istream& in);

namespace detail {

/// Integral of t^n exp(-j 2 pi w t) over [0, 1].
Complex unit_moment(int n, double w);

/// Closed form of the canonical-triangle transform, valid when u, v and
/// u + v are all nonzero.
Complex canonical_triangle_closed_form(double u, double v);

// Limit formulas on the singular lines, written exactly as derived.
Complex canonical_triangle_u_zero(double v);
Complex canonical_triangle_v_zero(double u);
Complex canonical_triangle_anti_diagonal(double v);  // value at (-v, v)

/// Two-variable Taylor series about the origin.
Complex canonical_triangle_series(double u, double v);

}  // namespace detail

}  // namespace polyenc
