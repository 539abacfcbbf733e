#pragma once

#include "polyenc/spectral.hpp"

namespace polyenc {

class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Brute-force numerical integrals of exp(-j 2 pi (u x + v y)), used to check
/// the closed-form transforms. Nothing here calls into spectral.cpp.
namespace oracle {

/// Largest number of cells quad_triangle may create.
inline constexpr std::size_t kCellBudget = std::size_t{1} << 20;

struct QuadResult {
    Complex value;
    double error_estimate = 0.0;
    std::size_t cells = 0;
};

/// Globally adaptive cubature over the triangle: a 13-point degree-7
/// symmetric rule per cell, the error of a cell estimated against its four
/// midpoint children, and the worst cell refined until the summed estimate
/// is below tol * (1 + |result|). Requires tol in (1e-12, 1e-3).
QuadResult quad_triangle_detailed(const Triangle& tri, double u, double v, double tol);
Complex quad_triangle(const Triangle& tri, double u, double v, double tol);

/// Arc-length line integral over the segment by composite Gauss-Legendre
/// with n nodes in total (n >= 64, rounded up to whole 16-node panels).
/// Converges to |r - q| exp(-j 2 pi m.(u, v)) sinc((r - q).(u, v)).
Complex quad_segment(const Segment& seg, double u, double v, int n = 64);

/// Sum of quad_triangle over a triangulation of the polygon region.
Complex quad_polygon(const Polygon& pg, double u, double v, double tol);
Complex quad_triangles(const std::vector<Triangle>& tris, double u, double v, double tol);

/// Integral of a monomial x^i y^j with the per-cell rule alone, exposed so
/// tests can check the rule's polynomial degree.
double cubature_rule_monomial(const Triangle& tri, int i, int j);

}  // namespace oracle

}  // namespace polyenc
