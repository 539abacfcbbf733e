#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polyenc/fusion.hpp"
#include "polyenc/tasks.hpp"
#include "polyenc/triangulation.hpp"

namespace polyenc {

struct CheckResult {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    int count = 100;  ///< random shapes per analytic-vs-quadrature check
    std::uint64_t seed = 1;
    std::optional<double> tolerance;  ///< replaces every per-check tolerance
    bool mutate_sinc = false;         ///< negative control: segments use sin(t)/t
    double quad_tol = 1e-11;          ///< target of the adaptive quadrature
};

/// Analytic spectra against the quadrature oracle, the exact identities,
/// the symmetry/translation/affine/partition laws and the gradient checks.
std::vector<CheckResult> run_verify(const VerifyOptions& opt);

/// Error measure used throughout: |a - b| / (1 + |b|).
double scaled_error(Complex a, Complex b);

// Random inputs for the checks. All inside [-1, 1]^2.
Triangle random_triangle(Rng& rng, double min_area = 1e-3);
Segment random_segment(Rng& rng, double min_length = 1e-2);
/// Star-shaped polygon, optionally with one clockwise hole around its center.
Polygon random_test_polygon(Rng& rng, bool with_hole);

/// Central-difference check of analytic gradients. `loss` recomputes the
/// scalar loss from the current tensor values and reports a signature of the
/// ReLU activation pattern; probes whose +-step changes the pattern straddle
/// a kink and are redrawn. Returns the largest
/// |analytic - numeric| / max(|analytic|, |numeric|, 1e-6) over `probes`
/// random entries.
struct GradCheck {
    double max_rel_error = 0.0;
    int probes = 0;
};
GradCheck gradient_check(const std::vector<Matrix*>& tensors, const std::vector<const Matrix*>& grads,
                         const std::function<double(std::uint64_t&)>& loss, int probes, Rng& rng,
                         double step = 1e-5);

std::uint64_t relu_signature(const Mlp2Tape& tape, std::uint64_t seed = 1469598103934665603ull);

// Gradient checks of the individual blocks on random inputs.
/// Inputs drawn uniformly from [x_lo, x_hi].
GradCheck check_mlp_gradients(int in, int hidden, int out, double x_lo, double x_hi, std::uint64_t seed,
                              int probes = 10);
GradCheck check_fusion_gradients(FusionVariant variant, std::uint64_t seed, int probes = 10);
GradCheck check_head_gradients(int d, int hidden, int classes, std::uint64_t seed, int probes = 10);
GradCheck check_distance_gradients(int d, std::uint64_t seed, int probes = 10);

}  // namespace polyenc
