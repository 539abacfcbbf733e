#include "polyenc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polyenc/frequency_grid.hpp"
#include "polyenc/oracle.hpp"
#include "polyenc/spectral.hpp"

namespace polyenc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex phasor(double phase) { return {std::cos(kTwoPi * phase), -std::sin(kTwoPi * phase)}; }

// sin(t) / t: the unnormalized cardinal sine, wrong by a factor pi in the argument.
double wrong_sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

struct Tracker {
    CheckResult r;

    Tracker(std::string name, double tol, const VerifyOptions& opt) {
        r.name = std::move(name);
        r.tolerance = opt.tolerance.value_or(tol);
    }
    void add(double err) {
        if (!(err <= r.max_error)) r.max_error = std::isnan(err) ? INFINITY : std::max(r.max_error, err);
    }
    CheckResult done(std::string detail = {}) {
        r.passed = r.max_error <= r.tolerance;
        r.detail = std::move(detail);
        return r;
    }
};

Geometry random_geometry(Rng& rng, int kind) {
    switch (kind % 4) {
        case 0: return Geometry(random_point(rng));
        case 1: return Geometry(random_polyline(rng, random_point(rng, -0.5, 0.5), 0.5));
        case 2: return Geometry(random_test_polygon(rng, false));
        default: return Geometry(random_test_polygon(rng, true));
    }
}

// Fan from the star center: a partition independent of ear clipping.
std::vector<Triangle> center_fan(const Polygon& pg, Point2 center) {
    std::vector<Triangle> out;
    for (std::size_t i = 0; i + 1 < pg.exterior.size(); ++i) out.push_back({center, pg.exterior[i], pg.exterior[i + 1]});
    return out;
}

}  // namespace

double scaled_error(Complex a, Complex b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

Triangle random_triangle(Rng& rng, double min_area) {
    for (;;) {
        const Triangle t{random_point(rng), random_point(rng), random_point(rng)};
        if (std::abs(t.signed_area()) >= min_area) return t.ccw();
    }
}

Segment random_segment(Rng& rng, double min_length) {
    for (;;) {
        const Segment s{random_point(rng), random_point(rng)};
        if (s.length() >= min_length) return s;
    }
}

Polygon random_test_polygon(Rng& rng, bool with_hole) {
    for (;;) {
        const double radius = rng.uniform(0.3, 0.9);
        const Point2 center = random_point(rng, -1.0 + radius, 1.0 - radius);
        Polygon pg = random_polygon(rng, center, radius, false);
        if (with_hole) {
            Polygon hole = random_polygon(rng, center, 0.12 * radius, true);
            pg.holes.push_back(reversed(hole.exterior));
        }
        try {
            return validate(Geometry(pg)).polygon();
        } catch (const ValidationError&) {
            continue;
        }
    }
}

std::uint64_t relu_signature(const Mlp2Tape& tape, std::uint64_t seed) {
    std::vector<unsigned char> bits(static_cast<std::size_t>(tape.h.size()));
    for (Eigen::Index i = 0; i < tape.h.size(); ++i) bits[static_cast<std::size_t>(i)] = tape.h.data()[i] > 0.0;
    return fnv1a(bits.data(), bits.size(), seed);
}

GradCheck gradient_check(const std::vector<Matrix*>& tensors, const std::vector<const Matrix*>& grads,
                         const std::function<double(std::uint64_t&)>& loss, int probes, Rng& rng, double step) {
    GradCheck out;
    std::uint64_t base_sig = 0;
    loss(base_sig);
    int redraws = 0;
    while (out.probes < probes) {
        const std::size_t t = rng.below(tensors.size());
        Matrix& m = *tensors[t];
        const auto k = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m.size())));
        const double orig = m.data()[k];
        std::uint64_t sig_p = 0, sig_m = 0;
        m.data()[k] = orig + step;
        const double lp = loss(sig_p);
        m.data()[k] = orig - step;
        const double lm = loss(sig_m);
        m.data()[k] = orig;
        if ((sig_p != base_sig || sig_m != base_sig) && ++redraws < 1000) continue;
        const double numeric = (lp - lm) / (2.0 * step);
        const double analytic = grads[t]->data()[k];
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        out.max_rel_error = std::max(out.max_rel_error, std::abs(analytic - numeric) / denom);
        ++out.probes;
    }
    return out;
}

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi, Rng& rng) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
    return m;
}

constexpr int kCheckBatch = 4;

}  // namespace

GradCheck check_mlp_gradients(int in, int hidden, int out, double x_lo, double x_hi, std::uint64_t seed, int probes) {
    Rng rng(seed);
    Mlp2 m = make_mlp2(in, hidden, out, rng);
    Matrix x = random_matrix(in, kCheckBatch, x_lo, x_hi, rng);
    const Matrix proj = random_matrix(out, kCheckBatch, -1.0, 1.0, rng);
    // L = sum(proj .* mlp(x)), so dL/dy = proj.
    auto loss = [&](std::uint64_t& sig) {
        Mlp2Tape tape;
        const Matrix y = forward(m, x, &tape);
        sig = relu_signature(tape);
        return (proj.array() * y.array()).sum();
    };
    Mlp2 grad = zeros_like(m);
    Mlp2Tape tape;
    forward(m, x, &tape);
    const Matrix dx = backward(m, tape, proj, grad);
    std::vector<Matrix*> tensors;
    append_tensors(m, tensors);
    tensors.push_back(&x);
    std::vector<Matrix*> g;
    append_tensors(grad, g);
    std::vector<const Matrix*> grads(g.begin(), g.end());
    grads.push_back(&dx);
    return gradient_check(tensors, grads, loss, probes, rng);
}

GradCheck check_fusion_gradients(FusionVariant variant, std::uint64_t seed, int probes) {
    Rng rng(seed);
    const FusionShape shape{30, 24, 16, 8};
    FusionParams p = init_fusion(shape, rng);
    const Matrix z = random_matrix(shape.features, kCheckBatch, 0.0, 2.0, rng);
    const Matrix phi = random_matrix(shape.features, kCheckBatch, -3.0, 3.0, rng);
    const Matrix proj = random_matrix(shape.d, kCheckBatch, -1.0, 1.0, rng);
    auto loss = [&](std::uint64_t& sig) {
        FusionTape tape;
        const Matrix v = fuse_batch(p, variant, z, phi, &tape);
        sig = relu_signature(tape.fin, relu_signature(tape.phi, relu_signature(tape.z)));
        return (proj.array() * v.array()).sum();
    };
    FusionParams grad = zeros_like(p);
    FusionTape tape;
    fuse_batch(p, variant, z, phi, &tape);
    fuse_backward(p, variant, tape, proj, grad);
    const std::vector<Matrix*> tensors = trainable_tensors(p, variant);
    const std::vector<Matrix*> g = trainable_tensors(grad, variant);
    return gradient_check(tensors, std::vector<const Matrix*>(g.begin(), g.end()), loss, probes, rng);
}

GradCheck check_head_gradients(int d, int hidden, int classes, std::uint64_t seed, int probes) {
    Rng rng(seed);
    Mlp2 head = make_mlp2(2 * d, hidden, classes, rng);
    Matrix va = random_matrix(d, kCheckBatch, -1.0, 1.0, rng);
    Matrix vb = random_matrix(d, kCheckBatch, -1.0, 1.0, rng);
    std::vector<int> labels;
    for (int i = 0; i < kCheckBatch; ++i) labels.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(classes))));
    auto loss = [&](std::uint64_t& sig) {
        Mlp2Tape tape;
        const Matrix logits = head_forward(va, vb, head, &tape);
        sig = relu_signature(tape);
        return cross_entropy(logits, labels).loss;
    };
    Mlp2 grad = zeros_like(head);
    Mlp2Tape tape;
    const LossResult ce = cross_entropy(head_forward(va, vb, head, &tape), labels);
    const Matrix dcat = backward(head, tape, ce.grad, grad);
    const Matrix dva = dcat.topRows(d), dvb = dcat.bottomRows(d);
    std::vector<Matrix*> tensors;
    append_tensors(head, tensors);
    tensors.push_back(&va);
    tensors.push_back(&vb);
    std::vector<Matrix*> g;
    append_tensors(grad, g);
    std::vector<const Matrix*> grads(g.begin(), g.end());
    grads.push_back(&dva);
    grads.push_back(&dvb);
    return gradient_check(tensors, grads, loss, probes, rng);
}

GradCheck check_distance_gradients(int d, std::uint64_t seed, int probes) {
    Rng rng(seed);
    Matrix va = random_matrix(d, kCheckBatch, -1.0, 1.0, rng);
    Matrix vb = random_matrix(d, kCheckBatch, -1.0, 1.0, rng);
    std::vector<double> dist;
    for (int i = 0; i < kCheckBatch; ++i) dist.push_back(rng.uniform(0.0, 3.0));
    auto loss = [&](std::uint64_t& sig) {
        sig = 0;
        return mse_distance(va, vb, dist).loss;
    };
    const DistanceLoss dl = mse_distance(va, vb, dist);
    return gradient_check({&va, &vb}, {&dl.grad_a, &dl.grad_b}, loss, probes, rng);
}

std::vector<CheckResult> run_verify(const VerifyOptions& opt) {
    const FrequencyGrid grid = default_grid();
    std::vector<CheckResult> out;
    Rng rng(opt.seed);

    {
        Tracker t("triangle vs quadrature", 1e-6, opt);
        for (int i = 0; i < opt.count; ++i) {
            const Triangle tri = random_triangle(rng);
            const ComplexSpectrum spec = cft_triangle(tri, grid);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                t.add(scaled_error(spec.values[k], oracle::quad_triangle(tri, grid[k].u, grid[k].v, opt.quad_tol)));
            }
        }
        out.push_back(t.done(std::to_string(opt.count) + " triangles x " + std::to_string(grid.size()) + " samples"));
    }
    {
        Tracker t("segment vs length x line integral", 1e-9, opt);
        for (int i = 0; i < opt.count; ++i) {
            const Segment seg = random_segment(rng);
            for (const Frequency& f : grid.samples()) {
                const Complex analytic =
                    opt.mutate_sinc ? segment_transform(seg, f.u, f.v, wrong_sinc) : segment_transform(seg, f.u, f.v);
                t.add(scaled_error(analytic, seg.length() * oracle::quad_segment(seg, f.u, f.v)));
            }
        }
        out.push_back(t.done(opt.mutate_sinc ? "mutated sinc" : ""));
    }
    {
        Tracker t("polygon vs quadrature", 1e-6, opt);
        const int n = std::max(1, opt.count / 4);
        for (int i = 0; i < n; ++i) {
            const Polygon pg = random_test_polygon(rng, i % 2 == 1);
            const ComplexSpectrum spec = cft_polygon(pg, grid);
            const std::vector<Triangle> tris = triangulate(pg);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                t.add(scaled_error(spec.values[k], oracle::quad_triangles(tris, grid[k].u, grid[k].v, opt.quad_tol)));
            }
        }
        out.push_back(t.done(std::to_string(n) + " polygons, half with a hole"));
    }
    {
        Tracker t("unit square closed form", 1e-9, opt);
        const Polygon square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}, {}};
        const ComplexSpectrum spec = cft_polygon(square, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double u = grid[k].u, v = grid[k].v;
            t.add(scaled_error(spec.values[k], phasor(0.5 * (u + v)) * sinc(u) * sinc(v)));
        }
        out.push_back(t.done());
    }
    {
        Tracker t("identities at the origin", 1e-10, opt);
        for (int i = 0; i < opt.count; ++i) {
            const Point2 p = random_point(rng);
            for (const Frequency& f : grid.samples()) t.add(std::abs(std::abs(point_transform(p, f.u, f.v)) - 1.0));
            const Segment seg = random_segment(rng);
            const double dx = seg.r.x - seg.q.x, dy = seg.r.y - seg.q.y;
            t.add(std::abs(segment_transform(seg, 0.0, 0.0) - Complex(dx * dx + dy * dy)) / (dx * dx + dy * dy));
            const Triangle tri = random_triangle(rng);
            t.add(std::abs(triangle_transform(tri, 0.0, 0.0) - Complex(tri.signed_area())) / tri.signed_area());
            const Polygon pg = random_test_polygon(rng, i % 2 == 1);
            double area = signed_area(pg.exterior);
            for (const Ring& h : pg.holes) area += signed_area(h);
            t.add(std::abs(transform_at(Geometry(pg), 0.0, 0.0) - Complex(area)) / area);
        }
        out.push_back(t.done("point |F| = 1, segment L^2, triangle and polygon area"));
    }
    {
        Tracker t("hermitian symmetry", 1e-12, opt);
        for (int i = 0; i < opt.count; ++i) {
            const Geometry g = random_geometry(rng, i);
            for (const Frequency& f : grid.samples()) {
                t.add(scaled_error(transform_at(g, -f.u, -f.v), std::conj(transform_at(g, f.u, f.v))));
            }
        }
        out.push_back(t.done());
    }
    {
        Tracker mag("translation: magnitude invariance", 1e-10, opt);
        Tracker phase("translation: phase shift", 1e-10, opt);
        for (int i = 0; i < opt.count; ++i) {
            const Geometry g = random_geometry(rng, i);
            const Point2 tau{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
            const Geometry moved = translated(g, tau);
            const ComplexSpectrum a = encode_spectrum(g, grid);
            const ComplexSpectrum b = encode_spectrum(moved, grid);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                mag.add(std::abs(std::abs(b.values[k]) - std::abs(a.values[k])));
                phase.add(scaled_error(b.values[k], phasor(tau.x * grid[k].u + tau.y * grid[k].v) * a.values[k]));
            }
        }
        out.push_back(mag.done());
        out.push_back(phase.done());
    }
    {
        Tracker t("triangulation invariance", 1e-9, opt);
        for (int i = 0; i < opt.count; ++i) {
            const double radius = rng.uniform(0.3, 0.9);
            const Point2 center = random_point(rng, -1.0 + radius, 1.0 - radius);
            const Polygon pg = validate(Geometry(random_polygon(rng, center, radius, false))).polygon();
            const ComplexSpectrum ears = cft_polygon(pg, grid);
            const ComplexSpectrum fan = cft_triangles(center_fan(pg, center), grid);
            for (std::size_t k = 0; k < grid.size(); ++k) t.add(scaled_error(ears.values[k], fan.values[k]));
        }
        out.push_back(t.done("ear clipping vs fan from the star center"));
    }
    {
        Tracker t("affine law", 1e-8, opt);
        for (int i = 0; i < opt.count; ++i) {
            const Triangle tri = random_triangle(rng);
            double a11, a12, a21, a22;
            do {
                a11 = rng.uniform(-1.5, 1.5), a12 = rng.uniform(-1.5, 1.5);
                a21 = rng.uniform(-1.5, 1.5), a22 = rng.uniform(-1.5, 1.5);
            } while (std::abs(a11 * a22 - a12 * a21) < 0.1);
            const Point2 tau{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
            auto map = [&](Point2 p) { return Point2{a11 * p.x + a12 * p.y + tau.x, a21 * p.x + a22 * p.y + tau.y}; };
            const Triangle image = Triangle{map(tri.q), map(tri.r), map(tri.s)}.ccw();
            const double det = std::abs(a11 * a22 - a12 * a21);
            for (const Frequency& f : grid.samples()) {
                // F_image(w) = |det A| e^{-j2pi tau.w} F_tri(A^T w)
                const double u2 = a11 * f.u + a21 * f.v, v2 = a12 * f.u + a22 * f.v;
                const Complex expected = det * phasor(tau.x * f.u + tau.y * f.v) * triangle_transform(tri, u2, v2);
                t.add(scaled_error(triangle_transform(image, f.u, f.v), expected));
            }
        }
        out.push_back(t.done());
    }
    {
        Tracker t("linearity over parts", 1e-12, opt);
        for (int i = 0; i < opt.count; ++i) {
            const Polyline pl = random_polyline(rng, random_point(rng, -0.5, 0.5), 0.5);
            const ComplexSpectrum whole = cft_polyline(pl, grid);
            std::vector<Complex> sum(grid.size());
            for (const Segment& s : split_polyline(pl)) {
                const ComplexSpectrum part = cft_segment(s, grid);
                for (std::size_t k = 0; k < grid.size(); ++k) sum[k] += part.values[k];
            }
            for (std::size_t k = 0; k < grid.size(); ++k) t.add(scaled_error(whole.values[k], sum[k]));
        }
        out.push_back(t.done("polyline vs sum of its segments"));
    }
    {
        const double tol = 1e-4;
        auto grad_result = [&](const std::string& name, const GradCheck& g) {
            Tracker t(name, tol, opt);
            t.add(g.max_rel_error);
            out.push_back(t.done(std::to_string(g.probes) + " probes"));
        };
        const int w = static_cast<int>(grid.size());
        grad_result("gradient h_z", check_mlp_gradients(w, w, w, 0.0, 2.0, opt.seed + 1));
        grad_result("gradient h_phi", check_mlp_gradients(w, w, w, -std::numbers::pi, std::numbers::pi, opt.seed + 2));
        grad_result("gradient h_final", check_mlp_gradients(2 * w, 64, 32, -2.0, 2.0, opt.seed + 3));
        grad_result("gradient fusion end to end", check_fusion_gradients(FusionVariant::Learned, opt.seed + 4));
        grad_result("gradient task head", check_head_gradients(32, 64, 16, opt.seed + 5));
        grad_result("gradient distance loss", check_distance_gradients(32, opt.seed + 6));
    }
    return out;
}

}  // namespace polyenc
