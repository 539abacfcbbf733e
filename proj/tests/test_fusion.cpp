#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "polyenc/fusion.hpp"
#include "polyenc/verify.hpp"

using namespace polyenc;

namespace {

FusionParams zero_params(const FusionShape& s) {
    Rng rng(0);
    return zeros_like(init_fusion(s, rng));
}

Matrix column(const std::vector<double>& xs) { return Eigen::Map<const Eigen::VectorXd>(xs.data(), xs.size()); }

}  // namespace

TEST_SUITE("fusion") {

TEST_CASE("extract features") {
    ComplexSpectrum s{{Complex(3, 4), Complex(0, 0), Complex(-1, 0)}, 0};
    const FeatureVectors f = extract_features(s);
    CHECK(f.z[0] == 5.0);
    CHECK(f.phi[0] == doctest::Approx(0.9272952180016122).epsilon(1e-15));
    CHECK(f.z[1] == 0.0);
    CHECK(f.phi[1] == 0.0);
    CHECK(f.phi[2] == doctest::Approx(3.141592653589793));
    const FeatureVectors p = extract_features(cft_point({0.4, -0.7}, default_grid()));
    for (double z : p.z) CHECK(std::abs(z - 1.0) <= 1e-15);
}

TEST_CASE("zero parameters give the zero embedding") {
    const FusionShape s{6, 5, 4, 3};
    const FusionParams p = zero_params(s);
    const std::vector<double> v = fuse({{1, 2, 3, 4, 5, 6}, {0.1, -0.2, 0.3, 0, 1, -1}}, p);
    REQUIRE(v.size() == 3);
    for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("constructed pass-through weights reproduce a chosen input") {
    const int n = 5;
    const FusionShape s{n, n, 4, 3};
    FusionParams p = zero_params(s);
    p.h_z.l1.w.setIdentity();
    p.h_z.l2.w.setIdentity();
    p.h_phi.l1.w.setIdentity();
    p.h_phi.l2.w.setIdentity();
    // v[1] = z[3] (z >= 0 passes both ReLUs unchanged)
    p.h_final.l1.w(0, 3) = 1.0;
    p.h_final.l2.w(1, 0) = 1.0;
    // v[2] = phi[2] + 10, shifted to stay positive through the ReLU
    p.h_final.l1.w(1, n + 2) = 1.0;
    p.h_final.l1.b(1) = 10.0;
    p.h_final.l2.w(2, 1) = 1.0;
    p.h_final.l2.b(2) = -10.0;
    const FeatureVectors f{{0.5, 1.5, 2.5, 3.5, 4.5}, {0.3, 0.2, 0.7, 0.1, 0.9}};
    const std::vector<double> v = fuse(f, p);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 3.5);
    CHECK(v[2] == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("shape mismatch") {
    Rng rng(1);
    const FusionParams p = init_fusion({6, 5, 4, 3}, rng);
    CHECK_THROWS_AS(fuse({{1, 2, 3}, {1, 2, 3}}, p), ShapeMismatch);
    CHECK_THROWS_AS(fuse({{1, 2, 3, 4, 5, 6}, {1, 2}}, p), ShapeMismatch);
}

TEST_CASE("initialization is seeded and bounded by 1/sqrt(fan_in)") {
    Rng a(42), b(42), c(43);
    const Mlp2 m1 = make_mlp2(16, 8, 4, a), m2 = make_mlp2(16, 8, 4, b), m3 = make_mlp2(16, 8, 4, c);
    CHECK(m1.l1.w == m2.l1.w);
    CHECK(m1.l2.b == m2.l2.b);
    CHECK(m1.l1.w != m3.l1.w);
    CHECK(m1.l1.w.cwiseAbs().maxCoeff() <= 0.25);
    CHECK(m1.l1.b.cwiseAbs().maxCoeff() <= 0.25);
    CHECK(m1.l2.w.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(8.0));
}

TEST_CASE("rng helpers") {
    Rng r(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        CHECK((u >= 0.0 && u < 1.0));
        CHECK(r.below(7) < 7);
    }
    std::vector<int> xs{0, 1, 2, 3, 4, 5, 6, 7};
    r.shuffle(xs);
    std::vector<int> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("gradient checks of each MLP in isolation") {
    CHECK(check_mlp_gradients(210, 210, 210, 0.0, 2.0, 1).max_rel_error <= 1e-4);
    CHECK(check_mlp_gradients(210, 210, 210, -3.14, 3.14, 2).max_rel_error <= 1e-4);
    CHECK(check_mlp_gradients(420, 64, 32, -2.0, 2.0, 3).max_rel_error <= 1e-4);
}

TEST_CASE("gradient checks through the full fusion for every variant") {
    for (FusionVariant v : {FusionVariant::Learned, FusionVariant::MagOnly, FusionVariant::PhaseOnly,
                            FusionVariant::Concat}) {
        const GradCheck g = check_fusion_gradients(v, 10 + static_cast<int>(v), 20);
        CHECK_MESSAGE(g.max_rel_error <= 1e-4, variant_name(v));
        CHECK(g.probes == 20);
    }
}

TEST_CASE("ablation variants cut the intended path") {
    Rng rng(9);
    const FusionParams p = init_fusion({8, 6, 5, 4}, rng);
    const Matrix z = Matrix::Random(8, 3).cwiseAbs(), phi = Matrix::Random(8, 3);
    const Matrix phi2 = phi * 2.0, z2 = z * 3.0;
    CHECK(fuse_batch(p, FusionVariant::MagOnly, z, phi) == fuse_batch(p, FusionVariant::MagOnly, z, phi2));
    CHECK(fuse_batch(p, FusionVariant::PhaseOnly, z, phi) == fuse_batch(p, FusionVariant::PhaseOnly, z2, phi));
    CHECK(fuse_batch(p, FusionVariant::Learned, z, phi) != fuse_batch(p, FusionVariant::Learned, z, phi2));
    FusionParams q = p;
    CHECK(trainable_tensors(q, FusionVariant::Learned).size() == 12);
    CHECK(trainable_tensors(q, FusionVariant::MagOnly).size() == 8);
    CHECK(trainable_tensors(q, FusionVariant::PhaseOnly).size() == 8);
    CHECK(trainable_tensors(q, FusionVariant::Concat).size() == 4);
    CHECK(parse_variant("concat") == FusionVariant::Concat);
    CHECK_THROWS(parse_variant("bogus"));
}

TEST_CASE("batched and single fusion agree") {
    Rng rng(4);
    const FusionParams p = init_fusion({8, 6, 5, 4}, rng);
    const Matrix z = Matrix::Random(8, 3).cwiseAbs(), phi = Matrix::Random(8, 3);
    const Matrix v = fuse_batch(p, FusionVariant::Learned, z, phi);
    for (int j = 0; j < 3; ++j) {
        const Eigen::VectorXd zc = z.col(j), pc = phi.col(j);
        const std::vector<double> single =
            fuse({{zc.data(), zc.data() + 8}, {pc.data(), pc.data() + 8}}, p, FusionVariant::Learned);
        for (int i = 0; i < 4; ++i) CHECK(single[i] == doctest::Approx(v(i, j)).epsilon(1e-14));
    }
}

TEST_CASE("AdamW first step") {
    Matrix p = Matrix::Constant(1, 1, 1.0);
    const Matrix g = Matrix::Constant(1, 1, 1.0);
    AdamWState st;
    adamw_step({&p}, {&g}, st, {0.1, 0.0, 0.9, 0.999, 1e-8});
    CHECK(p(0, 0) == doctest::Approx(0.9).epsilon(1e-7));
}

TEST_CASE("AdamW with zero gradient") {
    Matrix p = column({1.0, -2.0, 3.0});
    const Matrix g = Matrix::Zero(3, 1);
    AdamWState st;
    adamw_step({&p}, {&g}, st, {0.1, 0.0, 0.9, 0.999, 1e-8});
    CHECK(p == column({1.0, -2.0, 3.0}));
    AdamWState st2;
    adamw_step({&p}, {&g}, st2, {0.1, 0.01, 0.9, 0.999, 1e-8});
    for (int i = 0; i < 3; ++i) CHECK(p(i) == doctest::Approx((1.0 - 0.1 * 0.01) * column({1.0, -2.0, 3.0})(i)));
}

TEST_CASE("AdamW matches a hand-rolled reference over several steps") {
    Matrix p = column({0.5, -1.0});
    AdamWState st;
    double m[2] = {0, 0}, v[2] = {0, 0}, ref[2] = {0.5, -1.0};
    const AdamWOptions o{0.01, 0.1, 0.9, 0.999, 1e-8};
    for (int t = 1; t <= 5; ++t) {
        const Matrix g = column({0.3 * t, -0.2});
        adamw_step({&p}, {&g}, st, o);
        for (int i = 0; i < 2; ++i) {
            ref[i] *= 1.0 - o.lr * o.weight_decay;
            m[i] = 0.9 * m[i] + 0.1 * g(i);
            v[i] = 0.999 * v[i] + 0.001 * g(i) * g(i);
            const double mh = m[i] / (1 - std::pow(0.9, t)), vh = v[i] / (1 - std::pow(0.999, t));
            ref[i] -= o.lr * mh / (std::sqrt(vh) + o.eps);
        }
    }
    CHECK(p(0) == doctest::Approx(ref[0]).epsilon(1e-12));
    CHECK(p(1) == doctest::Approx(ref[1]).epsilon(1e-12));
}

TEST_CASE("checkpoint round trip and corruption") {
    Rng rng(2);
    FusionParams p = init_fusion({6, 5, 4, 3}, rng);
    const std::vector<Matrix*> t = all_tensors(p);
    std::stringstream ss;
    write_checkpoint(ss, R"({"d":3})", {t.begin(), t.end()});
    const std::string bytes = ss.str();
    CHECK(bytes.substr(0, 4) == "P2VM");
    const Checkpoint ck = read_checkpoint(ss);
    CHECK(ck.config_json == R"({"d":3})");
    FusionParams q = zeros_like(p);
    load_tensors(ck.tensors, all_tensors(q));
    CHECK(q.h_final.l2.w == p.h_final.l2.w);
    CHECK(q.h_z.l1.b == p.h_z.l1.b);

    std::string corrupt = bytes;
    corrupt[20] ^= 1;  // inside the config text
    std::stringstream bad(corrupt);
    CHECK_THROWS_AS(read_checkpoint(bad), CheckpointError);
    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(read_checkpoint(truncated), Error);
    FusionParams other = zeros_like(init_fusion({6, 5, 4, 2}, rng));
    CHECK_THROWS_AS(load_tensors(ck.tensors, all_tensors(other)), ShapeMismatch);
}

TEST_CASE("embedding files") {
    Matrix rows(2, 3);
    rows << 1.0, -0.5, 0.1, 2.0, 3.0, 1e-300;
    std::stringstream ss;
    write_embeddings_binary(ss, rows, 0xabcdefull);
    CHECK(ss.str().substr(0, 4) == "P2VE");
    const Embeddings e = read_embeddings_binary(ss);
    CHECK(e.config_hash == 0xabcdefull);
    CHECK(e.rows == rows);
    CHECK(embeddings_to_csv(rows) == "1,-0.5,0.1\n2,3,1e-300\n");
}

}  // TEST_SUITE
