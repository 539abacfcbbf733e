#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "polyenc/io.hpp"
#include "polyenc/log.hpp"
#include "polyenc/tasks.hpp"
#include "polyenc/verify.hpp"

using namespace polyenc;

namespace {

Geometry wkt(const char* text) { return parse_geometry(text, TextFormat::WKT); }

Relation rel(const char* a, const char* b) { return relate(wkt(a), wkt(b)); }

const char* kSquare = "POLYGON ((0 0, 1 0, 1 1, 0 1, 0 0))";

Matrix col(std::initializer_list<double> xs) {
    Matrix m(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::Index i = 0;
    for (double x : xs) m(i++) = x;
    return m;
}

}  // namespace

TEST_SUITE("tasks") {

TEST_CASE("topological examples") {
    CHECK(rel("POINT (0.5 0.5)", kSquare) == Relation::Within);
    CHECK(topo_classes(PairType::PointPolygon)[topo_label(wkt("POINT (0.5 0.5)"), wkt(kSquare))] == Relation::Contains);
    CHECK(rel(kSquare, "POLYGON ((2 2, 3 2, 3 3, 2 3, 2 2))") == Relation::Disjoint);
    CHECK(rel(kSquare, "POLYGON ((1 0, 2 0, 2 1, 1 1, 1 0))") == Relation::Touches);
}

TEST_CASE("polygon-polygon relations") {
    CHECK(rel(kSquare, "POLYGON ((0.5 0.5, 2 0.5, 2 2, 0.5 2, 0.5 0.5))") == Relation::Intersects);
    CHECK(rel(kSquare, "POLYGON ((0.2 0.2, 0.8 0.2, 0.8 0.8, 0.2 0.8, 0.2 0.2))") == Relation::Contains);
    CHECK(rel("POLYGON ((0.2 0.2, 0.8 0.2, 0.8 0.8, 0.2 0.8, 0.2 0.2))", kSquare) == Relation::Within);
    CHECK(rel(kSquare, "POLYGON ((1 1, 0 1, 0 0, 1 0, 1 1))") == Relation::Equals);
    // inner polygon sharing part of the boundary is still contained
    CHECK(rel(kSquare, "POLYGON ((0 0, 0.5 0, 0.5 0.5, 0 0.5, 0 0))") == Relation::Contains);
    // corner contact only
    CHECK(rel(kSquare, "POLYGON ((1 1, 2 1, 2 2, 1 2, 1 1))") == Relation::Touches);
    // a polygon sitting in the hole of another
    const char* ring = "POLYGON ((0 0, 4 0, 4 4, 0 4, 0 0), (1 1, 1 3, 3 3, 3 1, 1 1))";
    CHECK(rel(ring, "POLYGON ((1.5 1.5, 2.5 1.5, 2.5 2.5, 1.5 2.5, 1.5 1.5))") == Relation::Disjoint);
    CHECK(rel(ring, "POLYGON ((1 1, 3 1, 3 3, 1 3, 1 1))") == Relation::Touches);
}

TEST_CASE("polyline-polygon relations") {
    CHECK(rel("LINESTRING (0.2 0.2, 0.8 0.7)", kSquare) == Relation::Within);
    CHECK(rel("LINESTRING (0.5 0.5, 1.5 0.5)", kSquare) == Relation::Intersects);
    CHECK(rel("LINESTRING (1 0, 1 1, 2 2)", kSquare) == Relation::Touches);
    CHECK(rel("LINESTRING (2 0, 3 1)", kSquare) == Relation::Disjoint);
    // along the boundary and then inside
    CHECK(rel("LINESTRING (0 0, 1 0, 0.5 0.5)", kSquare) == Relation::Within);
    // crossing through two boundary vertices
    CHECK(rel("LINESTRING (-1 -1, 2 2)", kSquare) == Relation::Intersects);
    // touching a vertex from outside
    CHECK(rel("LINESTRING (1 1, 2 1.5)", kSquare) == Relation::Touches);
}

TEST_CASE("point and polyline relations") {
    CHECK(rel("POINT (0.5 0.5)", "LINESTRING (0 0, 1 1)") == Relation::Intersects);
    CHECK(rel("POINT (0.5 0.6)", "LINESTRING (0 0, 1 1)") == Relation::Disjoint);
    CHECK(rel("LINESTRING (0 0, 1 1)", "LINESTRING (0 1, 1 0)") == Relation::Intersects);
    CHECK(rel("LINESTRING (0 0, 1 1)", "LINESTRING (1 1, 2 0)") == Relation::Intersects);
    CHECK(rel("LINESTRING (0 0, 1 1)", "LINESTRING (0 1, 1 2)") == Relation::Disjoint);
    CHECK(rel("POINT (1 0.5)", kSquare) == Relation::Touches);
    CHECK_THROWS_AS(topo_label(wkt("POINT (1 0.5)"), wkt(kSquare)), UnsupportedPair);
    CHECK_THROWS_AS(topo_label(wkt("POINT (1 0.5)"), wkt("POINT (1 0.5)")), UnsupportedPair);
    CHECK_THROWS_AS(topo_label(wkt(kSquare), wkt("POINT (0.5 0.5)")), UnsupportedPair);
}

TEST_CASE("class sets") {
    CHECK(class_count(Task::Topo, PairType::PointPolyline) == 2);
    CHECK(class_count(Task::Topo, PairType::PointPolygon) == 2);
    CHECK(class_count(Task::Topo, PairType::PolylinePolyline) == 2);
    CHECK(class_count(Task::Topo, PairType::PolylinePolygon) == 4);
    CHECK(class_count(Task::Topo, PairType::PolygonPolygon) == 6);
    CHECK(class_count(Task::Topo, PairType::PointPoint) == 0);
    CHECK(class_count(Task::Direction, PairType::PointPoint) == 16);
    CHECK(topo_classes(PairType::PointPolygon) == std::vector<Relation>{Relation::Disjoint, Relation::Contains});
}

TEST_CASE("direction examples") {
    const Geometry o(Point2{0, 0});
    CHECK(dir_label(o, Geometry(Point2{0, 0.5})) == 0);
    CHECK(dir_label(o, Geometry(Point2{0.5, 0})) == 4);
    CHECK(dir_label(o, Geometry(Point2{0.5, 0.5})) == 2);
    CHECK(dir_label(o, Geometry(Point2{0, -0.5})) == 8);
    CHECK(dir_label(o, Geometry(Point2{-0.5, 0})) == 12);
    CHECK_THROWS_AS(dir_label(o, o), CoincidentCentroids);
    // half-open bins: exactly 11.25 degrees east of north starts NNE
    const double t = (90.0 - 11.25) * std::acos(-1.0) / 180.0;
    CHECK(compass_class({0, 0}, {std::cos(t), std::sin(t)}) == 1);
}

TEST_CASE("distance examples") {
    const Geometry sq = wkt(kSquare);
    CHECK(dist_label(sq, sq) == 0.0);
    CHECK(dist_label(Geometry(Point2{0, 0}), Geometry(Point2{0.6, 0.8})) == doctest::Approx(1.0).epsilon(1e-15));
    const Geometry a = wkt("POLYGON ((-0.5 -0.5, 0.5 -0.5, 0.5 0.5, -0.5 0.5, -0.5 -0.5))");
    CHECK(dist_label(a, translated(a, {0.5, 0})) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("antisymmetry, symmetry and metric properties on random pairs") {
    Rng rng(77);
    for (int i = 0; i < 300; ++i) {
        const Geometry a(random_test_polygon(rng, false)), b(random_test_polygon(rng, false));
        const Geometry c(random_point(rng));
        const Relation ab = relate(a, b), ba = relate(b, a);
        if (ab == Relation::Contains) CHECK(ba == Relation::Within);
        else if (ab == Relation::Within) CHECK(ba == Relation::Contains);
        else CHECK(ab == ba);
        if (centroid(a) != centroid(b)) CHECK(dir_label(a, b) == (dir_label(b, a) + 8) % 16);
        CHECK(dist_label(a, b) == dist_label(b, a));
        CHECK(dist_label(a, b) <= dist_label(a, c) + dist_label(c, b) + 1e-15);
    }
}

TEST_CASE("point-polygon generation example") {
    GenConfig cfg;
    cfg.task = Task::Topo;
    cfg.pair_type = PairType::PointPolygon;
    cfg.per_class = 100;
    cfg.seed = 7;
    const LabeledPairSet set = gen_pairs(cfg);
    REQUIRE(set.pairs.size() == 200);
    std::map<int, int> per_class;
    std::map<Split, int> per_split;
    for (const PairSample& s : set.pairs) {
        per_class[*s.topo]++;
        per_split[s.split]++;
        CHECK(topo_label(s.a, s.b) == *s.topo);
    }
    CHECK(per_class[0] == 100);
    CHECK(per_class[1] == 100);
    CHECK(per_split[Split::Train] == 120);
    CHECK(per_split[Split::Val] == 40);
    CHECK(per_split[Split::Test] == 40);
}

TEST_CASE("polygon-polygon generation is verified by the predicates") {
    GenConfig cfg;
    cfg.task = Task::Topo;
    cfg.pair_type = PairType::PolygonPolygon;
    cfg.per_class = 50;
    const LabeledPairSet set = gen_pairs(cfg);
    REQUIRE(set.pairs.size() == 300);
    std::map<int, int> counts;
    for (const PairSample& s : set.pairs) {
        counts[*s.topo]++;
        CHECK(topo_label(s.a, s.b) == *s.topo);
        CHECK_NOTHROW(validate(s.a));
        CHECK_NOTHROW(validate(s.b));
    }
    CHECK(counts.size() == 6);
    for (auto [k, n] : counts) CHECK(n == 50);
}

TEST_CASE("direction generation is verified by the predicates") {
    GenConfig cfg;
    cfg.task = Task::Direction;
    cfg.pair_type = PairType::PointPoint;
    cfg.per_class = 50;
    const LabeledPairSet set = gen_pairs(cfg);
    REQUIRE(set.pairs.size() == 800);
    std::map<int, int> counts;
    for (const PairSample& s : set.pairs) {
        counts[*s.dir]++;
        CHECK(dir_label(s.a, s.b) == *s.dir);
    }
    CHECK(counts.size() == 16);
    for (auto [k, n] : counts) CHECK(n == 50);
}

TEST_CASE("distance generation balances the bins") {
    GenConfig cfg;
    cfg.task = Task::Distance;
    cfg.pair_type = PairType::PointPolygon;
    cfg.per_class = 10;
    const LabeledPairSet set = gen_pairs(cfg);
    REQUIRE(set.pairs.size() == 10 * kDistanceBins);
    std::map<int, int> counts;
    for (const PairSample& s : set.pairs) {
        counts[stratum(s, Task::Distance)]++;
        CHECK(dist_label(s.a, s.b) == *s.dist);
        for (const Point2& p : all_vertices(s.a)) CHECK(BoundingBox{}.contains(p));
        for (const Point2& p : all_vertices(s.b)) CHECK(BoundingBox{}.contains(p));
    }
    for (auto [k, n] : counts) CHECK(n == 10);
}

TEST_CASE("generation is deterministic per seed") {
    GenConfig cfg;
    cfg.task = Task::Topo;
    cfg.pair_type = PairType::PolylinePolygon;
    cfg.per_class = 20;
    cfg.seed = 3;
    std::stringstream a, b, c;
    write_dataset(a, gen_pairs(cfg));
    write_dataset(b, gen_pairs(cfg));
    cfg.seed = 4;
    write_dataset(c, gen_pairs(cfg));
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
}

TEST_CASE("dataset round trip") {
    GenConfig cfg;
    cfg.task = Task::Distance;
    cfg.pair_type = PairType::PolylinePolygon;
    cfg.per_class = 3;
    const LabeledPairSet set = gen_pairs(cfg);
    std::stringstream ss;
    write_dataset(ss, set);
    const std::string text = ss.str();
    const LabeledPairSet back = read_dataset(ss);
    REQUIRE(back.pairs.size() == set.pairs.size());
    CHECK(back.config.task == cfg.task);
    CHECK(back.config.pair_type == cfg.pair_type);
    for (std::size_t i = 0; i < set.pairs.size(); ++i) {
        CHECK(back.pairs[i].a == set.pairs[i].a);
        CHECK(back.pairs[i].b == set.pairs[i].b);
        CHECK(*back.pairs[i].dist == *set.pairs[i].dist);
        CHECK(back.pairs[i].split == set.pairs[i].split);
    }
    std::stringstream again;
    write_dataset(again, back);
    CHECK(again.str() == text);
}

TEST_CASE("dataset errors carry line numbers") {
    GenConfig cfg;
    cfg.per_class = 2;
    std::stringstream ss;
    write_dataset(ss, gen_pairs(cfg));
    std::string text = ss.str();
    // break the third line
    std::size_t pos = 0;
    for (int i = 0; i < 2; ++i) pos = text.find('\n', pos) + 1;
    text.insert(pos, "{oops");
    std::stringstream bad(text);
    try {
        read_dataset(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::stringstream empty("");
    CHECK_THROWS_AS(read_dataset(empty), ParseError);
}

TEST_CASE("task heads") {
    Rng rng(1);
    Mlp2 head = make_mlp2(4, 3, 2, rng);
    const Mlp2 zero = zeros_like(head);
    using Vec = std::vector<double>;
    const Vec logits = head_forward(Vec{1, 2}, Vec{3, 4}, zero);
    CHECK(logits == std::vector<double>{0.0, 0.0});
    // logit 1 = v_b[0] for v_b[0] >= 0
    Mlp2 pass = zeros_like(head);
    pass.l1.w(0, 2) = 1.0;
    pass.l2.w(1, 0) = 1.0;
    CHECK(head_forward(Vec{0.1, 0.2}, Vec{0.7, 0.4}, pass)[1] == 0.7);
    CHECK_THROWS_AS(head_forward(Vec{1, 2, 3}, Vec{1, 2, 3}, head), ShapeMismatch);
    CHECK(check_head_gradients(32, 64, 16, 5, 20).max_rel_error <= 1e-4);
}

TEST_CASE("cross entropy") {
    CHECK(cross_entropy(col({0, 0}), {0}).loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    const LossResult big = cross_entropy(col({1000, 0}), {0});
    CHECK(std::isfinite(big.loss));
    CHECK(big.loss == doctest::Approx(0.0));
    Matrix two = Matrix::Zero(2, 2);
    CHECK(cross_entropy(two, {0, 1}).loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    // gradient: (softmax - onehot) / batch
    const LossResult r = cross_entropy(two, {0, 1});
    CHECK(r.grad(0, 0) == doctest::Approx(-0.25));
    CHECK(r.grad(1, 0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(cross_entropy(col({0, 0}), {2}), ShapeMismatch);
}

TEST_CASE("distance loss") {
    CHECK(mse_distance(col({1, 2}), col({1, 2}), {0.0}).loss == 0.0);
    CHECK(mse_distance(col({0.6, 0.8}), col({0, 0}), {0.0}).loss == doctest::Approx(1.0).epsilon(1e-15));
    const DistanceLoss same = mse_distance(col({1, 2}), col({1, 2}), {0.5});
    CHECK(same.grad_a.isZero());
    CHECK(check_distance_gradients(32, 9, 20).max_rel_error <= 1e-4);
}

TEST_CASE("metrics") {
    const ClassificationMetrics all = classification_metrics({0, 1, 2, 1}, {0, 1, 2, 1}, 3);
    CHECK(all.accuracy == 1.0);
    CHECK(all.f1 == 1.0);
    const ClassificationMetrics zeros = classification_metrics({0, 0, 0, 0}, {0, 1, 0, 1}, 2);
    CHECK(zeros.accuracy == 0.5);
    CHECK(zeros.recall == 0.5);
    CHECK(zeros.precision == 0.25);  // class 1 never predicted: precision 0
    CHECK(mean_absolute_error({0.1, 0.3}, {0.0, 0.5}) == doctest::Approx(0.15).epsilon(1e-15));
    CHECK_THROWS_AS(mean_absolute_error({}, {}), EmptyInput);
    CHECK_THROWS_AS(classification_metrics({}, {}, 2), EmptyInput);
}

TEST_CASE("classes absent from the labels are left out of macro averages with a warning") {
    int warnings = 0;
    const WarningSink prev = set_warning_sink([&](std::string_view) { ++warnings; });
    const ClassificationMetrics m = classification_metrics({0, 1, 1}, {0, 1, 1}, 3);
    set_warning_sink(prev);
    CHECK(m.f1 == 1.0);
    CHECK(warnings == 1);
}

}  // TEST_SUITE
