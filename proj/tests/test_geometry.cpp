#include <cmath>

#include "doctest.h"
#include "polyenc/fusion.hpp"
#include "polyenc/io.hpp"
#include "polyenc/tasks.hpp"

using namespace polyenc;

TEST_SUITE("geometry") {

TEST_CASE("parse point literal") {
    const Geometry g = parse_geometry("POINT (0.5 -0.25)", TextFormat::WKT);
    REQUIRE(g.kind() == GeometryKind::Point);
    CHECK(g.point() == Point2{0.5, -0.25});
}

TEST_CASE("parse unit square") {
    const Geometry g = parse_geometry("POLYGON ((0 0, 1 0, 1 1, 0 1, 0 0))", TextFormat::WKT);
    REQUIRE(g.kind() == GeometryKind::Polygon);
    CHECK(g.polygon().exterior.size() == 5);
    CHECK(signed_area(g.polygon().exterior) == 1.0);
}

TEST_CASE("clockwise input comes back counter-clockwise") {
    const Geometry g = parse_geometry("POLYGON ((0 0, 0 1, 1 1, 1 0, 0 0), (0.2 0.2, 0.4 0.2, 0.4 0.4, 0.2 0.2))");
    CHECK(signed_area(g.polygon().exterior) > 0.0);
    CHECK(signed_area(g.polygon().holes.at(0)) < 0.0);
}

TEST_CASE("single-vertex linestring is rejected") {
    CHECK_THROWS_AS(parse_geometry("LINESTRING (0 0)", TextFormat::WKT), ValidationError);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_geometry("POINT (1", TextFormat::WKT), ParseError);
    CHECK_THROWS_AS(parse_geometry("GEOMETRYCOLLECTION (POINT (1 2))", TextFormat::WKT), UnsupportedGeometry);
    CHECK_THROWS_AS(parse_geometry(R"({"type":"GeometryCollection","geometries":[]})", TextFormat::GeoJSON),
                    UnsupportedGeometry);
    CHECK_THROWS_AS(parse_geometry("POLYGON ((0 0, 1 1, 1 0, 0 1, 0 0))"), ValidationError);  // bow tie
    CHECK_THROWS_AS(parse_geometry("POLYGON ((0 0, 1 0, 1 1, 0 1))"), ValidationError);       // open ring
    CHECK_THROWS_AS(parse_geometry("POINT (nan 0)"), Error);
}

TEST_CASE("hole outside the exterior is rejected") {
    CHECK_THROWS_AS(parse_geometry("POLYGON ((0 0, 1 0, 1 1, 0 1, 0 0), (2 2, 3 2, 3 3, 2 2))"), ValidationError);
}

TEST_CASE("GeoJSON and WKT agree") {
    const Geometry a = parse_geometry(R"({"type":"LineString","coordinates":[[0,0],[1,0],[1,1]]})");
    const Geometry b = parse_geometry("LINESTRING (0 0, 1 0, 1 1)");
    CHECK(a == b);
}

TEST_CASE("duplicate polyline vertices are kept but a zero-length polyline is not") {
    CHECK_NOTHROW(parse_geometry("LINESTRING (0 0, 0 0, 1 0)"));
    CHECK_THROWS_AS(parse_geometry("LINESTRING (0 0, 0 0)"), ValidationError);
}

TEST_CASE("normalize examples") {
    const BoundingBox box{3.0, -2.0, 7.0, 6.0};
    CHECK(normalize(Point2{3.0, -2.0}, box) == Point2{-1.0, -1.0});
    CHECK(normalize(Point2{5.0, 2.0}, box) == Point2{0.0, 0.0});
    const Geometry sq = parse_geometry("POLYGON ((2 2, 4 2, 4 4, 2 4, 2 2))");
    const Polygon out = normalize(sq, BoundingBox{0, 0, 10, 10}).polygon();
    for (const Point2& p : out.exterior) {
        CHECK((std::abs(p.x + 0.6) < 1e-15 || std::abs(p.x + 0.2) < 1e-15));
        CHECK((std::abs(p.y + 0.6) < 1e-15 || std::abs(p.y + 0.2) < 1e-15));
    }
    CHECK(signed_area(out.exterior) == doctest::Approx(0.16).epsilon(1e-12));
    CHECK_THROWS_AS(normalize(Point2{0, 0}, BoundingBox{0, 0, 0, 1}), DegenerateBBox);
}

TEST_CASE("normalize is idempotent on the unit box") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const Polygon pg = random_polygon(rng, random_point(rng, -0.5, 0.5), 0.4, false);
        const Geometry once = normalize(Geometry(pg), BoundingBox{});
        const auto a = all_vertices(Geometry(pg)), b = all_vertices(once);
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(std::abs(a[k].x - b[k].x) <= 1e-12);
            CHECK(std::abs(a[k].y - b[k].y) <= 1e-12);
        }
    }
}

TEST_CASE("centroid examples") {
    CHECK(centroid(Geometry(Point2{0.3, 0.7})) == Point2{0.3, 0.7});
    const Point2 c = centroid(parse_geometry("POLYGON ((0 0, 1 0, 1 1, 0 1, 0 0))"));
    CHECK(c.x == doctest::Approx(0.5));
    CHECK(c.y == doctest::Approx(0.5));
    const Point2 pl = centroid(parse_geometry("LINESTRING (0 0, 1 0, 1 1)"));
    CHECK(pl.x == doctest::Approx(0.75));
    CHECK(pl.y == doctest::Approx(0.25));
}

TEST_CASE("centroid of a polygon with a hole") {
    // 4x4 square minus [1,2]^2: moments 16*(2,2) - 1*(1.5,1.5) over area 15.
    const Point2 c2 = centroid(parse_geometry("POLYGON ((0 0, 4 0, 4 4, 0 4, 0 0), (1 1, 1 2, 2 2, 2 1, 1 1))"));
    CHECK(c2.x == doctest::Approx((16.0 * 2.0 - 1.5) / 15.0));
    CHECK(c2.y == doctest::Approx((16.0 * 2.0 - 1.5) / 15.0));
}

TEST_CASE("centroid lies in the bounding box") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const Geometry g = i % 2 ? Geometry(random_polyline(rng, random_point(rng, -0.5, 0.5), 0.4))
                                 : Geometry(random_polygon(rng, random_point(rng, -0.5, 0.5), 0.4, false));
        CHECK(bounding_box(g).contains(centroid(g)));
    }
}

TEST_CASE("signed area examples") {
    const Ring sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
    CHECK(signed_area(sq) == 1.0);
    CHECK(signed_area(reversed(sq)) == -1.0);
    CHECK(signed_area(Ring{{0, 0}, {1, 0}, {1, 1}, {0, 0}}) == 0.5);
}

TEST_CASE("reversing a ring negates its area exactly") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Ring r = random_polygon(rng, random_point(rng, -0.5, 0.5), 0.5, false).exterior;
        CHECK(signed_area(reversed(r)) == -signed_area(r));
    }
}

TEST_CASE("WKT and GeoJSON round trip exactly") {
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        const Point2 c = random_point(rng, -0.5, 0.5);
        const Geometry gs[] = {Geometry(Point2{rng.uniform(-1, 1), rng.uniform(-1, 1)}),
                               Geometry(random_polyline(rng, c, 0.4)),
                               validate(Geometry(random_polygon(rng, c, 0.4, false)))};
        for (const Geometry& g : gs) {
            CHECK(parse_geometry(to_wkt(g)) == g);
            CHECK(parse_geometry(to_geojson(g)) == g);
        }
    }
    const Geometry mp = parse_geometry("MULTIPOLYGON (((0 0, 1 0, 1 1, 0 0)), ((2 2, 3 2, 3 3, 2 2)))");
    CHECK(parse_geometry(to_wkt(mp)) == mp);
    CHECK(parse_geometry(to_geojson(mp)) == mp);
}

}  // TEST_SUITE
