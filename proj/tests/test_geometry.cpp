#include <catch_amalgamated.hpp>

#include "curseval/geometry.hpp"

using namespace curseval;

TEST_CASE("denormalize matches hand-computed values") {
    // 500/1000 of 800 = 400, 250/1000 of 600 = 150, etc.
    PixelBox b = denormalize({500, 250, 750, 500}, 800, 600);
    CHECK(b.x0 == Catch::Approx(400.0));
    CHECK(b.y0 == Catch::Approx(150.0));
    CHECK(b.x1 == Catch::Approx(600.0));
    CHECK(b.y1 == Catch::Approx(300.0));

    // Degenerate point at the default canvas size: 500/1000 of 1344 = 672.
    PixelBox p = denormalize(NormalizedBox::point(500, 500), 1344, 1344);
    CHECK(p.x0 == Catch::Approx(672.0));
    CHECK(p.x1 == Catch::Approx(672.0));
    CHECK(p.degenerate());
}

TEST_CASE("normalize and denormalize round-trip") {
    PixelBox b{123.5, 67.25, 900.0, 1200.75};
    NormalizedBox n = normalize(b, 1344, 1344);
    PixelBox back = denormalize(n, 1344, 1344);
    CHECK(back.x0 == Catch::Approx(b.x0));
    CHECK(back.y0 == Catch::Approx(b.y0));
    CHECK(back.x1 == Catch::Approx(b.x1));
    CHECK(back.y1 == Catch::Approx(b.y1));
}

TEST_CASE("non-positive dimensions are rejected") {
    CHECK_THROWS_AS(denormalize({0, 0, 1, 1}, 0, 100), std::invalid_argument);
    CHECK_THROWS_AS(denormalize({0, 0, 1, 1}, 100, -5), std::invalid_argument);
    CHECK_THROWS_AS(normalize({0, 0, 1, 1}, 0, 100), std::invalid_argument);
    CHECK_THROWS_AS(physical_point({1, 1}, 0.0), std::invalid_argument);
}

TEST_CASE("distances: 3-4-5 oracle") {
    PixelBox box{0, 0, 2, 2};
    auto d = distances({5, 6}, box);
    CHECK(d.to_box == Catch::Approx(5.0));       // dx=3, dy=4
    CHECK(d.to_center == Catch::Approx(std::hypot(4.0, 5.0)));

    // Inside the box: dist_box 0, dist_center positive.
    auto in = distances({0.5, 1.0}, box);
    CHECK(in.to_box == 0.0);
    CHECK(in.to_center == Catch::Approx(std::hypot(0.5, 0.0)));
}

TEST_CASE("degenerate box distances collapse to the point distance") {
    PixelBox pt{10, 20, 10, 20};
    auto d = distances({13, 24}, pt);
    CHECK(d.to_box == Catch::Approx(5.0));
    CHECK(d.to_center == Catch::Approx(5.0));
}

TEST_CASE("hit_test tolerance boundary is inclusive") {
    PixelBox pt{100, 100, 100, 100};
    CHECK(hit_test({104, 100}, pt, 4, 9));
    CHECK(hit_test({96, 109}, pt, 4, 9));
    CHECK_FALSE(hit_test({104.01, 100}, pt, 4, 9));
    CHECK_FALSE(hit_test({100, 109.01}, pt, 4, 9));

    PixelBox box{10, 10, 20, 30};
    CHECK(hit_test({22, 30}, box, 2, 0));
    CHECK_FALSE(hit_test({22.5, 30}, box, 2, 0));
}

TEST_CASE("round_half_away rounds halves away from zero") {
    CHECK(round_half_away(0.5) == 1);
    CHECK(round_half_away(-0.5) == -1);
    CHECK(round_half_away(2.5) == 3);
    CHECK(round_half_away(2.4) == 2);
    CHECK(round_half_away(-2.5) == -3);
}

TEST_CASE("physical_point scales by device pixel ratio") {
    PixelPoint p = physical_point({100, 50}, 1.5);
    CHECK(p.x == Catch::Approx(150.0));
    CHECK(p.y == Catch::Approx(75.0));
}
