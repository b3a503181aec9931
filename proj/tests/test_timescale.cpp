#include "doctest.h"

#include <cmath>
#include <limits>

#include "tsnoether/errors.hpp"
#include "tsnoether/timescale.hpp"

using namespace tsn;

TEST_CASE("jump operators on a geometric scale") {
    const ScalePtr ts = make_timescale({1, 2, 4, 8});
    CHECK(ts->size() == 4);
    CHECK(ts->a() == 1);
    CHECK(ts->b() == 8);

    // sigma clamps at the maximum, rho at the minimum
    CHECK(ts->sigma(0) == 2);
    CHECK(ts->sigma(2) == 8);
    CHECK(ts->sigma(3) == 8);
    CHECK(ts->rho(0) == 1);
    CHECK(ts->rho(1) == 1);
    CHECK(ts->rho(3) == 4);

    CHECK(ts->mu(0) == 1);
    CHECK(ts->mu(1) == 2);
    CHECK(ts->mu(2) == 4);
    CHECK(ts->mu(3) == 0);
    CHECK(ts->nu(0) == 0);
    CHECK(ts->nu(1) == 1);
    CHECK(ts->nu(2) == 2);
    CHECK(ts->nu(3) == 4);

    CHECK(ts->sigma_index(1) == 2);
    CHECK(ts->sigma_index(3) == 3);
    CHECK(ts->rho_index(2) == 1);
    CHECK(ts->rho_index(0) == 0);
}

TEST_CASE("point lookup") {
    const ScalePtr ts = make_timescale({1, 2, 4, 8});
    CHECK(ts->index_of(4).value() == 2);
    CHECK(!ts->index_of(3).has_value());
    CHECK(ts->require_index(8) == 3);
    CHECK_THROWS_AS(ts->require_index(5), PointNotInScale);
    CHECK(ts->points().size() == 4);
    CHECK(ts->point(1) == 2);
}

TEST_CASE("construction validates") {
    CHECK_THROWS_AS(make_timescale({1, 2}), TooFewPoints);
    CHECK_THROWS_AS(make_timescale({1, 2, 2, 3}), DuplicatePoint);
    CHECK_THROWS_AS(make_timescale({1, std::numeric_limits<double>::quiet_NaN(), 3}),
                    NonFiniteValue);
    // unsorted input is sorted, not rejected
    const ScalePtr ts = make_timescale({3, 1, 2});
    CHECK(ts->point(0) == 1);
    CHECK(ts->point(2) == 3);
}

TEST_CASE("uniform scale") {
    const ScalePtr ts = uniform_scale(0.0, 1.0, 0.25);
    CHECK(ts->size() == 5);
    CHECK(ts->point(4) == 1.0); // right endpoint stored exactly
    CHECK(ts->mu(1) == 0.25);

    CHECK_THROWS_AS(uniform_scale(1.0, 1.0, 0.1), ReversedBounds);
    CHECK_THROWS_AS(uniform_scale(0.0, 1.0, 0.3), NonDivisibleRange);
    CHECK_THROWS_AS(uniform_scale(0.0, 1.0, -0.1), NonDivisibleRange);
    CHECK_THROWS_AS(uniform_scale(0.0, 1.0, 1.0), TooFewPoints);
}

TEST_CASE("dyadic scale") {
    const ScalePtr ts = dyadic_scale(0, 3);
    CHECK(ts->size() == 4);
    CHECK(ts->point(0) == 1);
    CHECK(ts->point(3) == 8);
    const ScalePtr neg = dyadic_scale(-2, 1);
    CHECK(neg->point(0) == 0.25);
    CHECK(neg->point(3) == 2);
    CHECK_THROWS_AS(dyadic_scale(3, 1), ReversedBounds);
    CHECK_THROWS_AS(dyadic_scale(0, 1), TooFewPoints);
}

TEST_CASE("image scale") {
    const ScalePtr ts = make_timescale({1, 2, 3});
    const ScalePtr sq = image_scale(*ts, [](double t) { return t * t; });
    CHECK(sq->point(0) == 1);
    CHECK(sq->point(1) == 4);
    CHECK(sq->point(2) == 9);

    CHECK_THROWS_AS(image_scale(*ts, [](double t) { return -t; }), NotStrictlyIncreasing);
    CHECK_THROWS_AS(image_scale(*ts, [](double) { return 1.0; }), NotStrictlyIncreasing);
    CHECK_THROWS_AS(image_scale(*ts, [](double t) { return 1.0 / (t - 2.0); }), NonFiniteValue);
}
