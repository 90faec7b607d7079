#include "doctest.h"

#include <cmath>

#include "xyz/errors.hpp"
#include "xyz/rng.hpp"
#include "xyz/transforms.hpp"

using namespace xyz;

TEST_SUITE_BEGIN("transforms");

TEST_CASE("sign_transform takes signs and flips fair coins on zeros") {
    RealMatrix x(3, 1);
    x(0, 0) = 0.3;
    x(1, 0) = -2.1;
    x(2, 0) = 7.0;
    std::mt19937_64 rng = make_stream(1, 0);
    const PackedMatrix t = sign_transform(x, rng);
    CHECK(t.get(0, 0) == +1);
    CHECK(t.get(1, 0) == -1);
    CHECK(t.get(2, 0) == +1);

    SUBCASE("deterministic under a fixed seed") {
        RealMatrix zeros(64, 2);
        std::mt19937_64 a = make_stream(42, 7), b = make_stream(42, 7);
        CHECK(sign_transform(zeros, a) == sign_transform(zeros, b));
    }
    SUBCASE("zero entries are unbiased") {
        RealMatrix zeros(10000, 1);
        std::mt19937_64 r = make_stream(3, 0);
        const PackedMatrix t0 = sign_transform(zeros, r);
        double mean = 0.0;
        for (std::size_t i = 0; i < 10000; ++i) mean += t0.get(i, 0);
        mean /= 10000.0;
        CHECK(std::abs(mean) <= 0.03);  // 3 binomial std at 1e4 draws
    }
}

TEST_CASE("unbiased transform endpoints and mean") {
    std::mt19937_64 rng = make_stream(5, 0);

    SUBCASE("entry 1 always maps to +1, entry -1 to -1") {
        RealMatrix x(100, 2);
        for (std::size_t i = 0; i < 100; ++i) {
            x(i, 0) = 1.0;
            x(i, 1) = -1.0;
        }
        const PackedMatrix t = unbiased_transform_sample(x, rng);
        for (std::size_t i = 0; i < 100; ++i) {
            CHECK(t.get(i, 0) == +1);
            CHECK(t.get(i, 1) == -1);
        }
    }
    SUBCASE("E[transform] = x at x = 0.5") {
        RealMatrix x(100000, 1);
        for (std::size_t i = 0; i < 100000; ++i) x(i, 0) = 0.5;
        const PackedMatrix t = unbiased_transform_sample(x, rng);
        double mean = 0.0;
        for (std::size_t i = 0; i < 100000; ++i) mean += t.get(i, 0);
        mean /= 100000.0;
        CHECK(std::abs(mean - 0.5) <= 0.01);
    }
    SUBCASE("column means converge to the column entries") {
        const std::vector<double> values{-0.9, -0.2, 0.0, 0.4, 0.8};
        const std::size_t draws = 20000;
        for (const double v : values) {
            std::mt19937_64 value_rng =
                make_stream(6, static_cast<std::uint64_t>((v + 1.0) * 1000));
            RealMatrix x(draws, 1);
            for (std::size_t i = 0; i < draws; ++i) x(i, 0) = v;
            const PackedMatrix t = unbiased_transform_sample(x, value_rng);
            double mean = 0.0;
            for (std::size_t i = 0; i < draws; ++i) mean += t.get(i, 0);
            mean /= static_cast<double>(draws);
            const double sd = std::sqrt((1.0 - v * v) / static_cast<double>(draws));
            CHECK(std::abs(mean - v) <= 3.0 * sd + 1e-9);
        }
    }
    SUBCASE("out-of-range entries rejected") {
        RealMatrix x(1, 1);
        x(0, 0) = 1.5;
        CHECK_THROWS_AS(unbiased_transform_sample(x, rng), data_error);
    }
}

TEST_CASE("rescale_rows") {
    SUBCASE("hand example") {
        RealMatrix x(1, 2);
        x(0, 0) = 2.0;
        x(0, 1) = -4.0;
        const auto [xs, ys] = rescale_rows(x, RealVector{1.0});
        CHECK(xs(0, 0) == doctest::Approx(0.5));
        CHECK(xs(0, 1) == doctest::Approx(-1.0));
        CHECK(ys[0] == doctest::Approx(16.0));
    }
    SUBCASE("row already scaled is unchanged") {
        RealMatrix x(1, 2);
        x(0, 0) = 1.0;
        x(0, 1) = -0.3;
        const auto [xs, ys] = rescale_rows(x, RealVector{2.0});
        CHECK(xs(0, 0) == doctest::Approx(1.0));
        CHECK(xs(0, 1) == doctest::Approx(-0.3));
        CHECK(ys[0] == doctest::Approx(2.0));
    }
    SUBCASE("all-zero row names the row") {
        RealMatrix x(2, 2);
        x(0, 0) = 1.0;
        CHECK_THROWS_WITH_AS(static_cast<void>(rescale_rows(x, RealVector{1.0, 1.0})),
                             doctest::Contains("row 1"), data_error);
    }
}

TEST_CASE("cap_entries clamps into [-c, c]") {
    RealMatrix x(1, 2);
    x(0, 0) = 3.0;
    x(0, 1) = -0.2;
    const RealMatrix capped = cap_entries(x, 1.0);
    CHECK(capped(0, 0) == doctest::Approx(1.0));
    CHECK(capped(0, 1) == doctest::Approx(-0.2));

    RealMatrix y(1, 2);
    y(0, 0) = -5.0;
    y(0, 1) = 5.0;
    const RealMatrix capped2 = cap_entries(y, 2.0);
    CHECK(capped2(0, 0) == doctest::Approx(-2.0));
    CHECK(capped2(0, 1) == doctest::Approx(2.0));

    SUBCASE("cap at max|X| is the identity") {
        const RealMatrix same = cap_entries(y, 5.0);
        CHECK(same(0, 0) == y(0, 0));
        CHECK(same(0, 1) == y(0, 1));
    }
    SUBCASE("nonpositive cap rejected") {
        CHECK_THROWS_AS(cap_entries(y, 0.0), data_error);
    }
}

TEST_SUITE_END();
