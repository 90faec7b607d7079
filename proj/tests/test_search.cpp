#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "xyz/errors.hpp"
#include "xyz/oracle.hpp"
#include "xyz/rng.hpp"
#include "xyz/search.hpp"
#include "xyz/synthetic.hpp"
#include "xyz/transforms.hpp"

using namespace xyz;

namespace {

bool contains_pair(const std::vector<InteractionHit>& hits, std::uint32_t a, std::uint32_t b,
                   int sign = +1) {
    return std::any_of(hits.begin(), hits.end(), [&](const InteractionHit& h) {
        return std::min(h.j, h.k) == std::min(a, b) && std::max(h.j, h.k) == std::max(a, b) &&
               h.sign == sign;
    });
}

// Minimal L' with eta(M, L') >= target, by linear scan; the independent
// reference for choose_l.
std::size_t scan_minimal_l(std::size_t m, double gamma, double target) {
    std::size_t l = 1;
    while (discovery_probability(gamma, m, l) < target) ++l;
    return l;
}

} // namespace

TEST_SUITE_BEGIN("search");

TEST_CASE("discovery_probability") {
    CHECK(discovery_probability(1.0, 13, 7) == doctest::Approx(1.0));
    CHECK(discovery_probability(0.8, 5, 1) == doctest::Approx(std::pow(0.8, 5)));
    // miss probability at (gamma, M, L) = (0.85, 21, 100)
    const double miss = 1.0 - discovery_probability(0.85, 21, 100);
    CHECK(miss == doctest::Approx(0.0350825).epsilon(1e-4));
    CHECK(miss < 0.04);
    CHECK(miss > 0.03);
}

TEST_CASE("choose_l") {
    CHECK(choose_l(21, 1.0, 0.97) == 1);
    CHECK(choose_l(1, 0.5, 0.5) == 1);  // eta' = 0.5 with gamma^M = 0.5
    CHECK(choose_l(21, 0.85, 0.97) == 105);

    SUBCASE("matches the minimal-L scan") {
        for (const double gamma : {0.6, 0.8, 0.9, 0.95}) {
            for (const std::size_t m : {1ul, 3ul, 8ul, 15ul}) {
                for (const double eta : {0.5, 0.9, 0.99}) {
                    const std::size_t got = choose_l(m, gamma, eta);
                    CHECK(got == scan_minimal_l(m, gamma, eta));
                    CHECK(discovery_probability(gamma, m, got) >= eta);
                }
            }
        }
    }
    SUBCASE("underflowing gamma^M is refused") {
        CHECK_THROWS_AS(choose_l(64, 1e-5, 0.9), data_error);
    }
    SUBCASE("eta outside [0.5, 1) is refused") {
        CHECK_THROWS_AS(choose_l(4, 0.9, 1.0), data_error);
        CHECK_THROWS_AS(choose_l(4, 0.9, 0.3), data_error);
    }
}

TEST_CASE("expected_complexity") {
    StrengthSample zeros;
    zeros.strengths.assign(100, 0.0);
    const std::size_t n = 128, p = 64;
    SUBCASE("all-zero strengths leave only the fixed terms") {
        const double c = expected_complexity(7, 1, zeros, n, p);
        const double want = static_cast<double>(n * p) + 7.0 * p + p * std::log(double(p));
        CHECK(c == doctest::Approx(want).epsilon(1e-12));
    }
    SUBCASE("doubling L doubles the bracketed term exactly") {
        StrengthSample s;
        s.strengths = {0.3, 0.5, 0.9};
        const double np = static_cast<double>(n * p);
        const double c1 = expected_complexity(5, 10, s, n, p);
        const double c2 = expected_complexity(5, 20, s, n, p);
        CHECK(c2 - np == doctest::Approx(2.0 * (c1 - np)).epsilon(1e-12));
    }
    SUBCASE("uniform strengths 0.5 at M=10 give ~p^2 2^-10 candidates") {
        StrengthSample s;
        s.strengths.assign(50, 0.5);
        const double c = expected_complexity(10, 1, s, n, p);
        const double fixed = static_cast<double>(n * p) + 10.0 * p + p * std::log(double(p));
        const double e1 = (c - fixed) / static_cast<double>(n);
        CHECK(e1 == doctest::Approx(double(p) * double(p) * std::pow(2.0, -10.0)).epsilon(1e-9));
    }
    SUBCASE("empty sample is refused") {
        StrengthSample empty;
        CHECK_THROWS_AS(expected_complexity(5, 1, empty, n, p), data_error);
    }
}

TEST_CASE("optimal_m") {
    SUBCASE("degenerate all-zero sample reduces to the fixed-cost scan") {
        StrengthSample zeros;
        zeros.strengths.assign(32, 0.0);
        const double gamma = 0.9;
        const std::size_t n = 1000, p = 5000;
        const MSelection sel = optimal_m(gamma, zeros, n, p);
        // direct scan of -(Mp + p log p) / log(1 - gamma^M)
        double best = 1e300;
        std::size_t best_m = 0;
        for (std::size_t m = 1; m <= 64; ++m) {
            const double gm = std::pow(gamma, double(m));
            const double obj = (m * double(p) + double(p) * std::log(double(p))) /
                               -std::log1p(-gm);
            if (obj < best) {
                best = obj;
                best_m = m;
            }
        }
        CHECK(sel.m == best_m);
        CHECK(sel.objective == doctest::Approx(best).epsilon(1e-12));
        CHECK(sel.gamma0 == doctest::Approx(std::pow(double(p), -1.0 / double(sel.m))));
    }
    SUBCASE("stable subsample size on a genome-scale strength profile") {
        // Synthetic bulk profile: a flat strength band centered at 0.41,
        // genome-scale dimensions.
        StrengthSample bulk;
        for (int t = -500; t <= 500; ++t) {
            bulk.strengths.push_back(0.41 + 0.05 * (double(t) / 500.0));
        }
        const MSelection sel = optimal_m(0.9, bulk, 859, 687253);
        CHECK(sel.m == 21);
    }
    SUBCASE("empty sample is refused") {
        StrengthSample empty;
        CHECK_THROWS_AS(optimal_m(0.9, empty, 10, 10), data_error);
    }
    SUBCASE("Pareto optimality of the returned M on the plug-in objective") {
        std::mt19937_64 rng = make_stream(77, 0);
        StrengthSample s;
        for (int i = 0; i < 4000; ++i) {
            s.strengths.push_back(0.5 + 0.08 * (uniform_unit(rng) - 0.5));
        }
        const double gamma = 0.85;
        const std::size_t n = 500, p = 20000;
        const MSelection sel = optimal_m(gamma, s, n, p);
        const std::size_t l_star = choose_l(sel.m, gamma, 0.99);
        const double eta_star = discovery_probability(gamma, sel.m, l_star);
        const double c_star = expected_complexity(sel.m, l_star, s, n, p);
        for (std::size_t m = 1; m <= 64; ++m) {
            if (m == sel.m) continue;
            const double gm = std::pow(gamma, double(m));
            if (gm <= 0.0) break;
            const std::size_t l = scan_minimal_l(m, gamma, eta_star);
            CHECK(expected_complexity(m, l, s, n, p) >= c_star * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("runtime_exponent") {
    CHECK(runtime_exponent(0.9, 0.55) == doctest::Approx(1.1762361906751484).epsilon(1e-9));
    CHECK(runtime_exponent(0.85, 0.55) == doctest::Approx(1.271844882956999).epsilon(1e-9));
    CHECK(runtime_exponent(1.0, 0.55) == doctest::Approx(1.0));
    CHECK_THROWS_AS(runtime_exponent(0.5, 0.55), data_error);
}

TEST_CASE("sample_strengths") {
    SUBCASE("identical planted columns give all-ones") {
        const std::size_t n = 32, p = 6;
        PackedMatrix x(n, p);
        std::mt19937_64 rng = make_stream(3, 1);
        for (std::size_t i = 0; i < n; ++i) {
            const int s = (rng() & 1u) ? 1 : -1;
            for (std::size_t j = 0; j < p; ++j) x.set(i, j, s);
        }
        std::vector<std::int8_t> y(n, 1);  // X_j o X_k = 1 everywhere
        const PackedMatrix z = build_z(x, y);
        std::mt19937_64 rng2 = make_stream(4, 1);
        const StrengthSample s = sample_strengths(x, z, 50, rng2);
        for (const double v : s.strengths) CHECK(v == doctest::Approx(1.0));
    }
    SUBCASE("Rademacher bulk sits near one half") {
        std::mt19937_64 rng = make_stream(5, 1);
        const PackedMatrix x = rademacher_matrix(400, 50, rng);
        std::vector<std::int8_t> y(400);
        for (auto& v : y) v = (rng() & 1u) ? 1 : -1;
        const PackedMatrix z = build_z(x, y);
        const StrengthSample s = sample_strengths(x, z, 5000, rng);
        CHECK(s.mean_pow(1) == doctest::Approx(0.5).epsilon(0.02));
    }
    SUBCASE("sampling with replacement beyond the pair count is allowed") {
        std::mt19937_64 rng = make_stream(6, 1);
        const PackedMatrix x = rademacher_matrix(16, 3, rng);
        std::vector<std::int8_t> y(16, 1);
        const PackedMatrix z = build_z(x, y);
        const StrengthSample s = sample_strengths(x, z, 100, rng);
        CHECK(s.strengths.size() == 100);
    }
}

TEST_CASE("xyz_search finds a perfect planted interaction in one repetition") {
    const PlantedBinaryInstance inst = planted_binary_instance(64, 12, 1.0, 7);
    SearchConfig cfg;
    cfg.mode = SearchMode::binary;
    cfg.m = 9;
    cfg.l = 1;
    cfg.gamma = 1.0;
    cfg.seed = 123;
    const SearchReport report = xyz_search(inst.x, std::span<const std::int8_t>(inst.y), cfg);
    REQUIRE(contains_pair(report.hits, 0, 1));
    CHECK(report.hits.front().strength == doctest::Approx(1.0));
    CHECK(report.gamma0 == doctest::Approx(std::pow(12.0, -1.0 / 9.0)));
}

TEST_CASE("planted discovery frequency tracks eta(M,L)") {
    const std::size_t runs = 400;
    const PlantedBinaryInstance inst = planted_binary_instance(100, 64, 0.8, 21);
    SearchConfig cfg;
    cfg.mode = SearchMode::binary;
    cfg.m = 5;
    cfg.l = 10;
    cfg.gamma = 0.8;
    cfg.search_negatives = false;
    cfg.estimate_complexity = false;
    cfg.threads = 1;
    std::size_t found = 0;
    for (std::size_t r = 0; r < runs; ++r) {
        cfg.seed = 1000 + r;
        const SearchReport report = xyz_search(inst.x, std::span<const std::int8_t>(inst.y), cfg);
        if (contains_pair(report.hits, 0, 1)) ++found;
    }
    const double eta = discovery_probability(0.8, 5, 10);  // 0.981131
    const double freq = static_cast<double>(found) / runs;
    const double sd = std::sqrt(eta * (1.0 - eta) / runs);
    CHECK(std::abs(freq - eta) <= 3.0 * sd);
}

TEST_CASE("every emitted hit is at least gamma strong (oracle check)") {
    std::mt19937_64 rng = make_stream(31, 5);
    const PackedMatrix x = rademacher_matrix(96, 40, rng);
    std::vector<std::int8_t> y(96);
    for (auto& v : y) v = (rng() & 1u) ? 1 : -1;
    SearchConfig cfg;
    cfg.mode = SearchMode::binary;
    cfg.m = 2;
    cfg.l = 10;
    cfg.gamma = 0.55;
    cfg.seed = 9;
    const SearchReport report = xyz_search(x, std::span<const std::int8_t>(y), cfg);
    for (const InteractionHit& h : report.hits) {
        double s = oracle::scalar_strength(x, y, h.j, h.k);
        if (h.sign < 0) s = 1.0 - s;
        CHECK(h.strength == doctest::Approx(s).epsilon(1e-12));
        CHECK(s >= cfg.gamma);
    }
}

TEST_CASE("negated pass reports anti-interactions with sign -1") {
    const PlantedBinaryInstance inst = planted_binary_instance(64, 10, 0.0, 13);
    // strength 0 pair: under -Y it is perfect
    SearchConfig cfg;
    cfg.mode = SearchMode::binary;
    cfg.m = 6;
    cfg.l = 2;
    cfg.gamma = 1.0;
    cfg.search_negatives = true;
    cfg.seed = 4;
    const SearchReport report = xyz_search(inst.x, std::span<const std::int8_t>(inst.y), cfg);
    CHECK(contains_pair(report.hits, 0, 1, -1));
    CHECK(!contains_pair(report.hits, 0, 1, +1));
}

TEST_CASE("hit lists are independent of the thread count") {
    const PlantedBinaryInstance inst = planted_binary_instance(128, 48, 0.85, 3);
    SearchConfig cfg;
    cfg.mode = SearchMode::binary;
    cfg.m = 4;
    cfg.l = 16;
    cfg.gamma = 0.7;
    cfg.seed = 77;
    cfg.estimate_complexity = false;
    cfg.threads = 1;
    const SearchReport a = xyz_search(inst.x, std::span<const std::int8_t>(inst.y), cfg);
    cfg.threads = 4;
    const SearchReport b = xyz_search(inst.x, std::span<const std::int8_t>(inst.y), cfg);
    REQUIRE(a.hits.size() == b.hits.size());
    for (std::size_t i = 0; i < a.hits.size(); ++i) {
        CHECK(a.hits[i].j == b.hits[i].j);
        CHECK(a.hits[i].k == b.hits[i].k);
        CHECK(a.hits[i].strength == b.hits[i].strength);
        CHECK(a.hits[i].sign == b.hits[i].sign);
    }
}

TEST_CASE("candidate counts concentrate near the plug-in estimate") {
    std::mt19937_64 rng = make_stream(41, 2);
    const std::size_t n = 256, p = 200, m = 4;
    const PackedMatrix x = rademacher_matrix(n, p, rng);
    std::vector<std::int8_t> y(n);
    for (auto& v : y) v = (rng() & 1u) ? 1 : -1;
    const PackedMatrix z = build_z(x, y);

    // exact expectation of |E_1| over oriented pairs including the diagonal
    double expected = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = 0; k < p; ++k) {
            expected += std::pow(interaction_strength(x, z, j, k), double(m));
        }
    }

    SearchConfig cfg;
    cfg.mode = SearchMode::binary;
    cfg.m = m;
    cfg.l = 50;
    cfg.gamma = 0.99;
    cfg.search_negatives = false;
    cfg.estimate_complexity = false;
    cfg.threads = 1;
    cfg.seed = 1234;
    const SearchReport report = xyz_search(x, std::span<const std::int8_t>(y), cfg);
    const double per_rep =
        static_cast<double>(report.candidates_enumerated) / double(report.repetitions_run);
    CHECK(per_rep == doctest::Approx(expected).epsilon(0.10));

    // and the plug-in p^2 mean(strength^M) tracks the same quantity
    std::mt19937_64 srng = make_stream(43, 2);
    const StrengthSample sample = sample_strengths(x, z, 20000, srng);
    CHECK(double(p) * double(p) * sample.mean_pow(m) == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("candidate guard aborts repetitions instead of truncating") {
    const std::size_t n = 64, p = 32;
    PackedMatrix x(n, p);
    std::mt19937_64 rng = make_stream(51, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const int s = (rng() & 1u) ? 1 : -1;
        for (std::size_t j = 0; j < p; ++j) x.set(i, j, s);  // all columns equal
    }
    std::vector<std::int8_t> y(n, 1);
    SearchConfig cfg;
    cfg.mode = SearchMode::binary;
    cfg.m = 8;
    cfg.l = 3;
    cfg.gamma = 0.9;
    cfg.search_negatives = false;
    cfg.max_candidates_per_rep = 10;  // every repetition collides p^2 pairs
    cfg.seed = 5;
    const SearchReport report = xyz_search(x, std::span<const std::int8_t>(y), cfg);
    CHECK(report.aborted_repetitions == 3);
    CHECK(report.candidates_checked == 0);
    CHECK(report.hits.empty());
}

TEST_CASE("continuous-Y search uses weighted strengths") {
    std::mt19937_64 rng = make_stream(61, 0);
    const std::size_t n = 200, p = 16;
    const PackedMatrix x = rademacher_matrix(n, p, rng);
    RealVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = x.get(i, 0) * x.get(i, 1) * (0.5 + uniform_unit(rng));
    }
    SearchConfig cfg;
    cfg.mode = SearchMode::continuous_y;
    cfg.m = 6;
    cfg.l = 3;
    cfg.gamma = 0.99;
    cfg.seed = 8;
    const SearchReport report = xyz_search(x, y, cfg);
    REQUIRE(contains_pair(report.hits, 0, 1));
    CHECK(report.hits.front().strength == doctest::Approx(1.0));

    SUBCASE("zero response is rejected") {
        RealVector zeros(n, 0.0);
        CHECK_THROWS_AS(xyz_search(x, zeros, cfg), data_error);
    }
}

TEST_CASE("continuous-XY search strength matches the analytic value") {
    std::mt19937_64 rng = make_stream(71, 0);
    const std::size_t n = 10000, p = 6;
    const RealMatrix x = uniform_matrix(n, p, rng);
    RealVector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x(i, 0) * x(i, 1);

    SearchConfig cfg;
    cfg.mode = SearchMode::continuous_xy;
    cfg.transform = BinarizeTransform::unbiased;
    cfg.m = 2;
    cfg.l = 12;
    cfg.gamma = 0.70;
    cfg.seed = 15;
    cfg.search_negatives = false;
    const SearchReport report = xyz_search(x, y, cfg);
    REQUIRE(contains_pair(report.hits, 0, 1));
    for (const InteractionHit& h : report.hits) {
        if (std::min(h.j, h.k) == 0 && std::max(h.j, h.k) == 1) {
            CHECK(h.strength == doctest::Approx(13.0 / 18.0).epsilon(0.03));
        }
    }

    SUBCASE("unbiased transform requires entries in [-1,1]") {
        RealMatrix big(4, 2);
        big(0, 0) = 2.0;
        RealVector yy(4, 1.0);
        CHECK_THROWS_AS(xyz_search(big, yy, cfg), data_error);
    }
}

TEST_CASE("continuous-XY sign transform recovers a sign-pattern interaction") {
    std::mt19937_64 rng = make_stream(81, 0);
    const std::size_t n = 500, p = 8;
    const RealMatrix x = gaussian_matrix(n, p, rng);
    RealVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s0 = x(i, 0) > 0 ? 1.0 : -1.0;
        const double s1 = x(i, 1) > 0 ? 1.0 : -1.0;
        y[i] = s0 * s1 * (0.2 + uniform_unit(rng));
    }
    SearchConfig cfg;
    cfg.mode = SearchMode::continuous_xy;
    cfg.transform = BinarizeTransform::sign;
    cfg.m = 4;
    cfg.l = 2;
    cfg.gamma = 0.999;
    cfg.seed = 30;
    cfg.search_negatives = false;
    const SearchReport report = xyz_search(x, y, cfg);
    REQUIRE(contains_pair(report.hits, 0, 1));
    CHECK(report.hits.front().strength == doctest::Approx(1.0));
}

TEST_CASE("config validation") {
    SearchConfig cfg;
    cfg.mode = SearchMode::binary;
    cfg.transform = BinarizeTransform::sign;
    CHECK_THROWS_AS(cfg.validate(), data_error);  // transform outside continuous-XY

    SearchConfig cfg2;
    cfg2.mode = SearchMode::continuous_xy;
    cfg2.transform = BinarizeTransform::none;
    CHECK_THROWS_AS(cfg2.validate(), data_error);

    SearchConfig cfg3;
    cfg3.m = 65;
    CHECK_THROWS_AS(cfg3.validate(), data_error);

    SearchConfig cfg4;
    cfg4.gamma = 0.0;
    CHECK_THROWS_AS(cfg4.validate(), data_error);
}

TEST_SUITE_END();
