// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not tuned at run time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "support/reference_lasso.hpp"
#include "xyz/experiments.hpp"
#include "xyz/lasso.hpp"
#include "xyz/oracle.hpp"
#include "xyz/pair_search.hpp"
#include "xyz/projection.hpp"
#include "xyz/rng.hpp"
#include "xyz/search.hpp"
#include "xyz/synthetic.hpp"
#include "xyz/transforms.hpp"

using namespace xyz;

namespace {

int failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

bool has_pair(const std::vector<InteractionHit>& hits, std::uint32_t a, std::uint32_t b) {
    return std::any_of(hits.begin(), hits.end(), [&](const InteractionHit& h) {
        return std::min(h.j, h.k) == a && std::max(h.j, h.k) == b;
    });
}

// --------------------------------------------------------------- criterion 1
void criterion_1() {
    const double t0 = now_seconds();
    const std::size_t n = 128, p = 64, instances = 50;
    const double gamma = 0.95;
    std::size_t found_planted = 0;
    bool all_sound = true;

    for (std::size_t inst_i = 0; inst_i < instances; ++inst_i) {
        const PlantedBinaryInstance inst = planted_binary_instance(n, p, gamma, 9000 + inst_i);
        const PackedMatrix z = build_z(inst.x, inst.y);

        std::mt19937_64 srng = make_stream(9000 + inst_i, 0xabc);
        const StrengthSample sample = sample_strengths(inst.x, z, 10 * p, srng);
        const MSelection sel = optimal_m(gamma, sample, n, p);

        SearchConfig cfg;
        cfg.mode = SearchMode::binary;
        cfg.m = sel.m;
        cfg.l = choose_l(sel.m, gamma, 0.99);
        cfg.gamma = gamma;
        cfg.search_negatives = false;
        cfg.estimate_complexity = false;
        cfg.seed = 700 + inst_i;
        const SearchReport rep = xyz_search(inst.x, std::span<const std::int8_t>(inst.y), cfg);

        oracle::BruteForceOptions opt;
        opt.gamma = gamma;
        const auto truth = oracle::brute_force_search(
            inst.x, std::span<const std::int8_t>(inst.y), opt);
        std::set<std::pair<std::uint32_t, std::uint32_t>> confirmed;
        for (const auto& s : truth.pairs) confirmed.insert({s.j, s.k});
        for (const InteractionHit& h : rep.hits) {
            const auto lo = std::min(h.j, h.k), hi = std::max(h.j, h.k);
            if (!confirmed.contains({lo, hi})) all_sound = false;
        }
        if (has_pair(rep.hits, 0, 1)) ++found_planted;
    }
    const double elapsed = now_seconds() - t0;
    const double rate = double(found_planted) / double(instances);
    const bool pass = all_sound && rate >= 0.95 && elapsed < 10.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "sound=%s planted_rate=%.2f elapsed=%.2fs",
                  all_sound ? "yes" : "NO", rate, elapsed);
    report(1, "oracle soundness and planted discovery", pass, buf);
}

// --------------------------------------------------------------- criterion 2
void criterion_2() {
    struct Config { double gamma; std::size_t m, l; };
    const std::vector<Config> configs = {{0.8, 5, 10}, {0.9, 8, 20}, {1.0, 10, 1}};
    const std::size_t runs = 1000, n = 100, p = 64;
    bool pass = true;
    std::string detail;
    for (const auto& c : configs) {
        const PlantedBinaryInstance inst =
            planted_binary_instance(n, p, c.gamma, 4200 + std::size_t(c.gamma * 100));
        SearchConfig cfg;
        cfg.mode = SearchMode::binary;
        cfg.m = c.m;
        cfg.l = c.l;
        cfg.gamma = inst.planted_strength;
        cfg.search_negatives = false;
        cfg.estimate_complexity = false;
        std::size_t found = 0;
        for (std::size_t r = 0; r < runs; ++r) {
            cfg.seed = 100000 + r;
            const SearchReport rep =
                xyz_search(inst.x, std::span<const std::int8_t>(inst.y), cfg);
            if (has_pair(rep.hits, 0, 1)) ++found;
        }
        const double eta = discovery_probability(c.gamma, c.m, c.l);
        const double freq = double(found) / double(runs);
        const double sd = std::sqrt(eta * (1.0 - eta) / double(runs));
        const bool ok = std::abs(freq - eta) <= 3.0 * sd + 1e-12;
        pass = pass && ok;
        char buf[96];
        std::snprintf(buf, sizeof buf, " (%.1f,%zu,%zu):%.4f vs %.4f", c.gamma, c.m, c.l, freq,
                      eta);
        detail += buf;
    }
    report(2, "discovery law eta(M,L) = 1-(1-gamma^M)^L", pass, detail);
}

// --------------------------------------------------------------- criterion 3
void criterion_3() {
    const double t0 = now_seconds();
    const std::vector<std::size_t> ps = {1000, 2000, 4000, 8000, 16000};
    const ScalingResult result = run_scaling_suite(ps, 1000, 0.9, 0.55, 5, 77);
    const double elapsed = now_seconds() - t0;
    bool found_all = true;
    for (const auto& pt : result.points) found_all = found_all && pt.planted_found_in_all_runs;
    const bool pass = found_all && elapsed < 600.0 &&
                      std::abs(result.fitted_slope - result.predicted_exponent) <= 0.15;
    char buf[160];
    std::snprintf(buf, sizeof buf, "slope=%.3f predicted=%.3f elapsed=%.1fs",
                  result.fitted_slope, result.predicted_exponent, elapsed);
    report(3, "runtime scaling exponent", pass, buf);
}

// --------------------------------------------------------------- criterion 4
void criterion_4() {
    const std::vector<std::size_t> ps = {100, 1000, 10000};
    const std::vector<double> gammas = {0.6, 0.7, 0.8, 0.9, 0.95};
    const std::size_t trials = 20000, n = 1000;
    const auto points = run_gauss_vs_minimal(ps, gammas, n, 1000, trials, 31337);

    bool analytic_ok = true, empirical_ok = true;
    for (const auto& pt : points) {
        if (!(pt.eta_minimal > pt.eta_gauss)) analytic_ok = false;
        if (pt.has_empirical) {
            const double sd_min =
                std::sqrt(std::max(pt.emp_minimal * (1 - pt.emp_minimal), 1e-9) / trials);
            const double sd_gauss =
                std::sqrt(std::max(pt.emp_gauss * (1 - pt.emp_gauss), 1e-9) / trials);
            if (!(pt.emp_minimal - 3 * sd_min > pt.emp_gauss + 3 * sd_gauss)) {
                empirical_ok = false;
            }
            // empirical values must agree with their own formulas as well
            const double sd_m = std::sqrt(pt.eta_minimal * (1 - pt.eta_minimal) / trials);
            if (std::abs(pt.emp_minimal - pt.eta_minimal) > 4 * sd_m + 1e-9) empirical_ok = false;
        }
    }
    const bool pass = analytic_ok && empirical_ok;
    char buf[96];
    std::snprintf(buf, sizeof buf, "analytic=%s empirical(p=1000)=%s",
                  analytic_ok ? "ok" : "VIOLATED", empirical_ok ? "ok" : "VIOLATED");
    report(4, "minimal subsampling dominates dense Gaussian at matched budget", pass, buf);
}

// --------------------------------------------------------------- criterion 5
void criterion_5() {
    // (a) noiseless uniform product, unbiased transform, measured match rate
    bool pass_a = false;
    double freq = 0.0;
    {
        const std::size_t n = 10000, draws = 100000;
        std::mt19937_64 rng = make_stream(555, 0);
        const RealMatrix x = uniform_matrix(n, 2, rng);
        RealVector y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = x(i, 0) * x(i, 1);
        const WeightedSampler sampler = WeightedSampler::from_magnitudes(y);
        std::size_t matches = 0;
        for (std::size_t t = 0; t < draws; ++t) {
            const std::size_t i = sampler.sample(rng);
            const int t1 = uniform_unit(rng) < (x(i, 0) + 1.0) / 2.0 ? 1 : -1;
            const int t2 = uniform_unit(rng) < (x(i, 1) + 1.0) / 2.0 ? 1 : -1;
            const int sy = y[i] > 0.0 ? 1 : -1;
            if (sy == t1 * t2) ++matches;
        }
        freq = double(matches) / double(draws);
        pass_a = std::abs(freq - 13.0 / 18.0) <= 0.02;
    }
    // (b) binary X with unit Gaussian noise: the tabulated strength is the
    // per-row sign agreement rate, (1 + P(|eps| < 1))/2 = 0.8413. The
    // |Y|-weighted match probability the search actually operates at is
    // larger (rows where the noise flips the sign tend to have small |Y|);
    // its analytic value under this model is 0.9286, checked alongside.
    bool pass_b = false;
    double measured = 0.0, weighted = 0.0;
    {
        const std::size_t n = 100000;
        std::mt19937_64 rng = make_stream(556, 0);
        const PackedMatrix x = rademacher_matrix(n, 2, rng);
        std::normal_distribution<double> noise(0.0, 1.0);
        RealVector y(n);
        std::size_t agree = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int prod = x.get(i, 0) * x.get(i, 1);
            y[i] = prod + noise(rng);
            const int sy = y[i] > 0.0 ? 1 : (y[i] < 0.0 ? -1 : 0);
            if (sy == prod) ++agree;
        }
        measured = double(agree) / double(n);
        weighted = weighted_interaction_strength(x, y, 0, 1);
        pass_b = std::abs(measured - 0.8413447460685429) <= 0.01 &&
                 std::abs(weighted - 0.9286) <= 0.01;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "match_rate=%.4f vs %.4f; gamma_tilde=%.4f vs 0.8413 (weighted %.4f vs 0.9286)",
                  freq, 13.0 / 18.0, measured, weighted);
    report(5, "continuous transforms hit their analytic strengths", pass_a && pass_b, buf);
}

// --------------------------------------------------------------- criterion 6
void criterion_6() {
    const std::size_t instances = 20, n = 300, p = 100;
    std::size_t certified = 0, total_points = 0, matched = 0;
    double worst_diff = 0.0;
    double xyz_err_sum = 0.0, two_stage_err_sum = 0.0;
    bool solver_ok = true;

    for (std::size_t inst_i = 0; inst_i < instances; ++inst_i) {
        const auto inst = testsupport::make_regression_instance(n, p, 2, 31000 + inst_i);

        // 80/20 split for the error comparison
        const std::size_t n_train = n * 8 / 10;
        RealMatrix x_train(n_train, p), x_test(n - n_train, p);
        RealVector y_train(n_train), y_test(n - n_train);
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                if (i < n_train) x_train(i, j) = inst.x(i, j);
                else x_test(i - n_train, j) = inst.x(i, j);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i < n_train) y_train[i] = inst.y[i];
            else y_test[i - n_train] = inst.y[i];
        }

        const std::vector<double> grid = auto_lambda_grid(x_train, y_train, 20, 0.05, inst_i);

        LassoPathConfig cfg;
        cfg.lambdas = grid;
        cfg.kkt_eta = 0.99;
        cfg.cd_tol = 1e-8;
        cfg.seed = 17000 + inst_i;
        std::vector<SparseFit> path;
        try {
            path = lasso_path(x_train, y_train, cfg);
        } catch (const std::exception&) {
            solver_ok = false;
            continue;
        }

        const auto design = testsupport::ExplicitDesign::build(x_train, y_train, false);
        const auto ref = testsupport::reference_lasso_path(design, grid, 1.0, 1e-8);
        double best_xyz_err = 1e300;
        double y_mean = 0.0;
        for (const double v : y_train) y_mean += v;
        y_mean /= double(n_train);
        for (std::size_t li = 0; li < path.size(); ++li) {
            ++total_points;
            if (path[li].certified_exhaustive) {
                ++certified;
                const double diff = testsupport::max_coef_diff(design, ref[li], path[li]);
                worst_diff = std::max(worst_diff, diff);
                if (diff <= 1e-4) ++matched;
            }
            const auto y_hat = testsupport::predict(x_test, x_train, y_mean, path[li]);
            best_xyz_err = std::min(best_xyz_err,
                                    testsupport::normalized_test_error(y_test, y_hat));
        }
        xyz_err_sum += best_xyz_err;
        two_stage_err_sum +=
            testsupport::two_stage_best_test_error(x_train, y_train, x_test, y_test, grid);
    }

    const double cert_rate = double(certified) / double(total_points);
    const bool all_matched = certified == matched;
    const bool two_stage_worse = two_stage_err_sum / instances > xyz_err_sum / instances;
    const bool pass = solver_ok && cert_rate >= 0.90 && all_matched && two_stage_worse;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "certified=%.1f%% worst_certified_diff=%.2e xyz_err=%.4f two_stage_err=%.4f",
                  100.0 * cert_rate, worst_diff, xyz_err_sum / instances,
                  two_stage_err_sum / instances);
    report(6, "lasso path equivalence and two-stage comparison", pass, buf);
}

// --------------------------------------------------------------- criterion 7
void criterion_7() {
    std::mt19937_64 rng = make_stream(888, 0);
    bool pass = true;
    for (int dist = 0; dist < 10; ++dist) {
        StrengthSample sample;
        const double center = 0.3 + 0.04 * dist;
        const double width = 0.02 + 0.015 * dist;
        for (int i = 0; i < 3000; ++i) {
            double s = center + width * (uniform_unit(rng) * 2.0 - 1.0);
            if (dist % 3 == 0 && i % 50 == 0) s = std::min(0.97, s + 0.3);  // heavy tail
            sample.strengths.push_back(std::clamp(s, 0.01, 0.99));
        }
        const double gamma = 0.7 + 0.025 * dist;
        const std::size_t n = 500 + 100 * dist, p = 2000 + 500 * dist;

        const MSelection sel = optimal_m(gamma, sample, n, p, 1, 50);
        const std::size_t l_star = choose_l(sel.m, gamma, 0.99);
        const double eta_star = discovery_probability(gamma, sel.m, l_star);
        const double c_star = expected_complexity(sel.m, l_star, sample, n, p);
        for (std::size_t m = 1; m <= 50; ++m) {
            if (m == sel.m) continue;
            std::size_t l = 1;
            while (discovery_probability(gamma, m, l) < eta_star && l < 100000000) ++l;
            if (discovery_probability(gamma, m, l) < eta_star) continue;  // unreachable eta
            if (expected_complexity(m, l, sample, n, p) < c_star * (1.0 - 1e-12)) {
                pass = false;
            }
        }
    }
    report(7, "Pareto optimality of M*", pass, pass ? "10/10 distributions" : "dominated M* found");
}

// --------------------------------------------------------------- criterion 8
void criterion_8() {
    // worked 9-column configuration, 1-based blocks ({3}x{4,6}) u ({5}x{2}) u
    // ({7,9}x{1,5})
    auto keys_of = [](const std::vector<std::uint64_t>& v) {
        std::vector<ProjectionKey> out(v.size());
        for (std::uint32_t i = 0; i < v.size(); ++i) out[i] = {i, v[i]};
        return out;
    };
    bool fixture_ok = true;
    {
        const std::vector<std::uint64_t> xv = {10, 20, 30, 40, 50, 60, 70, 80, 70};
        const std::vector<std::uint64_t> zv = {70, 50, 110, 30, 70, 30, 120, 130, 140};
        const CandidatePairSet r = equal_pairs(keys_of(xv), keys_of(zv));
        std::set<std::pair<std::set<unsigned>, std::set<unsigned>>> got;
        for (const auto& b : r.groups) {
            std::set<unsigned> xs, zs;
            for (const auto j : b.x_indices) xs.insert(j + 1);  // report 1-based
            for (const auto k : b.z_indices) zs.insert(k + 1);
            got.insert({xs, zs});
        }
        const std::set<std::pair<std::set<unsigned>, std::set<unsigned>>> want = {
            {{3}, {4, 6}}, {{5}, {2}}, {{7, 9}, {1, 5}}};
        fixture_ok = got == want && r.total_pairs == 7;
    }

    bool exhaustive_ok = true;
    std::mt19937_64 rng = make_stream(999, 0);
    for (int inst = 0; inst < 1000 && exhaustive_ok; ++inst) {
        const std::size_t p = 1 + rng() % 64;
        const std::uint64_t alphabet = 1 + rng() % 10;
        std::vector<std::uint64_t> xv(p), zv(p);
        for (auto& v : xv) v = rng() % alphabet;
        for (auto& v : zv) v = rng() % alphabet;
        const CandidatePairSet r = equal_pairs(keys_of(xv), keys_of(zv));
        std::set<std::pair<std::uint32_t, std::uint32_t>> got;
        for (const auto& b : r.groups) {
            for (const auto j : b.x_indices) {
                for (const auto k : b.z_indices) {
                    if (!got.insert({j, k}).second) exhaustive_ok = false;  // duplicate pair
                }
            }
        }
        std::set<std::pair<std::uint32_t, std::uint32_t>> want;
        for (std::uint32_t j = 0; j < p; ++j) {
            for (std::uint32_t k = 0; k < p; ++k) {
                if (xv[j] == zv[k]) want.insert({j, k});
            }
        }
        if (got != want) exhaustive_ok = false;
    }
    report(8, "equal-pairs exactness", fixture_ok && exhaustive_ok,
           fixture_ok ? (exhaustive_ok ? "fixture + 1000 randomized instances"
                                       : "randomized equivalence FAILED")
                      : "fixture FAILED");
}

} // namespace

int main() {
    std::printf("xyz acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
