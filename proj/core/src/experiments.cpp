#include "xyz/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "xyz/errors.hpp"
#include "xyz/oracle.hpp"
#include "xyz/pair_search.hpp"
#include "xyz/projection.hpp"
#include "xyz/rng.hpp"
#include "xyz/search.hpp"
#include "xyz/synthetic.hpp"
#include "xyz/transforms.hpp"

namespace xyz {

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw data_error("log_log_slope: need at least two matching points");
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingResult run_scaling_suite(const std::vector<std::size_t>& p_values, std::size_t n,
                                double gamma, double gamma0_target, std::size_t runs,
                                std::uint64_t seed, std::size_t episodes_per_run) {
    if (runs < 1 || episodes_per_run < 1) {
        throw data_error("run_scaling_suite: need runs and episodes_per_run >= 1");
    }
    ScalingResult result;
    result.predicted_exponent = runtime_exponent(gamma, gamma0_target);

    for (std::size_t pi = 0; pi < p_values.size(); ++pi) {
        const std::size_t p = p_values[pi];
        const auto m = static_cast<std::size_t>(std::max<long long>(
            1, std::llround(std::log(static_cast<double>(p)) / std::log(1.0 / gamma0_target))));
        const PlantedBinaryInstance inst = planted_binary_instance(n, p, gamma, seed + pi);

        SearchConfig cfg;
        cfg.mode = SearchMode::binary;
        cfg.m = m;
        cfg.gamma = inst.planted_strength;
        // Enough repetitions that a miss is essentially impossible; the search
        // stops at the first hit anyway.
        cfg.l = choose_l(m, inst.planted_strength, 0.999999);
        cfg.search_negatives = false;
        cfg.stop_after_first_hit = true;
        cfg.estimate_complexity = false;
        cfg.threads = 1;

        ScalingPoint point;
        point.p = p;
        point.m = m;
        point.gamma0 = std::pow(static_cast<double>(p), -1.0 / static_cast<double>(m));
        point.planted_found_in_all_runs = true;

        std::vector<double> times(runs);
        double reps = 0.0;
        std::uint64_t episode = 0;
        auto one_episode = [&] {
            cfg.seed = seed * 7919 + pi + 104729 * (++episode);
            const SearchReport report =
                xyz_search(inst.x, std::span<const std::int8_t>(inst.y), cfg);
            reps += static_cast<double>(report.repetitions_run);
            const bool found =
                std::any_of(report.hits.begin(), report.hits.end(), [](const InteractionHit& h) {
                    const auto lo = std::min(h.j, h.k), hi = std::max(h.j, h.k);
                    return lo == 0 && hi == 1;
                });
            if (!found) point.planted_found_in_all_runs = false;
            return report.wall_time_s;
        };
        one_episode();  // warmup, untimed
        reps = 0.0;
        for (std::size_t r = 0; r < runs; ++r) {
            double acc = 0.0;
            for (std::size_t e = 0; e < episodes_per_run; ++e) acc += one_episode();
            times[r] = acc / static_cast<double>(episodes_per_run);
        }
        std::sort(times.begin(), times.end());
        point.median_time_s = times[times.size() / 2];
        point.mean_repetitions = reps / static_cast<double>(runs * episodes_per_run);
        result.points.push_back(point);
    }

    std::vector<double> ps, ts;
    for (const auto& pt : result.points) {
        ps.push_back(static_cast<double>(pt.p));
        ts.push_back(pt.median_time_s);
    }
    result.fitted_slope = log_log_slope(ps, ts);
    return result;
}

std::vector<GaussVsMinimalPoint> run_gauss_vs_minimal(
    const std::vector<std::size_t>& p_values, const std::vector<double>& gammas,
    std::size_t n, std::size_t empirical_p, std::size_t trials, std::uint64_t seed) {
    std::vector<GaussVsMinimalPoint> out;
    for (const std::size_t p : p_values) {
        const auto m = static_cast<std::size_t>(
            std::ceil(std::log2(static_cast<double>(p))));
        const double tau = gauss_tau_for_budget(p, n);
        for (const double gamma : gammas) {
            GaussVsMinimalPoint point;
            point.p = p;
            point.gamma = gamma;
            point.m = m;
            point.tau = tau;
            point.eta_minimal = std::pow(gamma, static_cast<double>(m));
            point.eta_gauss = dense_gauss_retention(gamma, p);

            if (p == empirical_p && trials > 0) {
                point.has_empirical = true;
                const PlantedBinaryInstance inst =
                    planted_binary_instance(n, 2, gamma, seed ^ (p * 131 + static_cast<std::size_t>(gamma * 1000)));
                // Only the planted pair decides both events, so the trial
                // needs just the two columns and the response.
                std::vector<int> x0(n), z1(n);
                for (std::size_t i = 0; i < n; ++i) {
                    x0[i] = inst.x.get(i, 0);
                    z1[i] = inst.y[i] * inst.x.get(i, 1);
                }
                std::mt19937_64 rng = make_stream(seed, p * 1000003 + static_cast<std::size_t>(gamma * 1000));
                std::normal_distribution<double> gauss(0.0, 1.0);
                std::uniform_int_distribution<std::size_t> row(0, n - 1);
                std::size_t hits_min = 0, hits_gauss = 0;
                for (std::size_t t = 0; t < trials; ++t) {
                    bool equal = true;
                    for (std::size_t s = 0; s < m; ++s) {
                        const std::size_t i = row(rng);
                        if (x0[i] != z1[i]) {
                            equal = false;
                            break;
                        }
                    }
                    if (equal) ++hits_min;
                }
                for (std::size_t t = 0; t < trials; ++t) {
                    double diff = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (x0[i] != z1[i]) diff += 2.0 * static_cast<double>(x0[i]) * gauss(rng);
                        else gauss(rng);  // keep the draw count per trial fixed
                    }
                    // tau is stated in the +-1/2 encoding; projections of +-1
                    // columns live at twice that scale.
                    if (std::abs(diff) <= 2.0 * tau) ++hits_gauss;
                }
                point.emp_minimal = static_cast<double>(hits_min) / static_cast<double>(trials);
                point.emp_gauss = static_cast<double>(hits_gauss) / static_cast<double>(trials);
            }
            out.push_back(point);
        }
    }
    return out;
}

NaiveRaceResult run_naive_race(std::size_t n, std::size_t p, double gamma,
                               const std::vector<std::uint64_t>& budgets, std::uint64_t seed) {
    if (budgets.empty()) throw data_error("run_naive_race: need at least one budget");
    const PlantedBinaryInstance inst = planted_binary_instance(n, p, gamma, seed);
    const PackedMatrix z = build_z(inst.x, inst.y);
    const std::uint64_t max_budget = *std::max_element(budgets.begin(), budgets.end());

    // xyz side: run repetitions, recording the best strength seen after every
    // strength evaluation.
    std::vector<double> best_after;  // best_after[t] = best strength within t+1 evaluations
    best_after.reserve(max_budget);
    {
        const auto m = static_cast<std::size_t>(std::max<long long>(
            1, std::llround(std::log(static_cast<double>(p)) / std::log(1.0 / 0.55))));
        PairSeenSet seen(PairSeenSet::Keying::unordered);
        double best = 0.0;
        std::uint32_t rep = 0;
        while (best_after.size() < max_budget && rep < 1000000) {
            ++rep;
            std::mt19937_64 rng = make_stream(seed ^ 0xace, rep);
            const SubsampleDraw draw = draw_subsample(n, m, nullptr, rng);
            const auto x_keys = project_keys(inst.x, draw);
            const auto z_keys = project_keys(z, draw);
            const CandidatePairSet candidates = equal_pairs(x_keys, z_keys);
            for (const PairBlock& block : candidates.groups) {
                for (const std::uint32_t j : block.x_indices) {
                    for (const std::uint32_t k : block.z_indices) {
                        if (j == k || seen.contains(j, k)) continue;
                        seen.insert(j, k);
                        best = std::max(best, interaction_strength(inst.x, z, k, j));
                        best_after.push_back(best);
                        if (best_after.size() >= max_budget) break;
                    }
                    if (best_after.size() >= max_budget) break;
                }
                if (best_after.size() >= max_budget) break;
            }
        }
        while (best_after.size() < max_budget) best_after.push_back(best);
    }

    // naive side: uniform pair draws under the same budgets.
    std::vector<double> naive_after(max_budget, 0.0);
    {
        std::mt19937_64 rng = make_stream(seed ^ 0xbead, 1);
        std::uniform_int_distribution<std::uint32_t> dist(0, static_cast<std::uint32_t>(p - 1));
        double best = 0.0;
        for (std::uint64_t t = 0; t < max_budget; ++t) {
            std::uint32_t j = dist(rng), k = dist(rng);
            while (k == j) k = dist(rng);
            best = std::max(best, interaction_strength(inst.x, z, k, j));
            naive_after[t] = best;
        }
    }

    NaiveRaceResult result;
    result.planted_strength = inst.planted_strength;
    for (const std::uint64_t b : budgets) {
        const std::uint64_t idx = std::min<std::uint64_t>(b, max_budget) - 1;
        result.points.push_back({b, best_after[idx], naive_after[idx]});
    }
    const double target = inst.planted_strength;
    for (std::uint64_t t = 0; t < max_budget; ++t) {
        if (result.xyz_budget_to_planted == 0 && best_after[t] >= target) {
            result.xyz_budget_to_planted = t + 1;
        }
        if (result.naive_budget_to_planted == 0 && naive_after[t] >= target) {
            result.naive_budget_to_planted = t + 1;
        }
    }
    return result;
}

} // namespace xyz
