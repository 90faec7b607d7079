#include "xyz/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <unordered_set>

#include "xyz/errors.hpp"
#include "xyz/rng.hpp"
#include "xyz/transforms.hpp"

namespace xyz {

namespace {

double l1_norm(std::span<const double> y) {
    double acc = 0.0;
    for (double v : y) acc += std::abs(v);
    return acc;
}

PackedMatrix negate_signs(const PackedMatrix& a) {
    PackedMatrix out(a.n_rows(), a.n_cols());
    const std::uint64_t mask = a.last_word_mask();
    const std::size_t wpc = a.words_per_col();
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
        const auto src = a.column_words(j);
        auto dst = out.column_words(j);
        for (std::size_t w = 0; w < wpc; ++w) dst[w] = ~src[w];
        dst[wpc - 1] &= mask;
    }
    return out;
}

unsigned effective_threads(const SearchConfig& cfg) {
    if (cfg.stop_after_first_hit) return 1;
    if (cfg.threads != 0) return cfg.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::uint64_t canonical_key(std::uint32_t j, std::uint32_t k) {
    const std::uint32_t lo = std::min(j, k), hi = std::max(j, k);
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

struct PassPlan {
    std::function<std::pair<std::vector<ProjectionKey>, std::vector<ProjectionKey>>(
        std::mt19937_64&)>
        make_keys;
    std::function<double(std::uint32_t, std::uint32_t)> strength;
    int sign = +1;
    std::uint64_t stream_offset = 0;  // rng stream = offset + repetition
};

// Repetitions execute in waves of `threads`; every repetition draws from its
// own seed-derived stream, so the hit list is independent of the thread count.
// Within a wave each worker filters against a snapshot of the evaluated-pair
// set, so a pair discovered by two concurrent repetitions may be
// strength-checked twice; the merge reports it once, attributed to the
// earliest repetition.
void run_pass(const PassPlan& plan, const SearchConfig& cfg, std::uint64_t max_candidates,
              SearchReport& report, std::unordered_set<std::uint64_t>& emitted, bool& stopped) {
    const unsigned threads = effective_threads(cfg);
    PairSeenSet seen(PairSeenSet::Keying::unordered);
    for (std::size_t base = 0; base < cfg.l && !stopped; base += threads) {
        const std::size_t wave = std::min<std::size_t>(threads, cfg.l - base);
        std::vector<FilterResult> outcomes(wave);
        std::vector<std::vector<std::uint64_t>> new_keys(wave);
        auto run_one = [&](std::size_t slot, PairSeenSet& seen_view) {
            const std::uint32_t rep = static_cast<std::uint32_t>(base + slot + 1);
            std::mt19937_64 rng = make_stream(cfg.seed, plan.stream_offset + rep);
            const auto [x_keys, z_keys] = plan.make_keys(rng);
            const CandidatePairSet candidates = equal_pairs(x_keys, z_keys);
            outcomes[slot] = filter_strong(candidates, plan.strength, cfg.gamma, seen_view,
                                           max_candidates, rep, plan.sign,
                                           /*skip_equal_indices=*/true, &new_keys[slot]);
        };
        if (wave == 1) {
            run_one(0, seen);
            new_keys[0].clear();  // already in the shared set
        } else {
            std::vector<std::thread> pool;
            pool.reserve(wave);
            for (std::size_t slot = 0; slot < wave; ++slot) {
                pool.emplace_back([&, slot] {
                    PairSeenSet snapshot = seen;
                    run_one(slot, snapshot);
                });
            }
            for (auto& t : pool) t.join();
        }
        for (std::size_t slot = 0; slot < wave; ++slot) {
            const FilterResult& rep_out = outcomes[slot];
            ++report.repetitions_run;
            report.candidates_enumerated += rep_out.enumerated;
            report.candidates_checked += rep_out.evaluated;
            if (rep_out.aborted) ++report.aborted_repetitions;
            for (const std::uint64_t key : new_keys[slot]) seen.insert_key(key);
            for (const InteractionHit& hit : rep_out.hits) {
                const std::uint64_t key = canonical_key(hit.j, hit.k);
                const std::uint64_t tagged = key ^ (hit.sign < 0 ? std::uint64_t{1} << 63 : 0);
                if (emitted.insert(tagged).second) report.hits.push_back(hit);
            }
        }
        if (cfg.stop_after_first_hit && !report.hits.empty()) stopped = true;
    }
}

std::size_t default_sample_size(std::size_t p) {
    return std::min<std::size_t>(100000, 10 * p);
}

} // namespace

void SearchConfig::validate() const {
    if (m < 1 || m > max_subsample_size) {
        throw data_error("SearchConfig: M = " + std::to_string(m) + " outside [1,64]");
    }
    if (l < 1) throw data_error("SearchConfig: L must be >= 1");
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw data_error("SearchConfig: gamma must lie in (0,1]");
    }
    const bool wants_transform = mode == SearchMode::continuous_xy;
    if (wants_transform && transform == BinarizeTransform::none) {
        throw data_error("SearchConfig: continuous-XY mode requires a binarize transform");
    }
    if (!wants_transform && transform != BinarizeTransform::none) {
        throw data_error("SearchConfig: binarize transform is only valid in continuous-XY mode");
    }
}

double StrengthSample::mean_pow(std::size_t m) const {
    if (strengths.empty()) throw data_error("StrengthSample: empty sample");
    double acc = 0.0;
    for (double s : strengths) acc += std::pow(s, static_cast<double>(m));
    return acc / static_cast<double>(strengths.size());
}

double StrengthSample::se_pow(std::size_t m) const {
    if (strengths.empty()) throw data_error("StrengthSample: empty sample");
    const double mean = mean_pow(m);
    double ss = 0.0;
    for (double s : strengths) {
        const double d = std::pow(s, static_cast<double>(m)) - mean;
        ss += d * d;
    }
    const double nn = static_cast<double>(strengths.size());
    return std::sqrt(ss / nn / nn);
}

double discovery_probability(double gamma, std::size_t m, std::size_t l) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw data_error("discovery_probability: gamma outside (0,1]");
    if (m < 1 || l < 1) throw data_error("discovery_probability: M and L must be >= 1");
    const double gm = std::pow(gamma, static_cast<double>(m));
    return 1.0 - std::pow(1.0 - gm, static_cast<double>(l));
}

std::size_t choose_l(std::size_t m, double gamma, double eta_target) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw data_error("choose_l: gamma outside (0,1]");
    if (!(eta_target >= 0.5 && eta_target < 1.0)) {
        throw data_error("choose_l: eta target must lie in [0.5,1)");
    }
    const double gm = std::pow(gamma, static_cast<double>(m));
    if (gm >= 1.0) return 1;
    if (gm <= 0.0) {
        throw data_error("choose_l: gamma^M underflows to zero; choose a smaller M");
    }
    const double l_real = std::log1p(-eta_target) / std::log1p(-gm);
    if (!(l_real < 1e15)) {
        throw data_error("choose_l: required L exceeds 1e15; choose a smaller M");
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(l_real)));
}

double expected_complexity(std::size_t m, std::size_t l, const StrengthSample& sample,
                           std::size_t n, std::size_t p) {
    if (l < 1) throw data_error("expected_complexity: L must be >= 1");
    const double np = static_cast<double>(n) * static_cast<double>(p);
    const double pd = static_cast<double>(p);
    const double expected_e1 = pd * pd * sample.mean_pow(m);
    return np + static_cast<double>(l) *
                    (static_cast<double>(m) * pd + pd * std::log(pd) +
                     static_cast<double>(n) * expected_e1);
}

MSelection optimal_m(double gamma, const StrengthSample& sample, std::size_t n,
                     std::size_t p, std::size_t m_lo, std::size_t m_hi) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw data_error("optimal_m: gamma must lie in (0,1)");
    if (sample.strengths.empty()) throw data_error("optimal_m: empty strength sample");
    if (m_lo < 1 || m_hi > max_subsample_size || m_lo > m_hi) {
        throw data_error("optimal_m: invalid M range");
    }
    const double pd = static_cast<double>(p);
    const double nd = static_cast<double>(n);
    MSelection best;
    double best_obj = std::numeric_limits<double>::infinity();
    double best_se = 0.0;
    for (std::size_t m = m_lo; m <= m_hi; ++m) {
        const double gm = std::pow(gamma, static_cast<double>(m));
        if (gm <= 0.0) break;
        const double denom = -std::log1p(-gm);  // -log(1 - gamma^M) > 0
        const double bulk = nd * pd * pd * sample.mean_pow(m);
        const double obj = (static_cast<double>(m) * pd + pd * std::log(pd) + bulk) / denom;
        if (obj < best_obj) {
            best_obj = obj;
            best.m = m;
            best_se = nd * pd * pd * sample.se_pow(m) / denom;
        }
    }
    if (best.m == 0) throw data_error("optimal_m: objective not finite anywhere in range");
    best.objective = best_obj;
    best.objective_rel_err = best_obj > 0.0 ? best_se / best_obj : 0.0;
    best.gamma0 = std::pow(pd, -1.0 / static_cast<double>(best.m));
    best.hit_range_cap = best.m == m_hi;
    return best;
}

double runtime_exponent(double gamma, double gamma0) {
    if (!(gamma0 > 0.0 && gamma0 < gamma && gamma <= 1.0)) {
        throw data_error("runtime_exponent: need 0 < gamma0 < gamma <= 1");
    }
    return 1.0 + std::log(gamma) / std::log(gamma0);
}

StrengthSample sample_strengths(const PackedMatrix& x, const PackedMatrix& z,
                                std::size_t n_samples, std::mt19937_64& rng) {
    if (n_samples < 1) throw data_error("sample_strengths: need n_samples >= 1");
    const std::size_t p = x.n_cols();
    std::uniform_int_distribution<std::size_t> dist(0, p - 1);
    StrengthSample sample;
    sample.strengths.reserve(n_samples);
    for (std::size_t t = 0; t < n_samples; ++t) {
        std::size_t j = dist(rng), k = dist(rng);
        while (p > 1 && k == j) k = dist(rng);
        sample.strengths.push_back(interaction_strength(x, z, j, k));
    }
    return sample;
}

StrengthSample sample_strengths(const PackedMatrix& x, std::span<const double> y,
                                std::size_t n_samples, std::mt19937_64& rng) {
    if (n_samples < 1) throw data_error("sample_strengths: need n_samples >= 1");
    const std::size_t p = x.n_cols();
    std::uniform_int_distribution<std::size_t> dist(0, p - 1);
    StrengthSample sample;
    sample.strengths.reserve(n_samples);
    for (std::size_t t = 0; t < n_samples; ++t) {
        std::size_t j = dist(rng), k = dist(rng);
        while (p > 1 && k == j) k = dist(rng);
        sample.strengths.push_back(weighted_interaction_strength(x, y, j, k));
    }
    return sample;
}

StrengthSample sample_strengths(const RealMatrix& x, const RealVector& y,
                                BinarizeTransform transform, std::size_t n_samples,
                                std::mt19937_64& rng) {
    if (n_samples < 1) throw data_error("sample_strengths: need n_samples >= 1");
    if (transform == BinarizeTransform::none) {
        throw data_error("sample_strengths: continuous data needs a binarize transform");
    }
    const std::size_t p = x.n_cols();
    const std::size_t n = x.n_rows();
    const double norm = l1_norm(y);
    if (norm <= 0.0) throw data_error("sample_strengths: zero response vector");
    std::uniform_int_distribution<std::size_t> dist(0, p - 1);
    StrengthSample sample;
    sample.strengths.reserve(n_samples);
    for (std::size_t t = 0; t < n_samples; ++t) {
        std::size_t j = dist(rng), k = dist(rng);
        while (p > 1 && k == j) k = dist(rng);
        const auto cj = x.column(j);
        const auto ck = x.column(k);
        double acc = 0.0;
        if (transform == BinarizeTransform::unbiased) {
            for (std::size_t i = 0; i < n; ++i) acc += y[i] * cj[i] * ck[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const double tj = cj[i] > 0.0 ? 1.0 : (cj[i] < 0.0 ? -1.0 : 0.0);
                const double tk = ck[i] > 0.0 ? 1.0 : (ck[i] < 0.0 ? -1.0 : 0.0);
                acc += y[i] * tj * tk;
            }
        }
        sample.strengths.push_back(0.5 + acc / (2.0 * norm));
    }
    return sample;
}

namespace {

SearchReport run_search(const SearchConfig& cfg, std::size_t n, std::size_t p,
                        const std::vector<PassPlan>& plans,
                        const std::function<StrengthSample(std::mt19937_64&)>& sampler) {
    const auto t0 = std::chrono::steady_clock::now();
    SearchReport report;
    report.m_used = cfg.m;
    report.l_used = cfg.l;
    report.gamma0 = std::pow(static_cast<double>(p), -1.0 / static_cast<double>(cfg.m));
    const std::uint64_t max_candidates =
        cfg.max_candidates_per_rep != 0 ? cfg.max_candidates_per_rep : 16 * static_cast<std::uint64_t>(p);

    std::unordered_set<std::uint64_t> emitted;
    bool stopped = false;
    for (const PassPlan& plan : plans) {
        if (stopped) break;
        run_pass(plan, cfg, max_candidates, report, emitted, stopped);
    }

    if (cfg.estimate_complexity) {
        std::mt19937_64 rng = make_stream(cfg.seed, 0);
        const StrengthSample sample = sampler(rng);
        report.estimated_c = expected_complexity(cfg.m, cfg.l, sample, n, p);
    }
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace

SearchReport xyz_search(const PackedMatrix& x, std::span<const std::int8_t> y,
                        const SearchConfig& config) {
    config.validate();
    if (config.mode != SearchMode::binary) {
        throw data_error("xyz_search: packed X with sign Y requires binary mode");
    }
    if (y.size() != x.n_rows()) throw data_error("xyz_search: response length mismatch");
    for (const std::int8_t v : y) {
        if (v != 1 && v != -1) throw data_error("xyz_search: binary response must be +-1");
    }
    const std::size_t n = x.n_rows(), p = x.n_cols();
    const PackedMatrix z_plus = build_z(x, y);

    std::vector<PassPlan> plans;
    auto add_plan = [&](const PackedMatrix& z, int sign, std::uint64_t offset) {
        PassPlan plan;
        plan.sign = sign;
        plan.stream_offset = offset;
        plan.make_keys = [&x, &z, m = config.m, n](std::mt19937_64& rng) {
            const SubsampleDraw draw = draw_subsample(n, m, nullptr, rng);
            return std::make_pair(project_keys(x, draw), project_keys(z, draw));
        };
        plan.strength = [&x, &z](std::uint32_t j, std::uint32_t k) {
            return interaction_strength(x, z, k, j);
        };
        plans.push_back(std::move(plan));
    };

    PackedMatrix z_minus;
    add_plan(z_plus, +1, 0);
    if (config.search_negatives) {
        z_minus = negate_signs(z_plus);
        add_plan(z_minus, -1, config.l);
    }
    return run_search(config, n, p, plans, [&](std::mt19937_64& rng) {
        return sample_strengths(x, z_plus,
                                config.strength_sample_size != 0 ? config.strength_sample_size
                                                                 : default_sample_size(p),
                                rng);
    });
}

SearchReport xyz_search(const PackedMatrix& x, const RealVector& y,
                        const SearchConfig& config) {
    config.validate();
    if (config.mode != SearchMode::continuous_y) {
        throw data_error("xyz_search: packed X with real Y requires continuous-Y mode");
    }
    if (y.size() != x.n_rows()) throw data_error("xyz_search: response length mismatch");
    if (l1_norm(y) <= 0.0) throw data_error("xyz_search: zero response vector");
    const std::size_t n = x.n_rows(), p = x.n_cols();

    std::vector<std::int8_t> y_sign(n);
    for (std::size_t i = 0; i < n; ++i) y_sign[i] = y[i] >= 0.0 ? +1 : -1;
    const PackedMatrix z_plus = build_z(x, y_sign);
    const WeightedSampler weights = WeightedSampler::from_magnitudes(y);

    RealVector y_neg(y.size());
    for (std::size_t i = 0; i < n; ++i) y_neg[i] = -y[i];

    std::vector<PassPlan> plans;
    auto add_plan = [&](const PackedMatrix& z, const RealVector& resp, int sign,
                        std::uint64_t offset) {
        PassPlan plan;
        plan.sign = sign;
        plan.stream_offset = offset;
        plan.make_keys = [&x, &z, &weights, m = config.m, n](std::mt19937_64& rng) {
            const SubsampleDraw draw = draw_subsample(n, m, &weights, rng);
            return std::make_pair(project_keys(x, draw), project_keys(z, draw));
        };
        plan.strength = [&x, &resp](std::uint32_t j, std::uint32_t k) {
            return weighted_interaction_strength(x, resp, j, k);
        };
        plans.push_back(std::move(plan));
    };

    PackedMatrix z_minus;
    add_plan(z_plus, y, +1, 0);
    if (config.search_negatives) {
        z_minus = negate_signs(z_plus);
        add_plan(z_minus, y_neg, -1, config.l);
    }
    return run_search(config, n, p, plans, [&](std::mt19937_64& rng) {
        return sample_strengths(x, std::span<const double>(y),
                                config.strength_sample_size != 0 ? config.strength_sample_size
                                                                 : default_sample_size(p),
                                rng);
    });
}

SearchReport xyz_search(const RealMatrix& x, const RealVector& y,
                        const SearchConfig& config) {
    config.validate();
    if (config.mode != SearchMode::continuous_xy) {
        throw data_error("xyz_search: real X requires continuous-XY mode");
    }
    if (y.size() != x.n_rows()) throw data_error("xyz_search: response length mismatch");
    const double norm = l1_norm(y);
    if (norm <= 0.0) throw data_error("xyz_search: zero response vector");
    const std::size_t n = x.n_rows(), p = x.n_cols();
    const bool unbiased = config.transform == BinarizeTransform::unbiased;
    if (unbiased) {
        for (double v : x.values()) {
            if (!(v >= -1.0 && v <= 1.0)) {
                throw data_error(
                    "xyz_search: unbiased transform needs entries in [-1,1]; "
                    "apply rescale_rows or cap_entries first");
            }
        }
    }
    const WeightedSampler weights = WeightedSampler::from_magnitudes(y);

    // One repetition realizes the transform of the M subsampled rows only;
    // entries are redrawn independently per subsample occurrence, which makes
    // the match probability exactly gamma^M for every pair.
    auto make_keys_for = [&x, &y, &weights, &config, n, p, unbiased](int sign) {
        return [&x, &y, &weights, n, p, unbiased, sign,
                m = config.m](std::mt19937_64& rng) {
            const SubsampleDraw draw = draw_subsample(n, m, &weights, rng);
            std::vector<bool> resp_positive(m);
            for (std::size_t s = 0; s < m; ++s) {
                resp_positive[s] = (sign > 0 ? y[draw.indices[s]] : -y[draw.indices[s]]) > 0.0;
            }
            std::vector<ProjectionKey> x_keys(p), z_keys(p);
            for (std::size_t j = 0; j < p; ++j) {
                const auto col = x.column(j);
                std::uint64_t xk = 0, zk = 0;
                for (std::size_t s = 0; s < m; ++s) {
                    const double v = col[draw.indices[s]];
                    bool plus;
                    if (unbiased) {
                        plus = uniform_unit(rng) < (v + 1.0) / 2.0;
                    } else if (v > 0.0) {
                        plus = true;
                    } else if (v < 0.0) {
                        plus = false;
                    } else {
                        plus = (rng() & 1u) != 0;
                    }
                    xk |= std::uint64_t{plus} << s;
                    zk |= std::uint64_t{plus == resp_positive[s]} << s;
                }
                x_keys[j] = {static_cast<std::uint32_t>(j), xk};
                z_keys[j] = {static_cast<std::uint32_t>(j), zk};
            }
            return std::make_pair(std::move(x_keys), std::move(z_keys));
        };
    };

    // Strength of a candidate is the analytic match probability
    // 1/2 + sum_i Y_i t(X_ij) t(X_ik) / (2 ||Y||_1), monotone in the raw
    // interaction inner product for the unbiased transform.
    auto strength_for = [&x, &y, norm, n, unbiased](int sign) {
        return [&x, &y, norm, n, unbiased, sign](std::uint32_t j, std::uint32_t k) {
            const auto cj = x.column(j);
            const auto ck = x.column(k);
            double acc = 0.0;
            if (unbiased) {
                for (std::size_t i = 0; i < n; ++i) acc += y[i] * cj[i] * ck[i];
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    const double tj = cj[i] > 0.0 ? 1.0 : (cj[i] < 0.0 ? -1.0 : 0.0);
                    const double tk = ck[i] > 0.0 ? 1.0 : (ck[i] < 0.0 ? -1.0 : 0.0);
                    acc += y[i] * tj * tk;
                }
            }
            return 0.5 + sign * acc / (2.0 * norm);
        };
    };

    std::vector<PassPlan> plans;
    plans.push_back({make_keys_for(+1), strength_for(+1), +1, 0});
    if (config.search_negatives) {
        plans.push_back({make_keys_for(-1), strength_for(-1), -1, config.l});
    }
    return run_search(config, n, p, plans, [&](std::mt19937_64& rng) {
        return sample_strengths(x, y, config.transform,
                                config.strength_sample_size != 0 ? config.strength_sample_size
                                                                 : default_sample_size(p),
                                rng);
    });
}

} // namespace xyz
