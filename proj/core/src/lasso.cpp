#include "xyz/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "xyz/errors.hpp"
#include "xyz/rng.hpp"
#include "xyz/search.hpp"
#include "xyz/transforms.hpp"

namespace xyz {

namespace {

double soft_threshold(double u, double t) {
    if (u > t) return u - t;
    if (u < -t) return u + t;
    return 0.0;
}

double centered_mean(const RealVector& y) {
    double acc = 0.0;
    for (double v : y) acc += v;
    return acc / static_cast<double>(y.size());
}

bool all_entries_pm1(const RealMatrix& x) {
    for (double v : x.values()) {
        if (v != 1.0 && v != -1.0) return false;
    }
    return true;
}

} // namespace

CenteredDesignView::CenteredDesignView(const RealMatrix& x) : x_(&x), means_(x.n_cols()) {
    for (std::size_t j = 0; j < x.n_cols(); ++j) {
        double acc = 0.0;
        for (double v : x.column(j)) acc += v;
        means_[j] = acc / static_cast<double>(x.n_rows());
        max_abs_mean_ = std::max(max_abs_mean_, std::abs(means_[j]));
    }
}

void CenteredDesignView::main_column(std::size_t j, std::vector<double>& out) const {
    const auto col = x_->column(j);
    out.resize(col.size());
    const double mu = means_[j];
    for (std::size_t i = 0; i < col.size(); ++i) out[i] = col[i] - mu;
}

void CenteredDesignView::pair_column(PairKey key, std::vector<double>& out) const {
    const auto cj = x_->column(key.j);
    const auto ck = x_->column(key.k);
    const double mj = means_[key.j], mk = means_[key.k];
    out.resize(cj.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < cj.size(); ++i) {
        out[i] = (cj[i] - mj) * (ck[i] - mk);
        mean += out[i];
    }
    mean /= static_cast<double>(cj.size());
    for (double& v : out) v -= mean;
}

double CenteredDesignView::main_correlation(std::size_t j, const RealVector& residual) const {
    const auto col = x_->column(j);
    const double mu = means_[j];
    double acc = 0.0;
    for (std::size_t i = 0; i < col.size(); ++i) acc += residual[i] * (col[i] - mu);
    return acc;
}

double CenteredDesignView::pair_correlation(PairKey key, const RealVector& residual) const {
    // residual is centered, so subtracting the product mean changes nothing.
    const auto cj = x_->column(key.j);
    const auto ck = x_->column(key.k);
    const double mj = means_[key.j], mk = means_[key.k];
    double acc = 0.0;
    for (std::size_t i = 0; i < cj.size(); ++i) {
        acc += residual[i] * (cj[i] - mj) * (ck[i] - mk);
    }
    return acc;
}

RealVector interaction_column(const RealMatrix& x, std::size_t j, std::size_t k) {
    if (j >= x.n_cols() || k >= x.n_cols()) {
        throw data_error("interaction_column: column index out of range");
    }
    const auto cj = x.column(j);
    const auto ck = x.column(k);
    RealVector out(x.n_rows());
    double mean = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = cj[i] * ck[i];
        mean += out[i];
    }
    mean /= static_cast<double>(out.size());
    for (double& v : out) v -= mean;
    return out;
}

// ---------------------------------------------------------------------------
// Interaction KKT screening
// ---------------------------------------------------------------------------

namespace {

// Screens raw product columns |r^T (X_j o X_k)| / n > threshold with xyz.
// Binary designs use the weighted-response search on the packed matrix;
// continuous designs are row-rescaled once so the unbiased transform applies,
// which leaves every product r_i X_ij X_ik unchanged.
class InteractionScreener {
public:
    InteractionScreener(const RealMatrix& x, const LassoPathConfig& config)
        : x_(&x), config_(config), binary_(all_entries_pm1(x)) {
        if (binary_) {
            packed_ = PackedMatrix(x.n_rows(), x.n_cols());
            for (std::size_t j = 0; j < x.n_cols(); ++j) {
                const auto col = x.column(j);
                for (std::size_t i = 0; i < x.n_rows(); ++i) {
                    packed_.set(i, j, col[i] > 0.0 ? +1 : -1);
                }
            }
        } else {
            RealVector dummy(x.n_rows(), 0.0);
            auto [scaled, scaled_y] = rescale_rows(x, dummy);
            rescaled_ = std::move(scaled);
            nu_sq_.resize(x.n_rows());
            for (std::size_t i = 0; i < x.n_rows(); ++i) {
                double nu = 0.0;
                for (std::size_t j = 0; j < x.n_cols(); ++j) {
                    nu = std::max(nu, std::abs(x(i, j)));
                }
                nu_sq_[i] = nu * nu;
            }
        }
    }

    bool binary() const { return binary_; }

    // Candidate pairs whose raw product correlation may exceed `threshold`.
    // Sets `degenerate` instead of searching when the strength conversion
    // leaves no usable threshold (gamma_lambda <= 1/2).
    std::vector<PairKey> screen(const RealVector& residual, double threshold,
                                std::uint64_t stream, bool& degenerate) const {
        degenerate = false;
        const std::size_t n = x_->n_rows();
        const std::size_t p = x_->n_cols();

        RealVector response;
        if (binary_) {
            response = residual;
        } else {
            response.resize(n);
            for (std::size_t i = 0; i < n; ++i) response[i] = residual[i] * nu_sq_[i];
        }
        double norm = 0.0;
        for (double v : response) norm += std::abs(v);
        if (norm <= 0.0) return {};

        const double gamma_lambda =
            0.5 + static_cast<double>(n) * threshold / (2.0 * norm);
        if (gamma_lambda >= 1.0) return {};  // no pair can reach the threshold
        if (gamma_lambda <= 0.5) {
            degenerate = true;
            return {};
        }

        std::mt19937_64 sample_rng = make_stream(config_.seed ^ 0x6b, stream);
        SearchConfig search;
        search.gamma = gamma_lambda;
        search.search_negatives = true;
        search.seed = splitmix64_of(config_.seed, stream);
        search.estimate_complexity = false;
        search.threads = config_.threads;
        search.max_candidates_per_rep = config_.kkt_max_candidates != 0
                                            ? config_.kkt_max_candidates
                                            : std::numeric_limits<std::uint64_t>::max();

        StrengthSample sample;
        if (binary_) {
            sample = sample_strengths(packed_, std::span<const double>(response),
                                      config_.kkt_strength_sample, sample_rng);
        } else {
            sample = sample_strengths(rescaled_, response, BinarizeTransform::unbiased,
                                      config_.kkt_strength_sample, sample_rng);
        }
        search.m = optimal_m(gamma_lambda, sample, n, p).m;
        if (config_.kkt_l) {
            search.l = *config_.kkt_l;
        } else if (config_.kkt_eta > 0.0) {
            search.l = choose_l(search.m, gamma_lambda, config_.kkt_eta);
        } else {
            search.l = static_cast<std::size_t>(
                std::ceil(std::sqrt(static_cast<double>(p))));
        }

        SearchReport report;
        if (binary_) {
            search.mode = SearchMode::continuous_y;
            report = xyz_search(packed_, response, search);
        } else {
            search.mode = SearchMode::continuous_xy;
            search.transform = BinarizeTransform::unbiased;
            report = xyz_search(rescaled_, response, search);
        }

        std::set<PairKey> unique;
        for (const InteractionHit& hit : report.hits) unique.insert(make_pair_key(hit.j, hit.k));
        return {unique.begin(), unique.end()};
    }

private:
    static std::uint64_t splitmix64_of(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed ^ (stream * 0x9e3779b97f4a7c15ULL);
        return splitmix64(s);
    }

    const RealMatrix* x_;
    LassoPathConfig config_;
    bool binary_ = false;
    PackedMatrix packed_;
    RealMatrix rescaled_;
    RealVector nu_sq_;
};

} // namespace

std::vector<double> auto_lambda_grid(const RealMatrix& x, const RealVector& y,
                                     std::size_t t, double ratio, std::uint64_t seed) {
    if (t < 2) throw data_error("auto_lambda_grid: grid size must be >= 2");
    if (!(ratio > 0.0 && ratio < 1.0)) throw data_error("auto_lambda_grid: ratio must lie in (0,1)");
    if (y.size() != x.n_rows()) throw data_error("auto_lambda_grid: response length mismatch");

    const std::size_t n = x.n_rows();
    const std::size_t p = x.n_cols();
    RealVector yc(y);
    const double ybar = centered_mean(yc);
    for (double& v : yc) v -= ybar;
    double yvar = 0.0;
    for (double v : yc) yvar += v * v;
    if (yvar <= 0.0) throw data_error("auto_lambda_grid: response has zero variance");

    const CenteredDesignView view(x);
    const bool binary = all_entries_pm1(x);
    double lambda_max = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        lambda_max = std::max(lambda_max, std::abs(view.main_correlation(j, yc)));
    }
    if (p <= 512) {
        for (std::uint32_t j = 0; j < p; ++j) {
            for (std::uint32_t k = j; k < p; ++k) {
                if (binary && j == k) continue;
                lambda_max = std::max(lambda_max, std::abs(view.pair_correlation({j, k}, yc)));
            }
        }
    } else {
        std::mt19937_64 rng = make_stream(seed, 0xa117);
        std::uniform_int_distribution<std::uint32_t> dist(0, static_cast<std::uint32_t>(p - 1));
        const std::size_t samples = std::min<std::size_t>(100000, 10 * p);
        for (std::size_t s = 0; s < samples; ++s) {
            std::uint32_t j = dist(rng), k = dist(rng);
            if (binary && j == k) continue;
            lambda_max = std::max(lambda_max, std::abs(view.pair_correlation(make_pair_key(j, k), yc)));
        }
    }
    lambda_max /= static_cast<double>(n);

    std::vector<double> grid(t);
    for (std::size_t i = 0; i < t; ++i) {
        grid[i] = lambda_max * std::pow(ratio, static_cast<double>(i) / static_cast<double>(t - 1));
    }
    return grid;
}

ActiveSetResult active_set_solve(const CenteredDesignView& design,
                                 const std::vector<std::uint32_t>& active_main,
                                 const std::vector<PairKey>& active_pairs,
                                 const RealVector& y_centered, double lambda,
                                 const LassoPathConfig& config, const SparseFit* warm) {
    const std::size_t n = design.n();
    if (y_centered.size() != n) throw data_error("active_set_solve: response length mismatch");

    const std::size_t n_cols = active_main.size() + active_pairs.size();
    std::vector<std::vector<double>> cols(n_cols);
    std::vector<double> norms(n_cols, 0.0);
    std::vector<double> penalty(n_cols, 1.0);
    std::vector<double> coef(n_cols, 0.0);

    for (std::size_t c = 0; c < active_main.size(); ++c) {
        design.main_column(active_main[c], cols[c]);
        if (warm != nullptr) {
            const auto it = warm->beta.find(active_main[c]);
            if (it != warm->beta.end()) coef[c] = it->second;
        }
    }
    for (std::size_t c = 0; c < active_pairs.size(); ++c) {
        const std::size_t idx = active_main.size() + c;
        design.pair_column(active_pairs[c], cols[idx]);
        penalty[idx] = config.interaction_penalty;
        if (warm != nullptr) {
            const auto it = warm->theta.find(active_pairs[c]);
            if (it != warm->theta.end()) coef[idx] = it->second;
        }
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
        double acc = 0.0;
        for (double v : cols[c]) acc += v * v;
        norms[c] = acc / static_cast<double>(n);
    }

    RealVector residual(y_centered);
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (coef[c] == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) residual[i] -= coef[c] * cols[c][i];
    }

    std::size_t cycles = 0;
    if (n_cols > 0) {
        for (;; ++cycles) {
            if (cycles >= config.cd_max_cycles) {
                throw solver_error("active_set_solve: coordinate descent exceeded " +
                                   std::to_string(config.cd_max_cycles) + " cycles at lambda = " +
                                   std::to_string(lambda));
            }
            double max_change = 0.0;
            for (std::size_t c = 0; c < n_cols; ++c) {
                if (norms[c] <= 0.0) continue;  // constant column, coefficient stays 0
                double g = 0.0;
                for (std::size_t i = 0; i < n; ++i) g += cols[c][i] * residual[i];
                g /= static_cast<double>(n);
                const double u = g + norms[c] * coef[c];
                const double updated = soft_threshold(u, lambda * penalty[c]) / norms[c];
                const double delta = updated - coef[c];
                if (delta != 0.0) {
                    for (std::size_t i = 0; i < n; ++i) residual[i] -= delta * cols[c][i];
                    coef[c] = updated;
                }
                max_change = std::max(max_change, std::abs(delta));
            }
            if (max_change < config.cd_tol) {
                ++cycles;
                break;
            }
        }
    }

    ActiveSetResult out;
    out.fit.lambda = lambda;
    out.fit.cd_cycles = cycles;
    double l1_main = 0.0, l1_pair = 0.0;
    for (std::size_t c = 0; c < active_main.size(); ++c) {
        if (coef[c] != 0.0) {
            out.fit.beta[active_main[c]] = coef[c];
            l1_main += std::abs(coef[c]);
        }
    }
    for (std::size_t c = 0; c < active_pairs.size(); ++c) {
        const double v = coef[active_main.size() + c];
        if (v != 0.0) {
            out.fit.theta[active_pairs[c]] = v;
            l1_pair += std::abs(v);
        }
    }
    double rss = 0.0;
    for (double v : residual) rss += v * v;
    out.fit.objective = rss / (2.0 * static_cast<double>(n)) +
                        lambda * (l1_main + config.interaction_penalty * l1_pair);
    out.residual = std::move(residual);
    return out;
}

std::vector<PairKey> kkt_check_interactions(const RealVector& residual, const RealMatrix& x,
                                            double lambda, const LassoPathConfig& config,
                                            std::uint64_t seed_stream) {
    if (residual.size() != x.n_rows()) {
        throw data_error("kkt_check_interactions: residual length mismatch");
    }
    double l1 = 0.0;
    for (double v : residual) l1 += std::abs(v);
    if (l1 <= 0.0) return {};

    const std::size_t n = x.n_rows();
    const CenteredDesignView view(x);
    const double threshold = lambda * config.interaction_penalty;

    // Screening runs on raw products; tighten the threshold by the exact
    // centering correction 2 mu_max max_j |r^T Xc_j| / n so no centered
    // violator can hide below the raw screen level.
    double max_main = 0.0;
    for (std::size_t j = 0; j < x.n_cols(); ++j) {
        max_main = std::max(max_main, std::abs(view.main_correlation(j, residual)));
    }
    const double bound = 2.0 * view.max_abs_column_mean() * max_main / static_cast<double>(n);
    const double screen_threshold = threshold - bound;

    const InteractionScreener screener(x, config);
    std::vector<PairKey> candidates;
    bool degenerate = screen_threshold <= 0.0;
    if (!degenerate) {
        candidates = screener.screen(residual, screen_threshold, seed_stream, degenerate);
    }
    if (degenerate) {
        if (x.n_cols() > 2000) {
            throw solver_error(
                "kkt_check_interactions: threshold too small for probabilistic screening "
                "and p too large for the exact fallback");
        }
        candidates.clear();
        for (std::uint32_t j = 0; j + 1 < x.n_cols(); ++j) {
            for (std::uint32_t k = j + 1; k < x.n_cols(); ++k) candidates.push_back({j, k});
        }
    }

    std::vector<PairKey> violations;
    for (const PairKey key : candidates) {
        const double corr = std::abs(view.pair_correlation(key, residual)) / static_cast<double>(n);
        if (corr > threshold) violations.push_back(key);
    }
    std::sort(violations.begin(), violations.end());
    return violations;
}

double exhaustive_kkt_max_correlation(const CenteredDesignView& design,
                                      const RealVector& residual,
                                      double interaction_penalty, bool exclude_diagonal) {
    const double n = static_cast<double>(design.n());
    double worst = 0.0;
    for (std::size_t j = 0; j < design.p(); ++j) {
        worst = std::max(worst, std::abs(design.main_correlation(j, residual)) / n);
    }
    for (std::uint32_t j = 0; j < design.p(); ++j) {
        for (std::uint32_t k = j; k < design.p(); ++k) {
            if (exclude_diagonal && j == k) continue;
            const double corr =
                std::abs(design.pair_correlation({j, k}, residual)) / n / interaction_penalty;
            worst = std::max(worst, corr);
        }
    }
    return worst;
}

std::vector<SparseFit> lasso_path(const RealMatrix& x, const RealVector& y,
                                  const LassoPathConfig& config_in) {
    if (y.size() != x.n_rows()) throw data_error("lasso_path: response length mismatch");
    const std::size_t n = x.n_rows();
    const std::size_t p = x.n_cols();

    LassoPathConfig config = config_in;
    if (all_entries_pm1(x)) config.exclude_diagonal = true;

    RealVector yc(y);
    const double ybar = centered_mean(yc);
    for (double& v : yc) v -= ybar;

    std::vector<double> lambdas = config.lambdas;
    if (lambdas.empty()) {
        lambdas = auto_lambda_grid(x, y, config.grid_size, config.grid_ratio, config.seed);
    } else {
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            const bool decreasing = i == 0 || lambdas[i - 1] > lambdas[i];
            if (!(lambdas[i] > 0.0) || !decreasing) {
                throw data_error("lasso_path: lambda grid must be strictly decreasing and positive");
            }
        }
    }

    const CenteredDesignView view(x);
    const InteractionScreener screener(x, config);

    std::vector<SparseFit> path;
    std::vector<std::uint32_t> active_main;
    std::vector<PairKey> active_pairs;
    SparseFit warm;
    bool have_warm = false;

    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        const double lambda = lambdas[li];
        // Warm start from the support of the previous solution.
        if (have_warm) {
            active_main.clear();
            for (const auto& [j, v] : warm.beta) active_main.push_back(j);
            active_pairs.clear();
            for (const auto& [key, v] : warm.theta) active_pairs.push_back(key);
        }

        ActiveSetResult solved;
        bool done = false;
        bool screen_degenerate_seen = false;
        std::size_t iterations = 0;
        const double pair_threshold = lambda * config.interaction_penalty;
        double kkt_residual_max = -std::numeric_limits<double>::infinity();

        while (!done) {
            if (iterations >= config.max_active_set_iterations) {
                throw solver_error("lasso_path: active set did not close at lambda index " +
                                   std::to_string(li));
            }
            ++iterations;
            solved = active_set_solve(view, active_main, active_pairs, yc, lambda, config,
                                      have_warm || iterations > 1 ? &warm : nullptr);
            warm = solved.fit;
            have_warm = true;

            // Exact main-effect violation sweep.
            kkt_residual_max = -std::numeric_limits<double>::infinity();
            std::vector<std::uint32_t> new_main;
            double max_main_corr = 0.0;
            for (std::uint32_t j = 0; j < p; ++j) {
                const double corr =
                    std::abs(view.main_correlation(j, solved.residual)) / static_cast<double>(n);
                max_main_corr = std::max(max_main_corr, corr);
                kkt_residual_max = std::max(kkt_residual_max, corr - lambda);
                if (corr > lambda &&
                    std::find(active_main.begin(), active_main.end(), j) == active_main.end()) {
                    new_main.push_back(j);
                }
            }

            // Square terms are screened exactly; for binary designs they are
            // excluded altogether.
            std::vector<PairKey> new_pairs;
            if (!config.exclude_diagonal) {
                for (std::uint32_t j = 0; j < p; ++j) {
                    const PairKey key{j, j};
                    const double corr = std::abs(view.pair_correlation(key, solved.residual)) /
                                        static_cast<double>(n);
                    kkt_residual_max = std::max(kkt_residual_max, corr - pair_threshold);
                    if (corr > pair_threshold &&
                        std::find(active_pairs.begin(), active_pairs.end(), key) ==
                            active_pairs.end()) {
                        new_pairs.push_back(key);
                    }
                }
            }

            // Off-diagonal pairs via xyz screening plus exact re-verification.
            const double bound =
                2.0 * view.max_abs_column_mean() * max_main_corr;
            const double screen_threshold = pair_threshold - bound;
            bool degenerate = screen_threshold <= 0.0;
            std::vector<PairKey> candidates;
            if (!degenerate) {
                candidates = screener.screen(solved.residual, screen_threshold,
                                             li * config.max_active_set_iterations + iterations,
                                             degenerate);
            }
            if (degenerate) {
                screen_degenerate_seen = true;
                if (p > 2000) {
                    throw solver_error("lasso_path: degenerate screening threshold at lambda index " +
                                       std::to_string(li) + " with p too large for exact fallback");
                }
                candidates.clear();
                for (std::uint32_t j = 0; j + 1 < p; ++j) {
                    for (std::uint32_t k = j + 1; k < p; ++k) candidates.push_back({j, k});
                }
            }
            for (const PairKey key : candidates) {
                const double corr = std::abs(view.pair_correlation(key, solved.residual)) /
                                    static_cast<double>(n);
                kkt_residual_max = std::max(kkt_residual_max, corr - pair_threshold);
                if (corr > pair_threshold &&
                    std::find(active_pairs.begin(), active_pairs.end(), key) ==
                        active_pairs.end()) {
                    new_pairs.push_back(key);
                }
            }

            if (new_main.empty() && new_pairs.empty()) {
                done = true;
            } else {
                active_main.insert(active_main.end(), new_main.begin(), new_main.end());
                std::sort(new_pairs.begin(), new_pairs.end());
                new_pairs.erase(std::unique(new_pairs.begin(), new_pairs.end()), new_pairs.end());
                active_pairs.insert(active_pairs.end(), new_pairs.begin(), new_pairs.end());
            }
        }

        SparseFit fit = solved.fit;
        fit.active_set_iterations = iterations;
        fit.kkt_residual_max = kkt_residual_max;
        fit.screening_degenerate = screen_degenerate_seen;
        if (config.certify_exhaustive && p <= config.certify_max_p) {
            const double worst = exhaustive_kkt_max_correlation(
                view, solved.residual, config.interaction_penalty, config.exclude_diagonal);
            fit.certified_exhaustive = worst <= lambda * (1.0 + 1e-6);
        }
        path.push_back(fit);
        warm = path.back();
    }
    return path;
}

} // namespace xyz
