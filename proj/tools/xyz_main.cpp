// xyz command line: dataset import/export, interaction search, interaction
// lasso, and benchmark suites emitting figure-ready CSV.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 guard exceeded,
// 5 solver failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"

#include "xyz/dataset_io.hpp"
#include "xyz/errors.hpp"
#include "xyz/experiments.hpp"
#include "xyz/lasso.hpp"
#include "xyz/oracle.hpp"
#include "xyz/rng.hpp"
#include "xyz/search.hpp"
#include "xyz/synthetic.hpp"
#include "xyz/transforms.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned resolve_threads(unsigned flag_value) {
    if (flag_value != 0) return flag_value;
    if (const char* env = std::getenv("XYZ_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 0;  // library default: hardware concurrency
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------- import

int cmd_import(const fs::path& in, const fs::path& out, const std::string& kind,
               bool zero_one, cli::Manifest& manifest) {
    xyz::CsvImportOptions options;
    if (kind == "binary") options.kind = xyz::DatasetKind::binary;
    else if (kind == "real") options.kind = xyz::DatasetKind::real;
    else throw usage_error("--kind must be binary or real");
    options.zero_one_remap = zero_one;

    const xyz::Dataset dataset = xyz::import_csv(in, options);
    xyz::write_dataset(out, dataset);

    double lo = 0, hi = 0, mean = 0;
    std::size_t plus = 0;
    if (dataset.kind == xyz::DatasetKind::binary) {
        for (std::size_t j = 0; j < dataset.n_cols(); ++j) {
            for (std::size_t i = 0; i < dataset.n_rows(); ++i) {
                if (dataset.packed.get(i, j) > 0) ++plus;
            }
        }
        std::printf("imported binary dataset: n=%zu p=%zu (+1 fraction %.4f)\n",
                    dataset.n_rows(), dataset.n_cols(),
                    double(plus) / double(dataset.n_rows() * dataset.n_cols()));
    } else {
        lo = hi = dataset.real(0, 0);
        for (const double v : dataset.real.values()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            mean += v;
        }
        mean /= double(dataset.n_rows() * dataset.n_cols());
        std::printf("imported real dataset: n=%zu p=%zu min=%g max=%g mean=%g\n",
                    dataset.n_rows(), dataset.n_cols(), lo, hi, mean);
    }
    manifest.add_input(in);
    manifest.add_output(out);
    manifest.body()["n"] = dataset.n_rows();
    manifest.body()["p"] = dataset.n_cols();
    return 0;
}

// ---------------------------------------------------------------- search

int cmd_search(const fs::path& x_path, const fs::path& y_path, const fs::path& out,
               double gamma, const std::string& m_flag, const std::string& l_flag,
               double eta, std::uint64_t seed, bool negatives, const std::string& format,
               const std::string& transform, bool rescale, double cap, unsigned threads,
               std::uint64_t max_candidates, cli::Manifest& manifest) {
    const xyz::Dataset xd = xyz::read_dataset(x_path);
    const xyz::Dataset yd = xyz::read_dataset(y_path);
    if (yd.n_cols() != 1) throw xyz::data_error("response dataset must have one column");
    if (yd.n_rows() != xd.n_rows()) throw xyz::data_error("X and Y row counts differ");

    xyz::SearchConfig cfg;
    cfg.gamma = gamma;
    cfg.seed = seed;
    cfg.search_negatives = negatives;
    cfg.threads = resolve_threads(threads);
    if (max_candidates != 0) cfg.max_candidates_per_rep = max_candidates;

    const std::size_t n = xd.n_rows(), p = xd.n_cols();

    // Mode from the dataset kinds.
    xyz::RealMatrix x_real;
    xyz::RealVector y_real;
    std::vector<std::int8_t> y_sign;
    if (xd.kind == xyz::DatasetKind::binary && yd.kind == xyz::DatasetKind::binary) {
        cfg.mode = xyz::SearchMode::binary;
        y_sign = yd.sign_column(0);
    } else if (xd.kind == xyz::DatasetKind::binary) {
        cfg.mode = xyz::SearchMode::continuous_y;
        y_real = yd.real_column(0);
    } else {
        cfg.mode = xyz::SearchMode::continuous_xy;
        y_real = yd.real_column(0);
        if (transform == "sign") cfg.transform = xyz::BinarizeTransform::sign;
        else if (transform == "unbiased") cfg.transform = xyz::BinarizeTransform::unbiased;
        else throw usage_error("--transform must be sign or unbiased");
        x_real = xd.real;
        if (cap > 0.0) x_real = xyz::cap_entries(x_real, cap);
        if (rescale) {
            auto [xs, ys] = xyz::rescale_rows(x_real, y_real);
            x_real = std::move(xs);
            y_real = std::move(ys);
        }
    }

    // M: explicit, or the plug-in cost-model optimum from a strength sample.
    std::mt19937_64 sample_rng = xyz::make_stream(seed, 0xdead);
    xyz::StrengthSample sample;
    const std::size_t sample_size = std::min<std::size_t>(100000, 10 * p);
    if (cfg.mode == xyz::SearchMode::binary) {
        const xyz::PackedMatrix z = xyz::build_z(xd.packed, y_sign);
        sample = xyz::sample_strengths(xd.packed, z, sample_size, sample_rng);
    } else if (cfg.mode == xyz::SearchMode::continuous_y) {
        sample = xyz::sample_strengths(xd.packed, std::span<const double>(y_real), sample_size,
                                       sample_rng);
    } else {
        sample = xyz::sample_strengths(x_real, y_real, cfg.transform, sample_size, sample_rng);
    }

    if (m_flag == "auto") {
        const xyz::MSelection sel = xyz::optimal_m(std::min(gamma, 1.0 - 1e-12), sample, n, p);
        cfg.m = sel.m;
        std::printf("auto M* = %zu (gamma0 = %.4f, objective rel. err. %.2e%s)\n", sel.m,
                    sel.gamma0, sel.objective_rel_err,
                    sel.hit_range_cap ? "; hit the 64-bit key cap" : "");
        manifest.body()["m_selection"] = {{"m", sel.m},
                                          {"gamma0", sel.gamma0},
                                          {"objective", sel.objective},
                                          {"objective_rel_err", sel.objective_rel_err}};
    } else {
        cfg.m = static_cast<std::size_t>(std::stoul(m_flag));
    }
    const double gamma0 = std::pow(double(p), -1.0 / double(cfg.m));
    if (gamma0 < gamma) {
        std::printf("gamma0 = p^(-1/M) = %.4f, predicted runtime exponent %.3f\n", gamma0,
                    xyz::runtime_exponent(gamma, gamma0));
    } else {
        std::printf("gamma0 = p^(-1/M) = %.4f (>= gamma, exponent formula not applicable)\n",
                    gamma0);
    }

    if (l_flag == "auto") {
        cfg.l = xyz::choose_l(cfg.m, gamma, eta);
        std::printf("auto L = %zu (eta target %.3f)\n", cfg.l, eta);
    } else {
        cfg.l = static_cast<std::size_t>(std::stoul(l_flag));
    }

    xyz::SearchReport report;
    if (cfg.mode == xyz::SearchMode::binary) {
        report = xyz::xyz_search(xd.packed, std::span<const std::int8_t>(y_sign), cfg);
    } else if (cfg.mode == xyz::SearchMode::continuous_y) {
        report = xyz::xyz_search(xd.packed, y_real, cfg);
    } else {
        report = xyz::xyz_search(x_real, y_real, cfg);
    }

    // Hit stream in discovery order; indices reported 1-based.
    std::ofstream hits(out, std::ios::trunc);
    if (!hits) throw xyz::data_error("cannot open output " + out.string());
    if (format == "csv") {
        hits << "j,k,strength,repetition,sign\n";
        for (const auto& h : report.hits) {
            hits << (h.j + 1) << ',' << (h.k + 1) << ',' << format_double(h.strength) << ','
                 << h.found_at_repetition << ',' << h.sign << '\n';
        }
    } else if (format == "jsonl") {
        for (const auto& h : report.hits) {
            json line = {{"j", h.j + 1},
                         {"k", h.k + 1},
                         {"strength", h.strength},
                         {"repetition", h.found_at_repetition},
                         {"sign", h.sign}};
            hits << line.dump() << '\n';
        }
    } else {
        throw usage_error("--format must be csv or jsonl");
    }
    hits.close();

    std::printf("hits: %zu  repetitions: %zu  checked: %llu  aborted: %zu  wall: %.3fs\n",
                report.hits.size(), report.repetitions_run,
                static_cast<unsigned long long>(report.candidates_checked),
                report.aborted_repetitions, report.wall_time_s);

    manifest.add_input(x_path);
    manifest.add_input(y_path);
    manifest.add_output(out);
    manifest.body()["config"] = {{"m", cfg.m},
                                 {"l", cfg.l},
                                 {"gamma", cfg.gamma},
                                 {"eta", eta},
                                 {"seed", cfg.seed},
                                 {"negatives", cfg.search_negatives},
                                 {"mode", static_cast<int>(cfg.mode)},
                                 {"threads", cfg.threads}};
    manifest.body()["report"] = {{"hits", report.hits.size()},
                                 {"repetitions", report.repetitions_run},
                                 {"candidates_checked", report.candidates_checked},
                                 {"candidates_enumerated", report.candidates_enumerated},
                                 {"aborted_repetitions", report.aborted_repetitions},
                                 {"estimated_complexity", report.estimated_c},
                                 {"gamma0", report.gamma0},
                                 {"wall_time_s", report.wall_time_s}};
    return 0;
}

// ---------------------------------------------------------------- lasso

int cmd_lasso(const fs::path& x_path, const fs::path& y_path, const fs::path& out,
              const std::string& grid_flag, const fs::path& lambdas_file,
              const std::string& xyz_l, double eta, double penalty, std::uint64_t seed,
              unsigned threads, cli::Manifest& manifest) {
    const xyz::Dataset xd = xyz::read_dataset(x_path);
    const xyz::Dataset yd = xyz::read_dataset(y_path);
    if (yd.n_cols() != 1) throw xyz::data_error("response dataset must have one column");
    if (yd.n_rows() != xd.n_rows()) throw xyz::data_error("X and Y row counts differ");

    const xyz::RealMatrix x = xd.as_real();
    const xyz::RealVector y = yd.real_column(0);

    xyz::LassoPathConfig cfg;
    cfg.seed = seed;
    cfg.interaction_penalty = penalty;
    cfg.threads = resolve_threads(threads);
    cfg.kkt_eta = eta;
    if (xyz_l != "auto") {
        cfg.kkt_l = static_cast<std::size_t>(std::stoul(xyz_l));
        cfg.kkt_eta = 0.0;
    }
    if (!lambdas_file.empty()) {
        std::ifstream in(lambdas_file);
        if (!in) throw xyz::data_error("cannot open " + lambdas_file.string());
        double v;
        while (in >> v) cfg.lambdas.push_back(v);
        if (cfg.lambdas.empty()) throw xyz::data_error("empty lambda file");
    } else {
        const auto comma = grid_flag.find(',');
        if (comma == std::string::npos) throw usage_error("--grid expects T,ratio");
        cfg.grid_size = static_cast<std::size_t>(std::stoul(grid_flag.substr(0, comma)));
        cfg.grid_ratio = std::stod(grid_flag.substr(comma + 1));
    }

    const std::vector<xyz::SparseFit> path = xyz::lasso_path(x, y, cfg);

    std::ofstream coeffs(out, std::ios::trunc);
    if (!coeffs) throw xyz::data_error("cannot open output " + out.string());
    coeffs << "lambda_index,lambda,term,j,k,coefficient\n";
    for (std::size_t li = 0; li < path.size(); ++li) {
        for (const auto& [j, v] : path[li].beta) {
            coeffs << (li + 1) << ',' << format_double(path[li].lambda) << ",main," << (j + 1)
                   << ",," << format_double(v) << '\n';
        }
        for (const auto& [key, v] : path[li].theta) {
            coeffs << (li + 1) << ',' << format_double(path[li].lambda) << ",pair,"
                   << (key.j + 1) << ',' << (key.k + 1) << ',' << format_double(v) << '\n';
        }
    }
    coeffs.close();

    const fs::path metrics_path = out.string() + ".metrics.csv";
    std::ofstream metrics(metrics_path, std::ios::trunc);
    metrics << "lambda_index,lambda,n_main,n_pair,objective,kkt_residual_max,certified,"
               "screening_degenerate,active_set_iterations,cd_cycles\n";
    for (std::size_t li = 0; li < path.size(); ++li) {
        const auto& fit = path[li];
        metrics << (li + 1) << ',' << format_double(fit.lambda) << ',' << fit.beta.size() << ','
                << fit.theta.size() << ',' << format_double(fit.objective) << ','
                << format_double(fit.kkt_residual_max) << ',' << (fit.certified_exhaustive ? 1 : 0)
                << ',' << (fit.screening_degenerate ? 1 : 0) << ',' << fit.active_set_iterations
                << ',' << fit.cd_cycles << '\n';
    }
    metrics.close();

    std::size_t certified = 0;
    for (const auto& fit : path) certified += fit.certified_exhaustive ? 1 : 0;
    std::printf("path points: %zu  certified: %zu  final support: %zu mains + %zu pairs\n",
                path.size(), certified, path.back().beta.size(), path.back().theta.size());

    manifest.add_input(x_path);
    manifest.add_input(y_path);
    manifest.add_output(out);
    manifest.add_output(metrics_path);
    manifest.body()["config"] = {{"grid_size", cfg.grid_size},
                                 {"grid_ratio", cfg.grid_ratio},
                                 {"kkt_eta", cfg.kkt_eta},
                                 {"kkt_l", cfg.kkt_l ? json(*cfg.kkt_l) : json()},
                                 {"interaction_penalty", cfg.interaction_penalty},
                                 {"seed", cfg.seed},
                                 {"threads", cfg.threads}};
    return 0;
}

// ---------------------------------------------------------------- bench

std::vector<std::size_t> parse_sizes(const std::string& csv) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const auto comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? csv.npos : comma - pos);
        out.push_back(static_cast<std::size_t>(std::stoul(tok)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const auto comma = csv.find(',', pos);
        out.push_back(std::stod(csv.substr(pos, comma == std::string::npos ? csv.npos : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int cmd_bench_scaling(const std::string& p_csv, std::size_t n, double gamma, double gamma0,
                      std::size_t runs, std::uint64_t seed, bool force, const fs::path& out,
                      cli::Manifest& manifest) {
    const auto ps = parse_sizes(p_csv);
    for (const std::size_t p : ps) {
        if ((p > 32768 || n > 8192) && !force) {
            throw xyz::guard_error("scaling suite guard: p <= 32768 and n <= 8192 "
                                   "(--force to override)");
        }
    }
    const xyz::ScalingResult result = xyz::run_scaling_suite(ps, n, gamma, gamma0, runs, seed);

    std::ofstream csv(out, std::ios::trunc);
    if (!csv) throw xyz::data_error("cannot open output " + out.string());
    csv << "p,m,gamma0,median_time_s,mean_repetitions,found_all\n";
    for (const auto& pt : result.points) {
        csv << pt.p << ',' << pt.m << ',' << format_double(pt.gamma0) << ','
            << format_double(pt.median_time_s) << ',' << format_double(pt.mean_repetitions)
            << ',' << (pt.planted_found_in_all_runs ? 1 : 0) << '\n';
    }
    csv.close();
    std::printf("fitted log-log slope %.3f, predicted exponent %.3f\n", result.fitted_slope,
                result.predicted_exponent);
    manifest.add_output(out);
    manifest.body()["summary"] = {{"fitted_slope", result.fitted_slope},
                                  {"predicted_exponent", result.predicted_exponent}};
    return 0;
}

int cmd_bench_gvm(const std::string& p_csv, const std::string& gamma_csv, std::size_t n,
                  std::size_t empirical_p, std::size_t trials, std::uint64_t seed,
                  const fs::path& out, cli::Manifest& manifest) {
    const auto points = xyz::run_gauss_vs_minimal(parse_sizes(p_csv), parse_doubles(gamma_csv),
                                                  n, empirical_p, trials, seed);
    std::ofstream csv(out, std::ios::trunc);
    if (!csv) throw xyz::data_error("cannot open output " + out.string());
    csv << "p,gamma,m,tau,eta_minimal,eta_gauss,emp_minimal,emp_gauss\n";
    bool dominated = true;
    for (const auto& pt : points) {
        csv << pt.p << ',' << format_double(pt.gamma) << ',' << pt.m << ','
            << format_double(pt.tau) << ',' << format_double(pt.eta_minimal) << ','
            << format_double(pt.eta_gauss) << ',';
        if (pt.has_empirical) {
            csv << format_double(pt.emp_minimal) << ',' << format_double(pt.emp_gauss);
        } else {
            csv << ',';
        }
        csv << '\n';
        dominated = dominated && pt.eta_minimal > pt.eta_gauss;
    }
    csv.close();
    std::printf("minimal subsampling dominates the Gaussian baseline at every point: %s\n",
                dominated ? "yes" : "NO");
    manifest.add_output(out);
    manifest.body()["summary"] = {{"minimal_dominates", dominated}};
    return 0;
}

int cmd_bench_naive(std::size_t p, std::size_t n, double gamma, const std::string& budget_csv,
                    std::uint64_t seed, bool force, const fs::path& out,
                    cli::Manifest& manifest) {
    if (p > 20000 && !force) {
        throw xyz::guard_error("naive-baseline guard: p <= 20000 (--force to override)");
    }
    std::vector<std::uint64_t> budgets;
    for (const std::size_t b : parse_sizes(budget_csv)) budgets.push_back(b);
    const xyz::NaiveRaceResult result = xyz::run_naive_race(n, p, gamma, budgets, seed);

    std::ofstream csv(out, std::ios::trunc);
    if (!csv) throw xyz::data_error("cannot open output " + out.string());
    csv << "budget,xyz_best,naive_best\n";
    for (const auto& pt : result.points) {
        csv << pt.budget << ',' << format_double(pt.xyz_best) << ','
            << format_double(pt.naive_best) << '\n';
    }
    csv.close();
    std::printf("planted strength %.4f reached by xyz at budget %llu, naive at %llu%s\n",
                result.planted_strength,
                static_cast<unsigned long long>(result.xyz_budget_to_planted),
                static_cast<unsigned long long>(result.naive_budget_to_planted),
                result.naive_budget_to_planted == 0 ? " (never)" : "");
    manifest.add_output(out);
    manifest.body()["summary"] = {
        {"planted_strength", result.planted_strength},
        {"xyz_budget_to_planted", result.xyz_budget_to_planted},
        {"naive_budget_to_planted", result.naive_budget_to_planted}};
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"xyz: subquadratic search for strong pairwise interactions"};
    app.require_subcommand(1);

    // import
    auto* import_cmd = app.add_subcommand("import", "convert a CSV file to a dataset file");
    std::string import_in, import_out, import_kind = "real";
    bool zero_one = false;
    import_cmd->add_option("--in", import_in, "input CSV")->required();
    import_cmd->add_option("--out", import_out, "output dataset file")->required();
    import_cmd->add_option("--kind", import_kind, "binary or real");
    import_cmd->add_flag("--zero-one", zero_one, "accept {0,1} and store as 2x-1");

    // export
    auto* export_cmd = app.add_subcommand("export", "convert a dataset file back to CSV");
    std::string export_in, export_out;
    export_cmd->add_option("--in", export_in, "input dataset file")->required();
    export_cmd->add_option("--out", export_out, "output CSV")->required();

    // search
    auto* search_cmd = app.add_subcommand("search", "find strong pairwise interactions");
    std::string sx, sy, sout, m_flag = "auto", l_flag = "auto", format = "csv",
                transform = "sign";
    double gamma = 0.9, eta = 0.99, cap = 0.0;
    std::uint64_t seed = 1, max_candidates = 0;
    unsigned threads = 0;
    bool negatives = true, rescale = false;
    search_cmd->add_option("--x", sx, "predictor dataset")->required();
    search_cmd->add_option("--y", sy, "response dataset (one column)")->required();
    search_cmd->add_option("--out", sout, "hit output file")->required();
    search_cmd->add_option("--gamma", gamma, "strength threshold in (0,1]");
    search_cmd->add_option("--M", m_flag, "subsample size or 'auto'");
    search_cmd->add_option("--L", l_flag, "repetitions or 'auto'");
    search_cmd->add_option("--eta", eta, "discovery target for auto L");
    search_cmd->add_option("--seed", seed, "master seed");
    search_cmd->add_flag("--negatives,!--no-negatives", negatives,
                         "also search with the response negated");
    search_cmd->add_option("--format", format, "csv or jsonl");
    search_cmd->add_option("--transform", transform,
                           "binarize transform for real predictors (sign|unbiased)");
    search_cmd->add_flag("--rescale", rescale, "row-rescale real predictors into [-1,1]");
    search_cmd->add_option("--cap", cap, "cap |entries| before searching (real predictors)");
    search_cmd->add_option("--threads", threads, "worker threads (default: cores)");
    search_cmd->add_option("--max-candidates", max_candidates,
                           "per-repetition candidate guard (default 16p)");

    // lasso
    auto* lasso_cmd = app.add_subcommand("lasso", "interaction lasso path");
    std::string lx, ly, lout, grid = "20,0.05", xyz_l = "auto", lambdas_file;
    double leta = 0.99, penalty = 1.0;
    std::uint64_t lseed = 1;
    unsigned lthreads = 1;
    lasso_cmd->add_option("--x", lx, "predictor dataset")->required();
    lasso_cmd->add_option("--y", ly, "response dataset (one column, real)")->required();
    lasso_cmd->add_option("--out", lout, "coefficient path output")->required();
    lasso_cmd->add_option("--grid", grid, "auto lambda grid as T,ratio");
    lasso_cmd->add_option("--lambdas", lambdas_file, "file with explicit lambda grid");
    lasso_cmd->add_option("--xyz-L", xyz_l, "xyz repetitions per KKT check or 'auto'");
    lasso_cmd->add_option("--eta", leta, "KKT screening discovery target");
    lasso_cmd->add_option("--penalty", penalty, "interaction penalty multiplier");
    lasso_cmd->add_option("--seed", lseed, "master seed");
    lasso_cmd->add_option("--threads", lthreads, "worker threads");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "benchmark suites (CSV output)");
    bench_cmd->require_subcommand(1);
    auto* scaling_cmd = bench_cmd->add_subcommand("scaling", "time-to-discovery vs p");
    std::string bp = "1000,2000,4000,8000,16000", bout;
    std::size_t bn = 1000, bruns = 5;
    double bgamma = 0.9, bgamma0 = 0.55;
    std::uint64_t bseed = 1;
    bool bforce = false;
    scaling_cmd->add_option("--p", bp, "comma-separated p values");
    scaling_cmd->add_option("--n", bn, "rows");
    scaling_cmd->add_option("--gamma", bgamma, "planted strength");
    scaling_cmd->add_option("--gamma0", bgamma0, "target p^(-1/M)");
    scaling_cmd->add_option("--runs", bruns, "timed runs per p (median)");
    scaling_cmd->add_option("--seed", bseed, "master seed");
    scaling_cmd->add_flag("--force", bforce, "override size guards");
    scaling_cmd->add_option("--out", bout, "output CSV")->required();

    auto* gvm_cmd = bench_cmd->add_subcommand("gauss-vs-minimal",
                                              "discovery probability comparison");
    std::string gp = "100,1000,10000", ggammas = "0.6,0.7,0.8,0.9,0.95", gout;
    std::size_t gn = 1000, gtrials = 20000, gemp = 1000;
    std::uint64_t gseed = 1;
    gvm_cmd->add_option("--p", gp, "comma-separated p values");
    gvm_cmd->add_option("--gammas", ggammas, "comma-separated strengths");
    gvm_cmd->add_option("--n", gn, "rows");
    gvm_cmd->add_option("--trials", gtrials, "Monte Carlo trials at the empirical p");
    gvm_cmd->add_option("--empirical-p", gemp, "p at which to also measure empirically");
    gvm_cmd->add_option("--seed", gseed, "master seed");
    gvm_cmd->add_option("--out", gout, "output CSV")->required();

    auto* naive_cmd = bench_cmd->add_subcommand("naive-baseline",
                                                "xyz vs uniform pair sampling");
    std::string nbudgets = "100,300,1000,3000,10000,30000", nout;
    std::size_t np = 2000, nn = 500;
    double ngamma = 0.9;
    std::uint64_t nseed = 1;
    bool nforce = false;
    naive_cmd->add_option("--p", np, "columns");
    naive_cmd->add_option("--n", nn, "rows");
    naive_cmd->add_option("--gamma", ngamma, "planted strength");
    naive_cmd->add_option("--budgets", nbudgets, "comma-separated evaluation budgets");
    naive_cmd->add_option("--seed", nseed, "master seed");
    naive_cmd->add_flag("--force", nforce, "override size guards");
    naive_cmd->add_option("--out", nout, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    cli::Manifest manifest(argc, argv);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        int rc = 0;
        fs::path manifest_target;
        if (*import_cmd) {
            rc = cmd_import(import_in, import_out, import_kind, zero_one, manifest);
            manifest_target = import_out;
        } else if (*export_cmd) {
            const xyz::Dataset d = xyz::read_dataset(export_in);
            xyz::export_csv(export_out, d);
            manifest.add_input(export_in);
            manifest.add_output(export_out);
            manifest_target = export_out;
        } else if (*search_cmd) {
            rc = cmd_search(sx, sy, sout, gamma, m_flag, l_flag, eta, seed, negatives, format,
                            transform, rescale, cap, threads, max_candidates, manifest);
            manifest_target = sout;
        } else if (*lasso_cmd) {
            rc = cmd_lasso(lx, ly, lout, grid, lambdas_file, xyz_l, leta, penalty, lseed,
                           lthreads, manifest);
            manifest_target = lout;
        } else if (*scaling_cmd) {
            rc = cmd_bench_scaling(bp, bn, bgamma, bgamma0, bruns, bseed, bforce, bout, manifest);
            manifest_target = bout;
        } else if (*gvm_cmd) {
            rc = cmd_bench_gvm(gp, ggammas, gn, gemp, gtrials, gseed, gout, manifest);
            manifest_target = gout;
        } else if (*naive_cmd) {
            rc = cmd_bench_naive(np, nn, ngamma, nbudgets, nseed, nforce, nout, manifest);
            manifest_target = nout;
        }
        manifest.body()["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!manifest_target.empty()) {
            manifest.write(manifest_target.string() + ".manifest.json");
        }
        return rc;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {  // stoul/stod on malformed flags
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const xyz::guard_error& e) {
        std::fprintf(stderr, "guard exceeded: %s\n", e.what());
        return 4;
    } catch (const xyz::solver_error& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 5;
    } catch (const xyz::data_error& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
