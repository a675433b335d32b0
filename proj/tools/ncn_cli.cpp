// Experiment driver: comparative optimizer runs with CSV/JSON artifacts, the
// saddle-escape iteration table, and the worst-case bound calculator.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncn/errors.hpp"
#include "ncn/escape_table.hpp"
#include "ncn/matrix_io.hpp"
#include "ncn/objective.hpp"
#include "ncn/optimizer.hpp"
#include "ncn/problems.hpp"
#include "ncn/rng.hpp"
#include "ncn/theory.hpp"
#include "ncn/trace_io.hpp"

namespace {

using nlohmann::json;

// NCN_LOG={error|info|debug}; anything unrecognized falls back to error.
int log_level() {
    static const int level = [] {
        const char* env = std::getenv("NCN_LOG");
        if (!env) return 0;
        if (std::strcmp(env, "debug") == 0) return 2;
        if (std::strcmp(env, "info") == 0) return 1;
        return 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[info] %s\n", msg.c_str());
}

struct RunOptions {
    std::string problem;
    std::string method = "both";
    double lambda = 0.1;
    std::vector<double> diag;
    std::string diag_file;
    std::string matrix_file;
    std::size_t matfac_rows = 10;
    std::size_t matfac_cols = 10;
    std::size_t rank = 1;
    std::uint64_t matfac_seed = 42;
    double matfac_noise_std = 0.0;
    std::uint64_t seed = 0;
    double init_std = 1.0;
    std::string init_file;
    double alpha = 0.1;
    double beta = 0.9;
    double epsilon = 1e-12;
    double m = 1e-12;
    double lip_m = -1.0;  // negative means derive from the problem
    double lip_l = -1.0;
    std::size_t max_iters = 1000;
    std::size_t max_resample_draws = 1000;
    double min_step = 1e-16;
    std::string out = "run";
    std::string config_path;
};

std::uint64_t get_u64(const json& v, const std::string& key) {
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ncn::InvalidParameter("config: key '" + key + "' must be an integer");
    return v.get<std::uint64_t>();
}

// The config file overrides whatever the flags said, key by key. Unknown keys
// are rejected so typos cannot silently fall back to defaults.
void apply_run_config(RunOptions& opt, const json& cfg) {
    for (const auto& [key, value] : cfg.items()) {
        if (key == "problem") opt.problem = value.get<std::string>();
        else if (key == "method") opt.method = value.get<std::string>();
        else if (key == "lambda") opt.lambda = value.get<double>();
        else if (key == "diag") opt.diag = value.get<std::vector<double>>();
        else if (key == "diag_file") opt.diag_file = value.get<std::string>();
        else if (key == "matrix_file") opt.matrix_file = value.get<std::string>();
        else if (key == "matfac_rows") opt.matfac_rows = get_u64(value, key);
        else if (key == "matfac_cols") opt.matfac_cols = get_u64(value, key);
        else if (key == "rank") opt.rank = get_u64(value, key);
        else if (key == "matfac_seed") opt.matfac_seed = get_u64(value, key);
        else if (key == "matfac_noise_std") opt.matfac_noise_std = value.get<double>();
        else if (key == "seed") opt.seed = get_u64(value, key);
        else if (key == "init_std") opt.init_std = value.get<double>();
        else if (key == "init_file") opt.init_file = value.get<std::string>();
        else if (key == "alpha") opt.alpha = value.get<double>();
        else if (key == "beta") opt.beta = value.get<double>();
        else if (key == "epsilon") opt.epsilon = value.get<double>();
        else if (key == "m") opt.m = value.get<double>();
        else if (key == "lip_m") opt.lip_m = value.get<double>();
        else if (key == "lip_l") opt.lip_l = value.get<double>();
        else if (key == "max_iters") opt.max_iters = get_u64(value, key);
        else if (key == "max_resample_draws") opt.max_resample_draws = get_u64(value, key);
        else if (key == "min_step") opt.min_step = value.get<double>();
        else if (key == "out") opt.out = value.get<std::string>();
        else throw ncn::InvalidParameter("config: unknown key '" + key + "'");
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ncn::InvalidParameter("cannot open config file '" + path + "'");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded())
        throw ncn::InvalidParameter("config file '" + path + "' is not valid JSON");
    if (!j.is_object()) throw ncn::InvalidParameter("config file must hold a JSON object");
    return j;
}

std::unique_ptr<ncn::Objective> build_problem(const RunOptions& opt) {
    if (opt.problem == "quad_saddle")
        return std::make_unique<ncn::QuadraticSaddle>(opt.lambda);
    if (opt.problem == "two_well") return std::make_unique<ncn::TwoWell>();
    if (opt.problem == "diag_quad") {
        std::vector<double> d = opt.diag;
        if (!opt.diag_file.empty()) {
            const ncn::Vector v = ncn::load_vector(opt.diag_file);
            d.assign(v.data().begin(), v.data().end());
        }
        if (d.empty())
            throw ncn::InvalidParameter("diag_quad needs --diag or --diag-file");
        return std::make_unique<ncn::DiagonalQuadratic>(d);
    }
    if (opt.problem == "matfac") {
        ncn::Matrix target = opt.matrix_file.empty()
                                 ? ncn::make_rank_factor_target(opt.matfac_rows, opt.matfac_cols,
                                                                opt.rank, opt.matfac_seed,
                                                                opt.matfac_noise_std)
                                 : ncn::load_matrix(opt.matrix_file);
        return std::make_unique<ncn::MatrixFactorization>(std::move(target), opt.rank);
    }
    throw ncn::InvalidParameter("unknown problem '" + opt.problem +
                                "' (expected quad_saddle, diag_quad, matfac, or two_well)");
}

// Fills in Lipschitz constants the user left negative: exact values for the
// quadratics (constant Hessian, so L = 0), sampled estimates otherwise.
void resolve_lipschitz(RunOptions& opt, const ncn::Objective& obj, const ncn::Vector& x0) {
    if (opt.lip_m >= 0.0 && opt.lip_l >= 0.0) return;
    double auto_m = 1.0;
    double auto_l = 0.0;
    if (opt.problem == "quad_saddle") {
        auto_m = 1.0;
    } else if (opt.problem == "diag_quad") {
        const ncn::SymmetricMatrix h = obj.hessian(x0);
        auto_m = 0.0;
        for (std::size_t i = 0; i < h.dim(); ++i) auto_m = std::max(auto_m, std::abs(h(i, i)));
        if (auto_m <= 0.0) auto_m = 1.0;
    } else {
        const ncn::LipschitzEstimate est = ncn::estimate_lipschitz(obj, x0, opt.seed + 1);
        auto_m = est.lipschitz_m;
        auto_l = est.lipschitz_l;
    }
    if (opt.lip_m < 0.0) opt.lip_m = auto_m;
    if (opt.lip_l < 0.0) opt.lip_l = auto_l;
}

json echo_config(const RunOptions& opt, const std::string& method) {
    json j;
    j["problem"] = opt.problem;
    j["method"] = method;
    if (opt.problem == "quad_saddle") j["lambda"] = opt.lambda;
    if (opt.problem == "diag_quad") {
        if (!opt.diag_file.empty()) j["diag_file"] = opt.diag_file;
        else j["diag"] = opt.diag;
    }
    if (opt.problem == "matfac") {
        if (!opt.matrix_file.empty()) {
            j["matrix_file"] = opt.matrix_file;
        } else {
            j["matfac_rows"] = opt.matfac_rows;
            j["matfac_cols"] = opt.matfac_cols;
            j["matfac_seed"] = opt.matfac_seed;
            j["matfac_noise_std"] = opt.matfac_noise_std;
        }
        j["rank"] = opt.rank;
    }
    j["seed"] = opt.seed;
    if (!opt.init_file.empty()) j["init_file"] = opt.init_file;
    else j["init_std"] = opt.init_std;
    j["alpha"] = opt.alpha;
    j["beta"] = opt.beta;
    j["epsilon"] = opt.epsilon;
    j["m"] = opt.m;
    j["lip_m"] = opt.lip_m;
    j["lip_l"] = opt.lip_l;
    j["max_iters"] = opt.max_iters;
    j["max_resample_draws"] = opt.max_resample_draws;
    j["min_step"] = opt.min_step;
    j["out"] = opt.out;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ncn::InvalidParameter("cannot open output file '" + path + "'");
    out << content;
}

int cmd_run(RunOptions opt) {
    if (!opt.config_path.empty()) apply_run_config(opt, load_json_file(opt.config_path));
    if (opt.method != "ncn" && opt.method != "gd" && opt.method != "both")
        throw ncn::InvalidParameter("method must be ncn, gd, or both");

    const std::unique_ptr<ncn::Objective> obj = build_problem(opt);
    const ncn::Vector x0 = opt.init_file.empty()
                               ? ncn::random_init(obj->dim(), opt.init_std, opt.seed)
                               : ncn::load_vector(opt.init_file);
    if (x0.size() != obj->dim())
        throw ncn::DimensionMismatch("initial point size does not match problem dimension");
    resolve_lipschitz(opt, *obj, x0);

    ncn::OptimizerConfig cfg;
    cfg.alpha = opt.alpha;
    cfg.beta = opt.beta;
    cfg.epsilon = opt.epsilon;
    cfg.m = opt.m;
    cfg.lipschitz_m = opt.lip_m;
    cfg.lipschitz_l = opt.lip_l;
    cfg.max_outer_iters = opt.max_iters;
    cfg.max_resample_draws = opt.max_resample_draws;
    cfg.min_step = opt.min_step;
    cfg.seed = opt.seed;
    cfg.validate();

    std::vector<std::string> methods;
    if (opt.method == "both") methods = {"ncn", "gd"};
    else methods = {opt.method};

    int exit_code = 0;
    for (const std::string& method : methods) {
        const auto start = std::chrono::steady_clock::now();
        const ncn::RunTrace trace = method == "ncn" ? ncn::ncn_run(x0, *obj, cfg)
                                                    : ncn::gd_run(x0, *obj, cfg);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        json summary = ncn::run_summary_json(trace, wall, opt.seed, echo_config(opt, method));
        const bool solver_error = trace.termination == ncn::Termination::StepUnderflow ||
                                  trace.termination == ncn::Termination::ResampleCapExceeded;
        if (solver_error) {
            summary["error"] = ncn::to_string(trace.termination);
            exit_code = 2;
        }

        write_text_file(opt.out + "_" + method + ".csv", ncn::trace_csv_string(trace));
        write_text_file(opt.out + "_" + method + "_summary.json", summary.dump(2) + "\n");

        log_info(method + ": " + ncn::to_string(trace.termination) + " after " +
                 std::to_string(trace.records.size() - 1) + " iterations, final f " +
                 std::to_string(trace.records.back().f_value));
        if (log_level() >= 2)
            std::fprintf(stderr, "%s", ncn::trace_csv_string(trace).c_str());
    }
    return exit_code;
}

int cmd_escape_table(const std::vector<double>& lambdas, const std::vector<double>& gammas,
                     const std::string& out_path) {
    const std::vector<ncn::EscapeCell> cells = ncn::escape_table(lambdas, gammas);
    std::string csv = "lambda,gamma,ncn_iters,gd_iters,ncn_closed_form,gd_closed_form\n";
    char buf[256];
    for (const ncn::EscapeCell& c : cells) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%lld,%lld,%lld,%lld\n", c.lambda, c.gamma,
                      c.ncn_iters, c.gd_iters, c.ncn_closed_form, c.gd_closed_form);
        csv += buf;
    }
    if (out_path.empty())
        std::fputs(csv.c_str(), stdout);
    else
        write_text_file(out_path, csv);
    log_info("escape table: " + std::to_string(cells.size()) + " cells");
    return 0;
}

void apply_bounds_config(ncn::TheoryConstants& c, const json& cfg) {
    for (const auto& [key, value] : cfg.items()) {
        if (key == "m") c.m = value.get<double>();
        else if (key == "lip_m") c.lipschitz_m = value.get<double>();
        else if (key == "lip_l") c.lipschitz_l = value.get<double>();
        else if (key == "alpha") c.alpha = value.get<double>();
        else if (key == "beta") c.beta = value.get<double>();
        else if (key == "epsilon") c.epsilon = value.get<double>();
        else if (key == "zeta") c.zeta = value.get<double>();
        else if (key == "gamma_c") c.gamma_c = value.get<double>();
        else if (key == "xi") c.xi = value.get<double>();
        else if (key == "n") c.n = get_u64(value, key);
        else if (key == "p") c.p = value.get<double>();
        else if (key == "f0_gap") c.f0_gap = value.get<double>();
        else throw ncn::InvalidParameter("config: unknown key '" + key + "'");
    }
}

int cmd_bounds(ncn::TheoryConstants c, const std::string& config_path) {
    if (!config_path.empty()) apply_bounds_config(c, load_json_file(config_path));
    const ncn::IterationBounds b = ncn::compute_bounds(c);
    json j;
    j["delta"] = b.delta;
    j["k1"] = b.k1;
    j["k2"] = b.k2;
    j["k3"] = b.k3;
    j["k4"] = b.k4;
    j["s_max"] = b.s_max;
    j["t_max"] = b.t_max;
    j["k_total"] = b.k_total;
    j["q_lower"] = b.q_lower;
    j["m_within_xi_margin"] = b.m_within_xi_margin;
    json echo;
    echo["m"] = c.m;
    echo["lip_m"] = c.lipschitz_m;
    echo["lip_l"] = c.lipschitz_l;
    echo["alpha"] = c.alpha;
    echo["beta"] = c.beta;
    echo["epsilon"] = c.epsilon;
    echo["zeta"] = c.zeta;
    echo["gamma_c"] = c.gamma_c;
    echo["xi"] = c.xi;
    echo["n"] = c.n;
    echo["p"] = c.p;
    echo["f0_gap"] = c.f0_gap;
    j["constants"] = echo;
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"saddle-escaping second-order optimizer experiments"};
    app.require_subcommand(1);

    RunOptions opt;
    CLI::App* run = app.add_subcommand("run", "optimize a problem and write trace artifacts");
    run->add_option("--problem", opt.problem,
                    "quad_saddle, diag_quad, matfac, or two_well")->required();
    run->add_option("--method", opt.method, "ncn, gd, or both");
    run->add_option("--lambda", opt.lambda, "quad_saddle curvature ratio in (0, 1]");
    run->add_option("--diag", opt.diag, "diag_quad coefficients")->delimiter(',');
    run->add_option("--diag-file", opt.diag_file, "diag_quad coefficients from a matrix file");
    run->add_option("--matrix-file", opt.matrix_file, "matfac explicit target matrix file");
    run->add_option("--matfac-rows", opt.matfac_rows, "synthetic target rows");
    run->add_option("--matfac-cols", opt.matfac_cols, "synthetic target cols");
    run->add_option("--rank", opt.rank, "factorization rank in [1, 3]");
    run->add_option("--matfac-seed", opt.matfac_seed, "synthetic target seed");
    run->add_option("--matfac-noise-std", opt.matfac_noise_std, "synthetic target noise std");
    run->add_option("--seed", opt.seed, "run seed (init and noise draws)");
    run->add_option("--init-std", opt.init_std, "random init standard deviation");
    run->add_option("--init-file", opt.init_file, "explicit initial point file");
    run->add_option("--alpha", opt.alpha, "Armijo slope fraction in (0, 0.5)");
    run->add_option("--beta", opt.beta, "backtracking shrink factor in (0, 1)");
    run->add_option("--epsilon", opt.epsilon, "target gradient-norm accuracy");
    run->add_option("--m", opt.m, "eigenvalue truncation floor");
    run->add_option("--lip-m", opt.lip_m, "Hessian spectral bound M (negative = auto)");
    run->add_option("--lip-l", opt.lip_l, "Hessian Lipschitz constant L (negative = auto)");
    run->add_option("--max-iters", opt.max_iters, "outer iteration cap");
    run->add_option("--max-resample-draws", opt.max_resample_draws, "noise draw cap");
    run->add_option("--min-step", opt.min_step, "backtracking floor");
    run->add_option("--out", opt.out, "output path prefix");
    run->add_option("--config", opt.config_path, "JSON config overriding the flags");

    std::vector<double> lambdas = {1.0, 0.1, 0.01, 1e-3, 1e-4};
    std::vector<double> gammas;
    for (int e = 1; e <= 20; ++e) gammas.push_back(std::pow(10.0, -e));
    std::string table_out;
    CLI::App* table = app.add_subcommand("escape-table",
                                         "saddle escape iteration counts on the quadratic saddle");
    table->add_option("--lambdas", lambdas, "curvature ratios in (0, 1]")->delimiter(',');
    table->add_option("--gammas", gammas, "initial distances in (0, 1)")->delimiter(',');
    table->add_option("--out", table_out, "output CSV path (default stdout)");

    ncn::TheoryConstants constants;
    std::string bounds_config;
    CLI::App* bounds = app.add_subcommand("bounds", "worst-case iteration bound calculator");
    bounds->add_option("--m", constants.m, "truncation floor");
    bounds->add_option("--lip-m", constants.lipschitz_m, "Hessian spectral bound M");
    bounds->add_option("--lip-l", constants.lipschitz_l, "Hessian Lipschitz constant L");
    bounds->add_option("--alpha", constants.alpha, "Armijo slope fraction");
    bounds->add_option("--beta", constants.beta, "backtracking shrink factor");
    bounds->add_option("--epsilon", constants.epsilon, "target accuracy");
    bounds->add_option("--zeta", constants.zeta, "target radius fraction in (0, 1)");
    bounds->add_option("--gamma-c", constants.gamma_c, "escape contraction factor in (0, 1)");
    bounds->add_option("--xi", constants.xi, "non-degeneracy bound");
    bounds->add_option("--n", constants.n, "problem dimension");
    bounds->add_option("--p", constants.p, "target failure probability");
    bounds->add_option("--f0-gap", constants.f0_gap, "initial objective gap");
    bounds->add_option("--config", bounds_config, "JSON config overriding the flags");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // collapse CLI11's per-error exit codes onto the documented contract:
        // 0 for --help/--version, 1 for everything the user got wrong
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return cmd_run(opt);
        if (*table) return cmd_escape_table(lambdas, gammas, table_out);
        if (*bounds) return cmd_bounds(constants, bounds_config);
    } catch (const ncn::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ncn::InvalidParameter& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ncn::DimensionMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ncn::NonFiniteInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ncn::Error& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 2;
    }
    return 0;
}
