#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpg/baselines.hpp"
#include "cpg/bench.hpp"
#include "cpg/generate.hpp"
#include "cpg/infer_affine.hpp"
#include "cpg/infer_ao.hpp"
#include "cpg/infer_nonlinear.hpp"
#include "cpg/io.hpp"
#include "cpg/metrics.hpp"

namespace fs = std::filesystem;
using cpg::Json;
using cpg::Mat;
using cpg::Vec;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitNoConvergence = 5;

struct GenerateArgs {
    std::string model;
    int n = 60;
    double frac_core = 0.5;
    int d_attr = 30;
    double e = 1.0;
    double lambda = 1.0;
    std::uint64_t seed = 1;
    std::string out = ".";
    bool json = false;
};

struct InferArgs {
    std::string model;
    std::string attrs;
    std::string graph;
    std::string dist;
    std::string out = ".";
    double lambda = 0.1;
    double e = 0.0;
    double eps = 1e-5;
    double alpha = 0.1;
    double sigma2 = 1.0;
    double mass = -1.0;
    double kappa = std::numeric_limits<double>::quiet_NaN();
    double tol = 1e-4;
    int max_outer = 200;
    double margin = 1e-6;
    bool penalize_diag = true;
    bool center = false;
    std::uint64_t seed = 1;
    bool json = false;
    bool order_output = false;
};

struct BenchArgs {
    std::string table;
    int seeds = 20;
    std::uint64_t seed = 1;
    int n = 60;
    std::string out = "bench_report.json";
    bool json = false;
};

std::string out_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw cpg::ValidationError("CannotOpen: cannot create output directory " + dir);
}

Vec trace_to_vec(const std::vector<double>& t) {
    Vec v(static_cast<Eigen::Index>(t.size()));
    for (size_t i = 0; i < t.size(); ++i) v(static_cast<Eigen::Index>(i)) = t[i];
    return v;
}

// node order by decreasing score, ties by index; matches the metric's rule
std::vector<int> score_order(const Vec& c) {
    std::vector<int> order(static_cast<size_t>(c.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        if (c(i) != c(j)) return c(i) > c(j);
        return i < j;
    });
    return order;
}

void write_ordered_adjacency(const std::string& dir, const Mat& theta, const Vec& c) {
    const auto order = score_order(c);
    const int n = static_cast<int>(theta.rows());
    Mat p(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            p(i, j) = std::abs(theta(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]));
        }
    }
    cpg::write_csv(out_path(dir, "ordered_adjacency.csv"), p);
    std::ofstream f(out_path(dir, "ordered_permutation.txt"));
    if (!f) throw cpg::ValidationError("CannotOpen: cannot write permutation file");
    for (int idx : order) f << idx << '\n';
}

int cmd_generate(const GenerateArgs& a) {
    cpg::SyntheticSpec spec;
    spec.n = a.n;
    spec.frac_core = a.frac_core;
    spec.d_attr = a.d_attr;
    spec.e = a.e;
    spec.validate();

    const bool is_bool = a.model == "ga-affine-bool";
    const bool is_real = a.model == "ga-affine-real";
    const bool is_nl = a.model == "ga-nonlinear";
    const bool is_ao = a.model == "ao";
    if (!is_bool && !is_real && !is_nl && !is_ao) {
        throw cpg::UsageError("unknown model '" + a.model +
                              "' (expected ga-affine-bool, ga-affine-real, ga-nonlinear, ao)");
    }

    ensure_out_dir(a.out);
    cpg::RngStream rng(a.seed);
    auto cd = cpg::gen_core_scores(spec, rng);
    cpg::Hyperparams hyper;
    hyper.lambda = a.lambda;
    hyper.e = a.e;
    const Mat theta = cpg::gen_graph(cd.first, &cd.second, hyper, rng);

    cpg::write_scores(out_path(a.out, "c_true.txt"), cd.first);
    cpg::write_csv(out_path(a.out, "dist.csv"), cd.second);
    cpg::write_csv(out_path(a.out, "theta.csv"), theta);

    Json summary;
    summary["command"] = "generate";
    summary["model"] = a.model;
    summary["n"] = a.n;
    summary["frac_core"] = a.frac_core;
    summary["core_count"] = spec.core_count();
    summary["d_attr"] = a.d_attr;
    summary["seed"] = a.seed;

    if (is_bool || is_real) {
        Mat f(a.d_attr, 2);
        for (int k = 0; k < a.d_attr; ++k) {
            f(k, 0) = rng.normal();
            f(k, 1) = rng.normal();
        }
        const Mat x = is_bool ? cpg::gen_attr_bool(cd.first, f, rng)
                              : cpg::gen_attr_real(cd.first, f, 1.0, rng);
        cpg::write_csv(out_path(a.out, "f_true.csv"), f);
        cpg::write_csv(out_path(a.out, "x.csv"), x);
    } else if (is_nl) {
        auto nl = cpg::gen_attr_nonlinear(cd.first, &cd.second, hyper, a.d_attr, rng);
        cpg::write_csv(out_path(a.out, "x.csv"), nl.x);
        summary["kappa_used"] = nl.kappa_used;
    } else {
        auto ao = cpg::gen_attr_ao(theta, a.d_attr, rng);
        cpg::write_csv(out_path(a.out, "x.csv"), ao.x);
        cpg::write_csv(out_path(a.out, "theta_pd.csv"), ao.theta_pd);
    }

    cpg::write_json_file(out_path(a.out, "generate_summary.json"), summary);
    if (a.json) std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_infer(const InferArgs& a) {
    const bool is_bool = a.model == "ga-affine-bool";
    const bool is_real = a.model == "ga-affine-real";
    const bool is_nl = a.model == "ga-nonlinear";
    const bool is_ao = a.model == "ao";
    if (!is_bool && !is_real && !is_nl && !is_ao) {
        throw cpg::UsageError("unknown model '" + a.model +
                              "' (expected ga-affine-bool, ga-affine-real, ga-nonlinear, ao)");
    }
    if (is_ao && !a.graph.empty()) {
        throw cpg::UsageError("--graph is not an input of the attributes-only model");
    }
    if (!is_ao && a.graph.empty()) {
        throw cpg::UsageError("model " + a.model + " requires --graph");
    }

    const Mat x = cpg::read_csv(a.attrs);
    const int n = static_cast<int>(x.rows());

    Mat theta;
    if (!is_ao) {
        theta = cpg::read_csv(a.graph);
        if (theta.rows() != theta.cols() || theta.rows() != n) {
            throw cpg::ValidationError(
                "SizeMismatch: graph must be square with one row per attribute row");
        }
    }
    Mat dist;
    const Mat* dist_ptr = nullptr;
    if (!a.dist.empty()) {
        dist = cpg::read_csv(a.dist);
        if (dist.rows() != n || dist.cols() != n) {
            throw cpg::ValidationError("SizeMismatch: distance matrix must be n x n");
        }
        dist_ptr = &dist;
    }

    cpg::Hyperparams hyper;
    hyper.lambda = a.lambda;
    hyper.e = a.e;
    hyper.eps = a.eps;
    hyper.alpha = a.alpha;
    hyper.sigma2 = a.sigma2;
    hyper.mass = a.mass;
    hyper.kappa = a.kappa;
    hyper.tol = a.tol;
    hyper.max_outer = a.max_outer;
    hyper.validate();

    ensure_out_dir(a.out);
    cpg::RngStream rng(a.seed);

    Vec c_hat;
    std::vector<double> trace;
    int outer_iters = 0;
    bool converged = false;
    Mat theta_hat;

    if (is_bool || is_real) {
        auto r = is_bool ? cpg::fit_bool(theta, x, hyper, rng) : cpg::fit_real(theta, x, hyper, rng);
        c_hat = r.c;
        trace = r.objective_trace;
        outer_iters = r.outer_iters;
        converged = r.converged;
        cpg::write_csv(out_path(a.out, "f_hat.csv"), r.f);
    } else if (is_nl) {
        auto r = cpg::fit_nonlinear(theta, x, dist_ptr, hyper, rng, a.center);
        c_hat = r.c;
        trace = r.objective_trace;
        outer_iters = r.iters;
        converged = r.converged;
    } else {
        cpg::AOOptions opts;
        opts.margin = a.margin;
        opts.penalize_diag = a.penalize_diag;
        auto r = cpg::fit_ao(x, dist_ptr, hyper, opts, rng);
        c_hat = r.c;
        trace = r.objective_trace;
        outer_iters = r.outer_iters;
        converged = r.converged;
        theta_hat = r.theta;
        cpg::write_csv(out_path(a.out, "theta_hat.csv"), theta_hat);
    }

    cpg::write_scores(out_path(a.out, "c_hat.txt"), c_hat);
    cpg::write_scores(out_path(a.out, "objective_trace.txt"), trace_to_vec(trace));
    if (a.order_output) {
        write_ordered_adjacency(a.out, is_ao ? theta_hat : theta, c_hat);
    }

    Json summary;
    summary["command"] = "infer";
    summary["model"] = a.model;
    summary["n"] = n;
    summary["d_attr"] = static_cast<int>(x.cols());
    summary["mass"] = hyper.resolve_mass(n);
    summary["converged"] = converged;
    summary["outer_iters"] = outer_iters;
    summary["objective_final"] = trace.empty() ? 0.0 : trace.back();
    summary["seed"] = a.seed;
    cpg::write_json_file(out_path(a.out, "infer_summary.json"), summary);
    if (a.json) std::cout << summary.dump(2) << '\n';

    if (!converged) {
        std::cerr << "NoConvergence: stopped after " << outer_iters
                  << " outer iterations without meeting tol\n";
        return kExitNoConvergence;
    }
    return 0;
}

int cmd_bench(const BenchArgs& a) {
    cpg::BenchOptions opt;
    opt.table = a.table;
    opt.seeds = a.seeds;
    opt.base_seed = a.seed;
    opt.n = a.n;
    const Json report = cpg::run_bench(opt);
    if (!a.out.empty()) {
        const fs::path parent = fs::path(a.out).parent_path();
        if (!parent.empty()) ensure_out_dir(parent.string());
        cpg::write_json_file(a.out, report);
    }
    if (a.json) std::cout << report.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"core-periphery graph toolkit: synthetic data, solvers, benchmarks"};
    app.require_subcommand(1);
    // flags given on the command line override values from the file
    app.set_config("--config", "", "read option defaults from an INI file");

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "write a synthetic instance to an output directory");
    gen->add_option("--model", ga.model, "ga-affine-bool | ga-affine-real | ga-nonlinear | ao")
        ->required();
    gen->add_option("--n", ga.n, "number of nodes");
    gen->add_option("--frac-core", ga.frac_core, "core fraction in [0,1]");
    gen->add_option("--d-attr", ga.d_attr, "attribute columns");
    gen->add_option("--e", ga.e, "distance coupling");
    gen->add_option("--lambda", ga.lambda, "Laplace strength");
    gen->add_option("--seed", ga.seed, "rng seed");
    gen->add_option("--out", ga.out, "output directory");
    gen->add_flag("--json", ga.json, "print the summary record to stdout");

    InferArgs ia;
    auto* inf = app.add_subcommand("infer", "estimate core scores (and the graph, AO model)");
    inf->add_option("--model", ia.model, "ga-affine-bool | ga-affine-real | ga-nonlinear | ao")
        ->required();
    inf->add_option("--attrs", ia.attrs, "attribute matrix CSV (n rows)")->required();
    inf->add_option("--graph", ia.graph, "graph CSV (required for ga-*, forbidden for ao)");
    inf->add_option("--dist", ia.dist, "distance matrix CSV");
    inf->add_option("--out", ia.out, "output directory");
    inf->add_option("--lambda", ia.lambda, "penalty strength (ao)");
    inf->add_option("--e", ia.e, "distance coupling");
    inf->add_option("--eps", ia.eps, "offset inside log(d + eps)");
    inf->add_option("--alpha", ia.alpha, "ridge weight on affine params");
    inf->add_option("--sigma2", ia.sigma2, "attribute variance (ga-affine-real)");
    inf->add_option("--mass", ia.mass, "target sum of core scores (default n/4)");
    inf->add_option("--kappa", ia.kappa, "precision diagonal offset (ga-nonlinear)");
    inf->add_option("--tol", ia.tol, "outer convergence tolerance");
    inf->add_option("--max-outer", ia.max_outer, "outer iteration cap");
    inf->add_option("--margin", ia.margin, "strictness margin of the pair constraints (ao)");
    inf->add_flag("--penalize-diagonal,!--no-penalize-diagonal", ia.penalize_diag,
                  "include the diagonal in the ao penalty");
    inf->add_flag("--center", ia.center, "subtract per-node sample means (ga-nonlinear)");
    inf->add_option("--seed", ia.seed, "rng seed");
    inf->add_flag("--json", ia.json, "print the summary record to stdout");
    inf->add_flag("--order-output", ia.order_output,
                  "also write |theta| reordered by decreasing scores plus the permutation");

    BenchArgs ba;
    auto* ben = app.add_subcommand("bench", "synthetic benchmark report");
    ben->add_option("table", ba.table, "t2 (core-score recovery) or t5 (graph recovery)")
        ->required()
        ->check(CLI::IsMember({"t2", "t5"}));
    ben->add_option("--seeds", ba.seeds, "number of seeds per cell");
    ben->add_option("--seed", ba.seed, "base seed");
    ben->add_option("--n", ba.n, "number of nodes");
    ben->add_option("--out", ba.out, "report file path");
    ben->add_flag("--json", ba.json, "print the report to stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(ga);
        if (inf->parsed()) return cmd_infer(ia);
        return cmd_bench(ba);
    } catch (const cpg::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const cpg::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const cpg::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
