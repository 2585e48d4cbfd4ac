#include "cpg/bench.hpp"

#include <cmath>
#include <vector>

#include "cpg/baselines.hpp"
#include "cpg/generate.hpp"
#include "cpg/glasso.hpp"
#include "cpg/infer_affine.hpp"
#include "cpg/infer_ao.hpp"
#include "cpg/infer_nonlinear.hpp"
#include "cpg/metrics.hpp"

#ifdef CPG_HAVE_OPENMP
#include <omp.h>
#endif

namespace cpg {
namespace {

const int kFractions[3] = {10, 50, 90};

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t instance_seed(std::uint64_t base, int frac_idx, int seed_idx) {
    return mix64(base ^ mix64(1000003ULL * static_cast<std::uint64_t>(frac_idx + 1) +
                              static_cast<std::uint64_t>(seed_idx)));
}

Mat random_affine_params(int d_attr, RngStream& rng) {
    Mat f(d_attr, 2);
    for (int k = 0; k < d_attr; ++k) {
        f(k, 0) = rng.normal();
        f(k, 1) = rng.normal();
    }
    return f;
}

struct Instance {
    Vec c_true;
    Mat dist;
    Mat theta;
    int k = 0;
};

Instance make_instance(int n, double frac, RngStream& rng) {
    SyntheticSpec spec;
    spec.n = n;
    spec.frac_core = frac;
    Instance inst;
    auto cd = gen_core_scores(spec, rng);
    inst.c_true = cd.first;
    inst.dist = cd.second;
    Hyperparams gen_hyper;
    gen_hyper.lambda = 1.0;
    gen_hyper.e = spec.e;
    inst.theta = gen_graph(inst.c_true, &inst.dist, gen_hyper, rng);
    inst.k = spec.core_count();
    return inst;
}

Hyperparams fit_hyper(const Instance& inst) {
    Hyperparams h;
    h.lambda = 1.0;
    h.e = 1.0;
    h.alpha = 0.1;
    h.mass = static_cast<double>(inst.k);
    h.tol = 1e-4;
    h.max_outer = 200;
    return h;
}

// one row of method scores for a single synthetic instance
std::vector<double> run_t2(int n, double frac, std::uint64_t seed) {
    RngStream rng(seed);
    Instance inst = make_instance(n, frac, rng);
    RngStream rng_bool = rng.fork();
    RngStream rng_real = rng.fork();
    RngStream rng_nl = rng.fork();
    RngStream rng_ao = rng.fork();
    RngStream rng_fit = rng.fork();
    const Hyperparams base = fit_hyper(inst);
    std::vector<double> out;

    {
        const Mat f = random_affine_params(30, rng_bool);
        const Mat x = gen_attr_bool(inst.c_true, f, rng_bool);
        auto r = fit_bool(inst.theta, x, base, rng_fit);
        out.push_back(cosine_similarity(r.c, inst.c_true));
    }
    {
        const Mat f = random_affine_params(30, rng_real);
        const Mat x = gen_attr_real(inst.c_true, f, 1.0, rng_real);
        auto r = fit_real(inst.theta, x, base, rng_fit);
        out.push_back(cosine_similarity(r.c, inst.c_true));
    }
    {
        auto nl = gen_attr_nonlinear(inst.c_true, &inst.dist, base, 30, rng_nl);
        Hyperparams h = base;
        h.kappa = nl.kappa_used;
        auto r = fit_nonlinear(inst.theta, nl.x, &inst.dist, h, rng_fit);
        out.push_back(cosine_similarity(r.c, inst.c_true));
    }
    {
        auto ao = gen_attr_ao(inst.theta, 30, rng_ao);
        const Mat s = sample_covariance(ao.x);
        Hyperparams h = base;
        h.lambda = 0.03 * s.diagonal().mean();
        AOOptions opts;
        opts.margin = 0.05;
        opts.penalize_diag = false;
        auto r = fit_ao(ao.x, &inst.dist, h, opts, rng_fit);
        out.push_back(cosine_similarity(r.c, inst.c_true));
    }
    {
        const auto g = binarize(inst.theta, default_binarize_tau(inst.theta));
        const auto core = k_core(g);
        Vec scores(n);
        for (int i = 0; i < n; ++i) scores(i) = static_cast<double>(core[i]);
        out.push_back(scores.norm() > 0.0 ? cosine_similarity(scores, inst.c_true) : 0.0);
    }
    {
        auto r = minres_scores(inst.theta, rng_fit);
        out.push_back(r.scores.norm() > 0.0 ? cosine_similarity(r.scores, inst.c_true) : 0.0);
    }
    return out;
}

std::vector<double> run_t5(int n, double frac, std::uint64_t seed) {
    RngStream rng(seed);
    Instance inst = make_instance(n, frac, rng);
    rng.fork();  // keep the fork sequence aligned with t2
    rng.fork();
    rng.fork();
    RngStream rng_ao = rng.fork();
    RngStream rng_fit = rng.fork();
    const Hyperparams base = fit_hyper(inst);

    auto ao = gen_attr_ao(inst.theta, 30, rng_ao);
    const Mat s = sample_covariance(ao.x);
    const double lam = 0.03 * s.diagonal().mean();

    Hyperparams h = base;
    h.lambda = lam;
    AOOptions opts;
    opts.margin = 0.05;
    opts.penalize_diag = false;
    auto r = fit_ao(ao.x, &inst.dist, h, opts, rng_fit);

    Mat pen = Mat::Constant(n, n, lam);
    pen.diagonal().setZero();
    auto u = weighted_glasso_pen(s, pen);

    return {edge_cosine(r.theta, ao.theta_pd), edge_cosine(u.theta, ao.theta_pd)};
}

}  // namespace

Json run_bench(const BenchOptions& opt) {
    if (opt.table != "t2" && opt.table != "t5") {
        throw ValidationError("InvalidTable: bench table must be t2 or t5");
    }
    if (opt.seeds < 1) throw ValidationError("InvalidSeeds: need at least one seed");
    if (opt.n < 8) throw ValidationError("InvalidSize: bench needs n >= 8");

    const bool t2 = (opt.table == "t2");
    const std::vector<std::string> methods =
        t2 ? std::vector<std::string>{"ga-affine-bool", "ga-affine-real", "ga-nonlinear",
                                      "ao",             "k-core",         "minres"}
           : std::vector<std::string>{"ao", "uniform-glasso"};

    // results[frac_idx][seed_idx][method_idx]; filled independently per job so
    // the merge order never depends on scheduling
    std::vector<std::vector<std::vector<double>>> results(
        3, std::vector<std::vector<double>>(static_cast<size_t>(opt.seeds)));

    const int jobs = 3 * opt.seeds;
#ifdef CPG_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int job = 0; job < jobs; ++job) {
        const int fi = job / opt.seeds;
        const int si = job % opt.seeds;
        const double frac = kFractions[fi] / 100.0;
        const std::uint64_t seed = instance_seed(opt.base_seed, fi, si);
        results[fi][static_cast<size_t>(si)] =
            t2 ? run_t2(opt.n, frac, seed) : run_t5(opt.n, frac, seed);
    }

    Json report;
    report["table"] = opt.table;
    report["metric"] = t2 ? "cosine_to_true_scores" : "edge_cosine_to_true_graph";
    report["n"] = opt.n;
    report["seeds"] = opt.seeds;
    report["base_seed"] = opt.base_seed;
    report["methods"] = methods;
    Json cells = Json::array();
    for (int fi = 0; fi < 3; ++fi) {
        for (size_t mi = 0; mi < methods.size(); ++mi) {
            double mean = 0.0;
            for (int si = 0; si < opt.seeds; ++si) mean += results[fi][static_cast<size_t>(si)][mi];
            mean /= opt.seeds;
            double sd = 0.0;
            if (opt.seeds > 1) {
                double ss = 0.0;
                for (int si = 0; si < opt.seeds; ++si) {
                    const double dlt = results[fi][static_cast<size_t>(si)][mi] - mean;
                    ss += dlt * dlt;
                }
                sd = std::sqrt(ss / (opt.seeds - 1));
            }
            Json cell;
            cell["frac_core_percent"] = kFractions[fi];
            cell["method"] = methods[mi];
            cell["mean"] = mean;
            cell["std"] = sd;
            cells.push_back(cell);
        }
    }
    report["cells"] = cells;
    return report;
}

}  // namespace cpg
