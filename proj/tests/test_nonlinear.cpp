#include <cmath>

#include "cpg/generate.hpp"
#include "cpg/infer_nonlinear.hpp"
#include "cpg/metrics.hpp"
#include "cpg/model.hpp"
#include "cpg/numerics.hpp"
#include "doctest.h"

using cpg::Hyperparams;
using cpg::Mat;
using cpg::RngStream;
using cpg::Vec;

TEST_CASE("sample covariance of a tiny matrix") {
    Mat x(2, 3);
    x << 1.0, -1.0, 2.0, 0.0, 1.0, 1.0;
    const Mat s = cpg::sample_covariance(x);
    // (1/3) X X^T
    CHECK(s(0, 0) == doctest::Approx(6.0 / 3.0).epsilon(1e-14));
    CHECK(s(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(s(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(s(1, 0) == s(0, 1));

    Mat empty(2, 0);
    CHECK_THROWS_AS(cpg::sample_covariance(empty), cpg::ValidationError);
}

TEST_CASE("precision-model gradient matches finite differences") {
    RngStream rng(5);
    for (int t = 0; t < 25; ++t) {
        const int n = 3 + static_cast<int>(rng.uniform01() * 17.0);  // 3..20
        Mat a(n, n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) a(i, j) = rng.normal();
        }
        const Mat theta = 0.5 * (a + a.transpose());
        Vec c(n);
        for (int i = 0; i < n; ++i) c(i) = rng.uniform(0.0, 0.4);

        const bool with_d = (t % 2 == 0);
        Mat d;
        const Mat* dp = nullptr;
        double e = 0.0;
        if (with_d) {
            d = Mat(n, n);
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) d(i, j) = rng.uniform(1.0, 3.0);
            }
            d = ((d + d.transpose()) / 2.0).eval();
            dp = &d;
            e = 1.0;
        }
        // random unstructured distances need a diagonally dominant offset to
        // keep K(c) inside the PD cone at the evaluation point
        const Mat k0 = cpg::build_precision(c, dp, e, 1e-5, 0.0);
        double kappa = 0.0;
        for (int i = 0; i < n; ++i) {
            double radius = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j != i) radius += std::abs(k0(i, j));
            }
            kappa = std::max(kappa, 2.0 * c(i) + radius);
        }
        kappa += 1.0;

        Mat xs(n, 2 * n);
        for (int j = 0; j < 2 * n; ++j) {
            for (int i = 0; i < n; ++i) xs(i, j) = rng.normal();
        }
        const Mat s = cpg::sample_covariance(xs);

        const Vec g = cpg::grad_c_nonlinear(theta, s, c, dp, e, 1e-5, kappa);
        const Vec g_fd = cpg::finite_diff_grad(
            [&](const Vec& v) {
                return cpg::objective_nonlinear(theta, s, v, dp, e, 1e-5, kappa);
            },
            c, 1e-6);
        const double scale = std::max(1.0, g_fd.cwiseAbs().maxCoeff());
        CHECK((g - g_fd).cwiseAbs().maxCoeff() <= 1e-5 * scale);
    }
}

TEST_CASE("nonlinear fit on synthetic data") {
    cpg::SyntheticSpec spec;
    spec.n = 20;
    RngStream rng(9);
    const auto [c_true, d] = cpg::gen_core_scores(spec, rng);
    Hyperparams gen;
    gen.e = 1.0;
    const Mat theta = cpg::gen_graph(c_true, &d, gen, rng);
    const auto nl = cpg::gen_attr_nonlinear(c_true, &d, gen, 30, rng);

    Hyperparams h;
    h.e = 1.0;
    h.mass = static_cast<double>(spec.core_count());
    h.kappa = nl.kappa_used;
    RngStream fit_rng(3);
    const auto r = cpg::fit_nonlinear(theta, nl.x, &d, h, fit_rng);
    CHECK(r.converged);
    CHECK(r.iters <= 500);
    for (size_t i = 1; i < r.objective_trace.size(); ++i) {
        CHECK(r.objective_trace[i] >= r.objective_trace[i - 1] - 1e-9);
    }
    CHECK(std::abs(r.c.sum() - h.mass) <= 1e-7);
    CHECK(r.c.minCoeff() >= -1e-12);
    CHECK(r.c.maxCoeff() <= 1.0 + 1e-12);
    CHECK(cpg::cosine_similarity(r.c, c_true) >= 0.97);
    CHECK(r.kappa_used == doctest::Approx(nl.kappa_used));
}

TEST_CASE("kappa resolution: default when unset, error when nothing works") {
    RngStream rng(11);
    const int n = 8;
    Vec c_true = Vec::Constant(n, 0.25);
    Hyperparams gen;
    gen.e = 0.0;
    const auto nl = cpg::gen_attr_nonlinear(c_true, nullptr, gen, 40, rng);

    Mat a(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) a(i, j) = rng.normal();
    }
    const Mat theta = 0.5 * (a + a.transpose());

    Hyperparams h;
    h.e = 0.0;
    h.mass = 2.0;
    RngStream fit_rng(4);
    const auto r = cpg::fit_nonlinear(theta, nl.x, nullptr, h, fit_rng);
    CHECK(r.kappa_used >= cpg::default_kappa(n, 2.0, nullptr, 0.0, 1e-5) - 1e-12);

    Hyperparams bad = h;
    bad.kappa = 1e-3;  // uniform start cannot be PD at this offset
    CHECK_THROWS_AS(cpg::fit_nonlinear(theta, nl.x, nullptr, bad, fit_rng),
                    cpg::NumericalError);
}

TEST_CASE("centering flag equals manual centering") {
    RngStream rng(13);
    const int n = 6;
    Mat x(n, 25);
    for (int j = 0; j < 25; ++j) {
        for (int i = 0; i < n; ++i) x(i, j) = rng.normal() + 0.7 * i;
    }
    Mat a(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) a(i, j) = rng.normal();
    }
    const Mat theta = 0.5 * (a + a.transpose());
    Hyperparams h;
    h.mass = 1.5;

    Mat xc = x;
    for (int i = 0; i < n; ++i) xc.row(i).array() -= x.row(i).mean();

    RngStream r1(5), r2(5);
    const auto with_flag = cpg::fit_nonlinear(theta, x, nullptr, h, r1, true);
    const auto manual = cpg::fit_nonlinear(theta, xc, nullptr, h, r2, false);
    CHECK((with_flag.c - manual.c).cwiseAbs().maxCoeff() <= 1e-12);
}
