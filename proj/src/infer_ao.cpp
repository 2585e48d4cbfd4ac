#include "cpg/infer_ao.hpp"

#include <cmath>

#include "cpg/glasso.hpp"
#include "cpg/infer_nonlinear.hpp"
#include "cpg/simplex_lp.hpp"

namespace cpg {

namespace {

Mat penalty_matrix(const Vec& c, const Mat* d, const Hyperparams& hyper, const AOOptions& opts) {
    Mat pen;
    if (opts.freeze_uniform_weights) {
        pen = hyper.lambda * Mat::Ones(c.size(), c.size());
    } else {
        pen = hyper.lambda * compute_weights(c, d, hyper.e, hyper.eps);
    }
    if (!opts.penalize_diag) pen.diagonal().setZero();
    return pen;
}

}  // namespace

AOFitResult fit_ao(const Mat& x, const Mat* d, const Hyperparams& hyper, const AOOptions& opts,
                   RngStream& rng) {
    (void)rng;
    hyper.validate();
    const int n = static_cast<int>(x.rows());
    if (n < 2) throw ValidationError("fit_ao: need at least two nodes");
    if (opts.margin <= 0.0) throw ValidationError("fit_ao: margin must be positive");

    Mat s = sample_covariance(x);
    if (hyper.lambda == 0.0 && Eigen::LLT<Mat>(s).info() != Eigen::Success) {
        throw NumericalError("SingularAtZeroPenalty: lambda = 0 needs a PD sample covariance");
    }

    double mass = hyper.resolve_mass(n);
    Vec c = Vec::Constant(n, mass / n);
    Mat theta = (s + 0.1 * Mat::Identity(n, n)).llt().solve(Mat::Identity(n, n));
    theta = 0.5 * (theta + theta.transpose()).eval();

    AOFitResult res;
    Mat pen = penalty_matrix(c, d, hyper, opts);
    res.objective_trace.push_back(glasso_objective(s, pen, theta));

    for (int outer = 0; outer < hyper.max_outer; ++outer) {
        GlassoResult gl = weighted_glasso_pen(s, pen, opts.glasso_tol,
                                              res.objective_trace.back(), opts.glasso_max_cycles);
        theta = gl.theta;
        double obj = glasso_objective(s, pen, theta);

        if (!opts.freeze_uniform_weights) {
            Vec c_new = solve_c_lp(theta, d, hyper.e, hyper.eps, mass, opts.margin,
                                   opts.penalize_diag);
            Mat pen_new = penalty_matrix(c_new, d, hyper, opts);
            double obj_new = glasso_objective(s, pen_new, theta);
            // the LP maximizes the penalty term exactly, so obj_new >= obj up
            // to roundoff; the guard keeps the trace monotone regardless
            if (obj_new >= obj - 1e-12) {
                c = c_new;
                pen = pen_new;
                obj = obj_new;
            }
        }

        res.objective_trace.push_back(obj);
        res.outer_iters = outer + 1;
        double prev = res.objective_trace[res.objective_trace.size() - 2];
        if (std::abs(obj - prev) < hyper.tol) {
            res.converged = true;
            break;
        }
    }
    res.theta = theta;
    res.c = c;
    return res;
}

}  // namespace cpg
