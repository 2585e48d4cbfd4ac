#pragma once

#include <limits>

#include "cpg/types.hpp"

namespace cpg {

struct GlassoResult {
    Mat theta;
    double kkt;  // max subgradient residual at return
    int cycles;
};

// Maximizes log det(Theta) - tr(S Theta) - sum_ij lam*W_ij*|Theta_ij| over PD
// symmetric Theta, by block-coordinate descent on the dual covariance (one
// weighted lasso per column). Off-diagonal weights must be positive; diagonal
// weights may be zero (unpenalized diagonal). Stops once the KKT residual is
// at most tol and, when min_obj is given, the primal objective is at least
// min_obj (lets an alternating caller guarantee a monotone trace).
// lam = 0 requires S PD and returns S^-1 directly.
GlassoResult weighted_glasso(const Mat& s, const Mat& w, double lam, double tol = 1e-6,
                             double min_obj = -std::numeric_limits<double>::infinity(),
                             int max_cycles = 5000);

// Same objective with the penalty matrix given entrywise (lam_ij = lam*W_ij).
GlassoResult weighted_glasso_pen(const Mat& s, const Mat& pen, double tol = 1e-6,
                                 double min_obj = -std::numeric_limits<double>::infinity(),
                                 int max_cycles = 5000);

// Slow independent reference: proximal gradient (soft-thresholding) with
// backtracking, run to a tight tolerance. Only suitable for small n; exists
// so the production solver can be cross-checked by a different method.
Mat glasso_prox_reference(const Mat& s, const Mat& pen, double tol = 1e-10,
                          int max_iters = 200000);

// Primal objective log det(Theta) - tr(S Theta) - sum pen_ij |Theta_ij|,
// -inf when Theta is not PD.
double glasso_objective(const Mat& s, const Mat& pen, const Mat& theta);

}  // namespace cpg
