#pragma once

#include <vector>

#include "cpg/model.hpp"
#include "cpg/rng.hpp"
#include "cpg/types.hpp"

namespace cpg {

struct NonlinearFitResult {
    Vec c;
    std::vector<double> objective_trace;
    int iters = 0;
    bool converged = false;
    double kappa_used = 0.0;
};

// S = (1/d) X X^T over the d attribute columns
Mat sample_covariance(const Mat& x);

// gradient of the precision-parameterized objective: 2|theta|1 - 2K^-1 1 + 2S 1
Vec grad_c_nonlinear(const Mat& theta, const Mat& s, const Vec& c, const Mat* d, double e,
                     double eps, double kappa);

// objective 2(|theta|1)^T c + log det K(c) - tr(S K(c)); exposed for the
// finite-difference oracle
double objective_nonlinear(const Mat& theta, const Mat& s, const Vec& c, const Mat* d, double e,
                           double eps, double kappa);

// Projected gradient ascent on c with Armijo backtracking plus PD-feasibility
// backtracking (a step is shrunk until K stays Cholesky-factorizable). kappa
// comes from hyper, or the model default doubled up to 8 times until K is PD
// at the uniform start; InfeasibleStart if that fails. center subtracts each
// node's sample mean before forming S.
NonlinearFitResult fit_nonlinear(const Mat& theta, const Mat& x, const Mat* d,
                                 const Hyperparams& hyper, RngStream& rng, bool center = false);

}  // namespace cpg
