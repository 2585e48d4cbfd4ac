#pragma once

#include <vector>

#include "cpg/model.hpp"
#include "cpg/rng.hpp"
#include "cpg/types.hpp"

namespace cpg {

struct AOFitResult {
    Mat theta;
    Vec c;
    std::vector<double> objective_trace;
    int outer_iters = 0;
    bool converged = false;
};

struct AOOptions {
    double margin = 1e-6;       // realizes the strict pair constraint c_i + c_j < cap
    bool penalize_diag = true;  // penalty sum runs over all i,j; flag excludes i = j
    bool freeze_uniform_weights = false;  // skip the c-step, hold W at all-ones
    double glasso_tol = 1e-6;
    int glasso_max_cycles = 5000;
};

// Joint estimation of (theta, c) from attributes alone: alternate a weighted
// graphical-lasso theta-step (penalties hyper.lambda * w(c)) with an exact LP
// c-step, until the joint objective moves less than hyper.tol. The previous
// objective value is threaded into the theta-step so the trace cannot regress.
AOFitResult fit_ao(const Mat& x, const Mat* d, const Hyperparams& hyper, const AOOptions& opts,
                   RngStream& rng);

}  // namespace cpg
