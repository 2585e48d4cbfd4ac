#pragma once

#include <vector>

#include "cpg/model.hpp"
#include "cpg/rng.hpp"
#include "cpg/types.hpp"

namespace cpg {

struct AffineFitResult {
    Vec c;
    Mat f;  // D x 2: column 0 slopes, column 1 intercepts
    std::vector<double> objective_trace;
    int outer_iters = 0;
    bool converged = false;
};

// p_ik = logistic(a_k c_i + b_k)
Mat logistic_probs(const Vec& c, const Mat& f);

// gradient of the binary-attribute objective in c: 2|theta|1 + (X - P)a
Vec grad_c_bool(const Mat& theta, const Mat& x, const Mat& p, const Mat& f);

// gradient in F: (X - P)^T [c 1] - 2*alpha*F
Mat grad_f_bool(const Mat& x, const Mat& p, const Vec& c, const Mat& f, double alpha);

// gradient of the real-attribute objective in c: 2|theta|1 + 2(X - C F^T)a
Vec grad_c_real(const Mat& theta, const Mat& x, const Vec& c, const Mat& f);

// gradient in F: 2(X - C F^T)^T C - 2*alpha*F
Mat grad_f_real(const Mat& x, const Vec& c, const Mat& f, double alpha);

// Alternating maximization for binary attributes: projected gradient ascent
// on c (Armijo backtracking, feasible set {sum c = mass, 0 <= c <= 1}) and
// gradient ascent on F, until the objective change drops below hyper.tol.
AffineFitResult fit_bool(const Mat& theta, const Mat& x, const Hyperparams& hyper, RngStream& rng);

// Same alternation for real-valued attributes under the squared-error model.
AffineFitResult fit_real(const Mat& theta, const Mat& x, const Hyperparams& hyper, RngStream& rng);

// Objective values, exposed for the finite-difference oracle in tests.
double objective_bool(const Mat& theta, const Mat& x, const Vec& c, const Mat& f, double alpha);
double objective_real(const Mat& theta, const Mat& x, const Vec& c, const Mat& f, double alpha);

}  // namespace cpg
