#pragma once

#include <functional>

#include "cpg/rng.hpp"
#include "cpg/types.hpp"

namespace cpg {

// Feasible set {c : sum(c) = mass, 0 <= c_i <= 1}. Empty unless 0 < mass <= n.
struct SimplexBoxSet {
    int n;
    double mass;
};

// Euclidean projection onto SimplexBoxSet via bisection on the shift lambda:
// phi(lambda) = sum clamp(v - lambda, 0, 1) - mass is non-increasing, with a
// root bracketed by [min(v) - 1, max(v)]. tol bounds |phi| at the returned root.
Vec project_simplex_box(const Vec& v, const SimplexBoxSet& set, double tol = 1e-10);

// One draw from the zero-mean Laplace density p(x) ~ exp(-inv_diversity*|x|),
// by inverse CDF. E|X| = 1/inv_diversity, Var = 2/inv_diversity^2.
double sample_laplace(double inv_diversity, RngStream& rng);

struct CholResult {
    double logdet;
    Mat inverse;
};

// Cholesky-based log-determinant and inverse of a symmetric matrix.
// Throws NumericalError("NotPD ...") when the factorization hits a
// non-positive pivot, which callers use as a PD feasibility probe.
CholResult chol_logdet_inverse(const Mat& K);

// Central finite differences, the test oracle for all analytic gradients.
Vec finite_diff_grad(const std::function<double(const Vec&)>& f, const Vec& x, double h);

}  // namespace cpg
