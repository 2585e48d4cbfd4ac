#pragma once

#include <limits>

#include "cpg/types.hpp"

namespace cpg {

// Shared knobs across the four solvers. mass <= 0 means "use the default
// 0.25*n"; kappa = NaN means "use default_kappa, doubling if infeasible".
struct Hyperparams {
    double lambda = 1.0;   // Laplace strength on edges
    double e = 0.0;        // distance coupling
    double eps = 1e-5;     // offset inside log(d + eps)
    double alpha = 0.1;    // ridge weight on affine params
    double sigma2 = 1.0;   // attribute variance, real-attribute model
    double mass = -1.0;    // target sum of core scores
    double kappa = std::numeric_limits<double>::quiet_NaN();  // precision diagonal offset
    double tol = 1e-4;     // absolute change in objective that counts as converged
    int max_outer = 200;

    void validate() const;
    double resolve_mass(int n) const;
};

// w_ij = 1 - c_i - c_j + e*log(d_ij + eps), including the diagonal.
// Positivity is the caller's concern: the affine/nonlinear problems place no
// constraint on w, only the Laplace sampler and the attributes-only solver do.
Mat compute_weights(const Vec& c, const Mat* d, double e, double eps);

// Precision parameterized by core scores: off-diagonal
// k_ij = -c_i - c_j + e*log(d_ij + eps), diagonal k_ii = kappa - 2c_i, so the
// derivative in c_i is -1 on row/column i off the diagonal and -2 at (i,i).
Mat build_precision(const Vec& c, const Mat* d, double e, double eps, double kappa);

// Default diagonal offset: 2 + 2*max_{i != j} |k_ij| evaluated at the uniform
// point c = mass/n * 1. Large enough to put the uniform point safely inside
// the PD cone in typical cases; callers double it when the Cholesky probe
// still fails.
double default_kappa(int n, double mass, const Mat* d, double e, double eps);

}  // namespace cpg
