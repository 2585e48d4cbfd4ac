#pragma once

#include "cpg/rng.hpp"
#include "cpg/types.hpp"

// Hot loops shared by the solvers. Each kernel has a serial reference
// implementation and an OpenMP variant; the unqualified name dispatches on
// set_parallel(). Parallel variants are written to produce bitwise-identical
// output to the serial ones (fixed per-row evaluation order, max-reductions,
// per-row forked RNG streams), which the unit tests assert.

namespace cpg::kern {

void set_parallel(bool on);
bool parallel_enabled();

Vec abs_row_sums_serial(const Mat& a);
Vec abs_row_sums_parallel(const Mat& a);
Vec abs_row_sums(const Mat& a);

// w_ij = 1 - c_i - c_j + e*log(d_ij + eps); d may be null when e == 0
Mat weight_matrix_serial(const Vec& c, const Mat* d, double e, double eps);
Mat weight_matrix_parallel(const Vec& c, const Mat* d, double e, double eps);
Mat weight_matrix(const Vec& c, const Mat* d, double e, double eps);

// Symmetric matrix of Laplace draws: upper triangle entry (i,j) has inverse
// diversity lam*w(i,j), zero diagonal. Row i consumes its own forked stream,
// so results do not depend on the thread count.
Mat laplace_graph_fill_serial(const Mat& w, double lam, RngStream& rng);
Mat laplace_graph_fill_parallel(const Mat& w, double lam, RngStream& rng);
Mat laplace_graph_fill(const Mat& w, double lam, RngStream& rng);

// max_ij of the weighted-lasso subgradient residual for gradient G = sigma - s:
// entries with theta_ij = 0 contribute max(|g_ij| - lam_ij, 0), others
// |g_ij - lam_ij*sign(theta_ij)|.
double kkt_residual_serial(const Mat& s, const Mat& lam, const Mat& theta, const Mat& sigma);
double kkt_residual_parallel(const Mat& s, const Mat& lam, const Mat& theta, const Mat& sigma);
double kkt_residual(const Mat& s, const Mat& lam, const Mat& theta, const Mat& sigma);

}  // namespace cpg::kern
