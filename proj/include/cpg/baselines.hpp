#pragma once

#include <vector>

#include "cpg/rng.hpp"
#include "cpg/types.hpp"

namespace cpg {

struct BinaryGraph {
    int n = 0;
    Eigen::MatrixXi adjacency;  // symmetric 0/1, zero diagonal
};

// edge iff |theta_ij| > tau, i != j
BinaryGraph binarize(const Mat& theta, double tau);

// median of the nonzero off-diagonal |theta_ij| (upper triangle); 0 for an
// empty graph
double default_binarize_tau(const Mat& theta);

// Core numbers by iterative peeling: repeatedly remove a minimum-degree node;
// a node's core number is the largest min-degree threshold at its removal.
std::vector<int> k_core(const BinaryGraph& g);

struct MinresResult {
    Vec scores;              // final scores rescaled into [0,1]
    double objective;        // sum_{i != j} (|theta_ij| - c_i c_j)^2 before rescaling
    double objective_start;  // same objective at the spectral starting point
};

// Product-form scores: minimize the off-diagonal squared residual over c >= 0
// by projected gradient descent with backtracking, started from
// sqrt(lambda_1)*|v_1| of |theta|.
MinresResult minres_scores(const Mat& theta, RngStream& rng);

// residual objective and its gradient, exposed for the finite-difference
// oracle in tests
double minres_objective(const Mat& theta, const Vec& c);
Vec minres_grad(const Mat& theta, const Vec& c);

}  // namespace cpg
