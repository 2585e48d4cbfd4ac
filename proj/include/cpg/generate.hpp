#pragma once

#include <utility>

#include "cpg/model.hpp"
#include "cpg/rng.hpp"
#include "cpg/types.hpp"

namespace cpg {

// Synthetic protocol: the first floor(frac_core*n) nodes are core with scores
// in core range, the rest periphery; log-distances are uniform per pair class
// (core-core from the core range, everything else from the periphery range).
struct SyntheticSpec {
    int n = 60;
    double frac_core = 0.5;
    double core_lo = 0.9, core_hi = 1.0;
    double periph_lo = 0.0, periph_hi = 0.01;
    double logdist_core_lo = 1.0, logdist_core_hi = 1.05;
    double logdist_periph_lo = 1.2, logdist_periph_hi = 1.205;
    double e = 1.0;
    int d_attr = 30;

    void validate() const;
    int core_count() const;
};

std::pair<Vec, Mat> gen_core_scores(const SyntheticSpec& spec, RngStream& rng);

// Symmetric zero-diagonal matrix of Laplace edge draws with inverse diversity
// lambda*w_ij. Requires every off-diagonal w_ij > 0.
Mat gen_graph(const Vec& c, const Mat* d, const Hyperparams& hyper, RngStream& rng);

// x_ik ~ Bernoulli(logistic(a_k c_i + b_k)); f is D x 2, column 0 slopes a,
// column 1 intercepts b.
Mat gen_attr_bool(const Vec& c, const Mat& f, RngStream& rng);

// x_ik ~ Normal(a_k c_i + b_k, sigma2)
Mat gen_attr_real(const Vec& c, const Mat& f, double sigma2, RngStream& rng);

struct NonlinearData {
    Mat x;
    double kappa_used;  // so a fit can be run against the generating precision
};

// Columns i.i.d. N(0, K(c)^-1). With hyper.kappa = NaN the default kappa is
// used and doubled up to 8 times until K(c) is PD; an explicit kappa is taken
// as-is and NotPD is surfaced if it fails.
NonlinearData gen_attr_nonlinear(const Vec& c, const Mat* d, const Hyperparams& hyper,
                                 int d_attr, RngStream& rng);

struct AOData {
    Mat x;
    Mat theta_pd;  // the repaired matrix actually sampled from; ground truth for recovery
};

// Symmetrize theta, shift the diagonal so the minimum eigenvalue is at least
// delta, then draw columns i.i.d. N(0, theta_pd^-1).
AOData gen_attr_ao(const Mat& theta, int d_attr, RngStream& rng, double delta = 1e-3);

}  // namespace cpg
