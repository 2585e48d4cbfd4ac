#include "cpg/generate.hpp"

#include <cmath>

#include "cpg/kernels.hpp"
#include "cpg/numerics.hpp"

namespace cpg {

void SyntheticSpec::validate() const {
    if (n < 2) throw ValidationError("SyntheticSpec: n must be at least 2");
    if (frac_core < 0.0 || frac_core > 1.0) {
        throw ValidationError("SyntheticSpec: frac_core must lie in [0,1]");
    }
    if (core_lo > core_hi || periph_lo > periph_hi || logdist_core_lo > logdist_core_hi ||
        logdist_periph_lo > logdist_periph_hi) {
        throw ValidationError("SyntheticSpec: invalid interval");
    }
    if (e < 0.0) throw ValidationError("SyntheticSpec: e must be nonnegative");
    if (d_attr < 0) throw ValidationError("SyntheticSpec: d_attr must be nonnegative");
}

int SyntheticSpec::core_count() const {
    return static_cast<int>(std::floor(frac_core * n));
}

std::pair<Vec, Mat> gen_core_scores(const SyntheticSpec& spec, RngStream& rng) {
    spec.validate();
    const int n = spec.n;
    const int k = spec.core_count();
    Vec c(n);
    for (int i = 0; i < n; ++i) {
        c[i] = i < k ? rng.uniform(spec.core_lo, spec.core_hi)
                     : rng.uniform(spec.periph_lo, spec.periph_hi);
    }
    Mat d(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            bool core_pair = i < k && j < k;
            double logd = core_pair ? rng.uniform(spec.logdist_core_lo, spec.logdist_core_hi)
                                    : rng.uniform(spec.logdist_periph_lo, spec.logdist_periph_hi);
            d(i, j) = std::exp(logd);
            d(j, i) = d(i, j);
        }
    }
    return {c, d};
}

Mat gen_graph(const Vec& c, const Mat* d, const Hyperparams& hyper, RngStream& rng) {
    hyper.validate();
    Mat w = compute_weights(c, d, hyper.e, hyper.eps);
    const int n = static_cast<int>(c.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!(w(i, j) > 0.0)) {
                throw ValidationError("InvalidWeights: nonpositive inverse diversity at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    return kern::laplace_graph_fill(w, hyper.lambda, rng);
}

Mat gen_attr_bool(const Vec& c, const Mat& f, RngStream& rng) {
    if (f.cols() != 2) throw ValidationError("ShapeMismatch: affine params must be D x 2");
    const int n = static_cast<int>(c.size());
    const int dd = static_cast<int>(f.rows());
    Mat x(n, dd);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < dd; ++k) {
            double z = f(k, 0) * c[i] + f(k, 1);
            double p = 1.0 / (1.0 + std::exp(-z));
            x(i, k) = rng.uniform01() < p ? 1.0 : 0.0;
        }
    }
    return x;
}

Mat gen_attr_real(const Vec& c, const Mat& f, double sigma2, RngStream& rng) {
    if (f.cols() != 2) throw ValidationError("ShapeMismatch: affine params must be D x 2");
    if (!(sigma2 > 0.0)) throw ValidationError("InvalidVariance: sigma2 must be positive");
    const int n = static_cast<int>(c.size());
    const int dd = static_cast<int>(f.rows());
    const double sigma = std::sqrt(sigma2);
    Mat x(n, dd);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < dd; ++k) {
            x(i, k) = f(k, 0) * c[i] + f(k, 1) + sigma * rng.normal();
        }
    }
    return x;
}

namespace {

// columns i.i.d. N(0, K^-1) via K = L L^T: solve L^T x = z for standard normal z
Mat sample_gaussian_precision(const Mat& k, int d_attr, RngStream& rng) {
    Eigen::LLT<Mat> llt(k);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("NotPD: precision matrix failed Cholesky");
    }
    const int n = static_cast<int>(k.rows());
    Mat x(n, d_attr);
    Vec z(n);
    for (int col = 0; col < d_attr; ++col) {
        for (int i = 0; i < n; ++i) z[i] = rng.normal();
        x.col(col) = llt.matrixU().solve(z);
    }
    return x;
}

}  // namespace

NonlinearData gen_attr_nonlinear(const Vec& c, const Mat* d, const Hyperparams& hyper,
                                 int d_attr, RngStream& rng) {
    hyper.validate();
    if (d_attr < 1) throw ValidationError("gen_attr_nonlinear: d_attr must be positive");
    const int n = static_cast<int>(c.size());
    double kappa = hyper.kappa;
    if (std::isnan(kappa)) {
        kappa = default_kappa(n, hyper.resolve_mass(n), d, hyper.e, hyper.eps);
        Mat k = build_precision(c, d, hyper.e, hyper.eps, kappa);
        int doublings = 0;
        while (Eigen::LLT<Mat>(k).info() != Eigen::Success) {
            if (++doublings > 8) {
                throw NumericalError("NotPD: no feasible kappa after 8 doublings");
            }
            kappa *= 2.0;
            k = build_precision(c, d, hyper.e, hyper.eps, kappa);
        }
        return {sample_gaussian_precision(k, d_attr, rng), kappa};
    }
    Mat k = build_precision(c, d, hyper.e, hyper.eps, kappa);
    return {sample_gaussian_precision(k, d_attr, rng), kappa};
}

AOData gen_attr_ao(const Mat& theta, int d_attr, RngStream& rng, double delta) {
    if (theta.rows() != theta.cols()) throw ValidationError("ShapeMismatch: theta must be square");
    if (d_attr < 1) throw ValidationError("gen_attr_ao: d_attr must be positive");
    Mat theta_pd = 0.5 * (theta + theta.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(theta_pd, Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin < delta) {
        theta_pd += (delta - lmin) * Mat::Identity(theta.rows(), theta.cols());
    }
    return {sample_gaussian_precision(theta_pd, d_attr, rng), theta_pd};
}

}  // namespace cpg
