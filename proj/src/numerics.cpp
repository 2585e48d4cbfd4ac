#include "cpg/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace cpg {

namespace {

double clamp01_sum(const Vec& v, double lambda) {
    double s = 0.0;
    for (int i = 0; i < v.size(); ++i) {
        s += std::clamp(v[i] - lambda, 0.0, 1.0);
    }
    return s;
}

}  // namespace

Vec project_simplex_box(const Vec& v, const SimplexBoxSet& set, double tol) {
    if (tol <= 0.0) {
        throw ValidationError("project_simplex_box: tol must be positive");
    }
    if (set.n != v.size()) {
        throw ValidationError("project_simplex_box: dimension mismatch");
    }
    if (!(set.mass > 0.0) || set.mass > static_cast<double>(set.n)) {
        throw ValidationError("EmptySet: need 0 < mass <= n");
    }

    double lo = v.minCoeff() - 1.0;  // phi(lo) = n - mass >= 0
    double hi = v.maxCoeff();        // phi(hi) = -mass < 0
    double lambda = 0.0;
    bool found = false;
    for (int it = 0; it < 200; ++it) {
        lambda = 0.5 * (lo + hi);
        double phi = clamp01_sum(v, lambda) - set.mass;
        if (std::abs(phi) <= tol) {
            found = true;
            break;
        }
        if (phi > 0.0) {
            lo = lambda;
        } else {
            hi = lambda;
        }
    }
    if (!found) {
        throw NumericalError("NoConvergence: projection bisection failed");
    }
    Vec out(v.size());
    for (int i = 0; i < v.size(); ++i) {
        out[i] = std::clamp(v[i] - lambda, 0.0, 1.0);
    }
    return out;
}

double sample_laplace(double inv_diversity, RngStream& rng) {
    if (!(inv_diversity > 0.0)) {
        throw ValidationError("InvalidScale: inv_diversity must be positive");
    }
    double u = rng.uniform01() - 0.5;
    double mag = -std::log(1.0 - 2.0 * std::abs(u)) / inv_diversity;
    return u >= 0.0 ? mag : -mag;
}

CholResult chol_logdet_inverse(const Mat& K) {
    if (K.rows() != K.cols()) {
        throw ValidationError("chol_logdet_inverse: matrix must be square");
    }
    double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
    if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ValidationError("chol_logdet_inverse: matrix not symmetric");
    }
    Eigen::LLT<Mat> llt(K);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("NotPD: Cholesky failed");
    }
    CholResult r;
    r.logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    r.inverse = llt.solve(Mat::Identity(K.rows(), K.cols()));
    return r;
}

Vec finite_diff_grad(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
    if (!(h > 0.0)) {
        throw ValidationError("finite_diff_grad: h must be positive");
    }
    Vec g(x.size());
    Vec xp = x;
    for (int i = 0; i < x.size(); ++i) {
        double xi = x[i];
        xp[i] = xi + h;
        double fp = f(xp);
        xp[i] = xi - h;
        double fm = f(xp);
        xp[i] = xi;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NumericalError("NonFinite: objective not finite near x");
        }
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace cpg
