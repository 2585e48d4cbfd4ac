#include "cpg/glasso.hpp"

#include <cmath>
#include <vector>

#include "cpg/kernels.hpp"
#include "cpg/numerics.hpp"

namespace cpg {

namespace {

// min over beta of 0.5 beta' W11 beta - beta's12 + sum l12_k |beta_k|,
// cyclic coordinate descent with a runaway guard (W11 can lose definiteness
// transiently during the outer sweep; bailing lets the caller restart).
bool lasso_cd(const Mat& w11, const Vec& s12, const Vec& l12, Vec& beta, int max_pass = 2000) {
    const int m = static_cast<int>(beta.size());
    for (int pass = 0; pass < max_pass; ++pass) {
        double mx = 0.0;
        double bmax = 0.0;
        for (int k = 0; k < m; ++k) {
            double dot = w11.row(k).dot(beta);
            double r = s12[k] - dot + w11(k, k) * beta[k];
            double ar = std::abs(r) - l12[k];
            double nb = 0.0;
            if (ar > 0.0) {
                nb = (r > 0.0 ? ar : -ar) / w11(k, k);
            }
            if (std::abs(nb) > 1e12) return false;
            double d = nb - beta[k];
            beta[k] = nb;
            mx = std::max(mx, std::abs(d));
            bmax = std::max(bmax, std::abs(nb));
        }
        if (mx <= 1e-13 * (1.0 + bmax)) break;
    }
    return true;
}

struct DualState {
    Mat w;  // working covariance
    Mat b;  // per-column lasso coefficients
};

// one sweep over all columns; returns max change in W, or -1 on runaway
double dual_cycle(const Mat& s, const Mat& pen, DualState& st) {
    const int n = static_cast<int>(s.rows());
    double maxch = 0.0;
    std::vector<int> idx(n - 1);
    Mat w11(n - 1, n - 1);
    Vec s12(n - 1), l12(n - 1), beta(n - 1);
    for (int j = 0; j < n; ++j) {
        int t = 0;
        for (int i = 0; i < n; ++i) {
            if (i != j) idx[t++] = i;
        }
        for (int a = 0; a < n - 1; ++a) {
            int ia = idx[a];
            s12[a] = s(ia, j);
            l12[a] = pen(ia, j);
            beta[a] = st.b(ia, j);
            for (int bcol = 0; bcol < n - 1; ++bcol) {
                w11(a, bcol) = st.w(ia, idx[bcol]);
            }
        }
        if (!lasso_cd(w11, s12, l12, beta)) return -1.0;
        for (int a = 0; a < n - 1; ++a) {
            int ia = idx[a];
            st.b(ia, j) = beta[a];
            double wval = w11.row(a).dot(beta);
            maxch = std::max(maxch, std::abs(wval - st.w(ia, j)));
            st.w(ia, j) = wval;
            st.w(j, ia) = wval;
        }
    }
    return maxch;
}

// Theta from the dual state: theta_jj = 1/(w_jj - w12' beta_j), off-diagonal
// column j = -beta_j * theta_jj. Near-zero entries snap to exact zero so the
// KKT residual uses the subgradient branch instead of a sign at float dust.
bool recover_theta(const Mat& s, const DualState& st, Mat& theta) {
    const int n = static_cast<int>(s.rows());
    theta = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i != j) dot += st.w(i, j) * st.b(i, j);
        }
        double denom = st.w(j, j) - dot;
        if (denom <= 0.0) return false;
        double tjj = 1.0 / denom;
        theta(j, j) = tjj;
        for (int i = 0; i < n; ++i) {
            if (i != j) theta(i, j) = -st.b(i, j) * tjj;
        }
    }
    theta = 0.5 * (theta + theta.transpose()).eval();
    double snap = 1e-13 * (1.0 + theta.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && std::abs(theta(i, j)) < snap) theta(i, j) = 0.0;
        }
    }
    return true;
}

double kkt_of(const Mat& s, const Mat& pen, const Mat& theta) {
    Eigen::LLT<Mat> llt(theta);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    Mat sigma = llt.solve(Mat::Identity(theta.rows(), theta.cols()));
    return kern::kkt_residual(s, pen, theta, sigma);
}

void check_inputs(const Mat& s, const Mat& pen) {
    const int n = static_cast<int>(s.rows());
    if (s.cols() != n || pen.rows() != n || pen.cols() != n) {
        throw ValidationError("ShapeMismatch: covariance vs penalty");
    }
    double sscale = std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * sscale) {
        throw ValidationError("NotPSD: covariance not symmetric");
    }
    // an all-zero penalty selects the direct unpenalized-MLE path and skips
    // the positivity requirement
    const bool zero_pen = pen.cwiseAbs().maxCoeff() == 0.0;
    for (int i = 0; i < n; ++i) {
        if (s(i, i) < 0.0) throw ValidationError("NotPSD: negative diagonal in covariance");
        for (int j = 0; j < n; ++j) {
            if (!zero_pen && i != j && !(pen(i, j) > 0.0)) {
                throw ValidationError("weighted_glasso: off-diagonal penalties must be positive");
            }
            if (i == j && pen(i, j) < 0.0) {
                throw ValidationError("weighted_glasso: negative diagonal penalty");
            }
        }
    }
}

}  // namespace

double glasso_objective(const Mat& s, const Mat& pen, const Mat& theta) {
    Eigen::LLT<Mat> llt(theta);
    if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return logdet - s.cwiseProduct(theta).sum() - pen.cwiseProduct(theta.cwiseAbs()).sum();
}

GlassoResult weighted_glasso_pen(const Mat& s, const Mat& pen, double tol, double min_obj,
                                 int max_cycles) {
    check_inputs(s, pen);
    const int n = static_cast<int>(s.rows());

    if (pen.cwiseAbs().maxCoeff() == 0.0) {
        Eigen::LLT<Mat> llt(s);
        if (llt.info() != Eigen::Success) {
            throw NumericalError("SingularAtZeroPenalty: unpenalized MLE needs S positive definite");
        }
        Mat theta = llt.solve(Mat::Identity(n, n));
        theta = 0.5 * (theta + theta.transpose()).eval();
        return {theta, kkt_of(s, pen, theta), 0};
    }

    // cold start: W = S + diag(pen) is PD whenever S is PSD with the
    // penalized diagonal, and is the exact dual optimum for the diagonal
    DualState st{s, Mat::Zero(n, n)};
    st.w.diagonal() += pen.diagonal();
    for (int i = 0; i < n; ++i) {
        if (!(st.w(i, i) > 0.0)) {
            throw NumericalError("NotPSD: zero diagonal in working covariance");
        }
    }

    Mat theta;
    double kkt = std::numeric_limits<double>::infinity();
    for (int cyc = 1; cyc <= max_cycles; ++cyc) {
        double ch = dual_cycle(s, pen, st);
        if (ch < 0.0) {
            throw NumericalError("NotPSD: dual sweep diverged (covariance not PSD?)");
        }
        if (recover_theta(s, st, theta)) {
            kkt = kkt_of(s, pen, theta);
            if (kkt <= tol && glasso_objective(s, pen, theta) >= min_obj - 1e-12) {
                return {theta, kkt, cyc};
            }
        }
    }
    throw NumericalError("NoConvergence: weighted glasso exceeded max cycles, kkt=" +
                         std::to_string(kkt));
}

GlassoResult weighted_glasso(const Mat& s, const Mat& w, double lam, double tol, double min_obj,
                             int max_cycles) {
    if (lam < 0.0) throw ValidationError("weighted_glasso: lam must be nonnegative");
    if (lam == 0.0) {
        return weighted_glasso_pen(s, Mat::Zero(s.rows(), s.cols()), tol, min_obj, max_cycles);
    }
    return weighted_glasso_pen(s, lam * w, tol, min_obj, max_cycles);
}

namespace {

double smooth_part(const Mat& s, const Mat& theta) {
    Eigen::LLT<Mat> llt(theta);
    if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return logdet - s.cwiseProduct(theta).sum();
}

Mat soft_threshold(const Mat& v, const Mat& cut) {
    Mat out(v.rows(), v.cols());
    for (int i = 0; i < v.rows(); ++i) {
        for (int j = 0; j < v.cols(); ++j) {
            double x = v(i, j);
            double t = cut(i, j);
            out(i, j) = x > t ? x - t : (x < -t ? x + t : 0.0);
        }
    }
    return out;
}

}  // namespace

Mat glasso_prox_reference(const Mat& s, const Mat& pen, double tol, int max_iters) {
    check_inputs(s, pen);
    const int n = static_cast<int>(s.rows());
    Mat theta = (s + 0.1 * Mat::Identity(n, n)).llt().solve(Mat::Identity(n, n));
    theta = 0.5 * (theta + theta.transpose()).eval();
    double g = smooth_part(s, theta);
    double step = 1.0;
    for (int it = 0; it < max_iters; ++it) {
        Mat sigma = theta.llt().solve(Mat::Identity(n, n));
        Mat grad = sigma - s;  // gradient of the smooth (concave) part
        Mat cand;
        double gc = -std::numeric_limits<double>::infinity();
        while (true) {
            cand = soft_threshold(theta + step * grad, step * pen);
            cand = 0.5 * (cand + cand.transpose()).eval();
            gc = smooth_part(s, cand);
            Mat diff = cand - theta;
            double quad = g + grad.cwiseProduct(diff).sum() - diff.squaredNorm() / (2.0 * step);
            if (std::isfinite(gc) && gc >= quad - 1e-14) break;
            if (step <= 1e-18) break;
            step *= 0.5;
        }
        double resid = (cand - theta).cwiseAbs().maxCoeff() / step;
        theta = cand;
        g = gc;
        if (resid <= tol) break;
        step *= 1.25;  // mild growth; the backtracking loop trims it again
    }
    return theta;
}

}  // namespace cpg
