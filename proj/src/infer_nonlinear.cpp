#include "cpg/infer_nonlinear.hpp"

#include <cmath>

#include "cpg/kernels.hpp"
#include "cpg/numerics.hpp"

namespace cpg {

namespace {

constexpr int kMaxSteps = 500;
constexpr double kArmijoSlope = 1e-4;

bool is_pd(const Mat& k) { return Eigen::LLT<Mat>(k).info() == Eigen::Success; }

}  // namespace

Mat sample_covariance(const Mat& x) {
    if (x.cols() < 1) throw ValidationError("EmptyData: need at least one attribute column");
    return (x * x.transpose()) / static_cast<double>(x.cols());
}

double objective_nonlinear(const Mat& theta, const Mat& s, const Vec& c, const Mat* d, double e,
                           double eps, double kappa) {
    Mat k = build_precision(c, d, e, eps, kappa);
    Eigen::LLT<Mat> llt(k);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("NotPD: precision infeasible at this c");
    }
    double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return 2.0 * kern::abs_row_sums(theta).dot(c) + logdet - s.cwiseProduct(k).sum();
}

Vec grad_c_nonlinear(const Mat& theta, const Mat& s, const Vec& c, const Mat* d, double e,
                     double eps, double kappa) {
    Mat k = build_precision(c, d, e, eps, kappa);
    CholResult ch = chol_logdet_inverse(k);  // throws NotPD on infeasible c
    const int n = static_cast<int>(c.size());
    return 2.0 * kern::abs_row_sums(theta) + 2.0 * (s.rowwise().sum() - ch.inverse * Vec::Ones(n));
}

NonlinearFitResult fit_nonlinear(const Mat& theta, const Mat& x, const Mat* d,
                                 const Hyperparams& hyper, RngStream& rng, bool center) {
    (void)rng;
    hyper.validate();
    const int n = static_cast<int>(x.rows());
    if (theta.rows() != n || theta.cols() != n) {
        throw ValidationError("ShapeMismatch: theta vs attributes");
    }
    double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());
    if ((theta - theta.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw ValidationError("ShapeMismatch: theta must be symmetric");
    }

    Mat xc = x;
    if (center) xc.colwise() -= Vec(x.rowwise().mean());
    Mat s = sample_covariance(xc);

    double mass = hyper.resolve_mass(n);
    SimplexBoxSet set{n, mass};
    Vec c = Vec::Constant(n, mass / n);

    double kappa = std::isnan(hyper.kappa) ? default_kappa(n, mass, d, hyper.e, hyper.eps)
                                           : hyper.kappa;
    int doublings = 0;
    while (!is_pd(build_precision(c, d, hyper.e, hyper.eps, kappa))) {
        if (++doublings > 8) {
            throw NumericalError("InfeasibleStart: no PD kappa found after 8 doublings");
        }
        kappa *= 2.0;
    }

    NonlinearFitResult res;
    res.kappa_used = kappa;
    double obj = objective_nonlinear(theta, s, c, d, hyper.e, hyper.eps, kappa);
    res.objective_trace.push_back(obj);

    for (int t = 1; t <= kMaxSteps; ++t) {
        res.iters = t;
        Vec g = grad_c_nonlinear(theta, s, c, d, hyper.e, hyper.eps, kappa);
        double rho = 1.0;
        bool accepted = false;
        Vec cand;
        double cand_obj = 0.0;
        while (rho > 1e-14) {
            cand = project_simplex_box(c + rho * g, set);
            double slope = g.dot(cand - c);
            if (slope <= 0.0) break;
            if (is_pd(build_precision(cand, d, hyper.e, hyper.eps, kappa))) {
                cand_obj = objective_nonlinear(theta, s, cand, d, hyper.e, hyper.eps, kappa);
                if (cand_obj >= obj + kArmijoSlope * slope) {
                    accepted = true;
                    break;
                }
            }
            rho *= 0.5;
        }
        if (!accepted) {
            res.converged = true;  // no feasible ascent step: stationary point
            break;
        }
        c = cand;
        res.objective_trace.push_back(cand_obj);
        double delta = std::abs(cand_obj - obj);
        obj = cand_obj;
        if (delta < hyper.tol) {
            res.converged = true;
            break;
        }
    }
    res.c = c;
    return res;
}

}  // namespace cpg
