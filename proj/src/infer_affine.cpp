#include "cpg/infer_affine.hpp"

#include <cmath>
#include <functional>

#include "cpg/kernels.hpp"
#include "cpg/numerics.hpp"

namespace cpg {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr double kArmijoShrink = 0.5;
constexpr double kInnerMoveTol = 1e-6;
constexpr int kInnerBudget = 100;

double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void check_theta(const Mat& theta, int n) {
    if (theta.rows() != n || theta.cols() != n) {
        throw ValidationError("ShapeMismatch: theta vs attributes");
    }
    double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());
    if ((theta - theta.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw ValidationError("ShapeMismatch: theta must be symmetric");
    }
}

Mat with_intercept(const Vec& c) {
    Mat cc(c.size(), 2);
    cc.col(0) = c;
    cc.col(1).setOnes();
    return cc;
}

// shared alternation driver; the two models differ only in their objective
// and gradients
struct AffineProblem {
    std::function<double(const Vec&, const Mat&)> objective;
    std::function<Vec(const Vec&, const Mat&)> grad_c;
    std::function<Mat(const Vec&, const Mat&)> grad_f;
};

AffineFitResult run_alternation(const AffineProblem& prob, Vec c, Mat f,
                                const SimplexBoxSet& set, const Hyperparams& hyper) {
    AffineFitResult res;
    double obj = prob.objective(c, f);
    res.objective_trace.push_back(obj);

    for (int outer = 0; outer < hyper.max_outer; ++outer) {
        // block 1: projected gradient ascent on c
        for (int it = 0; it < kInnerBudget; ++it) {
            Vec g = prob.grad_c(c, f);
            double rho = 1.0;
            bool accepted = false;
            Vec cand;
            double cand_obj = 0.0;
            while (rho > 1e-14) {
                cand = project_simplex_box(c + rho * g, set);
                double slope = g.dot(cand - c);
                if (slope <= 0.0) break;  // projection returned (numerically) the same point
                cand_obj = prob.objective(cand, f);
                if (cand_obj >= obj + kArmijoSlope * slope) {
                    accepted = true;
                    break;
                }
                rho *= kArmijoShrink;
            }
            if (!accepted) break;
            double moved = (cand - c).norm();
            c = cand;
            obj = cand_obj;
            if (moved <= kInnerMoveTol) break;
        }

        // block 2: gradient ascent on F
        if (f.rows() > 0) {
            for (int it = 0; it < kInnerBudget; ++it) {
                Mat g = prob.grad_f(c, f);
                double gnorm2 = g.squaredNorm();
                if (gnorm2 == 0.0) break;
                double rho = 1.0;
                bool accepted = false;
                Mat cand;
                double cand_obj = 0.0;
                while (rho > 1e-14) {
                    cand = f + rho * g;
                    cand_obj = prob.objective(c, cand);
                    if (cand_obj >= obj + kArmijoSlope * rho * gnorm2) {
                        accepted = true;
                        break;
                    }
                    rho *= kArmijoShrink;
                }
                if (!accepted) break;
                double moved = (cand - f).norm();
                f = cand;
                obj = cand_obj;
                if (moved <= kInnerMoveTol) break;
            }
        }

        res.objective_trace.push_back(obj);
        res.outer_iters = outer + 1;
        double prev = res.objective_trace[res.objective_trace.size() - 2];
        if (std::abs(obj - prev) < hyper.tol) {
            res.converged = true;
            break;
        }
    }
    res.c = c;
    res.f = f;
    return res;
}

Vec init_core_scores(const Mat& theta, double mass) {
    const int n = static_cast<int>(theta.rows());
    Vec r = kern::abs_row_sums(theta);
    double total = r.sum();
    Vec v = total > 0.0 ? Vec((mass / total) * r) : Vec(Vec::Constant(n, mass / n));
    return project_simplex_box(v, {n, mass});
}

Mat init_affine_least_squares(const Vec& c, const Mat& x) {
    Mat cc = with_intercept(c);
    Mat gram = cc.transpose() * cc;
    gram += 1e-12 * Mat::Identity(2, 2);  // c proportional to 1 makes the gram singular
    return (gram.ldlt().solve(cc.transpose() * x)).transpose();
}

}  // namespace

Mat logistic_probs(const Vec& c, const Mat& f) {
    if (f.cols() != 2) throw ValidationError("ShapeMismatch: affine params must be D x 2");
    const int n = static_cast<int>(c.size());
    const int dd = static_cast<int>(f.rows());
    Mat p(n, dd);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < dd; ++k) {
            p(i, k) = 1.0 / (1.0 + std::exp(-(f(k, 0) * c[i] + f(k, 1))));
        }
    }
    return p;
}

Vec grad_c_bool(const Mat& theta, const Mat& x, const Mat& p, const Mat& f) {
    return 2.0 * kern::abs_row_sums(theta) + (x - p) * f.col(0);
}

Mat grad_f_bool(const Mat& x, const Mat& p, const Vec& c, const Mat& f, double alpha) {
    return (x - p).transpose() * with_intercept(c) - 2.0 * alpha * f;
}

Vec grad_c_real(const Mat& theta, const Mat& x, const Vec& c, const Mat& f) {
    Mat resid = x - with_intercept(c) * f.transpose();
    return 2.0 * kern::abs_row_sums(theta) + 2.0 * resid * f.col(0);
}

Mat grad_f_real(const Mat& x, const Vec& c, const Mat& f, double alpha) {
    Mat resid = x - with_intercept(c) * f.transpose();
    return 2.0 * resid.transpose() * with_intercept(c) - 2.0 * alpha * f;
}

double objective_bool(const Mat& theta, const Mat& x, const Vec& c, const Mat& f, double alpha) {
    double prior = 2.0 * kern::abs_row_sums(theta).dot(c);
    double loglik = 0.0;
    for (int i = 0; i < x.rows(); ++i) {
        for (int k = 0; k < x.cols(); ++k) {
            double z = f(k, 0) * c[i] + f(k, 1);
            loglik += x(i, k) * z - softplus(z);
        }
    }
    return prior + loglik - alpha * f.squaredNorm();
}

double objective_real(const Mat& theta, const Mat& x, const Vec& c, const Mat& f, double alpha) {
    double prior = 2.0 * kern::abs_row_sums(theta).dot(c);
    Mat resid = x - with_intercept(c) * f.transpose();
    return prior - resid.squaredNorm() - alpha * f.squaredNorm();
}

AffineFitResult fit_bool(const Mat& theta, const Mat& x, const Hyperparams& hyper, RngStream& rng) {
    (void)rng;  // deterministic; stream kept for interface symmetry
    hyper.validate();
    const int n = static_cast<int>(x.rows());
    check_theta(theta, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < x.cols(); ++k) {
            if (x(i, k) != 0.0 && x(i, k) != 1.0) {
                throw ValidationError("NonBinaryAttributes: entries must be exactly 0 or 1");
            }
        }
    }
    double mass = hyper.resolve_mass(n);
    SimplexBoxSet set{n, mass};
    Vec c0 = init_core_scores(theta, mass);
    Mat f0 = Mat::Zero(x.cols(), 2);

    AffineProblem prob;
    prob.objective = [&](const Vec& c, const Mat& f) {
        return objective_bool(theta, x, c, f, hyper.alpha);
    };
    prob.grad_c = [&](const Vec& c, const Mat& f) {
        return grad_c_bool(theta, x, logistic_probs(c, f), f);
    };
    prob.grad_f = [&](const Vec& c, const Mat& f) {
        return grad_f_bool(x, logistic_probs(c, f), c, f, hyper.alpha);
    };
    return run_alternation(prob, c0, f0, set, hyper);
}

AffineFitResult fit_real(const Mat& theta, const Mat& x, const Hyperparams& hyper, RngStream& rng) {
    (void)rng;
    hyper.validate();
    const int n = static_cast<int>(x.rows());
    check_theta(theta, n);
    double mass = hyper.resolve_mass(n);
    SimplexBoxSet set{n, mass};
    Vec c0 = init_core_scores(theta, mass);
    Mat f0 = x.cols() > 0 ? init_affine_least_squares(c0, x) : Mat(0, 2);

    AffineProblem prob;
    prob.objective = [&](const Vec& c, const Mat& f) {
        return objective_real(theta, x, c, f, hyper.alpha);
    };
    prob.grad_c = [&](const Vec& c, const Mat& f) { return grad_c_real(theta, x, c, f); };
    prob.grad_f = [&](const Vec& c, const Mat& f) { return grad_f_real(x, c, f, hyper.alpha); };
    return run_alternation(prob, c0, f0, set, hyper);
}

}  // namespace cpg
