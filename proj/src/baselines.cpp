#include "cpg/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace cpg {
namespace {

void check_square(const Mat& theta) {
    if (theta.rows() != theta.cols() || theta.rows() < 1) {
        throw ValidationError("NotSquare: baseline input must be a square matrix");
    }
}

Mat abs_offdiag(const Mat& theta) {
    Mat a = theta.cwiseAbs();
    a.diagonal().setZero();
    return a;
}

}  // namespace

BinaryGraph binarize(const Mat& theta, double tau) {
    check_square(theta);
    if (!(tau >= 0.0)) {
        throw ValidationError("InvalidThreshold: binarize threshold must be >= 0");
    }
    const int n = static_cast<int>(theta.rows());
    BinaryGraph g;
    g.n = n;
    g.adjacency = Eigen::MatrixXi::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            if (std::abs(theta(i, j)) > tau) {
                g.adjacency(i, j) = 1;
                g.adjacency(j, i) = 1;
            }
        }
    }
    return g;
}

double default_binarize_tau(const Mat& theta) {
    check_square(theta);
    std::vector<double> vals;
    const int n = static_cast<int>(theta.rows());
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            const double a = std::abs(theta(i, j));
            if (a > 0.0) vals.push_back(a);
        }
    }
    if (vals.empty()) return 0.0;
    std::sort(vals.begin(), vals.end());
    const size_t m = vals.size();
    if (m % 2 == 1) return vals[m / 2];
    return 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
}

std::vector<int> k_core(const BinaryGraph& g) {
    const int n = g.n;
    if (n < 1 || g.adjacency.rows() != n || g.adjacency.cols() != n) {
        throw ValidationError("InvalidGraph: k_core needs a consistent adjacency matrix");
    }
    std::vector<int> deg(n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j != i && g.adjacency(i, j) != 0) ++deg[i];
        }
    }
    std::vector<int> core(n, 0);
    std::vector<bool> removed(n, false);
    int level = 0;
    for (int step = 0; step < n; ++step) {
        int v = -1;
        for (int i = 0; i < n; ++i) {
            if (!removed[i] && (v < 0 || deg[i] < deg[v])) v = i;
        }
        level = std::max(level, deg[v]);
        core[v] = level;
        removed[v] = true;
        for (int j = 0; j < n; ++j) {
            if (!removed[j] && g.adjacency(v, j) != 0) --deg[j];
        }
    }
    return core;
}

double minres_objective(const Mat& theta, const Vec& c) {
    const Mat a = abs_offdiag(theta);
    const int n = static_cast<int>(a.rows());
    double obj = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double r = a(i, j) - c(i) * c(j);
            obj += r * r;
        }
    }
    return obj;
}

Vec minres_grad(const Mat& theta, const Vec& c) {
    const Mat a = abs_offdiag(theta);
    const int n = static_cast<int>(a.rows());
    Vec g = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            s += (c(i) * c(j) - a(i, j)) * c(j);
        }
        g(i) = 4.0 * s;
    }
    return g;
}

MinresResult minres_scores(const Mat& theta, RngStream& rng) {
    (void)rng;  // deterministic; stream kept in the signature for interface parity
    check_square(theta);
    const int n = static_cast<int>(theta.rows());
    const Mat a = abs_offdiag(theta);

    MinresResult out;
    if (a.cwiseAbs().maxCoeff() == 0.0) {
        out.scores = Vec::Zero(n);
        out.objective = 0.0;
        out.objective_start = 0.0;
        return out;
    }

    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    if (es.info() != Eigen::Success) {
        throw NumericalError("EigenFailure: spectral start for the product-form scores failed");
    }
    const double lam1 = es.eigenvalues()(n - 1);
    Vec c;
    if (lam1 > 0.0) {
        c = std::sqrt(lam1) * es.eigenvectors().col(n - 1).cwiseAbs();
    } else {
        c = Vec::Zero(n);
    }

    double obj = minres_objective(theta, c);
    out.objective_start = obj;

    const int max_iters = 500;
    for (int it = 0; it < max_iters; ++it) {
        const Vec g = minres_grad(theta, c);
        double step = 1.0;
        bool accepted = false;
        Vec cand;
        for (int ls = 0; ls < 60; ++ls) {
            cand = (c - step * g).cwiseMax(0.0);
            const double slope = g.dot(c - cand);
            if (slope <= 0.0) break;
            const double cand_obj = minres_objective(theta, cand);
            if (cand_obj <= obj - 1e-4 * slope) {
                accepted = true;
                obj = cand_obj;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        const double moved = (cand - c).cwiseAbs().maxCoeff();
        c = cand;
        if (moved <= 1e-10) break;
    }

    out.objective = obj;
    const double mx = c.maxCoeff();
    out.scores = (mx > 0.0) ? Vec(c / mx) : c;
    return out;
}

}  // namespace cpg
