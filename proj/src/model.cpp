#include "cpg/model.hpp"

#include <cmath>

#include "cpg/kernels.hpp"

namespace cpg {

void Hyperparams::validate() const {
    if (!(lambda > 0.0)) throw ValidationError("Hyperparams: lambda must be positive");
    if (!(eps > 0.0)) throw ValidationError("Hyperparams: eps must be positive");
    if (!(sigma2 > 0.0)) throw ValidationError("InvalidVariance: sigma2 must be positive");
    if (alpha < 0.0) throw ValidationError("Hyperparams: alpha must be nonnegative");
    if (e < 0.0) throw ValidationError("Hyperparams: e must be nonnegative");
    if (!(tol > 0.0)) throw ValidationError("Hyperparams: tol must be positive");
    if (max_outer < 1) throw ValidationError("Hyperparams: max_outer must be at least 1");
}

double Hyperparams::resolve_mass(int n) const {
    double m = mass > 0.0 ? mass : 0.25 * n;
    if (m > n) throw ValidationError("EmptySet: mass exceeds node count");
    return m;
}

Mat compute_weights(const Vec& c, const Mat* d, double e, double eps) {
    if (d == nullptr && e != 0.0) {
        throw ValidationError("compute_weights: e must be 0 when distances are absent");
    }
    if (d != nullptr && (d->rows() != c.size() || d->cols() != c.size())) {
        throw ValidationError("ShapeMismatch: distance matrix vs core scores");
    }
    return kern::weight_matrix(c, d, e, eps);
}

Mat build_precision(const Vec& c, const Mat* d, double e, double eps, double kappa) {
    if (d == nullptr && e != 0.0) {
        throw ValidationError("build_precision: e must be 0 when distances are absent");
    }
    const int n = static_cast<int>(c.size());
    Mat k(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                k(i, i) = kappa - 2.0 * c[i];
            } else {
                double v = -c[i] - c[j];
                if (d != nullptr && e != 0.0) {
                    v += e * std::log((*d)(i, j) + eps);
                }
                k(i, j) = v;
            }
        }
    }
    return k;
}

double default_kappa(int n, double mass, const Mat* d, double e, double eps) {
    Vec c0 = Vec::Constant(n, mass / n);
    Mat k = build_precision(c0, d, e, eps, 0.0);
    double mx = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) mx = std::max(mx, std::abs(k(i, j)));
        }
    }
    return 2.0 + 2.0 * mx;
}

}  // namespace cpg
