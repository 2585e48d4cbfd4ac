#include "cpg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <vector>

namespace cpg {

double cosine_similarity(const Vec& u, const Vec& v) {
    if (u.size() != v.size() || u.size() == 0) {
        throw ValidationError("SizeMismatch: cosine needs two non-empty vectors of equal length");
    }
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) {
        throw ValidationError("ZeroVector: cosine is undefined for a zero vector");
    }
    return u.dot(v) / (nu * nv);
}

Mat ideal_cp(int n, int a) {
    if (n < 1 || a < 0 || a > n) {
        throw ValidationError("InvalidPattern: need 0 <= a <= n and n >= 1");
    }
    Mat p = Mat::Zero(n, n);
    p.topLeftCorner(a, a).setOnes();
    return p;
}

double cp_frobenius(const Mat& theta, const Vec& scores) {
    const int n = static_cast<int>(theta.rows());
    if (theta.cols() != n || n < 1) {
        throw ValidationError("NotSquare: cp_frobenius needs a square matrix");
    }
    if (scores.size() != n) {
        throw ValidationError("SizeMismatch: scores length must match the matrix side");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        if (scores(i) != scores(j)) return scores(i) > scores(j);
        return i < j;
    });

    Mat p(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            p(i, j) = std::abs(theta(order[i], order[j]));
        }
    }

    const Mat ideal = ideal_cp(n, n / 4);
    const double mx = p.maxCoeff();
    if (mx == 0.0) {
        std::cerr << "warning: ZeroGraph: empty graph, returning the ideal pattern norm\n";
        return ideal.norm();
    }
    p /= mx;
    return (ideal - p).norm();
}

double edge_cosine(const Mat& a, const Mat& b) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n || b.rows() != n || b.cols() != n || n < 2) {
        throw ValidationError("SizeMismatch: edge_cosine needs two square matrices of side >= 2");
    }
    Vec u(n * (n - 1));
    Vec v(n * (n - 1));
    int k = 0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            u(k) = std::abs(a(i, j));
            v(k) = std::abs(b(i, j));
            ++k;
        }
    }
    return cosine_similarity(u, v);
}

}  // namespace cpg
