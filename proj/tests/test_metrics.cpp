#include <cmath>
#include <vector>

#include "cpg/metrics.hpp"
#include "cpg/rng.hpp"
#include "doctest.h"

using cpg::Mat;
using cpg::RngStream;
using cpg::Vec;

namespace {

Vec make_vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

}  // namespace

TEST_CASE("cosine similarity basics") {
    const Vec a = make_vec({1.0, 1.0});
    const Vec b = make_vec({1.0, 0.0});
    CHECK(cpg::cosine_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cpg::cosine_similarity(make_vec({1.0, 0.0}), make_vec({0.0, 1.0})) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(cpg::cosine_similarity(a, b) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK_THROWS_WITH_AS(cpg::cosine_similarity(a, make_vec({0.0, 0.0})),
                         doctest::Contains("ZeroVector"), cpg::ValidationError);
}

TEST_CASE("ideal block pattern") {
    const Mat p = cpg::ideal_cp(4, 2);
    Mat expect(4, 4);
    expect << 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0;
    CHECK((p - expect).cwiseAbs().maxCoeff() == 0.0);
    CHECK(cpg::ideal_cp(3, 0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(cpg::ideal_cp(3, 3).minCoeff() == 1.0);
    CHECK_THROWS_AS(cpg::ideal_cp(3, 4), cpg::ValidationError);
}

TEST_CASE("block distance: exact match, reversal, scale invariance") {
    const int n = 8;
    const Mat theta = cpg::ideal_cp(n, 2);  // matches the a = n/4 reference
    const Vec dec = make_vec({8, 7, 6, 5, 4, 3, 2, 1});
    CHECK(cpg::cp_frobenius(theta, dec) == doctest::Approx(0.0).epsilon(1e-14));

    // reversed scores move the ones block to the far corner: the difference
    // holds eight unit entries, so the distance is sqrt(8)
    const Vec inc = make_vec({1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(cpg::cp_frobenius(theta, inc) ==
          doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));

    CHECK(cpg::cp_frobenius(Mat(10.0 * theta), dec) ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("block distance ignores monotone rescaling of the scores") {
    RngStream rng(3);
    const int n = 9;
    Mat t(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) t(i, j) = rng.normal();
    }
    t = ((t + t.transpose()) / 2.0).eval();
    Vec c(n);
    for (int i = 0; i < n; ++i) c(i) = rng.uniform01();
    const double v1 = cpg::cp_frobenius(t, c);
    const Vec c2 = c.array().square();  // strictly monotone on [0,1]
    CHECK(cpg::cp_frobenius(t, c2) == doctest::Approx(v1).epsilon(1e-12));
    CHECK(cpg::cp_frobenius(Mat(3.7 * t), c) == doctest::Approx(v1).epsilon(1e-12));
}

TEST_CASE("block distance on an empty graph falls back to the pattern norm") {
    const Vec c = make_vec({0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01});
    CHECK(cpg::cp_frobenius(Mat::Zero(8, 8), c) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("edge cosine: identity, disjoint support, direct arithmetic") {
    RngStream rng(5);
    const int n = 5;
    Mat a(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) a(i, j) = rng.normal();
    }
    a = ((a + a.transpose()) / 2.0).eval();
    CHECK(cpg::edge_cosine(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    Mat b = Mat::Zero(n, n);
    b(0, 1) = b(1, 0) = 1.0;
    Mat c = Mat::Zero(n, n);
    c(2, 3) = c(3, 2) = 1.0;
    CHECK(cpg::edge_cosine(b, c) == doctest::Approx(0.0).epsilon(1e-14));

    Mat d(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) d(i, j) = rng.normal();
    }
    d = ((d + d.transpose()) / 2.0).eval();
    double dot = 0.0, na = 0.0, nd = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            dot += std::abs(a(i, j)) * std::abs(d(i, j));
            na += a(i, j) * a(i, j);
            nd += d(i, j) * d(i, j);
        }
    }
    CHECK(cpg::edge_cosine(a, d) ==
          doctest::Approx(dot / std::sqrt(na * nd)).epsilon(1e-12));

    // diagonals never contribute
    Mat a2 = a;
    a2.diagonal().setConstant(99.0);
    CHECK(cpg::edge_cosine(a2, d) == doctest::Approx(cpg::edge_cosine(a, d)).epsilon(1e-14));
}

TEST_CASE("edge cosine is symmetric and permutation invariant") {
    RngStream rng(7);
    const int n = 6;
    Mat a(n, n), b(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            a(i, j) = rng.normal();
            b(i, j) = rng.normal();
        }
    }
    a = ((a + a.transpose()) / 2.0).eval();
    b = ((b + b.transpose()) / 2.0).eval();
    CHECK(cpg::edge_cosine(a, b) == doctest::Approx(cpg::edge_cosine(b, a)).epsilon(1e-14));

    std::vector<int> perm = {3, 0, 5, 1, 4, 2};
    Mat ap(n, n), bp(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ap(i, j) = a(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
            bp(i, j) = b(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
        }
    }
    CHECK(cpg::edge_cosine(ap, bp) == doctest::Approx(cpg::edge_cosine(a, b)).epsilon(1e-12));
}
