#include "cpg/kernels.hpp"

#include <cmath>
#include <vector>

#include "cpg/numerics.hpp"

namespace cpg::kern {

namespace {
#ifdef CPG_HAVE_OPENMP
bool g_parallel = true;
#else
bool g_parallel = false;
#endif
}  // namespace

void set_parallel(bool on) {
#ifdef CPG_HAVE_OPENMP
    g_parallel = on;
#else
    (void)on;
    g_parallel = false;
#endif
}

bool parallel_enabled() { return g_parallel; }

Vec abs_row_sums_serial(const Mat& a) {
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(a.cols());
    Vec out(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) {
            s += std::abs(a(i, j));
        }
        out[i] = s;
    }
    return out;
}

Vec abs_row_sums_parallel(const Mat& a) {
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(a.cols());
    Vec out(n);
#ifdef CPG_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) {
            s += std::abs(a(i, j));
        }
        out[i] = s;
    }
    return out;
}

Vec abs_row_sums(const Mat& a) {
    return g_parallel ? abs_row_sums_parallel(a) : abs_row_sums_serial(a);
}

namespace {

inline double weight_entry(const Vec& c, const Mat* d, double e, double eps, int i, int j) {
    double w = 1.0 - c[i] - c[j];
    if (d != nullptr && e != 0.0) {
        w += e * std::log((*d)(i, j) + eps);
    }
    return w;
}

}  // namespace

Mat weight_matrix_serial(const Vec& c, const Mat* d, double e, double eps) {
    const int n = static_cast<int>(c.size());
    Mat w(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            w(i, j) = weight_entry(c, d, e, eps, i, j);
        }
    }
    return w;
}

Mat weight_matrix_parallel(const Vec& c, const Mat* d, double e, double eps) {
    const int n = static_cast<int>(c.size());
    Mat w(n, n);
#ifdef CPG_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            w(i, j) = weight_entry(c, d, e, eps, i, j);
        }
    }
    return w;
}

Mat weight_matrix(const Vec& c, const Mat* d, double e, double eps) {
    return g_parallel ? weight_matrix_parallel(c, d, e, eps) : weight_matrix_serial(c, d, e, eps);
}

namespace {

std::vector<RngStream> fork_rows(RngStream& rng, int n) {
    std::vector<RngStream> streams;
    streams.reserve(n);
    for (int i = 0; i < n; ++i) {
        streams.push_back(rng.fork());
    }
    return streams;
}

inline void fill_row(Mat& t, const Mat& w, double lam, RngStream& stream, int i) {
    const int n = static_cast<int>(t.rows());
    for (int j = i + 1; j < n; ++j) {
        double x = sample_laplace(lam * w(i, j), stream);
        t(i, j) = x;
        t(j, i) = x;
    }
}

}  // namespace

Mat laplace_graph_fill_serial(const Mat& w, double lam, RngStream& rng) {
    const int n = static_cast<int>(w.rows());
    Mat t = Mat::Zero(n, n);
    std::vector<RngStream> streams = fork_rows(rng, n);
    for (int i = 0; i < n; ++i) {
        fill_row(t, w, lam, streams[i], i);
    }
    return t;
}

Mat laplace_graph_fill_parallel(const Mat& w, double lam, RngStream& rng) {
    const int n = static_cast<int>(w.rows());
    Mat t = Mat::Zero(n, n);
    std::vector<RngStream> streams = fork_rows(rng, n);
    // rows write disjoint entries: row i touches (i,j) and (j,i) for j > i
    // only via its own stream, and no other row writes those cells
#ifdef CPG_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < n; ++i) {
        fill_row(t, w, lam, streams[i], i);
    }
    return t;
}

Mat laplace_graph_fill(const Mat& w, double lam, RngStream& rng) {
    return g_parallel ? laplace_graph_fill_parallel(w, lam, rng) : laplace_graph_fill_serial(w, lam, rng);
}

namespace {

inline double kkt_entry(const Mat& s, const Mat& lam, const Mat& theta, const Mat& sigma, int i, int j) {
    double g = sigma(i, j) - s(i, j);
    if (theta(i, j) != 0.0) {
        return std::abs(g - lam(i, j) * (theta(i, j) > 0.0 ? 1.0 : -1.0));
    }
    return std::max(std::abs(g) - lam(i, j), 0.0);
}

}  // namespace

double kkt_residual_serial(const Mat& s, const Mat& lam, const Mat& theta, const Mat& sigma) {
    const int n = static_cast<int>(s.rows());
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            worst = std::max(worst, kkt_entry(s, lam, theta, sigma, i, j));
        }
    }
    return worst;
}

double kkt_residual_parallel(const Mat& s, const Mat& lam, const Mat& theta, const Mat& sigma) {
    const int n = static_cast<int>(s.rows());
    double worst = 0.0;
#ifdef CPG_HAVE_OPENMP
#pragma omp parallel for schedule(static) reduction(max : worst)
#endif
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            worst = std::max(worst, kkt_entry(s, lam, theta, sigma, i, j));
        }
    }
    return worst;
}

double kkt_residual(const Mat& s, const Mat& lam, const Mat& theta, const Mat& sigma) {
    return g_parallel ? kkt_residual_parallel(s, lam, theta, sigma)
                      : kkt_residual_serial(s, lam, theta, sigma);
}

}  // namespace cpg::kern
