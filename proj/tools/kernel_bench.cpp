// Times the serial kernel references against their OpenMP variants and checks
// they agree bitwise. Usage: kernel_bench [n] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "cpg/kernels.hpp"
#include "cpg/rng.hpp"

using cpg::Mat;
using cpg::Vec;

namespace {

double time_ms(int reps, const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-18s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   bitwise %s\n",
                name.c_str(), serial_ms, parallel_ms,
                parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0, identical ? "yes" : "NO");
}

bool same_bits(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (a(i, j) != b(i, j)) return false;
        }
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 1200;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
    if (n < 2 || reps < 1) {
        std::fprintf(stderr, "usage: kernel_bench [n >= 2] [reps >= 1]\n");
        return 2;
    }

    cpg::RngStream rng(42);
    Mat a(n, n);
    Mat d(n, n);
    Vec c(n);
    for (int i = 0; i < n; ++i) c(i) = 0.4 * rng.uniform01();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            a(i, j) = rng.normal();
            d(i, j) = 1.0 + rng.uniform01();
        }
    }
    Mat lam = Mat::Constant(n, n, 0.1);
    Mat theta = 0.5 * (a + a.transpose());
    Mat sigma = theta + Mat::Constant(n, n, 0.05);

    std::printf("kernels on n=%d, %d reps each\n", n, reps);

    {
        const Vec rs = cpg::kern::abs_row_sums_serial(a);
        const Vec rp = cpg::kern::abs_row_sums_parallel(a);
        bool ok = rs.size() == rp.size();
        for (Eigen::Index i = 0; ok && i < rs.size(); ++i) ok = rs(i) == rp(i);
        report("abs_row_sums", time_ms(reps, [&] { cpg::kern::abs_row_sums_serial(a); }),
               time_ms(reps, [&] { cpg::kern::abs_row_sums_parallel(a); }), ok);
    }
    {
        const Mat ws = cpg::kern::weight_matrix_serial(c, &d, 1.0, 1e-5);
        const Mat wp = cpg::kern::weight_matrix_parallel(c, &d, 1.0, 1e-5);
        report("weight_matrix",
               time_ms(reps, [&] { cpg::kern::weight_matrix_serial(c, &d, 1.0, 1e-5); }),
               time_ms(reps, [&] { cpg::kern::weight_matrix_parallel(c, &d, 1.0, 1e-5); }),
               same_bits(ws, wp));
    }
    {
        const Mat w = cpg::kern::weight_matrix_serial(c, &d, 1.0, 1e-5);
        cpg::RngStream r1(7), r2(7);
        const Mat gs = cpg::kern::laplace_graph_fill_serial(w, 1.0, r1);
        const Mat gp = cpg::kern::laplace_graph_fill_parallel(w, 1.0, r2);
        report("laplace_fill",
               time_ms(reps,
                       [&] {
                           cpg::RngStream r(9);
                           cpg::kern::laplace_graph_fill_serial(w, 1.0, r);
                       }),
               time_ms(reps,
                       [&] {
                           cpg::RngStream r(9);
                           cpg::kern::laplace_graph_fill_parallel(w, 1.0, r);
                       }),
               same_bits(gs, gp));
    }
    {
        const double ks = cpg::kern::kkt_residual_serial(sigma, lam, theta, sigma);
        const double kp = cpg::kern::kkt_residual_parallel(sigma, lam, theta, sigma);
        report("kkt_residual",
               time_ms(reps, [&] { cpg::kern::kkt_residual_serial(sigma, lam, theta, sigma); }),
               time_ms(reps, [&] { cpg::kern::kkt_residual_parallel(sigma, lam, theta, sigma); }),
               ks == kp);
    }
    return 0;
}
