#include "cpg/simplex_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpg/kernels.hpp"

namespace cpg {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

enum class VarStatus { Basic, AtLower, AtUpper };

// Bounded-variable simplex over A x = b, l <= x <= u, maximizing obj^T x.
// Dense tableau (B^-1 A) updated in place. The caller must arrange the last
// m columns of A as an identity whose starting values b are within bounds.
// Bland's rule on both the entering and leaving choice keeps every pivot
// deterministic and cycle-free.
class BoundedSimplex {
  public:
    BoundedSimplex(Mat a, Vec b, Vec lo, Vec hi)
        : lo_(std::move(lo)), hi_(std::move(hi)), tab_(std::move(a)), xb_(std::move(b)) {
        m_ = static_cast<int>(tab_.rows());
        nv_ = static_cast<int>(tab_.cols());
        basis_.resize(m_);
        status_.assign(nv_, VarStatus::AtLower);
        x_ = lo_;
        for (int r = 0; r < m_; ++r) {
            int v = nv_ - m_ + r;
            basis_[r] = v;
            status_[v] = VarStatus::Basic;
        }
        for (int jv = 0; jv < nv_ - m_; ++jv) {
            if (x_[jv] != 0.0) xb_ -= x_[jv] * tab_.col(jv);
        }
    }

    void set_upper(int v, double u) { hi_[v] = u; }

    // returns false only if the pivot guard trips (internal fault)
    bool maximize(const Vec& obj) {
        for (long iter = 0; iter < 1000000; ++iter) {
            int enter = -1;
            int dir = 0;
            {
                Vec cb(m_);
                for (int r = 0; r < m_; ++r) cb[r] = obj[basis_[r]];
                Vec red = obj - tab_.transpose() * cb;
                for (int v = 0; v < nv_; ++v) {
                    if (status_[v] == VarStatus::AtLower && red[v] > kReducedCostTol) {
                        enter = v;
                        dir = +1;
                        break;
                    }
                    if (status_[v] == VarStatus::AtUpper && red[v] < -kReducedCostTol) {
                        enter = v;
                        dir = -1;
                        break;
                    }
                }
            }
            if (enter < 0) return true;  // optimal

            Vec d = tab_.col(enter);
            double t = hi_[enter] - lo_[enter];  // bound-flip distance, may be inf
            int leave_row = -1;
            for (int r = 0; r < m_; ++r) {
                double delta = dir * d[r];
                double cand;
                if (delta > kPivotTol) {
                    cand = (xb_[r] - lo_[basis_[r]]) / delta;
                } else if (delta < -kPivotTol) {
                    cand = (hi_[basis_[r]] - xb_[r]) / (-delta);
                } else {
                    continue;
                }
                if (cand < 0.0) cand = 0.0;  // degenerate basic slightly past its bound
                if (cand < t - kPivotTol) {
                    t = cand;
                    leave_row = r;
                } else if (leave_row >= 0 && cand <= t + kPivotTol && basis_[r] < basis_[leave_row]) {
                    leave_row = r;
                }
            }
            if (!std::isfinite(t)) return false;  // unbounded: impossible with boxed scores

            if (leave_row < 0) {
                xb_ -= (dir * t) * d;
                status_[enter] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
                x_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
                continue;
            }

            double enter_val = (dir > 0 ? lo_[enter] : hi_[enter]) + dir * t;
            xb_ -= (dir * t) * d;
            int leave_var = basis_[leave_row];
            double delta_lv = dir * d[leave_row];
            status_[leave_var] = delta_lv > 0.0 ? VarStatus::AtLower : VarStatus::AtUpper;
            x_[leave_var] = delta_lv > 0.0 ? lo_[leave_var] : hi_[leave_var];

            double piv = tab_(leave_row, enter);
            tab_.row(leave_row) /= piv;
            for (int r = 0; r < m_; ++r) {
                if (r == leave_row) continue;
                double f = tab_(r, enter);
                if (f != 0.0) tab_.row(r) -= f * tab_.row(leave_row);
            }
            basis_[leave_row] = enter;
            status_[enter] = VarStatus::Basic;
            xb_[leave_row] = enter_val;
        }
        return false;
    }

    Vec values(int count) const {
        Vec out(count);
        for (int v = 0; v < count; ++v) out[v] = x_[v];
        for (int r = 0; r < m_; ++r) {
            if (basis_[r] < count) out[basis_[r]] = xb_[r];
        }
        return out;
    }

    double value_of(int v) const { return values(nv_)[v]; }

  private:
    Vec lo_, hi_;
    Mat tab_;
    Vec xb_, x_;
    std::vector<int> basis_;
    std::vector<VarStatus> status_;
    int m_ = 0, nv_ = 0;
};

}  // namespace

Vec lp_max_over_core_set(const Vec& gains, double mass, const std::vector<LpCapRow>& caps) {
    const int n = static_cast<int>(gains.size());
    if (n < 1) throw ValidationError("lp_max_over_core_set: empty gains");
    if (!(mass > 0.0) || mass > static_cast<double>(n)) {
        throw NumericalError("Infeasible: mass outside (0, n]");
    }
    for (const auto& row : caps) {
        if (row.i < 0 || row.j < 0 || row.i >= n || row.j >= n || row.i == row.j) {
            throw ValidationError("lp_max_over_core_set: bad cap row indices");
        }
        if (row.cap < 0.0) {
            throw NumericalError("Infeasible: negative pair cap while c is nonnegative");
        }
    }

    const int nr = static_cast<int>(caps.size());
    const int rows = nr + 1;
    const int nv = n + 1 + nr;  // c, then [artificial, slacks] forming the start basis
    Mat a = Mat::Zero(rows, nv);
    Vec b(rows), lo = Vec::Zero(nv), hi(nv);

    a.row(0).head(n).setOnes();
    a(0, n) = 1.0;  // artificial for the mass row
    b[0] = mass;
    for (int r = 0; r < nr; ++r) {
        a(r + 1, caps[r].i) = 1.0;
        a(r + 1, caps[r].j) = 1.0;
        a(r + 1, n + 1 + r) = 1.0;
        b[r + 1] = caps[r].cap;
    }
    hi.head(n).setOnes();
    hi.tail(nv - n).setConstant(std::numeric_limits<double>::infinity());

    BoundedSimplex sx(std::move(a), std::move(b), std::move(lo), std::move(hi));
    const int art = n;

    Vec phase1 = Vec::Zero(nv);
    phase1[art] = -1.0;
    if (!sx.maximize(phase1)) {
        throw NumericalError("NoConvergence: simplex pivot guard exceeded (phase 1)");
    }
    if (sx.value_of(art) > kFeasTol) {
        throw NumericalError("Infeasible: mass cannot be placed under the pair caps");
    }
    sx.set_upper(art, 0.0);

    Vec phase2 = Vec::Zero(nv);
    phase2.head(n) = gains;
    if (!sx.maximize(phase2)) {
        throw NumericalError("NoConvergence: simplex pivot guard exceeded (phase 2)");
    }
    Vec c = sx.values(n);
    for (int i = 0; i < n; ++i) c[i] = std::clamp(c[i], 0.0, 1.0);
    return c;
}

Vec solve_c_lp(const Mat& theta, const Mat* d, double e, double eps, double mass,
               double margin, bool penalize_diag) {
    const int n = static_cast<int>(theta.rows());
    if (theta.cols() != n) throw ValidationError("ShapeMismatch: theta must be square");
    if (d != nullptr && (d->rows() != n || d->cols() != n)) {
        throw ValidationError("ShapeMismatch: distances vs theta");
    }
    if (d == nullptr && e != 0.0) {
        throw ValidationError("solve_c_lp: e must be 0 when distances are absent");
    }

    Vec gains = 2.0 * kern::abs_row_sums(theta);
    if (!penalize_diag) {
        for (int i = 0; i < n; ++i) gains[i] -= 2.0 * std::abs(theta(i, i));
    }

    auto cap_of = [&](int i, int j) {
        double cap = 1.0 - margin;
        if (d != nullptr && e != 0.0) cap += e * std::log((*d)(i, j) + eps);
        return cap;
    };

    std::vector<LpCapRow> active;
    std::vector<char> in_active(static_cast<size_t>(n) * n, 0);
    for (int round = 0; round < 4 * n + 8; ++round) {
        Vec c = lp_max_over_core_set(gains, mass, active);
        struct Viol {
            double amount;
            int i, j;
        };
        std::vector<Viol> viols;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double cap = cap_of(i, j);
                if (cap >= 2.0) continue;  // the box already enforces it
                double over = c[i] + c[j] - cap;
                if (over > kFeasTol && !in_active[static_cast<size_t>(i) * n + j]) {
                    viols.push_back({over, i, j});
                }
            }
        }
        if (viols.empty()) return c;
        std::sort(viols.begin(), viols.end(), [](const Viol& a, const Viol& b) {
            if (a.amount != b.amount) return a.amount > b.amount;
            return a.i != b.i ? a.i < b.i : a.j < b.j;
        });
        size_t take = std::min(viols.size(), static_cast<size_t>(2 * n));
        for (size_t t = 0; t < take; ++t) {
            active.push_back({viols[t].i, viols[t].j, cap_of(viols[t].i, viols[t].j)});
            in_active[static_cast<size_t>(viols[t].i) * n + viols[t].j] = 1;
        }
    }
    throw NumericalError("NoConvergence: lazy cap generation did not certify");
}

}  // namespace cpg
