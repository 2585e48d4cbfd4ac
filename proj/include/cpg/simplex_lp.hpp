#pragma once

#include <vector>

#include "cpg/types.hpp"

namespace cpg {

struct LpCapRow {
    int i;
    int j;
    double cap;  // enforce c_i + c_j <= cap
};

// Exact maximizer of gains^T c subject to sum(c) = mass, 0 <= c <= 1 and the
// given pair caps. Dense bounded-variable two-phase simplex with Bland's
// lowest-index pivoting (deterministic, anti-cycling; ties among optima
// resolve toward lower node indices). Throws NumericalError("Infeasible ...")
// when the constraints admit no point.
Vec lp_max_over_core_set(const Vec& gains, double mass, const std::vector<LpCapRow>& caps);

// The c-step of the attributes-only solver: gains are twice the absolute row
// sums of theta (diagonal included only when penalize_diag), caps are
// c_i + c_j <= 1 + e*log(d_ij + eps) - margin for every pair. Rows with
// cap >= 2 are redundant against the box and never instantiated; the rest are
// generated lazily: solve, scan all pairs for violations, add the worst
// offenders, repeat until a full scan certifies the solution.
Vec solve_c_lp(const Mat& theta, const Mat* d, double e, double eps, double mass,
               double margin, bool penalize_diag = true);

}  // namespace cpg
