#pragma once

#include "cpg/types.hpp"

namespace cpg {

// cos(u, v); throws ZeroVector if either norm is zero
double cosine_similarity(const Vec& u, const Vec& v);

// all-ones a x a top-left block (diagonal included), zeros elsewhere
Mat ideal_cp(int n, int a);

// Frobenius distance between the ideal pattern (a = floor(n/4)) and |theta|
// reordered by descending scores (ties broken by index) and scaled by its
// largest entry.
double cp_frobenius(const Mat& theta, const Vec& scores);

// cosine over the vectorized off-diagonal |entries| of both matrices
double edge_cosine(const Mat& a, const Mat& b);

}  // namespace cpg
