#pragma once

#include <cstdint>
#include <string>

#include "cpg/io.hpp"

namespace cpg {

// Synthetic benchmark over core fractions 10/50/90% with per-(fraction, seed)
// derived rng streams, so the report is byte-identical across runs and thread
// counts. "t2" scores every method's core-score estimate against the truth;
// "t5" scores the recovered graph of the attributes-only solver against the
// sampled ground-truth precision, next to a uniform graphical-lasso baseline.
struct BenchOptions {
    std::string table = "t2";  // "t2" or "t5"
    int seeds = 20;
    std::uint64_t base_seed = 1;
    int n = 60;
};

Json run_bench(const BenchOptions& opt);

}  // namespace cpg
