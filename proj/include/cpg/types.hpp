#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace cpg {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Error taxonomy maps onto process exit codes: bad input data -> 3,
// numerical failure (non-PD, infeasible, diverged) -> 4, bad usage -> 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cpg
