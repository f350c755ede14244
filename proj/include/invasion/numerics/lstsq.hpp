#pragma once

#include <span>
#include <vector>

namespace invasion::numerics {

struct FitResult {
    std::vector<double> coefficients;
    double residual_norm = 0;                ///< Euclidean norm of y - A x
    std::vector<double> covariance_diagonal; ///< sigma^2 diag((A^T A)^-1), sigma^2 = rss / (m - n)
};

/// Linear least squares by Householder QR.
///
/// `rows` holds the design matrix row by row; every row must have the same
/// length n and there must be at least n rows. A column whose R diagonal falls
/// below 1e-12 of the largest one is reported as RankDeficientError naming it.
FitResult linear_least_squares(std::span<const std::vector<double>> rows, std::span<const double> observations);

}  // namespace invasion::numerics
