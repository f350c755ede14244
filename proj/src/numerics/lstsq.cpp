#include "invasion/numerics/lstsq.hpp"

#include "invasion/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace invasion::numerics {

FitResult linear_least_squares(std::span<const std::vector<double>> rows, std::span<const double> observations)
{
    const std::size_t m = rows.size();
    if (m == 0) {
        throw DomainError("linear_least_squares: empty design matrix");
    }
    const std::size_t n = rows.front().size();
    if (n == 0) {
        throw DomainError("linear_least_squares: design matrix has no columns");
    }
    if (observations.size() != m) {
        throw DomainError("linear_least_squares: observation count does not match row count");
    }
    if (m < n) {
        throw DomainError("linear_least_squares: fewer rows (" + std::to_string(m) + ") than columns (" +
                          std::to_string(n) + ")");
    }

    // Column-major copy; Householder vectors overwrite the lower part.
    std::vector<double> a(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != n) {
            throw DomainError("linear_least_squares: ragged design matrix at row " + std::to_string(i));
        }
        for (std::size_t j = 0; j < n; ++j) {
            a[j * m + i] = rows[i][j];
        }
    }
    std::vector<double> b(observations.begin(), observations.end());
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[j * m + i]; };

    // Column scales for the rank test.
    std::vector<double> col_norm(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            s += at(i, j) * at(i, j);
        }
        col_norm[j] = std::sqrt(s);
    }

    std::vector<double> rdiag(n);
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            norm = std::hypot(norm, at(i, k));
        }
        const double scale = std::max(col_norm[k], 1e-300);
        if (norm <= 1e-12 * scale || col_norm[k] == 0.0) {
            throw RankDeficientError("linear_least_squares: column " + std::to_string(k) +
                                         " is (numerically) a combination of the previous columns",
                                     k);
        }
        const double alpha = at(k, k) > 0.0 ? -norm : norm;
        // v = x - alpha e1, stored in place; H = I - 2 v v^T / (v^T v)
        at(k, k) -= alpha;
        double vtv = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            vtv += at(i, k) * at(i, k);
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) {
                dot += at(i, k) * at(i, j);
            }
            const double f = 2.0 * dot / vtv;
            for (std::size_t i = k; i < m; ++i) {
                at(i, j) -= f * at(i, k);
            }
        }
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            dot += at(i, k) * b[i];
        }
        const double f = 2.0 * dot / vtv;
        for (std::size_t i = k; i < m; ++i) {
            b[i] -= f * at(i, k);
        }
        rdiag[k] = alpha;
    }

    // Back substitution R x = Q^T b (upper part of the reduced system).
    FitResult out;
    out.coefficients.assign(n, 0.0);
    for (std::size_t kk = n; kk-- > 0;) {
        double s = b[kk];
        for (std::size_t j = kk + 1; j < n; ++j) {
            s -= at(kk, j) * out.coefficients[j];
        }
        out.coefficients[kk] = s / rdiag[kk];
    }
    double rss = 0.0;
    for (std::size_t i = n; i < m; ++i) {
        rss += b[i] * b[i];
    }
    out.residual_norm = std::sqrt(rss);

    // diag((R^T R)^-1) = row norms of R^-1.
    std::vector<double> rinv(n * n, 0.0);  // row-major upper triangular
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t ii = j + 1; ii-- > 0;) {
            double s = ii == j ? 1.0 : 0.0;
            for (std::size_t k = ii + 1; k <= j; ++k) {
                const double rik = k == ii ? rdiag[ii] : at(ii, k);
                s -= rik * rinv[k * n + j];
            }
            rinv[ii * n + j] = s / rdiag[ii];
        }
    }
    const double sigma2 = m > n ? rss / static_cast<double>(m - n) : 0.0;
    out.covariance_diagonal.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = i; j < n; ++j) {
            s += rinv[i * n + j] * rinv[i * n + j];
        }
        out.covariance_diagonal[i] = sigma2 * s;
    }
    return out;
}

}  // namespace invasion::numerics
