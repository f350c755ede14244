#include "invasion/numerics/banded.hpp"

#include "invasion/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace invasion::numerics {

BandMatrix::BandMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(lower), ku_(upper), ld_(2 * lower + upper + 1), ab_(n * (2 * lower + upper + 1), 0.0)
{
}

void BandMatrix::set_zero()
{
    std::fill(ab_.begin(), ab_.end(), 0.0);
}

void BandMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i > kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) {
            s += (*this)(i, j) * x[j];
        }
        y[i] = s;
    }
}

void BandLU::factor(const BandMatrix& a)
{
    n_ = a.n_;
    kl_ = a.kl_;
    ku_ = a.ku_;
    ld_ = a.ld_;
    ab_ = a.ab_;
    piv_.assign(n_, 0);
    const std::size_t kv = kl_ + ku_;
    // Fill-in rows must start out empty.
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t r = 0; r < kl_; ++r) {
            ab_[j * ld_ + r] = 0.0;
        }
    }

    std::size_t ju = 0;
    for (std::size_t j = 0; j < n_; ++j) {
        double* col = ab_.data() + j * ld_;
        const std::size_t km = std::min(kl_, n_ - 1 - j);
        std::size_t jp = 0;
        double best = std::abs(col[kv]);
        for (std::size_t p = 1; p <= km; ++p) {
            if (std::abs(col[kv + p]) > best) {
                best = std::abs(col[kv + p]);
                jp = p;
            }
        }
        piv_[j] = j + jp;
        if (col[kv + jp] == 0.0) {
            n_ = 0;
            throw SolverError("BandLU: singular matrix (zero pivot in column " + std::to_string(j) + ")");
        }
        ju = std::max(ju, std::min(j + ku_ + jp, n_ - 1));
        if (jp != 0) {
            for (std::size_t c = j; c <= ju; ++c) {
                std::swap(ab_[c * ld_ + kv + j - c], ab_[c * ld_ + kv + j + jp - c]);
            }
        }
        if (km > 0) {
            const double r = 1.0 / col[kv];
            for (std::size_t p = 1; p <= km; ++p) {
                col[kv + p] *= r;
            }
            for (std::size_t c = j + 1; c <= ju; ++c) {
                double* cc = ab_.data() + c * ld_;
                const double t = cc[kv + j - c];
                if (t != 0.0) {
                    for (std::size_t p = 1; p <= km; ++p) {
                        cc[kv + j + p - c] -= col[kv + p] * t;
                    }
                }
            }
        }
    }
}

void BandLU::solve(std::span<double> b) const
{
    if (n_ == 0) {
        throw SolverError("BandLU: solve before a successful factorisation");
    }
    const std::size_t kv = kl_ + ku_;
    for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t km = std::min(kl_, n_ - 1 - j);
        const std::size_t l = piv_[j];
        if (l != j) {
            std::swap(b[l], b[j]);
        }
        const double bj = b[j];
        const double* col = ab_.data() + j * ld_;
        for (std::size_t p = 1; p <= km; ++p) {
            b[j + p] -= col[kv + p] * bj;
        }
    }
    for (std::size_t j = n_; j-- > 0;) {
        const double* col = ab_.data() + j * ld_;
        b[j] /= col[kv];
        const double t = b[j];
        const std::size_t i0 = j > kv ? j - kv : 0;
        for (std::size_t i = i0; i < j; ++i) {
            b[i] -= col[kv + i - j] * t;
        }
    }
}

}  // namespace invasion::numerics
