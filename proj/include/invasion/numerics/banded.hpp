#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace invasion::numerics {

/// Square band matrix with `lower` sub- and `upper` super-diagonals.
///
/// Storage follows LAPACK's factorisation layout: `lower` extra rows are kept
/// above the band for the fill-in produced by partial pivoting.
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(std::size_t n, std::size_t lower, std::size_t upper);

    std::size_t size() const { return n_; }
    std::size_t lower() const { return kl_; }
    std::size_t upper() const { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const { return j <= i + ku_ && i <= j + kl_; }

    /// A(i, j); (i, j) must lie inside the band.
    double& operator()(std::size_t i, std::size_t j) { return ab_[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const { return ab_[index(i, j)]; }

    void set_zero();
    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    friend class BandLU;
    std::size_t index(std::size_t i, std::size_t j) const { return j * ld_ + (kl_ + ku_ + i - j); }

    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::size_t ld_ = 0;
    std::vector<double> ab_;
};

/// LU factorisation with partial pivoting of a BandMatrix (dgbtf2 layout).
class BandLU {
public:
    BandLU() = default;

    /// Factorises a copy of `a`. Throws SolverError on an exactly singular pivot.
    void factor(const BandMatrix& a);
    /// Solves A x = b in place.
    void solve(std::span<double> b) const;
    bool ready() const { return n_ > 0; }

private:
    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::size_t ld_ = 0;
    std::vector<double> ab_;
    std::vector<std::size_t> piv_;
};

}  // namespace invasion::numerics
