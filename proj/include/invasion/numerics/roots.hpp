#pragma once

#include <cstddef>
#include <functional>

namespace invasion::numerics {

struct RootResult {
    double root = 0;
    double lo = 0;  ///< final bracket
    double hi = 0;
    std::size_t iterations = 0;
};

/// Bracketed root of a scalar function with ITP stepping
/// (interpolate, truncate, project).
///
/// Requires f(lo) f(hi) < 0 (an exact zero at an endpoint is returned as is).
/// Terminates once the bracket is no wider than `tol`; the number of function
/// evaluations never exceeds ceil(log2((hi - lo) / tol)) + 1, so it is never
/// slower than bisection by more than one step. `f` may be any function whose
/// sign changes across the root, including a +-1 classifier.
///
/// Throws NoBracketError when the endpoint values share a sign.
RootResult bracket_root_ex(const std::function<double(double)>& f, double lo, double hi, double tol);

inline double bracket_root(const std::function<double(double)>& f, double lo, double hi, double tol)
{
    return bracket_root_ex(f, lo, hi, tol).root;
}

}  // namespace invasion::numerics
