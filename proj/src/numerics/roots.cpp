#include "invasion/numerics/roots.hpp"

#include "invasion/error.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace invasion::numerics {

RootResult bracket_root_ex(const std::function<double(double)>& f, double lo, double hi, double tol)
{
    if (!(tol > 0.0)) {
        throw DomainError("bracket_root: tolerance must be positive");
    }
    if (lo > hi) {
        std::swap(lo, hi);
    }
    double fa = f(lo);
    double fb = f(hi);
    if (fa == 0.0) {
        return {lo, lo, lo, 0};
    }
    if (fb == 0.0) {
        return {hi, hi, hi, 0};
    }
    if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) {
        std::ostringstream msg;
        msg << "bracket_root: no sign change on [" << lo << ", " << hi << "], f(lo) = " << fa
            << ", f(hi) = " << fb;
        throw NoBracketError(msg.str(), fa, fb);
    }
    // Work with g = s f so that g(a) < 0 < g(b).
    const double s = fa < 0.0 ? 1.0 : -1.0;
    double a = lo;
    double b = hi;
    double ya = s * fa;
    double yb = s * fb;

    const double eps = 0.5 * tol;
    const double width0 = b - a;
    const double k1 = 0.2 / width0;
    const int n_half = width0 > 2.0 * eps ? static_cast<int>(std::ceil(std::log2(width0 / (2.0 * eps)))) : 0;
    const int n_max = n_half + 1;

    std::size_t j = 0;
    while (b - a > 2.0 * eps) {
        const double w = b - a;
        const double x_half = 0.5 * (a + b);
        const double r = eps * std::ldexp(1.0, n_max - static_cast<int>(j)) - 0.5 * w;
        const double delta = k1 * w * w;
        const double x_f = (yb * a - ya * b) / (yb - ya);
        const double sigma = x_half - x_f >= 0.0 ? 1.0 : -1.0;
        const double x_t = delta <= std::abs(x_half - x_f) ? x_f + sigma * delta : x_half;
        double x = std::abs(x_t - x_half) <= r ? x_t : x_half - sigma * r;
        if (!(x > a && x < b)) {
            x = x_half;
        }
        const double y = s * f(x);
        ++j;
        if (std::isnan(y)) {
            throw SolverError("bracket_root: function returned NaN inside the bracket");
        }
        if (y > 0.0) {
            b = x;
            yb = y;
        } else if (y < 0.0) {
            a = x;
            ya = y;
        } else {
            return {x, x, x, j};
        }
    }
    return {0.5 * (a + b), a, b, j};
}

}  // namespace invasion::numerics
