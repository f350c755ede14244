#include "invasion/model.hpp"

#include "invasion/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace invasion::model {

namespace {

void require_v0(double v0, const char* who)
{
    if (!(v0 >= 0.0 && v0 < 1.0)) {
        throw DomainError(std::string(who) + ": resident density must lie in [0, 1), got " +
                          std::to_string(v0));
    }
}

}  // namespace

void ModelParams::validate() const
{
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("gamma must be positive and finite, got " + std::to_string(gamma));
    }
    require_v0(v_inf, "ModelParams");
}

double dispersion_speed(double a, double v0)
{
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("dispersion_speed: decay rate must be positive, got " + std::to_string(a));
    }
    require_v0(v0, "dispersion_speed");
    if (a >= 1.0) {
        return 2.0 * (1.0 - v0);
    }
    return (a + 1.0 / a) * (1.0 - v0);
}

double a_star(double v0)
{
    require_v0(v0, "a_star");
    const double k = 1.0 / (1.0 - v0);
    // k - sqrt(k^2 - 1) loses digits for k near 1; use the conjugate form.
    return 1.0 / (k + std::sqrt(k * k - 1.0));
}

RearEigenData eig_rear(double c, double gamma)
{
    if (!(c > 0.0)) {
        throw DomainError("eig_rear: wave speed must be positive, got " + std::to_string(c));
    }
    if (!(gamma > 0.0)) {
        throw DomainError("eig_rear: gamma must be positive, got " + std::to_string(gamma));
    }
    RearEigenData out;
    const double root = std::sqrt(c * c + 4.0);
    out.lambda1 = gamma / c;
    out.lambda2 = 0.5 * (-c + root);
    out.lambda3 = 0.5 * (-c - root);
    // dW'/dV = 1 at the rear, so the V-mode carries a small (U, W) part that
    // vanishes like (c/gamma)^2.
    const double l1 = out.lambda1;
    const double denom = l1 * l1 + c * l1 - 1.0;
    if (std::abs(denom) < 1e-300) {
        // lambda1 coincides with lambda2; the V-mode has no eigenvector of this form.
        throw DomainError("eig_rear: resonant rear eigenvalues (gamma/c equals lambda2)");
    }
    const double x = 1.0 / denom;
    out.e1 = {x, 1.0, l1 * x};
    out.e2 = {1.0, 0.0, out.lambda2};
    out.e3 = {1.0, 0.0, out.lambda3};
    return out;
}

FrontEigenData eig_front(double c, double v_inf, double gamma)
{
    if (!(c > 0.0)) {
        throw DomainError("eig_front: wave speed must be positive, got " + std::to_string(c));
    }
    if (!(v_inf >= 0.0 && v_inf < 1.0)) {
        throw DomainError("eig_front: V_inf must lie in [0, 1), got " + std::to_string(v_inf));
    }
    FrontEigenData out;
    out.cee = c / (2.0 * (1.0 - v_inf));
    out.lambda1p = 0.0;
    const double disc = out.cee * out.cee - 1.0;
    const std::complex<double> s = std::sqrt(std::complex<double>(disc, 0.0));
    out.complex_pair = disc < 0.0;
    if (disc >= 0.0) {
        // Real roots; form the small one through the product (= 1) to keep digits.
        const double big = -out.cee - s.real();
        out.lambda3p = big;
        out.lambda2p = 1.0 / big;
    } else {
        out.lambda2p = -out.cee + s;
        out.lambda3p = -out.cee - s;
    }
    const double vcomp = gamma * v_inf / c;
    out.e2p = {out.lambda2p, vcomp, out.lambda2p * out.lambda2p};
    out.e3p = {out.lambda3p, vcomp, out.lambda3p * out.lambda3p};
    return out;
}

CriticalV v_critical(double c)
{
    if (!(c > 0.0)) {
        throw DomainError("v_critical: wave speed must be positive, got " + std::to_string(c));
    }
    if (c > 2.0) {
        return {0.0, true};
    }
    return {1.0 - 0.5 * c, false};
}

double lambda_inner(double v_inf)
{
    if (!(v_inf > 0.0 && v_inf < 1.0)) {
        throw DomainError("lambda_inner: V_inf must lie in (0, 1), got " + std::to_string(v_inf));
    }
    const double q = 1.0 - v_inf;
    return -(1.0 / q) * (1.0 + std::sqrt(1.0 - q * q));
}

DeltaPrediction predict_delta(double gamma, double a0, double a_inner)
{
    if (!(gamma > 1.0)) {
        throw DomainError("predict_delta: gamma must exceed 1, got " + std::to_string(gamma));
    }
    if (!(a0 > 0.0) || !(a_inner > 0.0)) {
        throw DomainError("predict_delta: prefactors must be positive");
    }
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double lg = std::log(gamma);
    DeltaPrediction out;
    out.one_term = pi2 / (lg * lg);
    out.two_term = out.one_term + 2.0 * pi2 * std::log(a_inner / a0) / (lg * lg * lg);
    const double shifted = std::log(gamma * a0 / a_inner);
    out.unexpanded = pi2 / (shifted * shifted);
    return out;
}

std::array<Vec3, 3> tw_jacobian(const Vec3& p, double gamma, double c)
{
    const auto [u, v, w] = p;
    const double g = gamma / c;
    const double q = 1.0 - v;
    const double n = g * u * v * w - c * w - u * (1.0 - u - v);
    std::array<Vec3, 3> j{};
    j[0] = {0.0, 0.0, 1.0};
    j[1] = {g * v, g * u, 0.0};
    j[2] = {(g * v * w - 1.0 + 2.0 * u + v) / q, (g * u * w + u) / q + n / (q * q), (g * u * v - c) / q};
    return j;
}

}  // namespace invasion::model
