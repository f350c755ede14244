#pragma once

// Closed-form quantities of the two-species invasion model
//
//   u_t = [(1 - v) u_x]_x + u (1 - u - v),   v_t = -gamma u v,
//
// and of its travelling-wave system in z = x - c t:
//
//   U' = W,  V' = (gamma/c) U V,  W' = [(gamma/c) U V W - c W - U (1 - U - V)] / (1 - V).

#include <array>
#include <complex>

namespace invasion::model {

using Vec3 = std::array<double, 3>;
using CVec3 = std::array<std::complex<double>, 3>;

struct ModelParams {
    double gamma = 1.0;  ///< resident death rate, > 0
    double v_inf = 0.0;  ///< far-field / initial resident density, in [0, 1)

    /// Throws DomainError unless gamma > 0 and 0 <= v_inf < 1.
    void validate() const;
};

/// Linearisation at the rear equilibrium (U, V, W) = (1, 0, 0).
struct RearEigenData {
    double lambda1 = 0;  ///< gamma / c, along the V axis
    double lambda2 = 0;  ///< unstable root of l^2 + c l - 1
    double lambda3 = 0;  ///< stable root of l^2 + c l - 1
    Vec3 e1{};
    Vec3 e2{};
    Vec3 e3{};
};

/// Linearisation at an axis equilibrium (0, V_inf, 0).
///
/// The nonzero eigenvalues solve l^2 + 2 C l + 1 = 0 with C = c / (2 (1 - V_inf)).
/// Below C = 1 they are a complex pair and the front spirals into the axis.
struct FrontEigenData {
    double cee = 0;
    double lambda1p = 0;
    std::complex<double> lambda2p;  ///< -C + sqrt(C^2 - 1), the slow mode
    std::complex<double> lambda3p;  ///< -C - sqrt(C^2 - 1), the fast mode
    CVec3 e2p{};
    CVec3 e3p{};
    bool complex_pair = false;

    double discriminant() const { return cee * cee - 1.0; }
};

struct DeltaPrediction {
    double one_term = 0;    ///< pi^2 / (log gamma)^2
    double two_term = 0;    ///< one_term + 2 pi^2 log(A_I/A0) / (log gamma)^3
    double unexpanded = 0;  ///< pi^2 / log(gamma A0 / A_I)^2
};

/// Linear spreading speed for u0 ~ exp(-a x) ahead of a resident density v0.
double dispersion_speed(double a, double v0);

/// Smallest decay rate whose dispersion speed equals 2; below it the
/// exponential initial data outrun the Fisher-KPP speed for every gamma.
double a_star(double v0);

RearEigenData eig_rear(double c, double gamma);

FrontEigenData eig_front(double c, double v_inf, double gamma);

struct CriticalV {
    double value = 0;
    bool clamped = false;  ///< c > 2: no spiral regime, value forced to 0
};

/// V_c = 1 - c/2, where the front eigenvalues become real.
CriticalV v_critical(double c);

/// Leading-order (c -> 2) fast front eigenvalue of the inner problem.
double lambda_inner(double v_inf);

DeltaPrediction predict_delta(double gamma, double a0, double a_inner);

/// Jacobian of the travelling-wave vector field at (U, V, W).
std::array<Vec3, 3> tw_jacobian(const Vec3& point, double gamma, double c);

}  // namespace invasion::model
