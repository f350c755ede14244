#pragma once

// Constants of the large-gamma matched expansion of the wave speed.
//
// Outer problem: the critical Fisher-KPP wave U'' + 2 U' + U (1 - U) = 0 with
// tail U ~ A0 (z - z0) e^{-(z - z0)}. Inner problem (U, W scaled by gamma):
//
//   U' = W,  V' = U V / 2,  W' = [U V W / 2 - 2 W - U (1 - V)] / (1 - V),
//
// leaving (0, V_inf, 0) along the fast eigenvector, with rear tail
// U ~ -A_I (z - z_I) e^{-(z - z_I)}. Both prefactors are read off the
// translation-invariant functional l = U / (U + W) + log|U + W|.

#include "invasion/numerics/ode.hpp"
#include "invasion/tw.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace invasion::asym {

struct EllSample {
    double z = 0;
    double ell = 0;
};

struct LimitOptions {
    double eps = 1e-6;
    double z_budget = 80.0;    ///< distance integrated from the seed
    double dz = 0.5;           ///< spacing of l samples
    double plateau_tol = 1e-8; ///< successive samples closer than this count as converged
    int plateau_run = 4;       ///< consecutive converged differences required
    numerics::Tolerances tol{1e-12, 1e-300, {}};
};

struct OuterSample {
    double z = 0;
    double u = 0;
    double w = 0;
};

struct OuterWave {
    std::vector<OuterSample> samples;
    std::vector<EllSample> ell_trace;
    double ell_limit = 0;
    double a0 = 0;
    double z_plateau = 0;  ///< where the plateau criterion was met
};

/// Critical Fisher-KPP orbit from the rear eigenvector (eigenvalue sqrt 2 - 1).
/// Throws SolverError if l has not settled within the z budget.
OuterWave outer_wave(const LimitOptions& opt = {});

/// Same, restarted from an arbitrary state (U, W) on the orbit.
OuterWave outer_wave_from(double u, double w, const LimitOptions& opt = {});

struct InnerSample {
    double z = 0;
    double u = 0;
    double v = 0;
    double w = 0;
};

struct InnerWave {
    double v_inf = 0;
    double lambda = 0;  ///< fast eigenvalue at (0, V_inf, 0)
    std::vector<InnerSample> samples;  ///< increasing z
    std::vector<EllSample> ell_trace;  ///< in integration order (decreasing z)
    double a_inner = 0;
};

/// Integrates the inner problem backward from (0, V_inf, 0) - eps (L, V_inf/2, L^2)/|.|,
/// the seed sign chosen so that U > 0. Throws SolverError if U changes sign
/// or l does not settle.
InnerWave inner_wave(double v_inf, const LimitOptions& opt = {});

/// Residual (J - L I) e of the inner linearisation at (0, V_inf, 0) for the
/// seed direction e = (L, V_inf/2, L^2); vanishes for the exact eigenpair.
std::array<double, 3> inner_seed_residual(double v_inf);

struct AsymptoticConstants {
    double a0 = 0;
    double a_inner = 0;
    double lambda = 0;
    double v_inf = 0;
};

AsymptoticConstants constants(double v_inf, const LimitOptions& opt = {});

/// U_M(z) = A0 delta^{-1/2} e^{-(z - z0)} sin(delta^{1/2} (z - z0)), the
/// leading-order solution of U'' + (2 - delta) U' + U = 0 matching the outer
/// tail. Requires 0 < delta < 1.
std::vector<double> intermediate_profile(double delta, double z0, double a0, std::span<const double> z);

/// z0 + pi delta^{-1/2}, the first zero of the intermediate profile.
double intermediate_first_zero(double delta, double z0);

struct MatchReport {
    double gamma = 0;
    double v_inf = 0;
    double c = 0;
    double delta_num = 0;         ///< 2 - c
    double delta_one = 0;         ///< pi^2 / (log gamma)^2
    double delta_two = 0;         ///< with the log(A_I / A0) correction
    double delta_unexpanded = 0;  ///< pi^2 / log(gamma A0 / A_I)^2
    double delta1 = 0;            ///< delta_num - delta_one
    double err_one = 0;           ///< delta_num - delta_one
    double err_two = 0;           ///< delta_num - delta_two
    double ratio = 0;             ///< delta_num (log gamma)^2 / pi^2
};

/// Compares a computed branch point with the one- and two-term predictions.
MatchReport validate_matching(double gamma, double v_inf, const tw::BranchPoint& branch, double a0, double a_inner);
MatchReport validate_matching(double gamma, double v_inf, const tw::BranchPoint& branch);

}  // namespace invasion::asym
