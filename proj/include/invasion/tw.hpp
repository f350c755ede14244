#pragma once

// Travelling-wave orbits of the invasion model in z = x - c t:
//
//   U' = W,  V' = (gamma/c) U V,  W' = [(gamma/c) U V W - c W - U (1 - U - V)] / (1 - V),
//
// running from the rear equilibrium (1, 0, 0) to a point (0, V_end, 0) of the
// V axis. Integrations carry s = log V instead of V, so V may pass through
// values far below the double-precision range without losing accuracy.

#include "invasion/model.hpp"
#include "invasion/numerics/ode.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace invasion::tw {

using model::Vec3;

enum class TailKind { spiral, neg_approach, tangent, pos_approach };
std::string_view tail_name(TailKind kind);

/// Why an integration stopped.
enum class Termination {
    axis_arrival,  ///< rear shot reached the V axis
    negative_u,    ///< U went below -u_guard (rear) or 0 (front)
    singular,      ///< V came within 1e-6 of the singular plane V = 1
    z_budget,      ///< ran out of z without a terminal event
    connected,     ///< front shot reached the rear equilibrium
    overshoot,     ///< front shot: U exceeded 1 + u_guard
    undershoot,    ///< front shot: U peaked below 1
};
std::string_view termination_name(Termination t);

struct TwSample {
    double z = 0;
    double u = 0;
    double v = 0;
    double w = 0;
};

struct TwTrajectory {
    double gamma = 0;
    double c = 0;
    std::vector<TwSample> samples;  ///< accepted steps, increasing z
    double v_end = 0;               ///< V on the axis (rear shots) or V_inf (front shots)
    TailKind tail = TailKind::tangent;
    Termination termination = Termination::z_budget;
    /// Smallest |U - 1| + |W| seen; for front shots measures the connection.
    double rear_residual = 0;
    /// Continuous extension over (U, s, W) with s = log V, or (U, V, W) when
    /// `log_v` is false (V identically zero).
    numerics::DenseSolution dense;
    bool log_v = true;

    /// (U, V, W) at z inside the integrated span.
    Vec3 at(double z) const;
    double z_min() const;
    double z_max() const;
};

struct ShootOptions {
    double eps = 1e-6;
    double u_guard = 1e-3;
    /// 0 selects the default: 50 + 3 log(max(gamma, 1)) for front shots, 400
    /// for rear shots, whose tails near V = 1 decay slowly.
    double z_max = 0;
    numerics::Tolerances tol{1e-10, 1e-12, {}};
};

/// (W, (gamma/c) U V, [(gamma/c) U V W - c W - U (1 - U - V)] / (1 - V)).
/// Throws DomainError at V = 1.
Vec3 tw_rhs(const Vec3& point, double gamma, double c);

/// Forward shot from the rear equilibrium along eps (-E2 + mix E1), with both
/// eigenvectors normalised and -E2 pointing towards decreasing U.
///
/// Because V grows like exp(gamma z / c) while the U, W departure grows like
/// exp(lambda2 z), useful values of mix are of order eps^(lambda1/lambda2 - 1);
/// shoot_from_rear_mu parametrises the family by mu = log(mix) minus that
/// scale. mix = 0 gives the Fisher-KPP orbit with V identically zero.
TwTrajectory shoot_from_rear(double gamma, double c, double mix, const ShootOptions& opt = {});
TwTrajectory shoot_from_rear_mu(double gamma, double c, double mu, const ShootOptions& opt = {});
double mix_from_mu(double gamma, double c, double mu, double eps);

/// Member of the rear family whose tail lands on the axis at V = v_end,
/// located by bracketing mu. Throws NoBracketError when no member ends there.
TwTrajectory shoot_to_axis(double gamma, double c, double v_end, const ShootOptions& opt = {});

/// Backward shot from (0, V_inf, 0) along the fast eigenvector E3' (U > 0).
/// Requires real front eigenvalues, i.e. V_inf >= V_c(c). With
/// stop_on_connect the shot ends once |U - 1| + |W| < connect_tol.
struct FrontShootOptions : ShootOptions {
    bool stop_on_connect = true;
    double connect_tol = 1e-6;
};
TwTrajectory shoot_from_front(double gamma, double c, double v_inf, const FrontShootOptions& opt = {});

struct TailClassification {
    TailKind kind = TailKind::tangent;
    int r2_sign = 0;
    double r2 = 0;  ///< coefficient of the slow mode E2' at the tail (scaled)
    double r3 = 0;  ///< coefficient of the fast mode E3'
    std::complex<double> approach_eigenvalue;
};

/// Spiral if V_end < V_c, otherwise the sign of the slow-mode coefficient at
/// the tail: r2 > 0 means the orbit reaches the axis from U < 0.
TailClassification classify_tail(const TwTrajectory& traj);

enum class VsStatus { found, absent, failed };

struct VsResult {
    VsStatus status = VsStatus::absent;
    double v_s = 0;
    std::string diagnostic;
};

/// V_s(gamma, c) by bisection over V_inf with front shots; absent when the
/// connection side does not change on (V_c, v_hi].
VsResult find_vs(double gamma, double c, double v_hi = 0.99);

/// The same threshold from the rear family: bisection in mu between the
/// neg_approach and pos_approach tails.
VsResult find_vs_rear(double gamma, double c, double mu_lo = -10.0, double mu_hi = 10.0);

enum class Regime { vc_limited, vs_limited };
std::string_view regime_name(Regime r);

struct BranchPoint {
    double gamma = 0;
    double c = 0;
    double v_inf = 0;
    Regime regime = Regime::vc_limited;
};

/// Speed of the fastest-decaying wave at (gamma, V_inf): the c in
/// (2(1 - V_inf), 2) at which the front shot connects to the rear, or
/// 2(1 - V_inf) when no such c exists.
BranchPoint branch_speed(double gamma, double v_inf, double tol = 1e-11);

/// Speed selected by compactly supported (a absent) or exp(-a x) initial data.
double selected_speed(double gamma, double v0, std::optional<double> a);

struct CrossCheck {
    double sup_distance = 0;  ///< max over U in [u_lo, u_hi] of the (U, V, W) max-norm gap
    double shift = 0;         ///< z translation applied to the front shot
    double v_end_rear = 0;
};

/// Rear orbit ending at v_inf against the front shot from v_inf, aligned where
/// U = 1/2. Each shot is ill-conditioned near its far end (the other saddle),
/// so only the front region u_lo <= U <= u_hi is compared.
CrossCheck cross_validate(double gamma, double c, double v_inf, double u_lo = 0.05, double u_hi = 0.95);

/// Largest distance in the (U, V) plane from a point of `uv` to the orbit.
double phase_sup_distance(std::span<const std::pair<double, double>> uv, const TwTrajectory& traj);

/// z(V = theta V_end) - z(U = theta), the width of the region where both
/// species are small. Throws SolverError when V is identically zero or either
/// crossing is missing.
double gap_width(const TwTrajectory& traj, double theta = 0.05);

}  // namespace invasion::tw
