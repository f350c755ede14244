#include "invasion/tw.hpp"

#include "invasion/error.hpp"
#include "invasion/numerics/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace invasion::tw {

namespace {

constexpr double kSingularGap = 1e-6;

Vec3 normalized(const Vec3& e)
{
    const double n = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    return {e[0] / n, e[1] / n, e[2] / n};
}

double default_front_zmax(double gamma)
{
    return 50.0 + 3.0 * std::log(std::max(gamma, 1.0));
}

// Right-hand side in (U, s = log V, W).
numerics::RhsFn log_rhs(double gamma, double c)
{
    const double g = gamma / c;
    return [g, c](double, std::span<const double> y, std::span<double> f) {
        const double u = y[0];
        const double v = std::exp(y[1]);
        const double w = y[2];
        f[0] = w;
        f[1] = g * u;
        f[2] = (g * u * v * w - c * w - u * (1.0 - u - v)) / (1.0 - v);
    };
}

// Right-hand side in (U, V, W); used only for V identically zero.
numerics::RhsFn linear_rhs(double gamma, double c)
{
    return [gamma, c](double, std::span<const double> y, std::span<double> f) {
        const Vec3 d = tw_rhs({y[0], y[1], y[2]}, gamma, c);
        f[0] = d[0];
        f[1] = d[1];
        f[2] = d[2];
    };
}

void fill_samples(TwTrajectory& traj, const numerics::AdaptiveResult& r)
{
    traj.samples.clear();
    traj.samples.reserve(r.z.size());
    for (std::size_t i = 0; i < r.z.size(); ++i) {
        const auto y = r.state(i);
        traj.samples.push_back({r.z[i], y[0], traj.log_v ? std::exp(y[1]) : y[1], y[2]});
    }
    if (traj.samples.size() > 1 && traj.samples.front().z > traj.samples.back().z) {
        std::reverse(traj.samples.begin(), traj.samples.end());
    }
}

double rear_distance(const TwSample& s)
{
    return std::abs(s.u - 1.0) + std::abs(s.w);
}

TwTrajectory rear_shot_impl(double gamma, double c, std::optional<double> log_mix, const ShootOptions& opt)
{
    if (!(opt.eps > 0.0 && opt.eps < 1e-2)) {
        throw DomainError("shoot_from_rear: eps must be small and positive");
    }
    const model::RearEigenData eig = model::eig_rear(c, gamma);
    const Vec3 e1 = normalized(eig.e1);
    const Vec3 e2 = normalized(eig.e2);

    TwTrajectory traj;
    traj.gamma = gamma;
    traj.c = c;
    traj.log_v = log_mix.has_value();

    numerics::IvpProblem p;
    p.z_start = 0.0;
    p.z_end = opt.z_max > 0.0 ? opt.z_max : 400.0;
    p.tol = opt.tol;
    double mix = 0.0;
    if (log_mix) {
        // mix is usually far below the double range, so only its log is formed.
        mix = *log_mix > -700.0 ? std::exp(*log_mix) : 0.0;
        p.rhs = log_rhs(gamma, c);
        p.y0 = {1.0 - opt.eps * e2[0] + opt.eps * mix * e1[0], std::log(opt.eps) + *log_mix + std::log(e1[1]),
                -opt.eps * e2[2] + opt.eps * mix * e1[2]};
    } else {
        p.rhs = linear_rhs(gamma, c);
        p.y0 = {1.0 - opt.eps * e2[0], 0.0, -opt.eps * e2[2]};
    }

    const double arrive = 1e-7 * std::min(1.0, c / gamma);
    std::vector<numerics::EventSpec> ev;
    ev.push_back({[arrive](double, std::span<const double> y) { return std::abs(y[0]) + std::abs(y[2]) - arrive; },
                  numerics::Crossing::falling, true, "axis"});
    ev.push_back({[g = opt.u_guard](double, std::span<const double> y) { return y[0] + g; },
                  numerics::Crossing::falling, true, "negative_u"});
    if (traj.log_v) {
        const double s_sing = std::log1p(-kSingularGap);
        ev.push_back({[s_sing](double, std::span<const double> y) { return y[1] - s_sing; },
                      numerics::Crossing::rising, true, "singular"});
    }
    numerics::AdaptiveResult r = numerics::integrate_adaptive(p, ev);

    traj.termination = Termination::z_budget;
    if (r.terminal_event) {
        switch (r.events[*r.terminal_event].index) {
        case 0:
            traj.termination = Termination::axis_arrival;
            break;
        case 1:
            traj.termination = Termination::negative_u;
            break;
        default:
            traj.termination = Termination::singular;
            break;
        }
    }
    fill_samples(traj, r);
    traj.v_end = traj.samples.back().v;
    traj.rear_residual = rear_distance(traj.samples.front());
    traj.dense = std::move(r.dense);
    traj.tail = classify_tail(traj).kind;
    return traj;
}

int shot_sign(const TwTrajectory& t)
{
    switch (t.termination) {
    case Termination::overshoot:
        return 1;
    case Termination::undershoot:
    case Termination::negative_u:
        return -1;
    default:
        return t.samples.front().u >= 1.0 ? 1 : -1;
    }
}

// Classification-only front shot: never stops on the connection, so every
// shot falls to one side of the separatrix.
int front_sign(double gamma, double c, double v_inf)
{
    FrontShootOptions o;
    o.stop_on_connect = false;
    return shot_sign(shoot_from_front(gamma, c, v_inf, o));
}

int rear_sign(const TwTrajectory& t)
{
    switch (t.tail) {
    case TailKind::pos_approach:
        return 1;
    case TailKind::neg_approach:
        return -1;
    default:
        return 0;
    }
}

}  // namespace

std::string_view tail_name(TailKind kind)
{
    switch (kind) {
    case TailKind::spiral:
        return "spiral";
    case TailKind::neg_approach:
        return "neg_approach";
    case TailKind::tangent:
        return "tangent";
    case TailKind::pos_approach:
        return "pos_approach";
    }
    return "unknown";
}

std::string_view termination_name(Termination t)
{
    switch (t) {
    case Termination::axis_arrival:
        return "axis_arrival";
    case Termination::negative_u:
        return "negative_u";
    case Termination::singular:
        return "singular";
    case Termination::z_budget:
        return "z_budget";
    case Termination::connected:
        return "connected";
    case Termination::overshoot:
        return "overshoot";
    case Termination::undershoot:
        return "undershoot";
    }
    return "unknown";
}

std::string_view regime_name(Regime r)
{
    return r == Regime::vc_limited ? "Vc_limited" : "Vs_limited";
}

Vec3 TwTrajectory::at(double z) const
{
    const std::vector<double> y = dense(z);
    return {y[0], log_v ? std::exp(y[1]) : y[1], y[2]};
}

double TwTrajectory::z_min() const
{
    return std::min(dense.z_first(), dense.z_last());
}

double TwTrajectory::z_max() const
{
    return std::max(dense.z_first(), dense.z_last());
}

Vec3 tw_rhs(const Vec3& p, double gamma, double c)
{
    const auto [u, v, w] = p;
    if (v == 1.0) {
        throw DomainError("tw_rhs: singular at V = 1");
    }
    const double g = gamma / c;
    return {w, g * u * v, (g * u * v * w - c * w - u * (1.0 - u - v)) / (1.0 - v)};
}

double mix_from_mu(double gamma, double c, double mu, double eps)
{
    const model::RearEigenData eig = model::eig_rear(c, gamma);
    return std::exp(mu + (eig.lambda1 / eig.lambda2 - 1.0) * std::log(eps));
}

TwTrajectory shoot_from_rear(double gamma, double c, double mix, const ShootOptions& opt)
{
    if (!(mix >= 0.0)) {
        throw DomainError("shoot_from_rear: mix must be non-negative");
    }
    if (mix == 0.0) {
        return rear_shot_impl(gamma, c, std::nullopt, opt);
    }
    return rear_shot_impl(gamma, c, std::log(mix), opt);
}

TwTrajectory shoot_from_rear_mu(double gamma, double c, double mu, const ShootOptions& opt)
{
    const model::RearEigenData eig = model::eig_rear(c, gamma);
    return rear_shot_impl(gamma, c, mu + (eig.lambda1 / eig.lambda2 - 1.0) * std::log(opt.eps), opt);
}

TwTrajectory shoot_to_axis(double gamma, double c, double v_end, const ShootOptions& opt)
{
    if (!(v_end > 0.0 && v_end < 1.0)) {
        throw DomainError("shoot_to_axis: v_end must lie in (0, 1)");
    }
    // V_end grows with mu; the useful window drifts upwards with gamma.
    auto miss = [&](double mu) { return shoot_from_rear_mu(gamma, c, mu, opt).v_end - v_end; };
    constexpr double kStep = 0.5;
    double lo = -20.0;
    double f_lo = miss(lo);
    if (f_lo > 0.0) {
        throw NoBracketError("shoot_to_axis: even the smallest mix overshoots v_end", f_lo, f_lo);
    }
    for (double hi = lo + kStep; hi <= 20.0 + 5.0 * std::log(std::max(gamma, 1.0)); hi += kStep) {
        const double f_hi = miss(hi);
        if (f_hi >= 0.0) {
            const double mu = numerics::bracket_root(miss, lo, hi, 1e-12);
            return shoot_from_rear_mu(gamma, c, mu, opt);
        }
        lo = hi;
        f_lo = f_hi;
    }
    throw NoBracketError("shoot_to_axis: no member of the rear family reaches v_end", f_lo, f_lo);
}

TwTrajectory shoot_from_front(double gamma, double c, double v_inf, const FrontShootOptions& opt)
{
    if (!(gamma > 0.0) || !(c > 0.0)) {
        throw DomainError("shoot_from_front: gamma and c must be positive");
    }
    if (!(v_inf > 0.0 && v_inf < 1.0)) {
        throw DomainError("shoot_from_front: V_inf must lie in (0, 1)");
    }
    const model::FrontEigenData eig = model::eig_front(c, v_inf, gamma);
    if (eig.complex_pair) {
        throw DomainError("shoot_from_front: V_inf below V_c, the front eigenvalues are complex");
    }
    const double l3 = eig.lambda3p.real();
    const Vec3 e3 = normalized({l3, gamma * v_inf / c, l3 * l3});
    const double v0 = v_inf - opt.eps * e3[1];
    if (!(v0 > 0.0)) {
        throw DomainError("shoot_from_front: eps too large for this V_inf");
    }

    TwTrajectory traj;
    traj.gamma = gamma;
    traj.c = c;
    traj.log_v = true;
    traj.v_end = v_inf;

    numerics::IvpProblem p;
    p.rhs = log_rhs(gamma, c);
    p.y0 = {-opt.eps * e3[0], std::log(v0), -opt.eps * e3[2]};
    p.z_start = 0.0;
    p.z_end = -(opt.z_max > 0.0 ? opt.z_max : default_front_zmax(gamma));
    p.tol = opt.tol;

    std::vector<numerics::EventSpec> ev;
    ev.push_back({[g = opt.u_guard](double, std::span<const double> y) { return y[0] - (1.0 + g); },
                  numerics::Crossing::rising, true, "overshoot"});
    ev.push_back({[](double, std::span<const double> y) { return y[2]; }, numerics::Crossing::rising, true,
                  "turning"});
    ev.push_back({[](double, std::span<const double> y) { return y[0]; }, numerics::Crossing::falling, true,
                  "negative_u"});
    if (opt.stop_on_connect) {
        ev.push_back({[tol = opt.connect_tol](double, std::span<const double> y) {
                          return std::abs(y[0] - 1.0) + std::abs(y[2]) - tol;
                      },
                      numerics::Crossing::falling, true, "connected"});
    }
    numerics::AdaptiveResult r = numerics::integrate_adaptive(p, ev);

    traj.termination = Termination::z_budget;
    if (r.terminal_event) {
        const auto& e = r.events[*r.terminal_event];
        switch (e.index) {
        case 0:
            traj.termination = Termination::overshoot;
            break;
        case 1:
            // A turning point above U = 1 still lies on the overshoot side.
            traj.termination = e.y[0] >= 1.0 ? Termination::overshoot : Termination::undershoot;
            break;
        case 2:
            traj.termination = Termination::negative_u;
            break;
        default:
            traj.termination = Termination::connected;
            break;
        }
    }
    fill_samples(traj, r);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.samples) {
        best = std::min(best, rear_distance(s));
    }
    traj.rear_residual = best;
    traj.tail = TailKind::tangent;
    traj.dense = std::move(r.dense);
    return traj;
}

TailClassification classify_tail(const TwTrajectory& traj)
{
    TailClassification out;
    switch (traj.termination) {
    case Termination::connected:
    case Termination::overshoot:
    case Termination::undershoot:
        // Front shots start on the fast eigenvector by construction.
        out.kind = TailKind::tangent;
        out.approach_eigenvalue = model::eig_front(traj.c, traj.v_end, traj.gamma).lambda3p;
        return out;
    default:
        break;
    }
    if (traj.samples.empty()) {
        throw SolverError("classify_tail: empty trajectory");
    }
    const TwSample& end = traj.samples.back();
    const double v_end = traj.v_end;
    const model::CriticalV vc = model::v_critical(traj.c);
    if (!(v_end < 1.0)) {
        throw SolverError("classify_tail: V_end must lie below 1");
    }
    const model::FrontEigenData eig = model::eig_front(traj.c, v_end, traj.gamma);
    out.approach_eigenvalue = eig.lambda2p;
    if (!vc.clamped && v_end < vc.value) {
        out.kind = TailKind::spiral;
        return out;
    }
    switch (traj.termination) {
    case Termination::negative_u:
        out.kind = TailKind::neg_approach;
        out.r2_sign = 1;
        return out;
    case Termination::singular:
        // U is still positive as V runs into the singular plane.
        out.kind = TailKind::pos_approach;
        out.r2_sign = -1;
        return out;
    case Termination::z_budget:
        if (std::abs(end.u) + std::abs(end.w) > 1e-3) {
            throw SolverError("classify_tail: tail not resolved within the z budget");
        }
        break;
    default:
        break;
    }
    if (eig.complex_pair) {
        out.kind = TailKind::spiral;
        return out;
    }
    const double l2 = eig.lambda2p.real();
    const double l3 = eig.lambda3p.real();
    if (l2 - l3 <= 1e-6 * std::abs(l3)) {
        // Repeated root (V_end = V_c): no mode split, U ~ (a + b z) e^{l z} keeps its sign.
        out.r2_sign = end.u < 0.0 ? 1 : -1;
        out.kind = end.u < 0.0 ? TailKind::neg_approach : TailKind::pos_approach;
        return out;
    }
    // (U, W) = r2 e^{l2 z} (l2, l2^2) + r3 e^{l3 z} (l3, l3^2)
    out.r2 = (end.w - l3 * end.u) / (l2 * (l2 - l3));
    out.r3 = (end.w - l2 * end.u) / (l3 * (l3 - l2));
    if (std::abs(out.r2) < 1e-8 * std::abs(out.r3)) {
        out.kind = TailKind::tangent;
        out.r2_sign = 0;
        return out;
    }
    out.r2_sign = out.r2 > 0.0 ? 1 : -1;
    out.kind = out.r2 > 0.0 ? TailKind::neg_approach : TailKind::pos_approach;
    return out;
}

VsResult find_vs(double gamma, double c, double v_hi)
{
    VsResult res;
    if (!(c > 0.0 && c < 2.0)) {
        res.status = VsStatus::absent;
        res.diagnostic = "no real front eigenvalues above V_c for c outside (0, 2)";
        return res;
    }
    // Just above V_c, where the front eigenvalues are real.
    const double v_lo = 1.0 - c / (2.0 * (1.0 + 1e-6));
    if (!(v_lo < v_hi)) {
        res.diagnostic = "empty V_inf range above V_c";
        return res;
    }
    try {
        const int s_lo = front_sign(gamma, c, v_lo);
        const int s_hi = front_sign(gamma, c, v_hi);
        if (s_lo == s_hi) {
            res.status = VsStatus::absent;
            res.diagnostic = "no sign change of the connection side above V_c; V_s coincides with V_c";
            return res;
        }
        const auto f = [&](double v) { return static_cast<double>(front_sign(gamma, c, v) * s_hi); };
        res.v_s = numerics::bracket_root(f, v_lo, v_hi, 1e-11);
        res.status = VsStatus::found;
    } catch (const std::exception& e) {
        res.status = VsStatus::failed;
        res.diagnostic = std::string("front shooting failed: ") + e.what();
    }
    return res;
}

VsResult find_vs_rear(double gamma, double c, double mu_lo, double mu_hi)
{
    VsResult res;
    try {
        constexpr double step = 0.25;
        TwTrajectory prev = shoot_from_rear_mu(gamma, c, mu_lo);
        double mu_prev = mu_lo;
        std::optional<std::pair<double, double>> bracket;
        bool saw_spiral_to_pos = false;
        for (double mu = mu_lo + step; mu <= mu_hi + 1e-12; mu += step) {
            TwTrajectory cur = shoot_from_rear_mu(gamma, c, mu);
            if (prev.tail != TailKind::pos_approach && cur.tail == TailKind::pos_approach) {
                if (prev.tail == TailKind::neg_approach) {
                    bracket = std::make_pair(mu_prev, mu);
                } else {
                    saw_spiral_to_pos = true;
                }
                break;
            }
            prev = std::move(cur);
            mu_prev = mu;
        }
        if (!bracket) {
            res.status = saw_spiral_to_pos ? VsStatus::absent : VsStatus::failed;
            res.diagnostic = saw_spiral_to_pos
                                 ? "rear family passes from spiral to pos_approach directly; V_s coincides with V_c"
                                 : "rear family did not reach pos_approach over the mu range";
            return res;
        }
        auto [lo, hi] = *bracket;
        double v_lo = 0.0, v_hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const TwTrajectory t = shoot_from_rear_mu(gamma, c, mid);
            const int s = rear_sign(t);
            if (s == 0) {
                if (t.tail == TailKind::tangent) {
                    lo = hi = mid;
                    v_lo = v_hi = t.v_end;
                    break;
                }
                res.status = VsStatus::failed;
                res.diagnostic = "bisection met a spiral orbit inside the neg/pos bracket";
                return res;
            }
            if (s < 0) {
                lo = mid;
                v_lo = t.v_end;
            } else {
                hi = mid;
                v_hi = t.v_end;
            }
        }
        res.status = VsStatus::found;
        res.v_s = v_lo > 0.0 && v_hi < 1.0 ? 0.5 * (v_lo + v_hi) : shoot_from_rear_mu(gamma, c, lo).v_end;
    } catch (const std::exception& e) {
        res.status = VsStatus::failed;
        res.diagnostic = std::string("rear shooting failed: ") + e.what();
    }
    return res;
}

BranchPoint branch_speed(double gamma, double v_inf, double tol)
{
    if (!(gamma > 0.0)) {
        throw DomainError("branch_speed: gamma must be positive");
    }
    if (!(v_inf > 0.0 && v_inf < 1.0)) {
        throw DomainError("branch_speed: V_inf must lie in (0, 1)");
    }
    BranchPoint bp;
    bp.gamma = gamma;
    bp.v_inf = v_inf;
    bp.c = 2.0 * (1.0 - v_inf);
    bp.regime = Regime::vc_limited;

    const double lo = bp.c * (1.0 + 1e-6);
    const double hi = 2.0 - 1e-9;
    if (!(lo < hi)) {
        return bp;
    }
    const int s_lo = front_sign(gamma, lo, v_inf);
    const int s_hi = front_sign(gamma, hi, v_inf);
    if (s_lo == s_hi) {
        return bp;
    }
    const auto f = [&](double c) { return static_cast<double>(front_sign(gamma, c, v_inf) * s_hi); };
    bp.c = numerics::bracket_root(f, lo, hi, tol);
    bp.regime = Regime::vs_limited;
    return bp;
}

double selected_speed(double gamma, double v0, std::optional<double> a)
{
    if (!(gamma > 0.0)) {
        throw DomainError("selected_speed: gamma must be positive");
    }
    if (!(v0 >= 0.0 && v0 < 1.0)) {
        throw DomainError("selected_speed: v0 must lie in [0, 1)");
    }
    // With v0 = 0 the model is Fisher-KPP and the compact-support speed is 2.
    const double compact = v0 == 0.0 ? 2.0 : branch_speed(gamma, v0).c;
    if (!a) {
        return compact;
    }
    // The wave decaying like exp(-a z) is admissible only while its speed is
    // at least the fastest-decaying wave's speed; otherwise V_inf = v0 lies
    // below max(V_c, V_s) at that speed and the compact-support wave wins.
    return std::max(model::dispersion_speed(*a, v0), compact);
}

CrossCheck cross_validate(double gamma, double c, double v_inf, double u_lo, double u_hi)
{
    if (!(0.0 < u_lo && u_lo < 0.5 && 0.5 < u_hi && u_hi < 1.0)) {
        throw DomainError("cross_validate: need 0 < u_lo < 1/2 < u_hi < 1");
    }
    const TwTrajectory rear = shoot_to_axis(gamma, c, v_inf);
    const TwTrajectory front = shoot_from_front(gamma, c, v_inf);
    auto half = [](double, std::span<const double> y) { return y[0] - 0.5; };
    const auto zr = rear.dense.roots(half);
    const auto zf = front.dense.roots(half);
    if (zr.empty() || zf.empty()) {
        throw SolverError("cross_validate: an orbit never crosses U = 1/2");
    }
    CrossCheck out;
    out.v_end_rear = rear.v_end;
    out.shift = zr.front() - zf.back();
    const double z0 = std::max(rear.z_min(), front.z_min() + out.shift);
    const double z1 = std::min(rear.z_max(), front.z_max() + out.shift);
    constexpr int kPoints = 4000;
    for (int k = 0; k <= kPoints; ++k) {
        const double z = z0 + (z1 - z0) * k / kPoints;
        const Vec3 a = rear.at(z);
        if (a[0] < u_lo || a[0] > u_hi) {
            continue;
        }
        const Vec3 b = front.at(z - out.shift);
        for (int i = 0; i < 3; ++i) {
            out.sup_distance = std::max(out.sup_distance, std::abs(a[i] - b[i]));
        }
    }
    return out;
}

double phase_sup_distance(std::span<const std::pair<double, double>> uv, const TwTrajectory& traj)
{
    if (traj.samples.size() < 2) {
        throw SolverError("phase_sup_distance: trajectory too short");
    }
    // Polyline through the accepted steps, refined with the dense output.
    constexpr int kRefine = 8;
    std::vector<std::pair<double, double>> line;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        const double za = traj.samples[i].z;
        const double zb = traj.samples[i + 1].z;
        for (int k = 0; k < kRefine; ++k) {
            const Vec3 p = traj.at(za + (zb - za) * k / kRefine);
            line.emplace_back(p[0], p[1]);
        }
    }
    line.emplace_back(traj.samples.back().u, traj.samples.back().v);

    double worst = 0.0;
    for (const auto& [pu, pv] : uv) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < line.size(); ++i) {
            const double ax = line[i].first, ay = line[i].second;
            const double dx = line[i + 1].first - ax, dy = line[i + 1].second - ay;
            const double len2 = dx * dx + dy * dy;
            const double t = len2 > 0.0 ? std::clamp(((pu - ax) * dx + (pv - ay) * dy) / len2, 0.0, 1.0) : 0.0;
            best = std::min(best, std::hypot(pu - ax - t * dx, pv - ay - t * dy));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

double gap_width(const TwTrajectory& traj, double theta)
{
    if (!(theta > 0.0 && theta <= 0.1)) {
        throw DomainError("gap_width: theta must lie in (0, 0.1]");
    }
    if (!traj.log_v || !(traj.v_end > 0.0)) {
        throw SolverError("gap_width: V vanishes identically, there is no resident front");
    }
    const auto zu = traj.dense.roots([theta](double, std::span<const double> y) { return y[0] - theta; });
    const double s_target = std::log(theta * traj.v_end);
    const auto zv = traj.dense.roots([s_target](double, std::span<const double> y) { return y[1] - s_target; });
    if (zu.empty() || zv.empty()) {
        throw SolverError("gap_width: U = theta or V = theta V_end is not crossed on the trajectory");
    }
    return *std::max_element(zv.begin(), zv.end()) - *std::max_element(zu.begin(), zu.end());
}

}  // namespace invasion::tw
