#include "invasion/asym.hpp"

#include "invasion/error.hpp"
#include "invasion/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace invasion::asym {

namespace {

double ell(double u, double w)
{
    return u / (u + w) + std::log(std::abs(u + w));
}

void check_options(const LimitOptions& opt)
{
    if (!(opt.eps > 0.0 && opt.eps < 1e-2) || !(opt.z_budget > 0.0) || !(opt.dz > 0.0) ||
        !(opt.plateau_tol > 0.0) || opt.plateau_run < 1) {
        throw DomainError("limit options out of range");
    }
}

// Samples l on a uniform grid from z_start in the integration direction and
// returns the index of the first sample ending a run of `plateau_run`
// differences below tolerance. Counting starts once |U| < u_gate: near the
// rear saddle l is flat as well (l = 1 at U = 1), and a small seed offset
// lingers there long enough to fake a plateau.
struct Plateau {
    std::vector<EllSample> trace;
    std::optional<std::size_t> at;
};

Plateau find_plateau(const numerics::DenseSolution& dense, double z_start, double dir, const LimitOptions& opt,
                     std::size_t iu, std::size_t iw, double u_gate)
{
    Plateau p;
    const auto n = static_cast<std::size_t>(std::floor(opt.z_budget / opt.dz + 1e-9));
    std::vector<double> y(dense.dim());
    int run = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double z = z_start + dir * static_cast<double>(k) * opt.dz;
        dense.eval(z, y);
        const double s = y[iu] + y[iw];
        if (!(std::abs(y[iu]) < u_gate) || !(s != 0.0) || !std::isfinite(s)) {
            run = 0;
            continue;
        }
        p.trace.push_back({z, ell(y[iu], y[iw])});
        if (p.trace.size() >= 2) {
            const double diff = std::abs(p.trace.back().ell - p.trace[p.trace.size() - 2].ell);
            run = diff < opt.plateau_tol ? run + 1 : 0;
            if (run >= opt.plateau_run) {
                p.at = p.trace.size() - 1;
                return p;
            }
        }
    }
    return p;
}

OuterWave outer_from_state(double u0, double w0, const LimitOptions& opt)
{
    check_options(opt);
    numerics::IvpProblem p;
    p.rhs = [](double, std::span<const double> y, std::span<double> f) {
        f[0] = y[1];
        f[1] = -2.0 * y[1] - y[0] * (1.0 - y[0]);
    };
    p.y0 = {u0, w0};
    p.z_start = 0.0;
    p.z_end = opt.z_budget;
    p.tol = opt.tol;
    numerics::AdaptiveResult r = numerics::integrate_adaptive(p);

    OuterWave out;
    out.samples.reserve(r.z.size());
    for (std::size_t i = 0; i < r.z.size(); ++i) {
        out.samples.push_back({r.z[i], r.state(i)[0], r.state(i)[1]});
    }
    Plateau pl = find_plateau(r.dense, 0.0, 1.0, opt, 0, 1, 0.5);
    out.ell_trace = std::move(pl.trace);
    if (!pl.at) {
        throw SolverError("outer_wave: l(z) did not settle within the z budget");
    }
    out.ell_limit = out.ell_trace[*pl.at].ell;
    out.z_plateau = out.ell_trace[*pl.at].z;
    out.a0 = std::exp(out.ell_limit);
    return out;
}

}  // namespace

OuterWave outer_wave(const LimitOptions& opt)
{
    const double lambda = std::numbers::sqrt2 - 1.0;
    const double n = std::sqrt(1.0 + lambda * lambda);
    return outer_from_state(1.0 - opt.eps / n, -opt.eps * lambda / n, opt);
}

OuterWave outer_wave_from(double u, double w, const LimitOptions& opt)
{
    return outer_from_state(u, w, opt);
}

std::array<double, 3> inner_seed_residual(double v_inf)
{
    const double lam = model::lambda_inner(v_inf);
    const std::array<double, 3> e{lam, 0.5 * v_inf, lam * lam};
    const double q = 1.0 - v_inf;
    // Jacobian of the inner system at (0, V_inf, 0).
    const double j[3][3] = {{0.0, 0.0, 1.0}, {0.5 * v_inf, 0.0, 0.0}, {-1.0, 0.0, -2.0 / q}};
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i) {
        r[i] = j[i][0] * e[0] + j[i][1] * e[1] + j[i][2] * e[2] - lam * e[i];
    }
    return r;
}

InnerWave inner_wave(double v_inf, const LimitOptions& opt)
{
    check_options(opt);
    const double lam = model::lambda_inner(v_inf);
    std::array<double, 3> e{lam, 0.5 * v_inf, lam * lam};
    const double n = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    for (double& x : e) {
        x /= n;
    }
    // lam < 0, so subtracting the eigenvector makes U positive and V < V_inf.
    const double v_seed = v_inf - opt.eps * e[1];
    if (!(v_seed > 0.0)) {
        throw DomainError("inner_wave: eps too large for this V_inf");
    }

    numerics::IvpProblem p;
    p.rhs = [](double, std::span<const double> y, std::span<double> f) {
        const double u = y[0];
        const double v = std::exp(y[1]);
        const double w = y[2];
        f[0] = w;
        f[1] = 0.5 * u;
        f[2] = (0.5 * u * v * w - 2.0 * w - u * (1.0 - v)) / (1.0 - v);
    };
    p.y0 = {-opt.eps * e[0], std::log(v_seed), -opt.eps * e[2]};
    p.z_start = 0.0;
    p.z_end = -opt.z_budget;
    p.tol = opt.tol;
    numerics::AdaptiveResult r = numerics::integrate_adaptive(p);

    InnerWave out;
    out.v_inf = v_inf;
    out.lambda = lam;
    out.samples.reserve(r.z.size());
    for (std::size_t i = r.z.size(); i-- > 0;) {
        const auto y = r.state(i);
        if (!(y[0] > 0.0)) {
            throw SolverError("inner_wave: U left the positive half-space at z = " + std::to_string(r.z[i]));
        }
        out.samples.push_back({r.z[i], y[0], std::exp(y[1]), y[2]});
    }
    Plateau pl = find_plateau(r.dense, 0.0, -1.0, opt, 0, 2, HUGE_VAL);
    out.ell_trace = std::move(pl.trace);
    if (!pl.at) {
        throw SolverError("inner_wave: l(z) did not settle within the z budget");
    }
    out.a_inner = std::exp(out.ell_trace[*pl.at].ell);
    if (!(out.a_inner > 0.0) || !std::isfinite(out.a_inner)) {
        throw SolverError("inner_wave: non-positive A_I");
    }
    return out;
}

AsymptoticConstants constants(double v_inf, const LimitOptions& opt)
{
    AsymptoticConstants k;
    k.v_inf = v_inf;
    k.lambda = model::lambda_inner(v_inf);
    k.a0 = outer_wave(opt).a0;
    k.a_inner = inner_wave(v_inf, opt).a_inner;
    return k;
}

std::vector<double> intermediate_profile(double delta, double z0, double a0, std::span<const double> z)
{
    if (!(delta > 0.0 && delta < 1.0)) {
        throw DomainError("intermediate_profile: delta must lie in (0, 1)");
    }
    const double sd = std::sqrt(delta);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double x = z[i] - z0;
        out[i] = a0 / sd * std::exp(-x) * std::sin(sd * x);
    }
    return out;
}

double intermediate_first_zero(double delta, double z0)
{
    if (!(delta > 0.0 && delta < 1.0)) {
        throw DomainError("intermediate_first_zero: delta must lie in (0, 1)");
    }
    return z0 + std::numbers::pi / std::sqrt(delta);
}

MatchReport validate_matching(double gamma, double v_inf, const tw::BranchPoint& branch, double a0, double a_inner)
{
    if (branch.gamma != gamma || branch.v_inf != v_inf) {
        throw DomainError("validate_matching: branch point belongs to different parameters");
    }
    const model::DeltaPrediction d = model::predict_delta(gamma, a0, a_inner);
    MatchReport m;
    m.gamma = gamma;
    m.v_inf = v_inf;
    m.c = branch.c;
    m.delta_num = 2.0 - branch.c;
    m.delta_one = d.one_term;
    m.delta_two = d.two_term;
    m.delta_unexpanded = d.unexpanded;
    m.delta1 = m.delta_num - d.one_term;
    m.err_one = m.delta_num - d.one_term;
    m.err_two = m.delta_num - d.two_term;
    const double lg = std::log(gamma);
    m.ratio = m.delta_num * lg * lg / (std::numbers::pi * std::numbers::pi);
    return m;
}

MatchReport validate_matching(double gamma, double v_inf, const tw::BranchPoint& branch)
{
    const AsymptoticConstants k = constants(v_inf);
    return validate_matching(gamma, v_inf, branch, k.a0, k.a_inner);
}

}  // namespace invasion::asym
