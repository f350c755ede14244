#include "invasion/pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace invasion::pde {

void Grid1D::validate() const
{
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw DomainError("grid: length must be positive");
    }
    if (cells < 16) {
        throw DomainError("grid: need at least 16 cells");
    }
}

InitialCondition InitialCondition::compact(double v0, double width, double height)
{
    InitialCondition ic;
    ic.shape = CompactIc{width, height};
    ic.v0 = v0;
    return ic;
}

InitialCondition InitialCondition::exponential(double a, double v0)
{
    InitialCondition ic;
    ic.shape = ExponentialIc{a};
    ic.v0 = v0;
    return ic;
}

std::string InitialCondition::kind_name() const
{
    return is_compact() ? "compact" : "exp";
}

void InitialCondition::validate() const
{
    if (!(v0 >= 0.0 && v0 < 1.0)) {
        throw DomainError("initial condition: v0 must lie in [0, 1)");
    }
    if (const auto* c = std::get_if<CompactIc>(&shape)) {
        if (!(c->width > 0.0)) {
            throw DomainError("initial condition: compact width must be positive");
        }
        if (!(c->height > 0.0 && c->height <= 1.0)) {
            throw DomainError("initial condition: compact height must lie in (0, 1]");
        }
    } else if (!(std::get<ExponentialIc>(shape).a > 0.0)) {
        throw DomainError("initial condition: decay rate a must be positive");
    }
}

double InitialCondition::u0(double x) const
{
    if (const auto* c = std::get_if<CompactIc>(&shape)) {
        return x < c->width ? c->height : 0.0;
    }
    return std::exp(-std::get<ExponentialIc>(shape).a * x);
}

SemiDiscretization::SemiDiscretization(model::ModelParams params, Grid1D grid, kernels::Isa isa)
    : params_(params), grid_(grid), isa_(isa)
{
    params_.validate();
    grid_.validate();
    inv_dx2_ = 1.0 / (grid_.dx() * grid_.dx());
}

void SemiDiscretization::rhs(std::span<const double> y, std::span<double> dydt) const
{
    kernels::two_species_rhs(isa_, y, dydt, inv_dx2_, params_.gamma);
}

void SemiDiscretization::jacobian(std::span<const double> y, numerics::BandMatrix& jac) const
{
    const std::size_t n = grid_.cells;
    const double k = inv_dx2_;
    const double g = params_.gamma;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ru = 2 * i;
        const std::size_t rv = 2 * i + 1;
        const double u = y[ru];
        const double v = y[rv];
        double duu = 1.0 - 2.0 * u - v;
        double duv = -u;
        if (i + 1 < n) {
            const double ur = y[ru + 2];
            const double vr = y[rv + 2];
            const double d = 1.0 - 0.5 * (v + vr);
            jac(ru, ru + 2) = k * d;
            jac(ru, rv + 2) = -0.5 * k * (ur - u);
            duu -= k * d;
            duv -= 0.5 * k * (ur - u);
        }
        if (i > 0) {
            const double ul = y[ru - 2];
            const double vl = y[rv - 2];
            const double d = 1.0 - 0.5 * (vl + v);
            jac(ru, ru - 2) = k * d;
            jac(ru, rv - 2) = 0.5 * k * (u - ul);
            duu -= k * d;
            duv += 0.5 * k * (u - ul);
        }
        jac(ru, ru) = duu;
        jac(ru, rv) = duv;
        jac(rv, ru) = -g * v;
        jac(rv, rv) = -g * u;
    }
}

numerics::RhsFn semidiscretize(const model::ModelParams& params, const Grid1D& grid, kernels::Isa isa)
{
    SemiDiscretization sd(params, grid, isa);
    return [sd](double, std::span<const double> y, std::span<double> dydt) { sd.rhs(y, dydt); };
}

std::vector<double> interleave(std::span<const double> u, std::span<const double> v)
{
    if (u.size() != v.size()) {
        throw DomainError("interleave: u and v differ in length");
    }
    std::vector<double> y(2 * u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        y[2 * i] = u[i];
        y[2 * i + 1] = v[i];
    }
    return y;
}

PdeState deinterleave(double t, const Grid1D& grid, std::span<const double> y)
{
    PdeState s;
    s.t = t;
    s.grid = grid;
    const std::size_t n = y.size() / 2;
    s.u.resize(n);
    s.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.u[i] = y[2 * i];
        s.v[i] = y[2 * i + 1];
    }
    return s;
}

PdeState initial_state(const InitialCondition& ic, const Grid1D& grid)
{
    ic.validate();
    grid.validate();
    PdeState s;
    s.grid = grid;
    s.u.resize(grid.cells);
    s.v.assign(grid.cells, ic.v0);
    for (std::size_t i = 0; i < grid.cells; ++i) {
        s.u[i] = ic.u0(grid.x(i));
    }
    return s;
}

double front_location(std::span<const double> u, const Grid1D& grid, double level, std::size_t stride)
{
    const std::size_t n = u.size() / stride;
    if (n < 2) {
        throw SolverError("front_location: too few cells");
    }
    if (u[(n - 1) * stride] >= level) {
        throw SolverError("front_location: u is above the level at the right boundary (front left the domain)");
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        const double a = u[i * stride];
        if (a >= level) {
            const double b = u[(i + 1) * stride];
            return grid.x(i) + (a - level) / (a - b) * grid.dx();
        }
    }
    throw SolverError("front_location: u never reaches the level (population extinct or below threshold)");
}

double front_location(const PdeState& state, double level)
{
    return front_location(state.u, state.grid, level, 1);
}

std::vector<std::pair<double, double>> phase_curve(const PdeState& state)
{
    std::vector<std::pair<double, double>> out(state.u.size());
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        out[i] = {state.u[i], state.v[i]};
    }
    return out;
}

namespace {

void check_run_args(double t_end, std::span<const double> output_times, const RunOptions& options)
{
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw DomainError("run: t_end must be positive");
    }
    for (double t : output_times) {
        if (!(t >= 0.0 && t <= t_end)) {
            throw DomainError("run: output times must lie in [0, t_end]");
        }
    }
    if (!(options.level > 0.0 && options.level < 1.0)) {
        throw DomainError("run: front level must lie in (0, 1)");
    }
    if (!(options.guard_fraction > 0.0 && options.guard_fraction <= 1.0)) {
        throw DomainError("run: guard fraction must lie in (0, 1]");
    }
}

// Shared driver; `stride` is the distance between consecutive u values in y.
RunResult drive(const numerics::StiffProblem& problem, numerics::BandStructure band,
                const numerics::StiffOptions& base, const Grid1D& grid, std::size_t stride,
                std::span<const double> output_times, const RunOptions& options)
{
    RunResult res;
    res.trace.level = options.level;
    res.trace.domain_length = grid.length;
    const double guard_x = options.guard_fraction * grid.length;

    numerics::StiffOptions opt = base;
    opt.max_step = options.max_step;
    opt.on_step = [&](double t, std::span<const double> y) {
        double xf = 0.0;
        try {
            xf = front_location(y, grid, options.level, stride);
        } catch (const SolverError&) {
            // No crossing yet (or any more); nothing to record.
            return true;
        }
        if (res.trace.samples.empty() || t > res.trace.samples.back().t) {
            res.trace.samples.push_back({t, xf});
        }
        if (xf > guard_x) {
            res.guard_hit = true;
            return false;
        }
        return true;
    };

    auto unpack = [&](double t, std::span<const double> y) {
        if (stride == 2) {
            return deinterleave(t, grid, y);
        }
        PdeState s;
        s.t = t;
        s.grid = grid;
        s.u.assign(y.begin(), y.end());
        s.v.assign(y.size(), 0.0);
        return s;
    };

    numerics::StiffResult sr = numerics::integrate_stiff(problem, band, output_times, opt);
    res.stats = sr.stats;
    res.states.reserve(sr.t.size());
    for (std::size_t k = 0; k < sr.t.size(); ++k) {
        res.states.push_back(unpack(sr.t[k], sr.y[k]));
    }
    res.final_state = unpack(sr.t_final, sr.y_final);

    if (res.guard_hit && options.guard == GuardPolicy::abort) {
        std::ostringstream msg;
        msg << "run: front reached x = " << res.trace.samples.back().x_f << " > " << options.guard_fraction
            << " L at t = " << sr.t_final << "; enlarge the domain or shorten the run";
        throw DomainGuardError(msg.str(), std::move(res));
    }
    return res;
}

}  // namespace

RunResult run(const model::ModelParams& params, const InitialCondition& ic, const Grid1D& grid, double t_end,
              std::span<const double> output_times, const RunOptions& options)
{
    params.validate();
    ic.validate();
    grid.validate();
    if (ic.v0 != params.v_inf) {
        throw DomainError("run: initial resident density differs from the model's v_inf");
    }
    check_run_args(t_end, output_times, options);

    const SemiDiscretization sd(params, grid, options.isa);
    const PdeState s0 = initial_state(ic, grid);

    numerics::StiffProblem problem;
    problem.rhs = [&sd](double, std::span<const double> y, std::span<double> dydt) { sd.rhs(y, dydt); };
    problem.y0 = interleave(s0.u, s0.v);
    problem.t_start = 0.0;
    problem.t_end = t_end;
    problem.tol = options.tol;

    numerics::StiffOptions opt;
    opt.jacobian = [&sd](double, std::span<const double> y, numerics::BandMatrix& jac) { sd.jacobian(y, jac); };
    return drive(problem, SemiDiscretization::band(), opt, grid, 2, output_times, options);
}

RunResult run_fisher_kpp(const InitialCondition& ic, const Grid1D& grid, double t_end,
                         std::span<const double> output_times, const RunOptions& options)
{
    ic.validate();
    grid.validate();
    check_run_args(t_end, output_times, options);

    const double inv_dx2 = 1.0 / (grid.dx() * grid.dx());
    const PdeState s0 = initial_state(ic, grid);

    numerics::StiffProblem problem;
    problem.rhs = [inv_dx2](double, std::span<const double> u, std::span<double> dudt) {
        kernels::fisher_kpp_rhs(u, dudt, inv_dx2);
    };
    problem.y0 = s0.u;
    problem.t_start = 0.0;
    problem.t_end = t_end;
    problem.tol = options.tol;

    numerics::StiffOptions opt;
    opt.jacobian = [inv_dx2](double, std::span<const double> u, numerics::BandMatrix& jac) {
        const std::size_t n = u.size();
        for (std::size_t i = 0; i < n; ++i) {
            double d = 1.0 - 2.0 * u[i];
            if (i + 1 < n) {
                jac(i, i + 1) = inv_dx2;
                d -= inv_dx2;
            }
            if (i > 0) {
                jac(i, i - 1) = inv_dx2;
                d -= inv_dx2;
            }
            jac(i, i) = d;
        }
    };
    return drive(problem, {1, 1}, opt, grid, 1, output_times, options);
}

}  // namespace invasion::pde
