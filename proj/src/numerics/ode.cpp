#include "invasion/numerics/ode.hpp"

#include "invasion/error.hpp"
#include "invasion/numerics/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace invasion::numerics {

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Shampine's continuous extension, as used in Hairer's DOPRI5.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double rms_norm(std::span<const double> v, std::span<const double> scale)
{
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = v[i] / scale[i];
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
}

bool crosses(double g_old, double g_new, Crossing dir)
{
    const bool rise = g_old < 0.0 && g_new >= 0.0;
    const bool fall = g_old > 0.0 && g_new <= 0.0;
    switch (dir) {
    case Crossing::rising:
        return rise;
    case Crossing::falling:
        return fall;
    case Crossing::any:
        return rise || fall;
    }
    return false;
}

}  // namespace

void Tolerances::validate(std::size_t dim) const
{
    if (!(rel > 0.0)) {
        throw DomainError("relative tolerance must be positive");
    }
    if (abs_per_component.empty()) {
        if (!(abs > 0.0)) {
            throw DomainError("absolute tolerance must be positive");
        }
        return;
    }
    if (abs_per_component.size() != dim) {
        throw DomainError("per-component absolute tolerance has the wrong length");
    }
    for (double a : abs_per_component) {
        if (!(a > 0.0)) {
            throw DomainError("absolute tolerance must be positive");
        }
    }
}

// ---------------------------------------------------------------------------
// DenseSolution

void DenseSolution::push_segment(double z0, double h, std::span<const double> coeffs)
{
    z0_.push_back(z0);
    h_.push_back(h);
    coef_.insert(coef_.end(), coeffs.begin(), coeffs.end());
}

std::size_t DenseSolution::find_segment(double z) const
{
    const bool forward = h_.front() > 0.0;
    // Segments are ordered in integration direction.
    std::size_t lo = 0;
    std::size_t hi = z0_.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        const bool after = forward ? z >= z0_[mid] : z <= z0_[mid];
        if (after) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

void DenseSolution::eval_segment(std::size_t k, double theta, std::span<double> out) const
{
    const double t1 = 1.0 - theta;
    const double* r = coef_.data() + k * 5 * dim_;
    for (std::size_t i = 0; i < dim_; ++i) {
        const double r1 = r[i], r2 = r[dim_ + i], r3 = r[2 * dim_ + i], r4 = r[3 * dim_ + i], r5 = r[4 * dim_ + i];
        out[i] = r1 + theta * (r2 + t1 * (r3 + theta * (r4 + t1 * r5)));
    }
}

void DenseSolution::eval(double z, std::span<double> out) const
{
    if (z0_.empty()) {
        throw SolverError("DenseSolution: no steps recorded");
    }
    const std::size_t k = find_segment(z);
    const double theta = (z - z0_[k]) / h_[k];
    eval_segment(k, theta, out);
}

std::vector<double> DenseSolution::operator()(double z) const
{
    std::vector<double> out(dim_);
    eval(z, out);
    return out;
}

std::vector<double> DenseSolution::roots(const std::function<double(double, std::span<const double>)>& g,
                                         double tol) const
{
    std::vector<double> found;
    std::vector<double> y(dim_);
    auto g_at = [&](std::size_t k, double theta) {
        eval_segment(k, theta, y);
        return g(z0_[k] + theta * h_[k], y);
    };
    double g_prev = g_at(0, 0.0);
    for (std::size_t k = 0; k < z0_.size(); ++k) {
        const double th_max = (end_ && k + 1 == z0_.size()) ? (*end_ - z0_[k]) / h_[k] : 1.0;
        const double g_end = g_at(k, th_max);
        if ((g_prev < 0.0 && g_end >= 0.0) || (g_prev > 0.0 && g_end <= 0.0)) {
            const double hk = std::abs(h_[k]);
            const double theta =
                bracket_root([&](double th) { return g_at(k, th); }, 0.0, th_max, std::max(tol / hk, 1e-15));
            found.push_back(z0_[k] + theta * h_[k]);
        }
        g_prev = g_end;
    }
    return found;
}

// ---------------------------------------------------------------------------
// Integrator

AdaptiveResult integrate_adaptive(const IvpProblem& problem, std::span<const EventSpec> events,
                                  const AdaptiveOptions& options)
{
    const std::size_t n = problem.y0.size();
    if (n == 0) {
        throw DomainError("integrate_adaptive: empty initial state");
    }
    if (!problem.rhs) {
        throw DomainError("integrate_adaptive: no right-hand side");
    }
    problem.tol.validate(n);
    const double z_start = problem.z_start;
    const double z_end = problem.z_end;
    const double span = z_end - z_start;
    const double dir = span >= 0.0 ? 1.0 : -1.0;

    AdaptiveResult res;
    res.dim = n;
    res.dense = DenseSolution(n);
    res.z.push_back(z_start);
    res.y.insert(res.y.end(), problem.y0.begin(), problem.y0.end());
    if (span == 0.0) {
        return res;
    }

    std::vector<double> y(problem.y0), y1(n), ytmp(n), err(n), sc(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> dense_coef(5 * n);
    auto rhs = [&](double z, std::span<const double> yy, std::span<double> out) {
        problem.rhs(z, yy, out);
        ++res.rhs_evals;
    };

    double z = z_start;
    rhs(z, y, k1);

    auto scale_of = [&](std::span<const double> a, std::span<const double> b) {
        for (std::size_t i = 0; i < n; ++i) {
            sc[i] = problem.tol.abs_for(i) + problem.tol.rel * std::max(std::abs(a[i]), std::abs(b[i]));
        }
    };

    // Starting step (Hairer, Norsett & Wanner, II.4).
    double h = 0.0;
    if (options.fixed_step) {
        h = dir * std::abs(*options.fixed_step);
    } else if (options.initial_step > 0.0) {
        h = dir * std::min(options.initial_step, std::abs(span));
    } else {
        scale_of(y, y);
        const double d0 = rms_norm(y, sc);
        const double d1n = rms_norm(k1, sc);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, std::abs(span));
        for (std::size_t i = 0; i < n; ++i) {
            ytmp[i] = y[i] + dir * h0 * k1[i];
        }
        rhs(z + dir * h0, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) {
            err[i] = k2[i] - k1[i];
        }
        const double d2 = rms_norm(err, sc) / h0;
        const double dm = std::max(d1n, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
        h = dir * std::min({100.0 * h0, h1, std::abs(span)});
    }
    h = dir * std::min(std::abs(h), options.max_step);

    std::vector<double> g_old(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) {
        g_old[e] = events[e].fn(z, y);
    }

    bool last_rejected = false;
    while (dir * (z_end - z) > 0.0) {
        if (res.steps + res.rejected >= options.max_steps) {
            throw IntegrationError("integrate_adaptive: step budget exhausted", z, y);
        }
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(z), 1e-300);
        if (std::abs(h) < h_min) {
            std::ostringstream msg;
            msg << "integrate_adaptive: step size underflow at z = " << z;
            throw IntegrationError(msg.str(), z, y);
        }
        bool final_step = false;
        if (dir * (z + h - z_end) >= 0.0) {
            h = z_end - z;
            final_step = true;
        }

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(z + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(z + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(z + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(z + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(z + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(z + h, y1, k7);

        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            finite = finite && std::isfinite(y1[i]) && std::isfinite(err[i]);
        }
        double err_norm = 0.0;
        if (!options.fixed_step) {
            scale_of(y, y1);
            err_norm = finite ? rms_norm(err, sc) : std::numeric_limits<double>::infinity();
            if (!(err_norm <= 1.0)) {
                ++res.rejected;
                const double fac = finite ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2)) : 0.25;
                h *= std::min(fac, 1.0);
                last_rejected = true;
                continue;
            }
        } else if (!finite) {
            throw IntegrationError("integrate_adaptive: non-finite state with fixed step", z, y);
        }

        // Accepted: build the continuous extension.
        for (std::size_t i = 0; i < n; ++i) {
            const double ydiff = y1[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            dense_coef[i] = y[i];
            dense_coef[n + i] = ydiff;
            dense_coef[2 * n + i] = bspl;
            dense_coef[3 * n + i] = ydiff - h * k7[i] - bspl;
            dense_coef[4 * n + i] =
                h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        const double z_new = final_step ? z_end : z + h;

        // Events on this step.
        std::optional<std::size_t> terminal;
        double z_cut = z_new;
        if (!events.empty()) {
            DenseSolution seg(n);
            seg.push_segment(z, h, dense_coef);
            std::vector<EventRecord> hits;
            for (std::size_t e = 0; e < events.size(); ++e) {
                const double g_new = events[e].fn(z_new, y1);
                if (g_old[e] != 0.0 && crosses(g_old[e], g_new, events[e].direction)) {
                    std::vector<double> yy(n);
                    auto g_theta = [&](double th) {
                        seg.eval(z + th * h, yy);
                        return events[e].fn(z + th * h, yy);
                    };
                    const double theta = bracket_root(g_theta, 0.0, 1.0, std::max(1e-13 / std::abs(h), 1e-15));
                    const double ze = z + theta * h;
                    seg.eval(ze, yy);
                    hits.push_back({e, ze, yy});
                }
                g_old[e] = g_new;
            }
            std::sort(hits.begin(), hits.end(),
                      [&](const EventRecord& a, const EventRecord& b) { return dir * (a.z - b.z) < 0.0; });
            for (auto& hit : hits) {
                res.events.push_back(hit);
                if (events[hit.index].terminal) {
                    terminal = res.events.size() - 1;
                    z_cut = hit.z;
                    break;
                }
            }
        }

        if (options.keep_dense) {
            res.dense.push_segment(z, h, dense_coef);
        }
        ++res.steps;
        if (terminal) {
            if (options.keep_dense) {
                res.dense.set_end(z_cut);
            }
            res.terminal_event = terminal;
            res.z.push_back(z_cut);
            const auto& ye = res.events[*terminal].y;
            res.y.insert(res.y.end(), ye.begin(), ye.end());
            return res;
        }
        z = z_new;
        y.swap(y1);
        k1.swap(k7);
        res.z.push_back(z);
        res.y.insert(res.y.end(), y.begin(), y.end());

        if (!options.fixed_step) {
            double fac = err_norm == 0.0 ? 10.0 : std::min(10.0, std::max(0.2, 0.9 * std::pow(err_norm, -0.2)));
            if (last_rejected) {
                fac = std::min(fac, 1.0);
            }
            h = dir * std::min(std::abs(h) * fac, options.max_step);
        }
        last_rejected = false;
    }
    return res;
}

}  // namespace invasion::numerics
