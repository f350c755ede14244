#include "invasion/speedfit.hpp"

#include "invasion/error.hpp"
#include "invasion/numerics/lstsq.hpp"

#include <cmath>
#include <string>

namespace invasion::speedfit {

namespace {

struct Design {
    std::vector<std::vector<double>> rows;
    std::vector<double> obs;
};

Design collect(const pde::FrontTrace& trace, Window window, bool with_log)
{
    if (!(window.t_min > 0.0) || !(window.t_max > window.t_min)) {
        throw DomainError("fit window must satisfy 0 < t_min < t_max");
    }
    Design d;
    for (const auto& s : trace.samples) {
        if (s.t >= window.t_min && s.t <= window.t_max) {
            if (with_log) {
                d.rows.push_back({s.t, std::log(s.t), 1.0});
            } else {
                d.rows.push_back({s.t, 1.0});
            }
            d.obs.push_back(s.x_f);
        }
    }
    if (d.obs.size() < 10) {
        throw SolverError("fit window holds " + std::to_string(d.obs.size()) + " samples; at least 10 are needed");
    }
    return d;
}

}  // namespace

SpeedFit fit_speed(const pde::FrontTrace& trace, Window window)
{
    const Design d = collect(trace, window, true);
    const numerics::FitResult r = numerics::linear_least_squares(d.rows, d.obs);
    SpeedFit f;
    f.c = r.coefficients[0];
    f.k0 = r.coefficients[1];
    f.k1 = r.coefficients[2];
    f.window = window;
    f.samples = d.obs.size();
    f.rms = r.residual_norm / std::sqrt(static_cast<double>(f.samples));
    f.c_stderr = std::sqrt(r.covariance_diagonal[0]);
    f.k0_stderr = std::sqrt(r.covariance_diagonal[1]);
    return f;
}

LinearFit fit_linear(const pde::FrontTrace& trace, Window window)
{
    const Design d = collect(trace, window, false);
    const numerics::FitResult r = numerics::linear_least_squares(d.rows, d.obs);
    LinearFit f;
    f.c = r.coefficients[0];
    f.k1 = r.coefficients[1];
    f.window = window;
    f.samples = d.obs.size();
    f.rms = r.residual_norm / std::sqrt(static_cast<double>(f.samples));
    return f;
}

Window default_window(const pde::FrontTrace& trace)
{
    if (trace.samples.size() < 2) {
        throw SolverError("default_window: trace too short");
    }
    const double t_first = trace.samples.front().t;
    double t_end = trace.samples.back().t;
    if (!(t_end > 0.0) || t_first > t_end / 4.0) {
        throw SolverError("default_window: trace must span at least a factor of 4 in t");
    }
    if (trace.domain_length > 0.0) {
        const double limit = 0.9 * trace.domain_length;
        for (const auto& s : trace.samples) {
            if (s.x_f >= limit) {
                t_end = s.t;
                break;
            }
        }
        if (t_first > t_end / 4.0) {
            throw SolverError("default_window: front reaches 0.9 L too early for a fit");
        }
    }
    return {t_end / 2.0, t_end};
}

}  // namespace invasion::speedfit
