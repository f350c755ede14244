#include "invasion/numerics/stiff.hpp"

#include "invasion/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace invasion::numerics {

namespace {

const double kGamma = 2.0 - std::sqrt(2.0);
const double kD = kGamma / 2.0;
const double kW = std::sqrt(2.0) / 4.0;
// b - bhat of the embedded third-order formula
const double kE1 = (4.0 * kW - 1.0) / 3.0;
const double kE2 = -1.0 / 3.0;
const double kE3 = 2.0 * kD / 3.0;

constexpr double kNewtonKappa = 0.1;
constexpr int kMaxNewton = 8;

double max_norm(std::span<const double> v, std::span<const double> w)
{
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        m = std::max(m, std::abs(v[i]) / w[i]);
    }
    return m;
}

class Tr2Stepper {
public:
    Tr2Stepper(const StiffProblem& p, BandStructure band, const StiffOptions& opt)
        : p_(p), opt_(opt), n_(p.y0.size()), band_(band), jac_(n_, band.lower, band.upper),
          iter_(n_, band.lower, band.upper), fz_(n_), r_(n_), ytmp_(n_), ftmp_(n_)
    {
    }

    StiffStats stats;

    void rhs(double t, std::span<const double> y, std::span<double> out)
    {
        p_.rhs(t, y, out);
        ++stats.rhs_evals;
    }

    void update_jacobian(double t, std::span<const double> y, std::span<const double> f0)
    {
        jac_.set_zero();
        ++stats.jacobians;
        if (opt_.jacobian) {
            opt_.jacobian(t, y, jac_);
            return;
        }
        const std::size_t groups = band_.lower + band_.upper + 1;
        std::vector<double> delta(n_);
        for (std::size_t g = 0; g < groups && g < n_; ++g) {
            std::copy(y.begin(), y.end(), ytmp_.begin());
            for (std::size_t j = g; j < n_; j += groups) {
                delta[j] = std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(std::abs(y[j]), 1.0);
                ytmp_[j] += delta[j];
                delta[j] = ytmp_[j] - y[j];
            }
            rhs(t, ytmp_, ftmp_);
            for (std::size_t j = g; j < n_; j += groups) {
                const std::size_t i0 = j > band_.upper ? j - band_.upper : 0;
                const std::size_t i1 = std::min(n_ - 1, j + band_.lower);
                for (std::size_t i = i0; i <= i1; ++i) {
                    jac_(i, j) = (ftmp_[i] - f0[i]) / delta[j];
                }
            }
        }
    }

    void factor(double dh)
    {
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t i0 = j > band_.upper ? j - band_.upper : 0;
            const std::size_t i1 = std::min(n_ - 1, j + band_.lower);
            for (std::size_t i = i0; i <= i1; ++i) {
                iter_(i, j) = (i == j ? 1.0 : 0.0) - dh * jac_(i, j);
            }
        }
        lu_.factor(iter_);
        ++stats.factorizations;
    }

    void solve(std::span<double> b) const { lu_.solve(b); }

    /// Solves z - dh f(t, z) = psi from the guess in z. On success writes the
    /// stage derivative k = (z - psi) / dh.
    bool newton(double t, double dh, std::span<const double> psi, std::span<double> z, std::span<double> k,
                std::span<const double> w)
    {
        double prev = 0.0;
        for (int it = 0; it < kMaxNewton; ++it) {
            rhs(t, z, fz_);
            for (std::size_t i = 0; i < n_; ++i) {
                r_[i] = psi[i] + dh * fz_[i] - z[i];
            }
            solve(r_);
            bool finite = true;
            for (std::size_t i = 0; i < n_; ++i) {
                z[i] += r_[i];
                finite = finite && std::isfinite(z[i]);
            }
            if (!finite) {
                return false;
            }
            const double nrm = max_norm(r_, w);
            bool done = false;
            if (it == 0) {
                done = nrm <= 1e-2 * kNewtonKappa;
            } else {
                const double theta = nrm / prev;
                if (theta >= 0.9) {
                    return false;
                }
                done = theta / (1.0 - theta) * nrm <= kNewtonKappa;
            }
            if (done || nrm == 0.0) {
                for (std::size_t i = 0; i < n_; ++i) {
                    k[i] = (z[i] - psi[i]) / dh;
                }
                return true;
            }
            prev = nrm;
        }
        return false;
    }

private:
    const StiffProblem& p_;
    const StiffOptions& opt_;
    std::size_t n_;
    BandStructure band_;
    BandMatrix jac_;
    BandMatrix iter_;
    BandLU lu_;
    std::vector<double> fz_, r_, ytmp_, ftmp_;
};

}  // namespace

StiffResult integrate_stiff(const StiffProblem& problem, BandStructure band, std::span<const double> output_times,
                            const StiffOptions& options)
{
    const std::size_t n = problem.y0.size();
    if (n == 0 || !problem.rhs) {
        throw DomainError("integrate_stiff: empty problem");
    }
    problem.tol.validate(n);
    if (!(problem.t_end > problem.t_start)) {
        throw DomainError("integrate_stiff: t_end must exceed t_start");
    }
    for (double to : output_times) {
        if (to < problem.t_start || to > problem.t_end) {
            throw DomainError("integrate_stiff: output time outside the integration span");
        }
    }
    std::vector<double> outs(output_times.begin(), output_times.end());
    std::sort(outs.begin(), outs.end());

    StiffResult res;
    Tr2Stepper st(problem, band, options);

    std::vector<double> y(problem.y0), y_new(n), k1(n), k2(n), k3(n), z2(n), psi(n), w(n), est(n);
    double t = problem.t_start;
    st.rhs(t, y, k1);

    // Steps are clipped to land on output times, so snapshots carry the
    // accuracy of step endpoints. Interpolation is not an option here: stage
    // derivatives of stiff components are only as good as the Newton residual.
    std::size_t next_out = 0;
    auto emit_at = [&](double t_now, std::span<const double> y_now) {
        while (next_out < outs.size() && outs[next_out] <= t_now) {
            res.t.push_back(outs[next_out]);
            res.y.emplace_back(y_now.begin(), y_now.end());
            ++next_out;
        }
    };
    emit_at(t, y);

    if (options.on_step && !options.on_step(t, y)) {
        res.stopped_early = true;
        res.t_final = t;
        res.y_final = y;
        res.stats = st.stats;
        return res;
    }

    const double span = problem.t_end - problem.t_start;
    auto weights = [&](std::span<const double> a, std::span<const double> b) {
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = problem.tol.abs_for(i) + problem.tol.rel * std::max(std::abs(a[i]), std::abs(b[i]));
        }
    };

    double h = options.initial_step;
    if (!(h > 0.0)) {
        weights(y, y);
        const double fn = max_norm(k1, w);
        h = fn > 0.0 ? std::pow(problem.tol.rel, 1.0 / 3.0) / fn : 1e-3 * span;
        h = std::clamp(h, 1e-10 * span, 1e-2 * span);
    }
    h = std::min(h, options.max_step);

    bool jac_fresh = false;
    double factored_dh = -1.0;
    bool last_rejected = false;
    while (t < problem.t_end) {
        if (st.stats.steps + st.stats.rejected >= options.max_steps) {
            throw IntegrationError("integrate_stiff: step budget exhausted", t, y);
        }
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            std::ostringstream msg;
            msg << "integrate_stiff: step size underflow at t = " << t;
            throw IntegrationError(msg.str(), t, y);
        }
        const double h_free = h;
        const double t_stop = next_out < outs.size() ? outs[next_out] : problem.t_end;
        const bool clipped = t + 1.01 * h >= t_stop;
        if (clipped) {
            h = t_stop - t;
        }
        if (!jac_fresh) {
            st.update_jacobian(t, y, k1);
            jac_fresh = true;
            factored_dh = -1.0;
        }
        const double dh = kD * h;
        if (dh != factored_dh) {
            st.factor(dh);
            factored_dh = dh;
        }
        weights(y, y);

        // Trapezoidal stage to t + gamma h.
        for (std::size_t i = 0; i < n; ++i) {
            psi[i] = y[i] + dh * k1[i];
            z2[i] = y[i] + kGamma * h * k1[i];
        }
        bool ok = st.newton(t + kGamma * h, dh, psi, z2, k2, w);
        // BDF2 stage to t + h.
        if (ok) {
            for (std::size_t i = 0; i < n; ++i) {
                psi[i] = y[i] + h * kW * (k1[i] + k2[i]);
                // Quadratic extrapolation through y, z2 with slopes k1, k2.
                y_new[i] = y[i] + h * (k1[i] + (k2[i] - k1[i]) / (2.0 * kGamma));
            }
            ok = st.newton(t + h, dh, psi, y_new, k3, w);
        }
        if (!ok) {
            ++st.stats.newton_failures;
            h *= 0.25;
            jac_fresh = false;
            last_rejected = true;
            continue;
        }

        for (std::size_t i = 0; i < n; ++i) {
            est[i] = h * (kE1 * k1[i] + kE2 * k2[i] + kE3 * k3[i]);
        }
        st.solve(est);
        weights(y, y_new);
        const double err = max_norm(est, w);
        if (!std::isfinite(err) || err > 1.0) {
            ++st.stats.rejected;
            const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -1.0 / 3.0)) : 0.2;
            h *= std::min(fac, 0.9);
            last_rejected = true;
            continue;
        }

        ++st.stats.steps;
        const double t_new = clipped ? t_stop : t + h;
        emit_at(t_new, y_new);
        t = t_new;
        y.swap(y_new);
        k1.swap(k3);
        jac_fresh = false;

        if (options.on_step && !options.on_step(t, y)) {
            res.stopped_early = true;
            break;
        }

        double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -1.0 / 3.0), 0.2, 5.0);
        if (last_rejected) {
            fac = std::min(fac, 1.0);
        }
        // Small changes are not worth a refactorisation.
        if (fac > 1.0 && fac < 1.2) {
            fac = 1.0;
        }
        h *= fac;
        if (clipped && !last_rejected) {
            h = std::max(h, h_free);
        }
        h = std::min(h, options.max_step);
        last_rejected = false;
    }
    res.t_final = t;
    res.y_final = y;
    res.stats = st.stats;
    return res;
}

}  // namespace invasion::numerics
