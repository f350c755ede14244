// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// PDE runs use the reference grid (L = 150, N = 6000, t_end = 60) unless noted.

#include "invasion/asym.hpp"
#include "invasion/model.hpp"
#include "invasion/pde.hpp"
#include "invasion/speedfit.hpp"
#include "invasion/tw.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace invasion;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<void(Verdict&)>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        body(v);
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail << " [exception: " << e.what() << "]";
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += v.pass ? 0 : 1;
    std::printf("%s %2d %s:%s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.str().c_str(), s);
    std::fflush(stdout);
}

// Runs are shared between criteria; keyed by a short name.
struct Run {
    pde::RunResult result;
    speedfit::SpeedFit fit;
};
std::map<std::string, Run> runs;

const Run& pde_run(const std::string& key, const model::ModelParams& p, const pde::InitialCondition& ic,
                   pde::Grid1D grid = {150.0, 6000}, double t_end = 60.0,
                   std::optional<speedfit::Window> window = std::nullopt)
{
    auto it = runs.find(key);
    if (it != runs.end()) {
        return it->second;
    }
    std::vector<double> outs;
    for (int k = 0; k <= 12; ++k) {
        outs.push_back(t_end * k / 12.0);
    }
    pde::RunOptions opt;
    opt.guard = pde::GuardPolicy::truncate;
    Run r;
    r.result = pde::run(p, ic, grid, t_end, outs, opt);
    r.fit = speedfit::fit_speed(r.result.trace, window ? *window : speedfit::default_window(r.result.trace));
    return runs.emplace(key, std::move(r)).first->second;
}

struct Fig3Case {
    std::string key;
    double gamma;
    double v0;
    std::optional<double> a;
};
const std::vector<Fig3Case> cases{
    {"a", 1.0, 0.5, std::nullopt},
    {"b", 10.0, 0.5, std::nullopt},
    {"c", 1.0, 0.75, 0.27},
    {"d", 10.0, 0.75, 0.21},
};

pde::InitialCondition ic_of(const Fig3Case& c)
{
    return c.a ? pde::InitialCondition::exponential(*c.a, c.v0) : pde::InitialCondition::compact(c.v0);
}

using C = std::complex<double>;

// max |(J - l I) e| for a real J.
double eig_residual(const std::array<model::Vec3, 3>& j, C l, const std::array<C, 3>& e)
{
    double worst = 0.0;
    for (int r = 0; r < 3; ++r) {
        C s = -l * e[r];
        for (int k = 0; k < 3; ++k) {
            s += j[r][k] * e[k];
        }
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

}  // namespace

int main()
{
    std::printf("acceptance: %zu criteria, PDE runs on one core take a few minutes\n", std::size_t{10});

    criterion(1, "front speed, compact data, v0 = 0.5", [](Verdict& v) {
        const Run& a = pde_run("a", {1.0, 0.5}, pde::InitialCondition::compact(0.5));
        const Run& b = pde_run("b", {10.0, 0.5}, pde::InitialCondition::compact(0.5));
        v.detail << " c(gamma=1) = " << a.fit.c << ", c(gamma=10) = " << b.fit.c;
        v.require(std::abs(a.fit.c - 1.00) <= 0.03, "c(1) = 1.00 +- 0.03");
        v.require(std::abs(b.fit.c - 1.24) <= 0.03, "c(10) = 1.24 +- 0.03");
    });

    criterion(2, "dispersion speed, exp(-x/4) data, v0 = 0.5, gamma = 1", [](Verdict& v) {
        // L = 200: at c = 2.125 the front would reach the guard at 0.9 L = 135 just before t = 60.
        const Run& r = pde_run("disp", {1.0, 0.5}, pde::InitialCondition::exponential(0.25, 0.5), {200.0, 8000});
        v.detail << " c = " << r.fit.c << ", formula " << model::dispersion_speed(0.25, 0.5);
        v.require(std::abs(r.fit.c - 2.125) <= 0.05, "c = 2.125 +- 0.05");
        v.require(!r.result.guard_hit, "front stayed inside the guard");
    });

    criterion(3, "Fisher-KPP reduction, v0 = 0", [](Verdict& v) {
        // The log t term only separates from c t over a long run: t in [200, 400].
        const Run& r = pde_run("kpp", {1.0, 0.0}, pde::InitialCondition::compact(0.0), {1000.0, 20000}, 400.0,
                               speedfit::Window{200.0, 400.0});
        v.detail << " c = " << r.fit.c << ", k0 = " << r.fit.k0;
        v.require(std::abs(r.fit.c - 2.0) <= 0.05, "c = 2.00 +- 0.05");
        v.require(std::abs(r.fit.k0 + 1.5) <= 0.3, "k0 = -1.5 +- 0.3");
    });

    criterion(4, "travelling-wave branch speeds", [](Verdict& v) {
        const double c1 = tw::branch_speed(1.0, 0.5).c;
        const double c10 = tw::branch_speed(10.0, 0.5).c;
        v.detail << " c(1, 0.5) = " << c1 << ", c(10, 0.5) = " << c10 << ", gamma = 0.1:";
        v.require(std::abs(c1 - 1.00) <= 0.01, "c(1, 0.5) = 1.00 +- 0.01");
        v.require(std::abs(c10 - 1.24) <= 0.01, "c(10, 0.5) = 1.24 +- 0.01");
        for (double vi : {0.25, 0.5, 0.75}) {
            const double c = tw::branch_speed(0.1, vi).c;
            v.detail << " " << c;
            v.require(std::abs(c - 2.0 * (1.0 - vi)) <= 0.01, "c(0.1, V) = 2 (1 - V) +- 0.01");
        }
    });

    criterion(5, "asymptotic constants", [](Verdict& v) {
        const double a0 = asym::outer_wave().a0;
        v.detail << " A0 = " << a0 << ", A_I =";
        v.require(std::abs(a0 - 0.1419) <= 0.0005, "A0 = 0.1419 +- 0.0005");
        for (auto [vi, ref] : {std::pair{0.25, 0.515}, {0.5, 1.485}, {0.75, 2.943}}) {
            const double ai = asym::inner_wave(vi).a_inner;
            v.detail << " " << ai;
            v.require(std::abs(ai - ref) <= 0.005 * ref, "A_I within 0.5%");
        }
    });

    criterion(6, "matching quality at V = 0.5", [](Verdict& v) {
        const asym::AsymptoticConstants k = asym::constants(0.5);
        double prev = HUGE_VAL;
        for (double g : {1e4, 1e6, 1e8}) {
            const asym::MatchReport m = asym::validate_matching(g, 0.5, tw::branch_speed(g, 0.5), k.a0, k.a_inner);
            v.detail << " gamma=" << g << ": |err1| = " << std::abs(m.err_one) << ", |err2| = " << std::abs(m.err_two)
                     << ", ratio = " << m.ratio << ";";
            v.require(std::abs(m.err_two) < std::abs(m.err_one), "two-term error below one-term error");
            v.require(m.ratio >= 0.7 && m.ratio <= 1.3, "ratio in [0.7, 1.3]");
            // The ratio approaches 1 from above on this branch; "toward 1" is read as |ratio - 1| decreasing.
            v.require(std::abs(m.ratio - 1.0) < prev, "ratio moves toward 1");
            prev = std::abs(m.ratio - 1.0);
        }
    });

    criterion(7, "interstitial gap growth, V = 0.5", [](Verdict& v) {
        const double w4 = tw::gap_width(tw::shoot_from_front(1e4, tw::branch_speed(1e4, 0.5).c, 0.5));
        const double w8 = tw::gap_width(tw::shoot_from_front(1e8, tw::branch_speed(1e8, 0.5).c, 0.5));
        v.detail << " width(1e8) - width(1e4) = " << w8 - w4 << " (log ratio " << std::log(1e4) << ")";
        v.require(std::abs(w8 - w4 - 9.2) <= 2.0, "difference = 9.2 +- 2.0");
    });

    criterion(8, "late-time PDE curves lie on the selected orbits", [](Verdict& v) {
        for (const Fig3Case& c : cases) {
            const Run& r = pde_run(c.key, {c.gamma, c.v0}, ic_of(c));
            const double speed = tw::selected_speed(c.gamma, c.v0, c.a);
            const tw::TwTrajectory t = tw::shoot_to_axis(c.gamma, speed, c.v0);
            const double d = tw::phase_sup_distance(pde::phase_curve(r.result.final_state), t);
            v.detail << " (" << c.key << ") " << d;
            v.require(d < 0.02, "sup distance < 0.02 for case " + c.key);
        }
    });

    criterion(9, "property suites", [](Verdict& v) {
        // Eigen-structure on a parameter grid.
        double rear = 0.0, front = 0.0, inner = 0.0;
        for (double c : {0.5, 1.0, 1.24, 1.5, 1.9}) {
            for (double g : {0.1, 1.0, 10.0, 1e4}) {
                const model::RearEigenData e = model::eig_rear(c, g);
                const auto j = model::tw_jacobian({1.0, 0.0, 0.0}, g, c);
                const double scale = std::max({1.0, std::abs(e.lambda1), std::abs(e.lambda2), std::abs(e.lambda3)});
                for (auto [l, vec] : {std::pair{e.lambda1, e.e1}, {e.lambda2, e.e2}, {e.lambda3, e.e3}}) {
                    rear = std::max(rear, eig_residual(j, l, {vec[0], vec[1], vec[2]}) / scale);
                }
                for (double vi : {0.1, 0.3, 0.5, 0.75, 0.9}) {
                    const model::FrontEigenData f = model::eig_front(c, vi, g);
                    const auto jf = model::tw_jacobian({0.0, vi, 0.0}, g, c);
                    front = std::max(front, eig_residual(jf, f.lambda2p, f.e2p));
                    front = std::max(front, eig_residual(jf, f.lambda3p, f.e3p));
                }
            }
        }
        for (double vi : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            for (double r : asym::inner_seed_residual(vi)) {
                inner = std::max(inner, std::abs(r));
            }
        }
        v.detail << " eigen residuals rear " << rear << ", front " << front << ", inner " << inner << ";";
        v.require(rear <= 1e-10 && front <= 1e-10 && inner <= 1e-10, "eigen residuals <= 1e-10");

        // Positivity and v monotonicity over every stored PDE run.
        const double slack = 10.0 * pde::RunOptions{}.tol.abs;
        double min_u = HUGE_VAL, v_rise = -HUGE_VAL;
        for (const auto& [key, r] : runs) {
            const auto& st = r.result.states;
            for (std::size_t k = 0; k < st.size(); ++k) {
                min_u = std::min({min_u, *std::min_element(st[k].u.begin(), st[k].u.end()),
                                  *std::min_element(st[k].v.begin(), st[k].v.end())});
                if (k > 0) {
                    for (std::size_t i = 0; i < st[k].v.size(); ++i) {
                        v_rise = std::max(v_rise, st[k].v[i] - st[k - 1].v[i]);
                    }
                }
            }
        }
        v.detail << " runs " << runs.size() << ", min(u, v) " << min_u << ", max v increase " << v_rise << ";";
        v.require(min_u >= -slack, "positivity");
        v.require(v_rise <= slack, "v monotone in time");

        // Grid refinement for the four PDE cases.
        double worst = 0.0;
        for (const Fig3Case& c : cases) {
            const Run& coarse = pde_run(c.key, {c.gamma, c.v0}, ic_of(c));
            const Run& fine = pde_run(c.key + "_fine", {c.gamma, c.v0}, ic_of(c), {150.0, 12000});
            worst = std::max(worst, std::abs(fine.fit.c - coarse.fit.c) / coarse.fit.c);
        }
        v.detail << " refinement " << 100.0 * worst << "%;";
        v.require(worst < 0.005, "doubling N moves c by < 0.5%");

        double xv = 0.0;
        for (double g : {3.0, 10.0, 30.0}) {
            xv = std::max(xv, tw::cross_validate(g, tw::branch_speed(g, 0.5).c, 0.5).sup_distance);
        }
        v.detail << " shooting cross-check " << xv << ";";
        v.require(xv <= 1e-5, "rear and front shots agree to 1e-5");

        const asym::OuterWave o = asym::outer_wave();
        double shift = 0.0;
        for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const auto& s = o.samples[static_cast<std::size_t>(frac * static_cast<double>(o.samples.size() - 1))];
            shift = std::max(shift, std::abs(asym::outer_wave_from(s.u, s.w).a0 - o.a0) / o.a0);
        }
        v.detail << " A0 restart " << shift;
        v.require(shift <= 1e-6, "A0 translation invariance 1e-6");
    });

    criterion(10, "speed selection by initial decay rate, gamma = 1e4", [](Verdict& v) {
        const double branch = tw::branch_speed(1e4, 0.5).c;
        const double steep = tw::selected_speed(1e4, 0.5, 0.5);
        const double shallow = tw::selected_speed(1e4, 0.5, 0.25);
        v.detail << " a=0.5: " << steep << " (branch " << branch << "), a=0.25: " << shallow;
        v.require(std::abs(steep - branch) <= 0.01, "a = 0.5 follows the compact branch");
        v.require(std::abs(shallow - 2.125) <= 0.01, "a = 0.25 keeps the dispersion speed");
    });

    // Not an acceptance line: the connection residual of a front shot at the
    // branch speed is bounded below by the speed's rounding error, amplified by
    // the rear saddle, so the 1e-6 level is out of reach in double precision.
    {
        const double g = 10.0;
        const tw::TwTrajectory t = tw::shoot_from_front(g, tw::branch_speed(g, 0.5).c, 0.5);
        std::printf("INFO    branch connection residual at gamma = 10, V = 0.5: %.3g (invariant asks < 1e-6)\n",
                    t.rear_residual);
    }

    std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
