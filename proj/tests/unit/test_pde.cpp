#include "invasion/error.hpp"
#include "invasion/pde.hpp"
#include "invasion/speedfit.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace invasion;
using namespace invasion::pde;

TEST_CASE("grid and initial condition")
{
    const Grid1D g{150.0, 6000};
    CHECK(g.dx() == doctest::Approx(0.025));
    CHECK(g.x(0) == doctest::Approx(0.0125));
    CHECK(g.x(5999) == doctest::Approx(150.0 - 0.0125));
    CHECK_THROWS_AS((Grid1D{150.0, 15}.validate()), DomainError);
    CHECK_THROWS_AS((Grid1D{0.0, 100}.validate()), DomainError);

    const PdeState s = initial_state(InitialCondition::compact(0.5), Grid1D{10.0, 20});
    // Centres 0.25 and 0.75 lie below x = 1.
    CHECK(s.u[0] == 1.0);
    CHECK(s.u[1] == 1.0);
    CHECK(s.u[2] == 0.0);
    CHECK(std::all_of(s.v.begin(), s.v.end(), [](double v) { return v == 0.5; }));

    const InitialCondition e = InitialCondition::exponential(0.25, 0.5);
    CHECK(e.u0(4.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(e.kind_name() == "exp");
    CHECK(InitialCondition::compact(0.0).kind_name() == "compact");
    CHECK_THROWS_AS(InitialCondition::compact(1.0).validate(), DomainError);
    CHECK_THROWS_AS(InitialCondition::compact(0.5, 1.0, 1.5).validate(), DomainError);
    CHECK_THROWS_AS(InitialCondition::compact(0.5, 0.0).validate(), DomainError);
    CHECK_THROWS_AS(InitialCondition::exponential(0.0, 0.5).validate(), DomainError);
}

TEST_CASE("semi-discretisation examples")
{
    const Grid1D g{10.0, 20};
    const model::ModelParams p{3.0, 0.5};
    const SemiDiscretization sd(p, g);

    SUBCASE("(1, 0) is an equilibrium")
    {
        std::vector<double> u(20, 1.0), v(20, 0.0), f(40);
        sd.rhs(interleave(u, v), f);
        for (double x : f) {
            CHECK(x == 0.0);
        }
    }
    SUBCASE("single occupied cell")
    {
        std::vector<double> u(20, 0.0), v(20, 0.5), f(40);
        u[7] = 0.4;
        sd.rhs(interleave(u, v), f);
        for (std::size_t i = 0; i < 20; ++i) {
            CHECK(f[2 * i + 1] == (i == 7 ? doctest::Approx(-3.0 * 0.4 * 0.5) : doctest::Approx(0.0)));
        }
        // Neighbours gain (1 - 0.5) * 0.4 / dx^2 by diffusion.
        CHECK(f[2 * 6] == doctest::Approx(0.5 * 0.4 * 4.0));
        CHECK(f[2 * 8] == doctest::Approx(0.5 * 0.4 * 4.0));
        CHECK(f[2 * 7] == doctest::Approx(-2.0 * 0.5 * 0.4 * 4.0 + 0.4 * (1.0 - 0.4 - 0.5)));
    }
    SUBCASE("analytic Jacobian against finite differences")
    {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> d(0.0, 1.0);
        std::vector<double> y(40);
        for (double& x : y) {
            x = d(rng);
        }
        numerics::BandMatrix jac(40, 2, 3);
        sd.jacobian(y, jac);
        std::vector<double> f0(40), f1(40), yp = y;
        sd.rhs(y, f0);
        for (std::size_t j = 0; j < 40; ++j) {
            const double h = 1e-7;
            yp = y;
            yp[j] += h;
            sd.rhs(yp, f1);
            for (std::size_t i = 0; i < 40; ++i) {
                const double fd = (f1[i] - f0[i]) / h;
                const double an = jac.in_band(i, j) ? jac(i, j) : 0.0;
                CHECK(std::abs(fd - an) < 1e-5 * std::max(1.0, std::abs(an)));
            }
        }
    }
}

TEST_CASE("front location")
{
    const Grid1D g{10.0, 20};
    PdeState s;
    s.grid = g;
    s.u.assign(20, 0.0);
    s.v.assign(20, 0.0);
    for (std::size_t i = 0; i <= 9; ++i) {
        s.u[i] = 1.0;
    }
    CHECK(front_location(s) == doctest::Approx(0.5 * (g.x(9) + g.x(10))));

    const Grid1D fine{20.0, 400};
    PdeState lin;
    lin.grid = fine;
    for (std::size_t i = 0; i < fine.cells; ++i) {
        lin.u.push_back(std::max(0.0, 1.0 - fine.x(i) / 10.0));
    }
    CHECK(std::abs(front_location(lin) - 5.0) <= fine.dx());

    // Rightmost crossing wins.
    PdeState two = s;
    two.u[15] = 0.8;
    CHECK(front_location(two) > g.x(15));

    PdeState gone = s;
    gone.u.back() = 0.7;
    CHECK_THROWS_AS(front_location(gone), SolverError);
    PdeState extinct = s;
    extinct.u.assign(20, 0.1);
    CHECK_THROWS_AS(front_location(extinct), SolverError);
}

TEST_CASE("phase curve")
{
    const Grid1D g{10.0, 20};
    PdeState s = initial_state(InitialCondition::compact(0.3), g);
    const auto c = phase_curve(s);
    REQUIRE(c.size() == 20);
    for (const auto& [u, v] : c) {
        CHECK(v == 0.3);
        CHECK((u == 0.0 || u == 1.0));
    }
    s.u.assign(20, 1.0);
    s.v.assign(20, 0.0);
    for (const auto& [u, v] : phase_curve(s)) {
        CHECK(u == 1.0);
        CHECK(v == 0.0);
    }
}

TEST_CASE("run invariants on a small domain")
{
    const Grid1D g{40.0, 800};
    const model::ModelParams p{10.0, 0.5};
    std::vector<double> outs;
    for (int k = 0; k <= 20; ++k) {
        outs.push_back(0.5 * k);
    }
    RunOptions opt;
    const RunResult r = run(p, InitialCondition::compact(0.5), g, 10.0, outs, opt);
    REQUIRE(r.states.size() == outs.size());
    const double slack = 10.0 * opt.tol.abs;
    for (std::size_t k = 0; k < r.states.size(); ++k) {
        CHECK(r.states[k].t == outs[k]);
        CHECK(*std::min_element(r.states[k].u.begin(), r.states[k].u.end()) >= -slack);
        CHECK(*std::min_element(r.states[k].v.begin(), r.states[k].v.end()) >= -slack);
        if (k > 0) {
            for (std::size_t i = 0; i < g.cells; ++i) {
                CHECK(r.states[k].v[i] <= r.states[k - 1].v[i] + slack);
            }
        }
    }
    const auto& tr = r.trace.samples;
    REQUIRE(tr.size() > 20);
    for (std::size_t i = 1; i < tr.size(); ++i) {
        CHECK(tr[i].t > tr[i - 1].t);
        if (tr[i].t > 2.0) {
            CHECK(tr[i].x_f >= tr[i - 1].x_f);
        }
    }
    CHECK(r.final_state.t == 10.0);
    CHECK_FALSE(r.guard_hit);

    SUBCASE("scalar and AVX2 kernels give the same run")
    {
        RunOptions scalar = opt;
        scalar.isa = kernels::Isa::scalar;
        const RunResult a = run(p, InitialCondition::compact(0.5), g, 10.0, outs, scalar);
        CHECK(a.final_state.u == r.final_state.u);
        CHECK(a.final_state.v == r.final_state.v);
    }
}

TEST_CASE("Fisher-KPP reduction")
{
    const Grid1D g{60.0, 1200};
    const std::vector<double> outs{1.0, 5.0, 10.0, 20.0};
    const RunResult two = run({4.0, 0.0}, InitialCondition::compact(0.0), g, 20.0, outs);
    const RunResult one = run_fisher_kpp(InitialCondition::compact(0.0), g, 20.0, outs);
    REQUIRE(two.states.size() == outs.size());
    REQUIRE(one.states.size() == outs.size());
    for (std::size_t k = 0; k < outs.size(); ++k) {
        double diff = 0.0;
        for (std::size_t i = 0; i < g.cells; ++i) {
            diff = std::max(diff, std::abs(two.states[k].u[i] - one.states[k].u[i]));
            CHECK(two.states[k].v[i] == 0.0);
        }
        CHECK(diff < 1e-8);
    }
}

TEST_CASE("domain guard")
{
    const Grid1D g{20.0, 400};
    const model::ModelParams p{1.0, 0.0};
    try {
        run(p, InitialCondition::compact(0.0), g, 30.0, {});
        FAIL("expected DomainGuardError");
    } catch (const DomainGuardError& e) {
        const RunResult& part = e.partial();
        REQUIRE(part.guard_hit);
        CHECK(part.trace.samples.back().x_f > 18.0);
        CHECK(part.final_state.t < 30.0);
    }
    RunOptions trunc;
    trunc.guard = GuardPolicy::truncate;
    const RunResult r = run(p, InitialCondition::compact(0.0), g, 30.0, {}, trunc);
    CHECK(r.guard_hit);
    CHECK(r.final_state.t < 30.0);
    CHECK(r.trace.samples.back().x_f > 18.0);

    CHECK_THROWS_AS(run(p, InitialCondition::compact(0.5), g, 1.0, {}), DomainError);
    CHECK_THROWS_AS(run(p, InitialCondition::compact(0.0), g, 0.0, {}), DomainError);
    const std::vector<double> late{2.0};
    CHECK_THROWS_AS(run(p, InitialCondition::compact(0.0), g, 1.0, late), DomainError);
}

TEST_CASE("late-time front on the reference grid")
{
    // Compact data, gamma = 1, v0 = 0.5 on L = 150, N = 6000.
    const Grid1D g{150.0, 6000};
    const std::vector<double> outs{60.0};
    const RunResult r = run({1.0, 0.5}, InitialCondition::compact(0.5), g, 60.0, outs);
    const speedfit::SpeedFit f = speedfit::fit_speed(r.trace, speedfit::default_window(r.trace));
    CHECK(f.c == doctest::Approx(1.0).epsilon(0.03));
    const PdeState& s = r.states.front();
    const double xf = front_location(s);
    CHECK(std::abs(xf - (f.c * 60.0 + f.k0 * std::log(60.0) + f.k1)) < 0.05);
    // Rear equilibrium behind the front.
    for (std::size_t i = 0; i < g.cells / 4; ++i) {
        CHECK(std::abs(s.u[i] - 1.0) < 1e-3);
        CHECK(s.v[i] < 1e-3);
    }
}
