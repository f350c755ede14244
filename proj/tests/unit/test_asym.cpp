#include "invasion/asym.hpp"
#include "invasion/error.hpp"
#include "invasion/model.hpp"
#include "invasion/tw.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace invasion;
using namespace invasion::asym;

TEST_CASE("outer wave")
{
    const OuterWave o = outer_wave();
    CHECK(std::abs(o.a0 - 0.1419) <= 0.0005);
    CHECK(o.a0 == doctest::Approx(std::exp(o.ell_limit)));
    REQUIRE(o.samples.size() > 10);
    CHECK(o.samples.front().u < 1.0);
    CHECK(o.samples.front().u > 1.0 - 1e-5);
    for (std::size_t i = 1; i < o.samples.size(); ++i) {
        CHECK(o.samples[i].u < o.samples[i - 1].u);
        CHECK(o.samples[i].u > 0.0);
    }
    // Tail U ~ A0 z e^-z gives U + W ~ A0 e^-z > 0.
    for (const OuterSample& s : o.samples) {
        if (s.u < 0.5) {
            CHECK(s.u + s.w > 0.0);
        }
    }
    // Cauchy tail up to the plateau.
    REQUIRE(o.ell_trace.size() >= 5);
    const double last = o.ell_trace.back().ell;
    CHECK(std::abs(o.ell_trace[o.ell_trace.size() - 2].ell - last) < 1e-8);
    CHECK(o.z_plateau <= 80.0);
}

TEST_CASE("A0 does not depend on where the orbit is entered")
{
    const OuterWave o = outer_wave();
    for (double frac : {0.1, 0.3, 0.5, 0.7}) {
        CAPTURE(frac);
        const OuterSample& s = o.samples[static_cast<std::size_t>(frac * static_cast<double>(o.samples.size()))];
        const OuterWave r = outer_wave_from(s.u, s.w);
        CHECK(std::abs(r.a0 - o.a0) <= 1e-6 * o.a0);
    }
    for (double eps : {1e-8, 1e-7, 1e-5}) {
        CAPTURE(eps);
        LimitOptions opt;
        opt.eps = eps;
        CHECK(std::abs(outer_wave(opt).a0 - o.a0) <= 1e-6 * o.a0);
    }
}

TEST_CASE("inner constants")
{
    CHECK(inner_wave(0.25).a_inner == doctest::Approx(0.515).epsilon(0.005));
    CHECK(inner_wave(0.5).a_inner == doctest::Approx(1.485).epsilon(0.005));
    CHECK(inner_wave(0.75).a_inner == doctest::Approx(2.943).epsilon(0.005));

    double prev = 0.0;
    for (double v : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        CAPTURE(v);
        const InnerWave w = inner_wave(v);
        CHECK(w.a_inner > prev);
        prev = w.a_inner;
        CHECK(w.lambda == model::lambda_inner(v));
        for (std::size_t i = 0; i < w.samples.size(); ++i) {
            CHECK(w.samples[i].u > 0.0);
            CHECK(w.samples[i].v < v);
            if (i > 0) {
                // V underflows to 0 far behind the front, hence >= rather than >.
                CHECK(w.samples[i].z > w.samples[i - 1].z);
                CHECK(w.samples[i].v >= w.samples[i - 1].v);
            }
        }
    }
    CHECK_THROWS_AS(inner_wave(0.5, LimitOptions{.eps = 0.1}), DomainError);

    const AsymptoticConstants k = constants(0.5);
    CHECK(k.a0 == doctest::Approx(outer_wave().a0));
    CHECK(k.a_inner == doctest::Approx(inner_wave(0.5).a_inner));
}

TEST_CASE("inner seed is an eigenvector")
{
    for (double v : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        CAPTURE(v);
        for (double r : inner_seed_residual(v)) {
            CHECK(std::abs(r) <= 1e-10);
        }
        // Independently: Lambda is the negative root of det(J - l I) for the
        // inner linearisation, i.e. l (l^2 + 2 l / (1 - V) + 1) = 0.
        const double l = model::lambda_inner(v);
        CHECK(l < 0.0);
        CHECK(std::abs(l * l + 2.0 * l / (1.0 - v) + 1.0) < 1e-12);
        CHECK(l < -1.0 / (1.0 - v) + 1e-12);
    }
}

TEST_CASE("intermediate profile")
{
    const double a0 = 0.1419;
    const std::vector<double> z{0.001, 0.01, 2.0};
    const std::vector<double> um = intermediate_profile(1e-4, 0.0, a0, z);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(um[i] == doctest::Approx(a0 * z[i] * std::exp(-z[i])).epsilon(1e-6));
    }
    // Exact solution of U'' + 2 U' + (1 + delta) U = 0, so the front equation
    // U'' + (2 - delta) U' + U = 0 is met up to -delta (U' + U). Central differences.
    const double delta = 0.3, z0 = 1.5, h = 1e-3;
    for (double x : {2.0, 3.0, 5.0}) {
        CAPTURE(x);
        const std::vector<double> pts{x - h, x, x + h};
        const auto f = intermediate_profile(delta, z0, a0, pts);
        const double d2 = (f[2] - 2.0 * f[1] + f[0]) / (h * h);
        const double d1 = (f[2] - f[0]) / (2.0 * h);
        CHECK(std::abs(d2 + 2.0 * d1 + (1.0 + delta) * f[1]) < 1e-6);
        CHECK(std::abs(d2 + (2.0 - delta) * d1 + f[1] + delta * (d1 + f[1])) < 1e-6);
    }
    CHECK(intermediate_first_zero(std::numbers::pi * std::numbers::pi / 100.0, 0.0) == doctest::Approx(10.0));
    const double zf = intermediate_first_zero(delta, z0);
    const std::vector<double> around{zf - 1e-3, zf + 1e-3};
    const auto s = intermediate_profile(delta, z0, a0, around);
    CHECK(s[0] > 0.0);
    CHECK(s[1] < 0.0);
    CHECK_THROWS_AS(intermediate_profile(1.0, 0.0, a0, z), DomainError);
    CHECK_THROWS_AS(intermediate_first_zero(0.0, 0.0), DomainError);
}

TEST_CASE("matching report")
{
    SUBCASE("equal prefactors remove the correction")
    {
        const double g = std::exp(10.0);
        tw::BranchPoint b;
        b.gamma = g;
        b.v_inf = 0.5;
        b.c = 1.9;
        const MatchReport m = validate_matching(g, 0.5, b, 0.2, 0.2);
        CHECK(m.delta_two == doctest::Approx(m.delta_one).epsilon(1e-15));
        CHECK(m.delta_one == doctest::Approx(std::numbers::pi * std::numbers::pi / 100.0));
        CHECK(m.delta_num == doctest::Approx(0.1));
        CHECK(m.delta1 == doctest::Approx(0.1 - std::numbers::pi * std::numbers::pi / 100.0));
        CHECK(m.ratio == doctest::Approx(10.0 / (std::numbers::pi * std::numbers::pi)));
        CHECK_THROWS_AS(validate_matching(10.0, 0.5, b, 0.2, 0.2), DomainError);
    }
    SUBCASE("two-term prediction wins at large gamma")
    {
        const AsymptoticConstants k = constants(0.5);
        double prev_gap = 1.0;
        for (double g : {1e4, 1e6}) {
            CAPTURE(g);
            const MatchReport m = validate_matching(g, 0.5, tw::branch_speed(g, 0.5), k.a0, k.a_inner);
            CHECK(std::abs(m.err_two) < std::abs(m.err_one));
            CHECK(m.ratio > 0.7);
            CHECK(m.ratio < 1.3);
            CHECK(std::abs(m.ratio - 1.0) < prev_gap);
            prev_gap = std::abs(m.ratio - 1.0);
        }
    }
}
