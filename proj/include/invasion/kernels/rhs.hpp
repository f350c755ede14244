#pragma once

// Finite-volume right-hand sides on a uniform cell-centred grid with
// zero-flux ends.
//
// Two-species state is interleaved per cell, y = [u0, v0, u1, v1, ...], so the
// Jacobian is banded with two sub- and three super-diagonals. Face
// diffusivity is 1 - (v_i + v_{i+1}) / 2.
//
// The SIMD variant evaluates exactly the same floating-point operations in the
// same order as the scalar one (no FMA contraction), so the two agree bitwise.

#include <cstddef>
#include <span>
#include <string_view>

namespace invasion::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Best variant the running CPU supports.
Isa detect_isa();

/// du/dt, dv/dt for the interleaved two-species state of `cells` cells.
void two_species_rhs(Isa isa, std::span<const double> y, std::span<double> dydt, double inv_dx2, double gamma);

void two_species_rhs_scalar(std::span<const double> y, std::span<double> dydt, double inv_dx2, double gamma);
#if defined(__x86_64__) || defined(_M_X64)
void two_species_rhs_avx2(std::span<const double> y, std::span<double> dydt, double inv_dx2, double gamma);
#endif

/// Single-species Fisher-KPP: the two-species stencil with every v term
/// deleted. Kept separate so it can serve as an independent reference.
void fisher_kpp_rhs(std::span<const double> u, std::span<double> dudt, double inv_dx2);

}  // namespace invasion::kernels
