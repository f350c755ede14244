#include "invasion/kernels/rhs.hpp"

#include "invasion/error.hpp"

namespace invasion::kernels {

std::string_view isa_name(Isa isa)
{
    switch (isa) {
    case Isa::scalar:
        return "scalar";
    case Isa::avx2:
        return "avx2";
    }
    return "unknown";
}

Isa detect_isa()
{
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
    if (__builtin_cpu_supports("avx2")) {
        return Isa::avx2;
    }
#endif
    return Isa::scalar;
}

void two_species_rhs(Isa isa, std::span<const double> y, std::span<double> dydt, double inv_dx2, double gamma)
{
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::avx2) {
        two_species_rhs_avx2(y, dydt, inv_dx2, gamma);
        return;
    }
#endif
    two_species_rhs_scalar(y, dydt, inv_dx2, gamma);
}

void two_species_rhs_scalar(std::span<const double> y, std::span<double> dydt, double inv_dx2, double gamma)
{
    const std::size_t n = y.size() / 2;
    if (y.size() != 2 * n || dydt.size() != y.size() || n < 2) {
        throw DomainError("two_species_rhs: state must hold (u, v) pairs for at least two cells");
    }
    double flux_left = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = y[2 * i];
        const double v = y[2 * i + 1];
        double flux_right = 0.0;
        if (i + 1 < n) {
            const double ur = y[2 * i + 2];
            const double vr = y[2 * i + 3];
            flux_right = (1.0 - 0.5 * (v + vr)) * (ur - u);
        }
        dydt[2 * i] = (flux_right - flux_left) * inv_dx2 + u * ((1.0 - u) - v);
        dydt[2 * i + 1] = -(gamma * u * v);
        flux_left = flux_right;
    }
}

void fisher_kpp_rhs(std::span<const double> u, std::span<double> dudt, double inv_dx2)
{
    const std::size_t n = u.size();
    if (dudt.size() != n || n < 2) {
        throw DomainError("fisher_kpp_rhs: need at least two cells");
    }
    double flux_left = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double flux_right = i + 1 < n ? u[i + 1] - u[i] : 0.0;
        dudt[i] = (flux_right - flux_left) * inv_dx2 + u[i] * (1.0 - u[i]);
        flux_left = flux_right;
    }
}

}  // namespace invasion::kernels
