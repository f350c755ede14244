// Compiled with -mavx2 only; callers must check detect_isa() first.

#include "invasion/kernels/rhs.hpp"

#include "invasion/error.hpp"

#include <immintrin.h>

namespace invasion::kernels {

namespace {

// [u0 v0 u1 v1] [u2 v2 u3 v3] -> [u0 u1 u2 u3], [v0 v1 v2 v3]
inline void load_cells(const double* p, __m256d& u, __m256d& v)
{
    const __m256d a = _mm256_loadu_pd(p);
    const __m256d b = _mm256_loadu_pd(p + 4);
    const __m256d lo = _mm256_permute2f128_pd(a, b, 0x20);  // u0 v0 u2 v2
    const __m256d hi = _mm256_permute2f128_pd(a, b, 0x31);  // u1 v1 u3 v3
    u = _mm256_unpacklo_pd(lo, hi);
    v = _mm256_unpackhi_pd(lo, hi);
}

inline void store_cells(double* p, __m256d du, __m256d dv)
{
    const __m256d lo = _mm256_unpacklo_pd(du, dv);  // du0 dv0 du2 dv2
    const __m256d hi = _mm256_unpackhi_pd(du, dv);  // du1 dv1 du3 dv3
    _mm256_storeu_pd(p, _mm256_permute2f128_pd(lo, hi, 0x20));
    _mm256_storeu_pd(p + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
}

inline double face_flux(const double* y, std::size_t left)
{
    const double u = y[2 * left];
    const double v = y[2 * left + 1];
    return (1.0 - 0.5 * (v + y[2 * left + 3])) * (y[2 * left + 2] - u);
}

inline void cell_scalar(const double* y, double* dydt, std::size_t i, std::size_t n, double inv_dx2, double gamma)
{
    const double u = y[2 * i];
    const double v = y[2 * i + 1];
    const double flux_left = i > 0 ? face_flux(y, i - 1) : 0.0;
    const double flux_right = i + 1 < n ? face_flux(y, i) : 0.0;
    dydt[2 * i] = (flux_right - flux_left) * inv_dx2 + u * ((1.0 - u) - v);
    dydt[2 * i + 1] = -(gamma * u * v);
}

}  // namespace

void two_species_rhs_avx2(std::span<const double> y, std::span<double> dydt, double inv_dx2, double gamma)
{
    const std::size_t n = y.size() / 2;
    if (y.size() != 2 * n || dydt.size() != y.size() || n < 2) {
        throw DomainError("two_species_rhs: state must hold (u, v) pairs for at least two cells");
    }
    const double* py = y.data();
    double* pd = dydt.data();

    cell_scalar(py, pd, 0, n, inv_dx2, gamma);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d vk = _mm256_set1_pd(inv_dx2);
    const __m256d vg = _mm256_set1_pd(gamma);
    const __m256d sign = _mm256_set1_pd(-0.0);

    // Interior blocks of four cells [i, i + 4) with both neighbours present.
    std::size_t i = 1;
    for (; i + 5 <= n; i += 4) {
        __m256d ul, vl, uc, vc, ur, vr;
        load_cells(py + 2 * (i - 1), ul, vl);
        load_cells(py + 2 * i, uc, vc);
        load_cells(py + 2 * (i + 1), ur, vr);
        const __m256d fl = _mm256_mul_pd(_mm256_sub_pd(one, _mm256_mul_pd(half, _mm256_add_pd(vl, vc))),
                                         _mm256_sub_pd(uc, ul));
        const __m256d fr = _mm256_mul_pd(_mm256_sub_pd(one, _mm256_mul_pd(half, _mm256_add_pd(vc, vr))),
                                         _mm256_sub_pd(ur, uc));
        const __m256d reac = _mm256_mul_pd(uc, _mm256_sub_pd(_mm256_sub_pd(one, uc), vc));
        const __m256d du = _mm256_add_pd(_mm256_mul_pd(_mm256_sub_pd(fr, fl), vk), reac);
        const __m256d dv = _mm256_xor_pd(_mm256_mul_pd(_mm256_mul_pd(vg, uc), vc), sign);
        store_cells(pd + 2 * i, du, dv);
    }
    for (; i < n; ++i) {
        cell_scalar(py, pd, i, n, inv_dx2, gamma);
    }
}

}  // namespace invasion::kernels
