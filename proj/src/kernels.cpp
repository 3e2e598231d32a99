#include "unitsum/kernels.hpp"

#include <cstdlib>

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define UNITSUM_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#else
#define UNITSUM_HAVE_AVX2_BUILD 0
#endif

namespace unitsum::kernels {

namespace scalar {

void mod_add(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t t = a[i] + b[i];
        r[i] = t >= p ? t - p : t;
    }
}

void mod_sub(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t t = a[i] + p - b[i];
        r[i] = t >= p ? t - p : t;
    }
}

void mod_scale(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
               std::size_t n, std::uint32_t p) {
    for (std::size_t i = 0; i < n; ++i)
        r[i] = static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(c) * a[i]) % p);
}

void mod_axpy(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
              std::size_t n, std::uint32_t p) {
    for (std::size_t i = 0; i < n; ++i)
        r[i] = static_cast<std::uint32_t>(
            (r[i] + static_cast<std::uint64_t>(c) * a[i]) % p);
}

} // namespace scalar

#if UNITSUM_HAVE_AVX2_BUILD
namespace avx2 {

__attribute__((target("avx2"))) static inline __m256i
reduce_once(__m256i t, __m256i pv) {
    // values < 2p < 2^22, so min on the wrapped difference picks the residue
    return _mm256_min_epu32(t, _mm256_sub_epi32(t, pv));
}

__attribute__((target("avx2")))
void mod_add(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p) {
    const __m256i pv = _mm256_set1_epi32(static_cast<int>(p));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i t = _mm256_add_epi32(va, vb);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(r + i),
                            reduce_once(t, pv));
    }
    scalar::mod_add(r + i, a + i, b + i, n - i, p);
}

__attribute__((target("avx2")))
void mod_sub(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p) {
    const __m256i pv = _mm256_set1_epi32(static_cast<int>(p));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i t = _mm256_add_epi32(_mm256_sub_epi32(va, vb), pv);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(r + i),
                            reduce_once(t, pv));
    }
    scalar::mod_sub(r + i, a + i, b + i, n - i, p);
}

// Reduces four 64-bit lanes < p^2 + p modulo p.  The quotient fits in 21
// bits, so v and q*p are exact as doubles; one correction each way absorbs
// the possible off-by-one of the floating floor.
__attribute__((target("avx2"))) static inline __m256i
reduce_mod_epi64(__m256i v, __m256i pv64, __m256d pd_inv) {
    const __m256d magic = _mm256_set1_pd(4503599627370496.0); // 2^52
    const __m256i magic_bits = _mm256_castpd_si256(magic);
    __m256d vd = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(v, magic_bits)), magic);
    __m256d qd = _mm256_floor_pd(_mm256_mul_pd(vd, pd_inv));
    __m256i q = _mm256_sub_epi64(
        _mm256_castpd_si256(_mm256_add_pd(qd, magic)), magic_bits);
    __m256i rem = _mm256_sub_epi64(v, _mm256_mul_epu32(q, pv64));
    __m256i neg = _mm256_cmpgt_epi64(_mm256_setzero_si256(), rem);
    rem = _mm256_add_epi64(rem, _mm256_and_si256(neg, pv64));
    __m256i ge = _mm256_cmpgt_epi64(rem, _mm256_sub_epi64(pv64, _mm256_set1_epi64x(1)));
    rem = _mm256_sub_epi64(rem, _mm256_and_si256(ge, pv64));
    return rem;
}

__attribute__((target("avx2"))) static inline void
scale_axpy_block(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
                 std::size_t n, std::uint32_t p, bool accumulate) {
    const __m256i pv64 = _mm256_set1_epi64x(p);
    const __m256i cv64 = _mm256_set1_epi64x(c);
    const __m256d pd_inv = _mm256_set1_pd(1.0 / static_cast<double>(p));
    const __m256i pack_idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i a32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i));
        __m256i a64 = _mm256_cvtepu32_epi64(a32);
        __m256i acc = _mm256_mul_epu32(a64, cv64);
        if (accumulate) {
            __m128i r32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(r + i));
            acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(r32));
        }
        __m256i rem = reduce_mod_epi64(acc, pv64, pd_inv);
        __m256i packed = _mm256_permutevar8x32_epi32(rem, pack_idx);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(r + i),
                         _mm256_castsi256_si128(packed));
    }
    if (accumulate)
        scalar::mod_axpy(r + i, a + i, c, n - i, p);
    else
        scalar::mod_scale(r + i, a + i, c, n - i, p);
}

__attribute__((target("avx2")))
void mod_scale(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
               std::size_t n, std::uint32_t p) {
    scale_axpy_block(r, a, c, n, p, false);
}

__attribute__((target("avx2")))
void mod_axpy(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
              std::size_t n, std::uint32_t p) {
    scale_axpy_block(r, a, c, n, p, true);
}

} // namespace avx2
#else
namespace avx2 {
void mod_add(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p) { scalar::mod_add(r, a, b, n, p); }
void mod_sub(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p) { scalar::mod_sub(r, a, b, n, p); }
void mod_scale(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
               std::size_t n, std::uint32_t p) { scalar::mod_scale(r, a, c, n, p); }
void mod_axpy(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
              std::size_t n, std::uint32_t p) { scalar::mod_axpy(r, a, c, n, p); }
} // namespace avx2
#endif

bool avx2_available() {
#if UNITSUM_HAVE_AVX2_BUILD
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

namespace {

struct Dispatch {
    Backend which;
    void (*add)(std::uint32_t*, const std::uint32_t*, const std::uint32_t*,
                std::size_t, std::uint32_t);
    void (*sub)(std::uint32_t*, const std::uint32_t*, const std::uint32_t*,
                std::size_t, std::uint32_t);
    void (*scale)(std::uint32_t*, const std::uint32_t*, std::uint32_t,
                  std::size_t, std::uint32_t);
    void (*axpy)(std::uint32_t*, const std::uint32_t*, std::uint32_t,
                 std::size_t, std::uint32_t);
};

const Dispatch& dispatch() {
    static const Dispatch d = [] {
        const char* force = std::getenv("UNITSUM_FORCE_SCALAR");
        bool scalar_only = force && force[0] == '1';
        if (!scalar_only && avx2_available())
            return Dispatch{Backend::Avx2, avx2::mod_add, avx2::mod_sub,
                            avx2::mod_scale, avx2::mod_axpy};
        return Dispatch{Backend::Scalar, scalar::mod_add, scalar::mod_sub,
                        scalar::mod_scale, scalar::mod_axpy};
    }();
    return d;
}

} // namespace

Backend active_backend() { return dispatch().which; }

void mod_add(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p) {
    dispatch().add(r, a, b, n, p);
}

void mod_sub(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p) {
    dispatch().sub(r, a, b, n, p);
}

void mod_scale(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
               std::size_t n, std::uint32_t p) {
    dispatch().scale(r, a, c, n, p);
}

void mod_axpy(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
              std::size_t n, std::uint32_t p) {
    dispatch().axpy(r, a, c, n, p);
}

} // namespace unitsum::kernels
