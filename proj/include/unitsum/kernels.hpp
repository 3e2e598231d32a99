#pragma once

#include <cstddef>
#include <cstdint>

// Vector kernels for arrays of residues mod p (p < 2^21, residues reduced).
// A scalar reference implementation and an AVX2 variant are both compiled in;
// the active backend is selected once at startup.  The per-backend entry
// points stay exported so tests can compare them element for element.

namespace unitsum::kernels {

enum class Backend { Scalar, Avx2 };

// Backend chosen by the dispatcher (honours UNITSUM_FORCE_SCALAR=1).
Backend active_backend();
bool avx2_available();

// r[i] = (a[i] + b[i]) mod p.  r may alias a or b.
void mod_add(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p);
// r[i] = (a[i] - b[i]) mod p.
void mod_sub(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p);
// r[i] = (c * a[i]) mod p, with c already reduced mod p.
void mod_scale(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
               std::size_t n, std::uint32_t p);
// r[i] = (r[i] + c * a[i]) mod p, with c already reduced mod p.
void mod_axpy(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
              std::size_t n, std::uint32_t p);

namespace scalar {
void mod_add(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p);
void mod_sub(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p);
void mod_scale(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
               std::size_t n, std::uint32_t p);
void mod_axpy(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
              std::size_t n, std::uint32_t p);
} // namespace scalar

namespace avx2 {
// Callable only when avx2_available() is true.
void mod_add(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p);
void mod_sub(std::uint32_t* r, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t n, std::uint32_t p);
void mod_scale(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
               std::size_t n, std::uint32_t p);
void mod_axpy(std::uint32_t* r, const std::uint32_t* a, std::uint32_t c,
              std::size_t n, std::uint32_t p);
} // namespace avx2

} // namespace unitsum::kernels
