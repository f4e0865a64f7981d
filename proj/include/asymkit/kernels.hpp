#pragma once

#include <cstddef>

#include "asymkit/types.hpp"

// Dense complex kernels on column-major buffers. Each operation has a scalar
// reference and an AVX2/FMA variant; the active one is picked once at
// startup from CPUID (ASYMKIT_SIMD=scalar forces the reference path).
namespace asymkit::kernels {

enum class Backend { Scalar, Avx2 };

// c (m x n) = a (m x k) * b (k x n); c must not alias a or b.
void zgemm_scalar(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                  std::size_t n);
void zgemm_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                std::size_t n);

// out (ma*mb x na*nb) = a (ma x na) kron b (mb x nb)
void zkron_scalar(const cplx* a, std::size_t ma, std::size_t na, const cplx* b, std::size_t mb,
                  std::size_t nb, cplx* out);
void zkron_avx2(const cplx* a, std::size_t ma, std::size_t na, const cplx* b, std::size_t mb,
                std::size_t nb, cplx* out);

bool avx2_supported();
Backend active_backend();
const char* backend_name(Backend b);

void zgemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n);
void zkron(const cplx* a, std::size_t ma, std::size_t na, const cplx* b, std::size_t mb,
           std::size_t nb, cplx* out);

}  // namespace asymkit::kernels
