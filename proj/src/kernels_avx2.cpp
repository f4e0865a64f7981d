#include "asymkit/kernels.hpp"

#if defined(ASYMKIT_HAVE_AVX2_TU) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace asymkit::kernels {
namespace {

// Rows [i0, m) of columns [j0, j0+nc) done with scalar arithmetic.
void tail_rows(const double* ad, const double* bd, double* cd, std::size_t m, std::size_t k,
               std::size_t i0, std::size_t j0, std::size_t nc) {
  for (std::size_t j = j0; j < j0 + nc; ++j) {
    for (std::size_t i = i0; i < m; ++i) {
      double sr = 0.0, si = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        const double ar = ad[2 * (i + m * p)], ai = ad[2 * (i + m * p) + 1];
        const double br = bd[2 * (p + k * j)], bi = bd[2 * (p + k * j) + 1];
        sr += ar * br - ai * bi;
        si += ar * bi + ai * br;
      }
      cd[2 * (i + m * j)] = sr;
      cd[2 * (i + m * j) + 1] = si;
    }
  }
}

// acc += a * b for two interleaved complex lanes:
//   re: ar*br - ai*bi, im: ai*br + ar*bi
inline __m256d cmadd(__m256d acc, __m256d a, __m256d a_sw, __m256d br, __m256d bis) {
  acc = _mm256_fmadd_pd(a, br, acc);
  return _mm256_fmadd_pd(a_sw, bis, acc);
}

template <int NC>
void block(const double* ad, const double* bd, double* cd, std::size_t m, std::size_t k,
           std::size_t i, std::size_t j0) {
  __m256d acc0[NC], acc1[NC];
  for (int c = 0; c < NC; ++c) {
    acc0[c] = _mm256_setzero_pd();
    acc1[c] = _mm256_setzero_pd();
  }
  for (std::size_t p = 0; p < k; ++p) {
    const double* acol = ad + 2 * (i + m * p);
    const __m256d a0 = _mm256_loadu_pd(acol);
    const __m256d a1 = _mm256_loadu_pd(acol + 4);
    const __m256d s0 = _mm256_permute_pd(a0, 0x5);
    const __m256d s1 = _mm256_permute_pd(a1, 0x5);
    for (int c = 0; c < NC; ++c) {
      const double* bp = bd + 2 * (p + k * (j0 + c));
      const __m256d br = _mm256_set1_pd(bp[0]);
      const __m256d bis = _mm256_set_pd(bp[1], -bp[1], bp[1], -bp[1]);
      acc0[c] = cmadd(acc0[c], a0, s0, br, bis);
      acc1[c] = cmadd(acc1[c], a1, s1, br, bis);
    }
  }
  for (int c = 0; c < NC; ++c) {
    double* cp = cd + 2 * (i + m * (j0 + c));
    _mm256_storeu_pd(cp, acc0[c]);
    _mm256_storeu_pd(cp + 4, acc1[c]);
  }
}

}  // namespace

void zgemm_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  const std::size_t m4 = m - m % 4;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    for (std::size_t i = 0; i < m4; i += 4) block<4>(ad, bd, cd, m, k, i, j);
    if (m4 < m) tail_rows(ad, bd, cd, m, k, m4, j, 4);
  }
  for (; j < n; ++j) {
    for (std::size_t i = 0; i < m4; i += 4) block<1>(ad, bd, cd, m, k, i, j);
    if (m4 < m) tail_rows(ad, bd, cd, m, k, m4, j, 1);
  }
}

void zkron_avx2(const cplx* a, std::size_t ma, std::size_t na, const cplx* b, std::size_t mb,
                std::size_t nb, cplx* out) {
  const std::size_t rows = ma * mb;
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* od = reinterpret_cast<double*>(out);
  for (std::size_t ja = 0; ja < na; ++ja) {
    for (std::size_t jb = 0; jb < nb; ++jb) {
      double* ocol = od + 2 * rows * (ja * nb + jb);
      const double* bcol = bd + 2 * mb * jb;
      for (std::size_t ia = 0; ia < ma; ++ia) {
        const double xr = ad[2 * (ia + ma * ja)];
        const double xi = ad[2 * (ia + ma * ja) + 1];
        const __m256d vr = _mm256_set1_pd(xr);
        const __m256d vis = _mm256_set_pd(xi, -xi, xi, -xi);
        double* seg = ocol + 2 * mb * ia;
        std::size_t ib = 0;
        for (; ib + 2 <= mb; ib += 2) {
          const __m256d y = _mm256_loadu_pd(bcol + 2 * ib);
          const __m256d ys = _mm256_permute_pd(y, 0x5);
          const __m256d r = _mm256_fmadd_pd(ys, vis, _mm256_mul_pd(y, vr));
          _mm256_storeu_pd(seg + 2 * ib, r);
        }
        for (; ib < mb; ++ib) {
          const double yr = bcol[2 * ib], yi = bcol[2 * ib + 1];
          seg[2 * ib] = xr * yr - xi * yi;
          seg[2 * ib + 1] = xr * yi + xi * yr;
        }
      }
    }
  }
}

bool avx2_compiled() { return true; }

}  // namespace asymkit::kernels

#else

namespace asymkit::kernels {

void zgemm_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                std::size_t n) {
  zgemm_scalar(a, b, c, m, k, n);
}

void zkron_avx2(const cplx* a, std::size_t ma, std::size_t na, const cplx* b, std::size_t mb,
                std::size_t nb, cplx* out) {
  zkron_scalar(a, ma, na, b, mb, nb, out);
}

bool avx2_compiled() { return false; }

}  // namespace asymkit::kernels

#endif
