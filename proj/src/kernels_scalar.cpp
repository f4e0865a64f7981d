#include <cstring>

#include "asymkit/kernels.hpp"

namespace asymkit::kernels {

// Plain real arithmetic on the (re, im) pairs; std::complex operator* would
// route through the NaN-recovering libgcc helper.
void zgemm_scalar(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                  std::size_t n) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  std::memset(cd, 0, sizeof(double) * 2 * m * n);
  for (std::size_t j = 0; j < n; ++j) {
    double* ccol = cd + 2 * m * j;
    for (std::size_t p = 0; p < k; ++p) {
      const double br = bd[2 * (p + k * j)];
      const double bi = bd[2 * (p + k * j) + 1];
      if (br == 0.0 && bi == 0.0) continue;
      const double* acol = ad + 2 * m * p;
      for (std::size_t i = 0; i < m; ++i) {
        const double ar = acol[2 * i];
        const double ai = acol[2 * i + 1];
        ccol[2 * i] += ar * br - ai * bi;
        ccol[2 * i + 1] += ar * bi + ai * br;
      }
    }
  }
}

void zkron_scalar(const cplx* a, std::size_t ma, std::size_t na, const cplx* b, std::size_t mb,
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
        double* seg = ocol + 2 * mb * ia;
        for (std::size_t ib = 0; ib < mb; ++ib) {
          const double yr = bcol[2 * ib];
          const double yi = bcol[2 * ib + 1];
          seg[2 * ib] = xr * yr - xi * yi;
          seg[2 * ib + 1] = xr * yi + xi * yr;
        }
      }
    }
  }
}

}  // namespace asymkit::kernels
