#include <cstdlib>
#include <cstring>

#include "asymkit/kernels.hpp"

namespace asymkit::kernels {

bool avx2_compiled();

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  if (!avx2_compiled()) return false;
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {
Backend pick() {
  const char* env = std::getenv("ASYMKIT_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Backend::Scalar;
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}
}  // namespace

Backend active_backend() {
  static const Backend b = pick();
  return b;
}

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

void zgemm(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n) {
  if (active_backend() == Backend::Avx2)
    zgemm_avx2(a, b, c, m, k, n);
  else
    zgemm_scalar(a, b, c, m, k, n);
}

void zkron(const cplx* a, std::size_t ma, std::size_t na, const cplx* b, std::size_t mb,
           std::size_t nb, cplx* out) {
  if (active_backend() == Backend::Avx2)
    zkron_avx2(a, ma, na, b, mb, nb, out);
  else
    zkron_scalar(a, ma, na, b, mb, nb, out);
}

}  // namespace asymkit::kernels
