#include <doctest.h>

#include <cstdlib>
#include <string>

#include "asymkit/kernels.hpp"
#include "asymkit/numkit.hpp"
#include "asymkit/rng.hpp"

using namespace asymkit;

namespace {

CMatrix naive_product(const CMatrix& a, const CMatrix& b) {
  CMatrix c = CMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

CMatrix naive_kron(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return c;
}

}  // namespace

TEST_CASE("scalar zgemm matches a triple loop") {
  Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    const auto m = 1 + static_cast<std::size_t>(rng.index(9));
    const auto k = 1 + static_cast<std::size_t>(rng.index(9));
    const auto n = 1 + static_cast<std::size_t>(rng.index(9));
    const CMatrix a = rng.ginibre(m, k), b = rng.ginibre(k, n);
    CMatrix c(m, n);
    kernels::zgemm_scalar(a.data(), b.data(), c.data(), m, k, n);
    CHECK(max_abs(c - naive_product(a, b)) < 1e-12);
  }
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!kernels::avx2_supported()) {
    MESSAGE("AVX2 not available on this machine; equivalence check skipped");
    return;
  }
  Rng rng(12);
  for (int t = 0; t < 60; ++t) {
    // odd sizes exercise the remainder lanes
    const auto m = 1 + static_cast<std::size_t>(rng.index(13));
    const auto k = 1 + static_cast<std::size_t>(rng.index(13));
    const auto n = 1 + static_cast<std::size_t>(rng.index(13));
    const CMatrix a = rng.ginibre(m, k), b = rng.ginibre(k, n);
    CMatrix cs(m, n), cv(m, n);
    kernels::zgemm_scalar(a.data(), b.data(), cs.data(), m, k, n);
    kernels::zgemm_avx2(a.data(), b.data(), cv.data(), m, k, n);
    CHECK(max_abs(cs - cv) < 1e-12);

    const CMatrix x = rng.ginibre(m, n), y = rng.ginibre(k, 1 + rng.index(4));
    CMatrix ks(x.rows() * y.rows(), x.cols() * y.cols()), kv(ks.rows(), ks.cols());
    kernels::zkron_scalar(x.data(), m, n, y.data(), y.rows(), y.cols(), ks.data());
    kernels::zkron_avx2(x.data(), m, n, y.data(), y.rows(), y.cols(), kv.data());
    // FMA rounds once, so the two paths may differ in the last bit
    CHECK(max_abs(ks - kv) < 1e-14);
  }
}

TEST_CASE("dispatched products match naive references") {
  INFO("backend: " << kernels::backend_name(kernels::active_backend()));
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = rng.ginibre(1 + rng.index(7), 1 + rng.index(7));
    const CMatrix b = rng.ginibre(a.cols(), 1 + rng.index(7));
    CHECK(max_abs(matmul(a, b) - naive_product(a, b)) < 1e-12);
    const CMatrix c = rng.ginibre(1 + rng.index(4), 1 + rng.index(4));
    CHECK(max_abs(tensor_product(a, c) - naive_kron(a, c)) < 1e-15);
  }
}

TEST_CASE("scalar override is honoured") {
  const char* env = std::getenv("ASYMKIT_SIMD");
  if (env != nullptr && std::string(env) == "scalar")
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);
  else
    CHECK(kernels::active_backend() ==
          (kernels::avx2_supported() ? kernels::Backend::Avx2 : kernels::Backend::Scalar));
}
