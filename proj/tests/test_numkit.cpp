#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "asymkit/numkit.hpp"
#include "asymkit/rng.hpp"

using namespace asymkit;

TEST_CASE("herm_eig reconstructs and sorts ascending") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const CMatrix h = rng.hermitian(1 + rng.index(6));
    const EigResult e = herm_eig(h);
    for (Eigen::Index i = 1; i < e.values.size(); ++i) CHECK(e.values(i - 1) <= e.values(i));
    CHECK(max_abs(e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint() - h) < 1e-12);
    CHECK(max_abs(e.vectors.adjoint() * e.vectors - CMatrix::Identity(h.rows(), h.rows())) < 1e-12);
  }
}

TEST_CASE("pinv satisfies the Penrose conditions on rank-deficient input") {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 2 + rng.index(5);
    const CMatrix g = rng.ginibre(n, 1 + rng.index(n - 1));
    const CMatrix a = g * g.adjoint();  // Hermitian, rank deficient
    const CMatrix p = pinv(a);
    CHECK(max_abs(a * p * a - a) < 1e-9);
    CHECK(max_abs(p * a * p - p) < 1e-9 * (1 + max_abs(p)));
    CHECK(max_abs((a * p).adjoint() - a * p) < 1e-9);
    CHECK(max_abs((p * a).adjoint() - p * a) < 1e-9);
  }
}

TEST_CASE("psd_sqrt squares back and rejects indefinite input") {
  Rng rng(3);
  const CMatrix rho = rng.density(4, 2);
  const CMatrix s = psd_sqrt(rho);
  CHECK(max_abs(s * s - rho) < 1e-12);
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(1, 1) = -0.5;
  CHECK_THROWS_AS(psd_sqrt(bad), Error);
}

TEST_CASE("state_distance on pure states follows the closed form") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index d = 2 + rng.index(4);
    const CVector a = rng.pure_state(d), b = rng.pure_state(d);
    const double f = std::norm(a.dot(b));
    const Distance dist = state_distance(projector(a), projector(b));
    CHECK(dist.fidelity == doctest::Approx(f).epsilon(1e-9));
    CHECK(dist.trace_distance == doctest::Approx(std::sqrt(1 - f)).epsilon(1e-9));
  }
  const CMatrix rho = rng.density(3, 3);
  const Distance self = state_distance(rho, rho);
  CHECK(self.trace_distance < 1e-12);
  CHECK(self.fidelity == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("kernel_split separates by relative threshold") {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 2.0;
  m(1, 1) = 1e-13;
  m(2, 2) = 0.5;
  const KernelSplit ks = kernel_split(m);
  CHECK(ks.support.cols() == 2);
  CHECK(ks.kernel.cols() == 1);
  CHECK(std::abs(ks.kernel(1, 0)) == doctest::Approx(1.0));
  // an absolute scale turns a tiny matrix into pure kernel
  const KernelSplit tiny = kernel_split(1e-14 * CMatrix::Identity(2, 2), {}, 1.0);
  CHECK(tiny.kernel.cols() == 2);
}

TEST_CASE("tensor helpers and the dimension cap") {
  Rng rng(5);
  const CMatrix a = rng.hermitian(2);
  const CMatrix p3 = tensor_power(a, 3);
  CHECK(p3.rows() == 8);
  CHECK(max_abs(p3 - tensor_product(a, tensor_product(a, a))) < 1e-14);
  // iid_sum of a traceless term has trace zero and commutes with the power
  const CMatrix s = iid_sum(a, 3);
  const CMatrix i2 = CMatrix::Identity(2, 2);
  const CMatrix manual = tensor_product(a, tensor_product(i2, i2)) +
                         tensor_product(i2, tensor_product(a, i2)) +
                         tensor_product(i2, tensor_product(i2, a));
  CHECK(max_abs(s - manual) < 1e-14);

  setenv("ASYMKIT_TENSOR_CAP", "16", 1);
  CHECK(tensor_cap() == 16);
  try {
    (void)tensor_power(a, 5);
    FAIL("expected a cap error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Cap);
  }
  unsetenv("ASYMKIT_TENSOR_CAP");
  CHECK(tensor_cap() == 4096);
}

TEST_CASE("entropy and validation helpers") {
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)));
  CHECK(binary_entropy(0.0) == 0.0);
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 0.3;
  rho(1, 1) = 0.7;
  CHECK(entropy(rho) == doctest::Approx(binary_entropy(0.3)).epsilon(1e-12));
  CHECK_THROWS_AS(require_density(2.0 * rho, {}, "rho"), Error);
  CVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(require_pure_state(v, {}, "v"), Error);
  CMatrix nonh = CMatrix::Zero(2, 2);
  nonh(0, 1) = 1.0;
  CHECK_FALSE(is_hermitian(nonh));
  CMatrix nan = CMatrix::Identity(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(require_finite(nan, "m"), Error);
}
