#include <doctest.h>

#include <cmath>

#include "asymkit/core.hpp"
#include "asymkit/numkit.hpp"
#include "asymkit/repkit.hpp"
#include "asymkit/rng.hpp"

using namespace asymkit;

namespace {

// QGT from central differences of the orbit theta -> e^{i theta.X} psi.
CMatrix qgt_finite_difference(const Representation& rep, const CVector& psi) {
  const int m = rep.dim_g();
  const double h = 1e-5;
  std::vector<CVector> d;
  for (int mu = 0; mu < m; ++mu) {
    std::vector<double> tp(m, 0.0), tm(m, 0.0);
    tp[mu] = h;
    tm[mu] = -h;
    const CVector plus = unitary_at(rep, tp, 0) * psi;
    const CVector minus = unitary_at(rep, tm, 0) * psi;
    d.push_back((plus - minus) / (2 * h));
  }
  CMatrix q(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) q(a, b) = d[a].dot(d[b]) - d[a].dot(psi) * psi.dot(d[b]);
  return q;
}

CVector ket(std::initializer_list<cplx> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (cplx x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("QGT matches finite differences of the orbit") {
  Rng rng(31);
  for (int tj : {1, 2, 3}) {
    const Representation rep = make_representation(spin_matrices(tj), "spin");
    for (int t = 0; t < 5; ++t) {
      const CVector psi = rng.pure_state(tj + 1);
      const CMatrix q = qgt(rep, psi).matrix;
      CHECK(max_abs(q - qgt_finite_difference(rep, psi)) < 1e-8);
      CHECK(min_eigenvalue(q) > -1e-12);
    }
  }
}

TEST_CASE("Pauli QGT of |0> and |+>") {
  const Representation rep = make_representation(pauli_matrices(), "pauli");
  const double h = 1 / std::sqrt(2.0);
  const cplx i(0, 1);
  CMatrix q0(3, 3), qp(3, 3);
  q0 << 1, i, 0, -i, 1, 0, 0, 0, 0;
  qp << 0, 0, 0, 0, 1, i, 0, -i, 1;
  CHECK(max_abs(qgt(rep, ket({1, 0})).matrix - q0) < 1e-12);
  CHECK(max_abs(qgt(rep, ket({h, h})).matrix - qp) < 1e-12);
  // the opposite Berry sign convention is the complex conjugate
  CHECK(max_abs(qgt(rep, ket({1, 0})).matrix.conjugate() - q0.transpose()) < 1e-12);
}

TEST_CASE("QGT at a group point equals the QGT of the transported state") {
  Rng rng(32);
  const Representation rep = make_representation(spin_matrices(2), "spin1");
  const CVector psi = rng.pure_state(3);
  GroupPoint g;
  g.theta = {0.2, -0.5, 0.9};
  const CVector moved = unitary_at(rep, g) * psi;
  CHECK(max_abs(qgt(rep, psi, g).matrix - qgt(rep, moved).matrix) < 1e-12);
  // and it transforms by congruence
  const RMatrix v = congruence_matrix(rep, unitary_at(rep, g));
  const CMatrix vc = v.cast<cplx>();
  CHECK(max_abs(qgt(rep, moved).matrix - vc.transpose() * qgt(rep, psi).matrix * vc) < 1e-10);
}

TEST_CASE("S equals the QGT on pure states and vanishes on full rank") {
  Rng rng(33);
  const Representation rep = make_representation(spin_matrices(3), "spin3/2");
  for (int t = 0; t < 5; ++t) {
    const CVector psi = rng.pure_state(4);
    CHECK(max_abs(s_matrix(rep, projector(psi)).matrix - qgt(rep, psi).matrix) < 1e-10);
    const CMatrix full = rng.density(4, 4);
    CHECK(max_abs(s_matrix(rep, full).matrix) < 1e-12);
    // rank deficient mixed states are PSD
    CHECK(min_eigenvalue(s_matrix(rep, rng.density(4, 2)).matrix) > -1e-12);
  }
}

TEST_CASE("S_q on pure states is Q plus a weighted transpose") {
  Rng rng(34);
  const Representation rep = make_representation(spin_matrices(2), "spin1");
  for (double q : {0.2, 0.5, 0.8}) {
    MetricSpec spec;
    spec.q = q;
    const CVector psi = rng.pure_state(3);
    const CMatrix qg = qgt(rep, psi).matrix;
    const CMatrix sq = s_q_matrix(rep, projector(psi), spec).matrix;
    CHECK(max_abs(sq - (qg + ((1 - q) / q) * qg.transpose())) < 1e-10);
  }
  MetricSpec bad;
  bad.q = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("Petz norm closed form on pure states") {
  Rng rng(35);
  MetricSpec spec;
  spec.q = 0.3;
  const CVector psi = rng.pure_state(4);
  const CMatrix o = rng.ginibre(4, 4);
  const CMatrix perp = CMatrix::Identity(4, 4) - projector(psi);
  // l = psi, k in the kernel gives 1/(1-q); the swapped pair gives 1/q
  const double expected = (perp * o.adjoint() * psi).squaredNorm() / (1 - spec.q) +
                          (perp * o * psi).squaredNorm() / spec.q;
  const double got = petz_norm(projector(psi), o, spec);
  CHECK(got == doctest::Approx(expected).epsilon(1e-10));
  CHECK(petz_norm(CMatrix::Identity(4, 4) / 4.0, o, spec) == doctest::Approx(0.0));
}

TEST_CASE("skew information of a pure state is the variance at q = 1/2") {
  Rng rng(36);
  MetricSpec spec;
  const CVector psi = rng.pure_state(3);
  const CMatrix h = rng.hermitian(3);
  CHECK(skew_information(projector(psi), h, spec) ==
        doctest::Approx(generalized_variance(psi, h)).epsilon(1e-10));
}

TEST_CASE("relative entropy of asymmetry for the qubit formulas") {
  const double h = 1 / std::sqrt(2.0);
  U1Spec spec;
  spec.eigenvalues = {0, 1};
  spec.basis = (CMatrix(2, 2) << h, h, h, -h).finished();
  for (double q : {0.6, 0.8, 0.95}) {
    const CVector psi = ket({(std::sqrt(q) + std::sqrt(1 - q)) * h, (std::sqrt(q) - std::sqrt(1 - q)) * h});
    CHECK(u1_relative_entropy_asymmetry(spec, projector(psi)) ==
          doctest::Approx(binary_entropy(q)).epsilon(1e-12));
    for (double eps : {0.05, 0.3}) {
      const CMatrix rho = (1 - eps) * projector(psi) + eps / 2 * CMatrix::Identity(2, 2);
      // the mixture's spectrum is {1 - eps/2, eps/2}
      const double expected = binary_entropy(q * (1 - eps) + eps / 2) - binary_entropy(eps / 2);
      CHECK(u1_relative_entropy_asymmetry(spec, rho) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  CHECK(u1_relative_entropy_asymmetry(spec, CMatrix::Identity(2, 2) / 2.0) == doctest::Approx(0.0));
}

TEST_CASE("generalized variance and gamma dagger X") {
  const auto p = pauli_matrices();
  CVector g(3);
  g << 1.0, cplx(0, 1), 0.0;
  const CMatrix o = gamma_dagger_x(p, g);
  CHECK(max_abs(o - (p[0] - cplx(0, 1) * p[1])) < 1e-15);
  // sigma_x - i sigma_y = 2 |1><0|; the variance is taken of O^dagger acting on the state
  CHECK(generalized_variance(ket({1, 0}), o) == doctest::Approx(0.0));
  CHECK(generalized_variance(ket({0, 1}), o) == doctest::Approx(4.0));
}
