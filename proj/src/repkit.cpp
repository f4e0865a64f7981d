#include "asymkit/repkit.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "asymkit/numkit.hpp"

namespace asymkit {

void Representation::validate(const Tolerance& tol) const {
  if (dim < 1) fail_validation("representation '" + label + "': dim must be >= 1");
  if (generators.empty()) fail_validation("representation '" + label + "': needs >= 1 generator");
  for (const CMatrix& x : generators) {
    if (x.rows() != dim || x.cols() != dim)
      fail_validation("representation '" + label + "': generator has wrong shape");
    require_hermitian(x, tol, "generator");
  }
  if (component_reps.empty())
    fail_validation("representation '" + label + "': identity component missing");
  for (const CMatrix& g : component_reps) {
    if (g.rows() != dim || g.cols() != dim)
      fail_validation("representation '" + label + "': component representative has wrong shape");
    require_unitary(g, tol, "component representative");
  }
  if (max_abs(component_reps[0] - CMatrix::Identity(dim, dim)) > tol.tol_residual)
    fail_validation("representation '" + label + "': component 0 must be the identity");
}

void RepPair::validate(const Tolerance& tol) const {
  rep_in.validate(tol);
  rep_out.validate(tol);
  if (rep_in.dim_g() != rep_out.dim_g())
    fail_validation("representation pair: generator counts differ");
  if (component_pairs.empty()) fail_validation("representation pair: no component pairs");
  for (std::size_t i = 0; i < component_pairs.size(); ++i) {
    const ComponentPair& p = component_pairs[i];
    if (p.u_in.rows() != rep_in.dim || p.u_out.rows() != rep_out.dim)
      fail_validation("component pair " + std::to_string(i) + ": dimension mismatch");
    require_unitary(p.u_in, tol, "component pair u_in");
    require_unitary(p.u_out, tol, "component pair u_out");
  }
  const auto& p0 = component_pairs[0];
  if (max_abs(p0.u_in - CMatrix::Identity(rep_in.dim, rep_in.dim)) > tol.tol_residual ||
      max_abs(p0.u_out - CMatrix::Identity(rep_out.dim, rep_out.dim)) > tol.tol_residual)
    fail_validation("component pair 0 must be (I, I)");
}

void U1Spec::validate(const Tolerance& tol) const {
  if (eigenvalues.empty()) fail_validation("u1: eigenvalues empty");
  if (basis.rows() != static_cast<Eigen::Index>(eigenvalues.size()))
    fail_validation("u1: basis dimension does not match eigenvalue count");
  require_unitary(basis, tol, "u1 basis");
}

Representation make_representation(std::vector<CMatrix> generators, std::string label,
                                   std::vector<CMatrix> extra_components) {
  Representation r;
  if (generators.empty()) fail_validation("make_representation: no generators");
  r.dim = static_cast<int>(generators[0].rows());
  r.generators = std::move(generators);
  r.label = std::move(label);
  r.component_reps.push_back(CMatrix::Identity(r.dim, r.dim));
  for (auto& g : extra_components) r.component_reps.push_back(std::move(g));
  return r;
}

RepPair make_pair(Representation in, Representation out, std::vector<ComponentPair> extra_pairs) {
  RepPair p;
  const int di = in.dim, dout = out.dim;
  p.rep_in = std::move(in);
  p.rep_out = std::move(out);
  p.component_pairs.push_back({CMatrix::Identity(di, di), CMatrix::Identity(dout, dout)});
  for (auto& e : extra_pairs) p.component_pairs.push_back(std::move(e));
  return p;
}

CMatrix expm_i_hermitian(const CMatrix& h, const Tolerance& tol) {
  const EigResult e = herm_eig(h, tol);
  CVector ph(e.values.size());
  for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, e.values(i));
  return e.vectors * ph.asDiagonal() * e.vectors.adjoint();
}

CMatrix generator_combination(const Representation& rep, const std::vector<double>& theta) {
  CMatrix h = CMatrix::Zero(rep.dim, rep.dim);
  if (theta.empty()) return h;
  if (static_cast<int>(theta.size()) != rep.dim_g())
    fail_validation("theta has " + std::to_string(theta.size()) + " entries, expected " +
                    std::to_string(rep.dim_g()));
  for (std::size_t mu = 0; mu < theta.size(); ++mu) {
    if (!std::isfinite(theta[mu])) fail_validation("theta entries must be finite");
    h += theta[mu] * rep.generators[mu];
  }
  return h;
}

CMatrix unitary_at(const Representation& rep, const std::vector<double>& theta, int component_index,
                   const Tolerance& tol) {
  if (component_index < 0 || component_index >= static_cast<int>(rep.component_reps.size()))
    fail_validation("component index " + std::to_string(component_index) + " out of range");
  const CMatrix h = generator_combination(rep, theta);
  const CMatrix& g = rep.component_reps[static_cast<std::size_t>(component_index)];
  if (max_abs(h) == 0.0) return g;
  return expm_i_hermitian(h, tol) * g;
}

CMatrix unitary_at(const Representation& rep, const GroupPoint& g, const Tolerance& tol) {
  return unitary_at(rep, g.theta, g.component, tol);
}

Representation lift_projective(const Representation& rep, const Tolerance& tol) {
  rep.validate(tol);
  const int d = rep.dim;
  double total = 1.0;
  for (int i = 0; i < d; ++i) {
    total *= d;
    if (total > static_cast<double>(tensor_cap()))
      fail_cap("lift_projective: dimension d^d exceeds tensor cap " + std::to_string(tensor_cap()));
  }
  Representation out;
  out.dim = static_cast<int>(total);
  out.label = rep.label + "^lift";
  const CMatrix id = CMatrix::Identity(out.dim, out.dim);
  for (const CMatrix& x : rep.generators) out.generators.push_back(iid_sum(x, d) - x.trace() * id);
  for (const CMatrix& g : rep.component_reps) {
    const cplx det = g.determinant();
    out.component_reps.push_back(tensor_power(g, d) / det);
  }
  return out;
}

namespace {
RVector vectorize_real(const CMatrix& m) {
  const Eigen::Index n = m.size();
  RVector v(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(2 * i) = m.data()[i].real();
    v(2 * i + 1) = m.data()[i].imag();
  }
  return v;
}
}  // namespace

RMatrix congruence_matrix(const Representation& rep, const CMatrix& u, const Tolerance& tol) {
  rep.validate(tol);
  if (u.rows() != rep.dim) fail_validation("congruence_matrix: unitary has wrong dimension");
  require_unitary(u, tol, "congruence_matrix");
  const int m = rep.dim_g();
  RMatrix basis(2 * rep.dim * rep.dim, m);
  double xmax = 0.0;
  for (int mu = 0; mu < m; ++mu) {
    basis.col(mu) = vectorize_real(rep.generators[static_cast<std::size_t>(mu)]);
    xmax = std::max(xmax, max_abs(rep.generators[static_cast<std::size_t>(mu)]));
  }
  Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(basis);
  RMatrix v(m, m);
  double resid = 0.0;
  for (int mu = 0; mu < m; ++mu) {
    const RVector t =
        vectorize_real(u.adjoint() * rep.generators[static_cast<std::size_t>(mu)] * u);
    v.col(mu) = cod.solve(t);
    resid = std::max(resid, (basis * v.col(mu) - t).cwiseAbs().maxCoeff());
  }
  if (resid > tol.tol_residual * std::max(xmax, 1e-300))
    fail_precondition("congruence_matrix: element does not normalize the generator span (residual " +
                      std::to_string(resid) + ")");
  Eigen::JacobiSVD<RMatrix> svd(v);
  const RVector& s = svd.singularValues();
  if (s(s.size() - 1) <= tol.tol_kernel * s(0))
    fail_precondition("congruence_matrix: congruence matrix is singular");
  return v;
}

std::vector<CMatrix> projected_generators(const Representation& rep, const CVector& phi) {
  if (phi.size() != rep.dim) fail_validation("projected_generators: dimension mismatch");
  const CMatrix pi = projector(phi);
  const CMatrix perp = CMatrix::Identity(rep.dim, rep.dim) - pi;
  std::vector<CMatrix> out;
  for (const CMatrix& x : rep.generators) out.push_back(hermitize(perp * x * pi + pi * x * perp));
  return out;
}

Representation iid_generators(const Representation& rep, int n) {
  if (n < 1) fail_validation("iid_generators: n must be >= 1");
  if (n == 1) return rep;
  Representation out;
  out.label = rep.label + "^" + std::to_string(n);
  for (const CMatrix& x : rep.generators) out.generators.push_back(iid_sum(x, n));
  for (const CMatrix& g : rep.component_reps) out.component_reps.push_back(tensor_power(g, n));
  out.dim = static_cast<int>(out.generators[0].rows());
  return out;
}

U1Divisor u1_symmetry_divisor(const U1Spec& spec, const CMatrix& rho, const Tolerance& tol) {
  spec.validate(tol);
  if (rho.rows() != spec.basis.rows()) fail_validation("u1_symmetry_divisor: dimension mismatch");
  const CMatrix rb = spec.basis.adjoint() * rho * spec.basis;
  const double cut = tol.tol_kernel * std::max(max_abs(rb), 1e-300);
  long long g = 0;
  const Eigen::Index d = rb.rows();
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = j + 1; k < d; ++k) {
      const long long diff = std::llabs(spec.eigenvalues[static_cast<std::size_t>(j)] -
                                        spec.eigenvalues[static_cast<std::size_t>(k)]);
      if (diff != 0 && std::abs(rb(j, k)) > cut) g = std::gcd(g, diff);
    }
  if (g == 0) return std::nullopt;
  return g;
}

std::optional<U1Spec> u1_spec_from_rep(const Representation& rep, const Tolerance& tol) {
  if (rep.dim_g() != 1) return std::nullopt;
  const EigResult e = herm_eig(rep.generators[0], tol);
  const double base = e.values(0);
  U1Spec s;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double shifted = e.values(i) - base;
    const double r = std::round(shifted);
    if (std::abs(shifted - r) > 1e-8) return std::nullopt;
    s.eigenvalues.push_back(static_cast<long long>(r));
  }
  s.basis = e.vectors;
  return s;
}

CMatrix u1_hamiltonian(const U1Spec& spec) {
  RVector v(static_cast<Eigen::Index>(spec.eigenvalues.size()));
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = static_cast<double>(spec.eigenvalues[i]);
  return spec.basis * v.asDiagonal() * spec.basis.adjoint();
}

std::vector<CMatrix> spin_matrices(int two_j) {
  if (two_j < 0) fail_validation("spin_matrices: negative spin");
  const int d = two_j + 1;
  const double j = 0.5 * two_j;
  CMatrix jp = CMatrix::Zero(d, d), jz = CMatrix::Zero(d, d);
  // Basis ordered m = j, j-1, ..., -j.
  for (int a = 0; a < d; ++a) {
    const double m = j - a;
    jz(a, a) = m;
    if (a > 0) jp(a - 1, a) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const CMatrix jm = jp.adjoint();
  const CMatrix jx = 0.5 * (jp + jm);
  const CMatrix jy = (jp - jm) / cplx(0.0, 2.0);
  return {jx, jy, jz};
}

std::vector<CMatrix> pauli_matrices() {
  std::vector<CMatrix> s = spin_matrices(1);
  for (auto& m : s) m *= 2.0;
  return s;
}

}  // namespace asymkit
