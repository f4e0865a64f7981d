#include "asymkit/core.hpp"

#include <cmath>

#include "asymkit/numkit.hpp"

namespace asymkit {

void MetricSpec::validate() const {
  if (!(q > 0.0 && q < 1.0)) fail_validation("metric parameter q must lie in (0, 1)");
}

std::string tensor_kind_name(TensorKind k) {
  switch (k) {
    case TensorKind::QGT: return "QGT";
    case TensorKind::S: return "S";
    case TensorKind::Sq: return "S_q";
  }
  return "?";
}

CVector transport(const Representation& rep, const CVector& psi, const GroupPoint& g,
                  const Tolerance& tol) {
  if (psi.size() != rep.dim) fail_validation("state dimension does not match representation");
  if (g.component == 0 && g.theta.empty()) return psi;
  return unitary_at(rep, g, tol) * psi;
}

CMatrix transport(const Representation& rep, const CMatrix& rho, const GroupPoint& g,
                  const Tolerance& tol) {
  if (rho.rows() != rep.dim) fail_validation("state dimension does not match representation");
  if (g.component == 0 && g.theta.empty()) return rho;
  const CMatrix u = unitary_at(rep, g, tol);
  return hermitize(u * rho * u.adjoint());
}

AsymmetryTensor qgt(const Representation& rep, const CVector& psi, const GroupPoint& g,
                    const Tolerance& tol) {
  const CVector v = transport(rep, psi, g, tol);
  const int m = rep.dim_g();
  // Columns X_mu |psi>, and the means <X_mu>.
  CMatrix xv(rep.dim, m);
  CVector mean(m);
  for (int mu = 0; mu < m; ++mu) {
    xv.col(mu) = rep.generators[static_cast<std::size_t>(mu)] * v;
    mean(mu) = v.dot(xv.col(mu));
  }
  // <psi|X_mu X_nu|psi> = (X_mu psi)^dagger (X_nu psi) for Hermitian X_mu.
  CMatrix q = xv.adjoint() * xv - mean.conjugate() * mean.transpose();
  AsymmetryTensor t;
  t.kind = TensorKind::QGT;
  t.matrix = hermitize(q);
  t.point = g;
  return t;
}

double generalized_variance(const CVector& psi, const CMatrix& o) {
  if (o.rows() != psi.size() || o.cols() != psi.size())
    fail_validation("generalized_variance: dimension mismatch");
  const CVector w = o.adjoint() * psi;
  const cplx m = psi.dot(w);
  return std::max(0.0, w.squaredNorm() - std::norm(m));
}

double petz_norm(const CMatrix& rho, const CMatrix& o, const MetricSpec& spec, const Tolerance& tol) {
  spec.validate();
  if (o.rows() != rho.rows() || o.cols() != rho.cols())
    fail_validation("petz_norm: dimension mismatch");
  const EigResult e = herm_eig(rho, tol);
  const CMatrix ob = e.vectors.adjoint() * o * e.vectors;
  const Eigen::Index d = rho.rows();
  double s = 0.0;
  for (Eigen::Index l = 0; l < d; ++l)
    for (Eigen::Index k = 0; k < d; ++k) {
      const double pl = std::max(0.0, e.values(l)), pk = std::max(0.0, e.values(k));
      const double den = (1.0 - spec.q) * pl + spec.q * pk;
      if (den <= tol.tol_kernel) continue;
      s += (pl - pk) * (pl - pk) / den * std::norm(ob(l, k));
    }
  return s;
}

AsymmetryTensor s_matrix(const Representation& rep, const CMatrix& rho, const GroupPoint& g,
                         const Tolerance& tol) {
  const CMatrix r = transport(rep, rho, g, tol);
  const KernelSplit ks = kernel_split(r, tol);
  const CMatrix perp = ks.kernel * ks.kernel.adjoint();
  const int m = rep.dim_g();
  CMatrix s(m, m);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu)
      s(mu, nu) = (r * rep.generators[static_cast<std::size_t>(mu)] * perp *
                   rep.generators[static_cast<std::size_t>(nu)])
                      .trace();
  AsymmetryTensor t;
  t.kind = TensorKind::S;
  t.matrix = hermitize(s);
  t.point = g;
  return t;
}

AsymmetryTensor s_q_matrix(const Representation& rep, const CMatrix& rho, const MetricSpec& spec,
                           const GroupPoint& g, const Tolerance& tol) {
  spec.validate();
  const CMatrix r = transport(rep, rho, g, tol);
  const EigResult e = herm_eig(r, tol);
  const Eigen::Index d = r.rows();
  const int m = rep.dim_g();
  std::vector<CMatrix> xb;
  for (const CMatrix& x : rep.generators) xb.push_back(e.vectors.adjoint() * x * e.vectors);
  RMatrix w = RMatrix::Zero(d, d);
  for (Eigen::Index l = 0; l < d; ++l)
    for (Eigen::Index k = 0; k < d; ++k) {
      const double pl = std::max(0.0, e.values(l)), pk = std::max(0.0, e.values(k));
      const double den = (1.0 - spec.q) * pl + spec.q * pk;
      if (den <= tol.tol_kernel) continue;
      w(l, k) = spec.f0() * (pl - pk) * (pl - pk) / den;
    }
  CMatrix s = CMatrix::Zero(m, m);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) {
      cplx acc = 0.0;
      const CMatrix& a = xb[static_cast<std::size_t>(mu)];
      const CMatrix& b = xb[static_cast<std::size_t>(nu)];
      for (Eigen::Index l = 0; l < d; ++l)
        for (Eigen::Index k = 0; k < d; ++k)
          if (w(l, k) != 0.0) acc += w(l, k) * a(l, k) * b(k, l);
      s(mu, nu) = acc;
    }
  AsymmetryTensor t;
  t.kind = TensorKind::Sq;
  t.q = spec.q;
  t.matrix = hermitize(s);
  t.point = g;
  return t;
}

double skew_information(const CMatrix& rho, const CMatrix& h, const MetricSpec& spec,
                        const Tolerance& tol) {
  require_hermitian(h, tol, "skew_information");
  return 0.5 * spec.f0() * petz_norm(rho, h, spec, tol);
}

CMatrix u1_dephase(const U1Spec& spec, const CMatrix& rho) {
  const CMatrix rb = spec.basis.adjoint() * rho * spec.basis;
  CMatrix out = CMatrix::Zero(rb.rows(), rb.cols());
  for (Eigen::Index j = 0; j < rb.rows(); ++j)
    for (Eigen::Index k = 0; k < rb.cols(); ++k)
      if (spec.eigenvalues[static_cast<std::size_t>(j)] ==
          spec.eigenvalues[static_cast<std::size_t>(k)])
        out(j, k) = rb(j, k);
  return hermitize(spec.basis * out * spec.basis.adjoint());
}

double u1_relative_entropy_asymmetry(const U1Spec& spec, const CMatrix& rho, const Tolerance& tol) {
  spec.validate(tol);
  if (rho.rows() != spec.basis.rows())
    fail_validation("u1_relative_entropy_asymmetry: dimension mismatch");
  return std::max(0.0, entropy(u1_dephase(spec, rho)) - entropy(rho));
}

CMatrix gamma_dagger_x(const std::vector<CMatrix>& gens, const CVector& gamma) {
  if (gens.empty()) fail_validation("gamma_dagger_x: no generators");
  if (gamma.size() != static_cast<Eigen::Index>(gens.size()))
    fail_validation("gamma_dagger_x: gamma has wrong length");
  CMatrix o = CMatrix::Zero(gens[0].rows(), gens[0].cols());
  for (std::size_t mu = 0; mu < gens.size(); ++mu)
    o += std::conj(gamma(static_cast<Eigen::Index>(mu))) * gens[mu];
  return o;
}

}  // namespace asymkit
