#include "asymkit/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "asymkit/kernels.hpp"

namespace asymkit {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const CMatrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) return false;
  const double dev = max_abs(m - m.adjoint());
  return dev <= tol.tol_herm * (1.0 + max_abs(m));
}

void require_finite(const CMatrix& m, const char* what) {
  if (!m.allFinite()) fail_validation(std::string(what) + ": non-finite entry");
}

void require_hermitian(const CMatrix& m, const Tolerance& tol, const char* what) {
  require_finite(m, what);
  if (m.rows() != m.cols()) fail_validation(std::string(what) + ": matrix is not square");
  if (!is_hermitian(m, tol)) fail_validation(std::string(what) + ": matrix is not Hermitian");
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

EigResult herm_eig(const CMatrix& m, const Tolerance& tol) {
  require_hermitian(m, tol, "herm_eig");
  EigResult r;
  if (m.rows() == 0) return r;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m));
  if (es.info() != Eigen::Success) fail_precondition("herm_eig: eigensolver did not converge");
  r.values = es.eigenvalues();
  r.vectors = es.eigenvectors();
  return r;
}

double min_eigenvalue(const CMatrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const CMatrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

CMatrix pinv(const CMatrix& m, const Tolerance& tol) {
  require_finite(m, "pinv");
  if (m.size() == 0) return CMatrix::Zero(m.cols(), m.rows());
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  CMatrix out = CMatrix::Zero(m.cols(), m.rows());
  if (smax == 0.0) return out;
  const double cut = tol.tol_kernel * smax;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cut) break;
    out += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
  }
  return out;
}

CMatrix psd_sqrt(const CMatrix& m, const Tolerance& tol) {
  const EigResult e = herm_eig(m, tol);
  if (e.values.size() == 0) return m;
  const double lmax = std::max(0.0, e.values(e.values.size() - 1));
  const double floor = -tol.tol_psd * lmax;
  if (e.values(0) < floor && e.values(0) < 0.0)
    fail_precondition("psd_sqrt: matrix is not PSD (eigenvalue " + std::to_string(e.values(0)) +
                      ")");
  return herm_apply(e, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

std::size_t tensor_cap() {
  const char* env = std::getenv("ASYMKIT_TENSOR_CAP");
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 4096;
}

void check_cap(std::size_t dim, const char* what) {
  if (dim > tensor_cap())
    fail_cap(std::string(what) + ": dimension " + std::to_string(dim) + " exceeds tensor cap " +
             std::to_string(tensor_cap()));
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) fail_validation("matmul: inner dimensions differ");
  CMatrix c(a.rows(), b.cols());
  if (c.size() == 0) return c;
  if (a.cols() == 0) return CMatrix::Zero(a.rows(), b.cols());
  kernels::zgemm(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

CMatrix tensor_product(const CMatrix& a, const CMatrix& b) {
  check_cap(static_cast<std::size_t>(a.rows() * b.rows()), "tensor_product");
  check_cap(static_cast<std::size_t>(a.cols() * b.cols()), "tensor_product");
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  if (out.size() == 0) return out;
  kernels::zkron(a.data(), a.rows(), a.cols(), b.data(), b.rows(), b.cols(), out.data());
  return out;
}

CMatrix tensor_power(const CMatrix& m, int n) {
  if (n < 1) fail_validation("tensor_power: n must be >= 1");
  double rows = 1.0, cols = 1.0;
  for (int i = 0; i < n; ++i) {
    rows *= static_cast<double>(m.rows());
    cols *= static_cast<double>(m.cols());
    if (rows > static_cast<double>(tensor_cap()) || cols > static_cast<double>(tensor_cap()))
      fail_cap("tensor_power: dimension " + std::to_string(static_cast<long long>(rows)) +
               " exceeds tensor cap " + std::to_string(tensor_cap()));
  }
  CMatrix out = m;
  for (int i = 1; i < n; ++i) out = tensor_product(out, m);
  return out;
}

CMatrix iid_sum(const CMatrix& m, int n) {
  if (n < 1) fail_validation("iid_sum: n must be >= 1");
  if (m.rows() != m.cols()) fail_validation("iid_sum: operator must be square");
  const Eigen::Index d = m.rows();
  double total = 1.0;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<double>(d);
    if (total > static_cast<double>(tensor_cap()))
      fail_cap("iid_sum: dimension exceeds tensor cap " + std::to_string(tensor_cap()));
  }
  CMatrix acc = m;
  Eigen::Index dim = d;
  for (int k = 1; k < n; ++k) {
    acc = tensor_product(acc, CMatrix::Identity(d, d)) +
          tensor_product(CMatrix::Identity(dim, dim), m);
    dim *= d;
  }
  return acc;
}

double trace_norm_hermitian(const CMatrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

Distance state_distance(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail_validation("state_distance: dimension mismatch");
  Distance d;
  d.trace_distance = std::clamp(0.5 * trace_norm_hermitian(a - b), 0.0, 1.0);
  // Work on the support of a: sqrt of roundoff eigenvalues would cost ~1e-8 in F.
  const EigResult ea = herm_eig(a, tol);
  const Eigen::Index n = ea.values.size();
  const double lmax = n ? std::max(0.0, ea.values(n - 1)) : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (ea.values(i) > 1e-14 * lmax) keep.push_back(i);
  CMatrix w(a.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    w.col(static_cast<Eigen::Index>(j)) = ea.vectors.col(keep[j]) * std::sqrt(ea.values(keep[j]));
  const CMatrix inner = hermitize(w.adjoint() * b * w);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(inner, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > 0.0) s += std::sqrt(v);
  }
  d.fidelity = std::clamp(s * s, 0.0, 1.0);
  return d;
}

KernelSplit kernel_split(const CMatrix& m, const Tolerance& tol, double scale) {
  const EigResult e = herm_eig(m, tol);
  KernelSplit ks;
  const Eigen::Index n = e.values.size();
  double lmax = n ? std::max(0.0, e.values(n - 1)) : 0.0;
  if (scale >= 0.0) lmax = std::max(lmax, scale);
  const double cut = tol.tol_kernel * lmax;
  std::vector<Eigen::Index> sup, ker;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (e.values(i) > cut && e.values(i) > 0.0)
      sup.push_back(i);
    else
      ker.push_back(i);
  }
  ks.support.resize(m.rows(), static_cast<Eigen::Index>(sup.size()));
  ks.support_values.resize(static_cast<Eigen::Index>(sup.size()));
  for (std::size_t j = 0; j < sup.size(); ++j) {
    ks.support.col(static_cast<Eigen::Index>(j)) = e.vectors.col(sup[j]);
    ks.support_values(static_cast<Eigen::Index>(j)) = e.values(sup[j]);
  }
  ks.kernel.resize(m.rows(), static_cast<Eigen::Index>(ker.size()));
  ks.kernel_values.resize(static_cast<Eigen::Index>(ker.size()));
  for (std::size_t j = 0; j < ker.size(); ++j) {
    ks.kernel.col(static_cast<Eigen::Index>(j)) = e.vectors.col(ker[j]);
    ks.kernel_values(static_cast<Eigen::Index>(j)) = e.values(ker[j]);
  }
  return ks;
}

void require_pure_state(const CVector& v, const Tolerance& tol, const char* what) {
  if (!v.allFinite()) fail_validation(std::string(what) + ": non-finite amplitude");
  if (std::abs(v.norm() - 1.0) > tol.tol_norm)
    fail_validation(std::string(what) + ": state is not normalized");
}

void require_density(const CMatrix& rho, const Tolerance& tol, const char* what) {
  require_hermitian(rho, tol, what);
  if (std::abs(rho.trace().real() - 1.0) > tol.tol_norm)
    fail_validation(std::string(what) + ": trace differs from 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(rho), Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();
  if (ev.size() && ev(0) < -tol.tol_psd * std::max(ev(ev.size() - 1), 0.0) && ev(0) < 0.0)
    fail_validation(std::string(what) + ": density matrix has a negative eigenvalue");
}

void require_unitary(const CMatrix& u, const Tolerance& tol, const char* what) {
  require_finite(u, what);
  if (u.rows() != u.cols()) fail_validation(std::string(what) + ": unitary must be square");
  const double dev = max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
  if (dev > tol.tol_residual) fail_validation(std::string(what) + ": matrix is not unitary");
}

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

double entropy(const CMatrix& rho) {
  if (rho.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(rho), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

double binary_entropy(double p) {
  double s = 0.0;
  if (p > 0.0) s -= p * std::log(p);
  if (p < 1.0) s -= (1.0 - p) * std::log(1.0 - p);
  return s;
}

}  // namespace asymkit
