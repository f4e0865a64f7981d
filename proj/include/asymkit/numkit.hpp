#pragma once

#include <cstddef>
#include <utility>

#include "asymkit/types.hpp"

namespace asymkit {

struct EigResult {
  RVector values;   // ascending
  CMatrix vectors;  // columns, unitary
};

struct KernelSplit {
  CMatrix support;  // orthonormal columns
  CMatrix kernel;   // orthonormal columns
  RVector support_values;
  RVector kernel_values;
};

struct Distance {
  double trace_distance = 0.0;
  double fidelity = 1.0;
};

double max_abs(const CMatrix& m);
bool is_hermitian(const CMatrix& m, const Tolerance& tol = {});
void require_hermitian(const CMatrix& m, const Tolerance& tol, const char* what);
void require_finite(const CMatrix& m, const char* what);
CMatrix hermitize(const CMatrix& m);

EigResult herm_eig(const CMatrix& m, const Tolerance& tol = {});
double min_eigenvalue(const CMatrix& m);
double max_eigenvalue(const CMatrix& m);

CMatrix pinv(const CMatrix& m, const Tolerance& tol = {});
CMatrix psd_sqrt(const CMatrix& m, const Tolerance& tol = {});
// Applies f to the spectrum of a Hermitian matrix.
template <class F>
CMatrix herm_apply(const EigResult& e, F f) {
  RVector v(e.values.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f(e.values(i));
  return e.vectors * v.asDiagonal() * e.vectors.adjoint();
}

// Tensor dimension cap; ASYMKIT_TENSOR_CAP overrides the default of 4096.
std::size_t tensor_cap();
void check_cap(std::size_t dim, const char* what);

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix tensor_product(const CMatrix& a, const CMatrix& b);
CMatrix tensor_power(const CMatrix& m, int n);
// Sum over k of I^{(k-1)} (x) m (x) I^{(n-k)}.
CMatrix iid_sum(const CMatrix& m, int n);

Distance state_distance(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});
double trace_norm_hermitian(const CMatrix& m);

KernelSplit kernel_split(const CMatrix& m, const Tolerance& tol = {}, double scale = -1.0);

// Validation helpers for the domain types.
void require_pure_state(const CVector& v, const Tolerance& tol, const char* what);
void require_density(const CMatrix& rho, const Tolerance& tol, const char* what);
void require_unitary(const CMatrix& u, const Tolerance& tol, const char* what);
CMatrix projector(const CVector& v);

// Von Neumann entropy in nats.
double entropy(const CMatrix& rho);
double binary_entropy(double p);

}  // namespace asymkit
