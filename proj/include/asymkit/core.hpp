#pragma once

#include <string>

#include "asymkit/repkit.hpp"
#include "asymkit/types.hpp"

namespace asymkit {

enum class TensorKind { QGT, S, Sq };

struct AsymmetryTensor {
  TensorKind kind = TensorKind::QGT;
  double q = 0.0;  // only meaningful for Sq
  CMatrix matrix;
  GroupPoint point;
};

struct MetricSpec {
  double q = 0.5;
  void validate() const;
  double f0() const { return 1.0 - q; }
};

std::string tensor_kind_name(TensorKind k);

CVector transport(const Representation& rep, const CVector& psi, const GroupPoint& g,
                  const Tolerance& tol = {});
CMatrix transport(const Representation& rep, const CMatrix& rho, const GroupPoint& g,
                  const Tolerance& tol = {});

AsymmetryTensor qgt(const Representation& rep, const CVector& psi, const GroupPoint& g = {},
                    const Tolerance& tol = {});
double generalized_variance(const CVector& psi, const CMatrix& o);
double petz_norm(const CMatrix& rho, const CMatrix& o, const MetricSpec& spec,
                 const Tolerance& tol = {});
AsymmetryTensor s_matrix(const Representation& rep, const CMatrix& rho, const GroupPoint& g = {},
                         const Tolerance& tol = {});
AsymmetryTensor s_q_matrix(const Representation& rep, const CMatrix& rho, const MetricSpec& spec,
                           const GroupPoint& g = {}, const Tolerance& tol = {});
double skew_information(const CMatrix& rho, const CMatrix& h, const MetricSpec& spec,
                        const Tolerance& tol = {});
double u1_relative_entropy_asymmetry(const U1Spec& spec, const CMatrix& rho,
                                     const Tolerance& tol = {});
// Dephasing onto the eigenspaces of the U(1) generator.
CMatrix u1_dephase(const U1Spec& spec, const CMatrix& rho);

// gamma^dagger X as an operator.
CMatrix gamma_dagger_x(const std::vector<CMatrix>& gens, const CVector& gamma);

}  // namespace asymkit
