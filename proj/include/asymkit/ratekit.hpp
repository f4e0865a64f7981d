#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asymkit/core.hpp"
#include "asymkit/repkit.hpp"
#include "asymkit/types.hpp"

namespace asymkit {

enum class PencilMethod { SchurGeig, BisectionOracle };

struct PencilResult {
  double value = 0.0;  // may be +inf
  std::optional<CVector> direction;
  PencilMethod method = PencilMethod::SchurGeig;
  RVector kernel_eigenvalues;  // eigenvalues of b classified as kernel
};

enum class Verdict { Holds, Violated, Inconclusive };

struct Witness {
  std::string kind;  // "direction" or "element"
  RVector direction;
  int element_index = -1;
  std::string explanation;
};

struct SymVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;
};

struct ElementPair {
  CMatrix u_in;
  CMatrix u_out;
};

struct SymOptions {
  std::optional<U1Spec> u1_in;
  std::optional<U1Spec> u1_out;
  std::vector<ElementPair> extra_elements;
  // Component pairs plus extra elements enumerate the whole (finite) group.
  bool exhaustive = false;
  // Caller asserts the input stabilizer is trivial (e.g. reference states).
  bool input_stabilizer_trivial = false;
  int samples = 32;
  unsigned long long seed = 0;
};

struct ComponentValue {
  std::string label;
  PencilResult pencil;
  double dmax_bits = 0.0;  // D_max(Q_out || Q_in)
};

struct RateReport {
  double rate = 0.0;
  double pencil_rate = 0.0;
  std::vector<ComponentValue> per_component;
  double dmax_bits = 0.0;  // max over components; -inf when rate is +inf
  SymVerdict sym;
  bool catalyst_mode = false;
  std::vector<std::string> caveats;
};

struct ReversibilityReport {
  bool reversible = false;
  double r = 0.0;
  double r_reverse = 0.0;
  SymVerdict forward;
  SymVerdict backward;
  double proportionality_gap = 0.0;
};

struct VanishingCheck {
  bool vanishes = false;
  std::optional<CVector> witness_gamma;
  double witness_value = 0.0;
};

struct EnsembleTerm {
  double weight = 0.0;
  CVector state;
};

struct CostTerm {
  double weight = 0.0;
  double r = 0.0;  // may be +inf
};

struct CostReport {
  double bound = 0.0;
  std::vector<CostTerm> terms;
};

struct ThermoBounds {
  double variance_rate_required = 0.0;
  double s_scalar = 0.0;
  CMatrix s_bound_matrix;
  double s_bound_max_eigenvalue = 0.0;
  double skew_bound = 0.0;
  double skew_information = 0.0;
};

enum class MatrixOrder { Equal, Less, Greater, Incomparable };

std::string verdict_name(Verdict v);
std::string method_name(PencilMethod m);
std::string order_name(MatrixOrder o);

void require_psd(const CMatrix& m, const Tolerance& tol, const char* what);

PencilResult sup_ratio(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});
double sup_ratio_oracle(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {},
                        int max_iter = 200);
// Minimum of v^dagger a v / v^dagger b v over random directions; an upper bound on sup_ratio.
double sup_ratio_sampled(const CMatrix& a, const CMatrix& b, int draws, unsigned long long seed);

double dmax(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});

SymVerdict sym_check(const RepPair& pair, const CMatrix& rho_in, const CMatrix& rho_out,
                     const SymOptions& opt = {}, const Tolerance& tol = {});

struct RateOptions {
  SymOptions sym;
  bool catalyst = false;
  std::optional<CMatrix> catalyst_state;
  std::optional<Representation> catalyst_rep;
};

RateReport conversion_rate(const RepPair& pair, const CVector& psi, const CVector& phi,
                           const RateOptions& opt = {}, const Tolerance& tol = {});

ReversibilityReport reversibility_check(const RepPair& pair, const CVector& psi,
                                        const CVector& phi, const SymOptions& opt = {},
                                        const Tolerance& tol = {});

double distillable_bound(const RepPair& pair, const CMatrix& rho, const CVector& phi,
                         const Tolerance& tol = {});
VanishingCheck vanishing_distillable_check(const Representation& rep_in,
                                           const Representation& rep_out, const CMatrix& rho,
                                           const CVector& phi, const Tolerance& tol = {});
CostReport cost_bound(const RepPair& pair, const std::vector<EnsembleTerm>& ensemble,
                      double p_sym, const CVector& phi, const Tolerance& tol = {});
ThermoBounds thermo_bounds(const Representation& rep, const CMatrix& rho,
                           const Representation& rep_target, const CVector& psi_target, double r,
                           const MetricSpec& spec, const Tolerance& tol = {});
double min_entropy_rate(const CMatrix& q_phi, const Tolerance& tol = {});

CMatrix average_qgt(const Representation& rep, const std::vector<EnsembleTerm>& ensemble,
                    const Tolerance& tol = {});
MatrixOrder compare_psd_order(const CMatrix& a, const CMatrix& b, double tol);

}  // namespace asymkit
