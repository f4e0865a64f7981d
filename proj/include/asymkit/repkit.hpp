#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asymkit/types.hpp"

namespace asymkit {

struct Representation {
  int dim = 0;
  std::vector<CMatrix> generators;
  std::vector<CMatrix> component_reps;  // entry 0 is the identity
  std::string label;

  int dim_g() const { return static_cast<int>(generators.size()); }
  void validate(const Tolerance& tol = {}) const;
};

struct ComponentPair {
  CMatrix u_in;
  CMatrix u_out;
};

struct RepPair {
  Representation rep_in;
  Representation rep_out;
  std::vector<ComponentPair> component_pairs;  // entry 0 is (I, I)

  void validate(const Tolerance& tol = {}) const;
};

// U(1) data: H = basis * diag(eigenvalues) * basis^dagger.
struct U1Spec {
  std::vector<long long> eigenvalues;
  CMatrix basis;

  void validate(const Tolerance& tol = {}) const;
};

// A point of the group: e^{i theta.X} G_component.
struct GroupPoint {
  int component = 0;
  std::vector<double> theta;  // empty means zero
};

// Divisor d: Sym = {theta : theta*d in 2 pi Z}. nullopt means the whole group.
using U1Divisor = std::optional<long long>;

Representation make_representation(std::vector<CMatrix> generators, std::string label,
                                   std::vector<CMatrix> extra_components = {});
RepPair make_pair(Representation in, Representation out,
                  std::vector<ComponentPair> extra_pairs = {});

CMatrix expm_i_hermitian(const CMatrix& h, const Tolerance& tol = {});
CMatrix generator_combination(const Representation& rep, const std::vector<double>& theta);
CMatrix unitary_at(const Representation& rep, const std::vector<double>& theta,
                   int component_index, const Tolerance& tol = {});
CMatrix unitary_at(const Representation& rep, const GroupPoint& g, const Tolerance& tol = {});

Representation lift_projective(const Representation& rep, const Tolerance& tol = {});
RMatrix congruence_matrix(const Representation& rep, const CMatrix& u, const Tolerance& tol = {});
std::vector<CMatrix> projected_generators(const Representation& rep, const CVector& phi);
Representation iid_generators(const Representation& rep, int n);

U1Divisor u1_symmetry_divisor(const U1Spec& spec, const CMatrix& rho, const Tolerance& tol = {});
// Derive a U(1) spec from a one-generator representation with integer-spaced spectrum.
std::optional<U1Spec> u1_spec_from_rep(const Representation& rep, const Tolerance& tol = {});
CMatrix u1_hamiltonian(const U1Spec& spec);

// Standard spin-j matrices (J_x, J_y, J_z), with 2j+1 = dim.
std::vector<CMatrix> spin_matrices(int two_j);
std::vector<CMatrix> pauli_matrices();

}  // namespace asymkit
