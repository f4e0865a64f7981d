#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymkit/ratekit.hpp"
#include "asymkit/repkit.hpp"
#include "asymkit/types.hpp"

namespace asymkit {

using json = nlohmann::json;

struct StateBlock {
  bool pure = true;
  CVector vector;  // pure
  CMatrix matrix;  // mixed

  CMatrix density() const;
  int dim() const;
};

struct Problem {
  std::string label;
  Representation rep_in;
  Representation rep_out;
  std::vector<ComponentPair> component_pairs;  // entry 0 is (I, I)
  std::optional<StateBlock> state_in;
  std::optional<StateBlock> state_out;
  std::optional<U1Spec> u1;
  std::optional<U1Spec> u1_out;
  std::optional<StateBlock> catalyst;
  std::optional<Representation> catalyst_rep;
  bool sym_exhaustive = false;
  bool input_stabilizer_trivial = false;
  int sym_samples = 32;
  std::vector<ElementPair> extra_elements;
  Tolerance tol;
  std::vector<EnsembleTerm> ensemble;
  double p_sym = 0.0;
  double rate_r = 1.0;

  RepPair pair() const;
  SymOptions sym_options(unsigned long long seed) const;
  const StateBlock& require_state_in() const;
  const StateBlock& require_state_out() const;
};

// Complex scalars are [re, im]; a bare number is read as real.
cplx parse_complex(const json& j, const std::string& path);
CMatrix parse_matrix(const json& j, const std::string& path);
CVector parse_vector(const json& j, const std::string& path);
json complex_to_json(cplx z);
json matrix_to_json(const CMatrix& m);
json vector_to_json(const CVector& v);
json real_vector_to_json(const RVector& v);
// Finite numbers as numbers; infinities and NaN as "inf", "-inf", "nan".
json number_to_json(double x);

Problem parse_problem(const json& j);
Problem load_problem(const std::string& path);
json serialize_problem(const Problem& p);

}  // namespace asymkit
