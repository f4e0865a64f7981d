#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asymkit/ratekit.hpp"
#include "asymkit/repkit.hpp"
#include "asymkit/rng.hpp"
#include "asymkit/types.hpp"

namespace asymkit {

struct KrausChannel {
  std::vector<CMatrix> kraus_ops;  // each out_dim x in_dim
  int in_dim = 0;
  int out_dim = 0;

  // Sum of K^dagger K.
  CMatrix completeness() const;
  double completeness_error() const;
  void validate(const Tolerance& tol = {}) const;
};

KrausChannel identity_channel(int dim);

struct ChannelBuildArtifacts {
  CMatrix c_in;   // (d_in - 1) x dimG
  CMatrix c_out;  // (d_out - 1) x dimG
  CMatrix z;
  CMatrix gamma;
  CMatrix basis_in;   // orthonormal complement of psi
  CMatrix basis_out;  // orthonormal complement of phi
  double cz_residual = 0.0;  // max |C' - Z C|
  double pencil_value = 0.0;
};

struct BuiltChannel {
  KrausChannel channel;
  ChannelBuildArtifacts artifacts;
};

// Orthonormal basis of the complement of v, Gram-Schmidt from the canonical basis.
CMatrix complement_basis(const CVector& v);

BuiltChannel build_conversion_channel(const RepPair& pair, const CVector& psi, const CVector& phi,
                                      const Tolerance& tol = {});

CMatrix apply_channel(const KrausChannel& ch, const CMatrix& rho);
// Applies ch to each of the n tensor factors of rho in turn.
CMatrix apply_channel_iid(const KrausChannel& ch, const CMatrix& rho, int n);

// 1 - <phi|E(psi)|phi> computed as a sum of squared norms, for a pure target.
double fidelity_deficit(const KrausChannel& ch, const CVector& psi, const CVector& phi);

KrausChannel choi_to_kraus(const CMatrix& choi, int in_dim, int out_dim, double cut = 1e-14);
CMatrix kraus_to_choi(const KrausChannel& ch);

enum class TwirlMode { Auto, FiniteList, U1Exact, MonteCarlo };

struct TwirlSpec {
  TwirlMode mode = TwirlMode::Auto;
  std::vector<ElementPair> elements;  // FiniteList; empty means the component pairs
  int count = 256;                     // MonteCarlo samples
  unsigned long long seed = 0;
};

struct TwirlResult {
  KrausChannel channel;
  TwirlMode mode_used = TwirlMode::FiniteList;
  int samples = 0;
  bool exact = false;
};

std::string twirl_mode_name(TwirlMode m);

// Group elements (u_in, u_out) realizing the requested average.
std::vector<ElementPair> twirl_elements(const RepPair& pair, const TwirlSpec& spec,
                                        TwirlMode* mode_used, const Tolerance& tol = {});
TwirlResult twirl(const KrausChannel& ch, const RepPair& pair, const TwirlSpec& spec,
                  const Tolerance& tol = {});

// Random group element: product of exponentials times a random component pair.
ElementPair random_group_element(const RepPair& pair, Rng& rng, const Tolerance& tol = {});

double covariance_defect(const KrausChannel& ch, const std::vector<CMatrix>& states,
                         const std::vector<ElementPair>& elements);

struct EstimateResult {
  std::size_t index = 0;
  GroupPoint point;
  double fidelity = 0.0;
  int ties = 1;  // grid points within 1e-12 of the best fidelity
};

EstimateResult estimate_group_element(const Representation& rep, const CVector& psi,
                                      const CMatrix& observed, const std::vector<GroupPoint>& grid,
                                      const Tolerance& tol = {});

// Lattice delta * Z^dimG inside [-pi, pi]^dimG, identity component.
std::vector<GroupPoint> lattice_grid(int dim_g, double delta);

struct ConvertOptions {
  double split_exponent = 0.25;
  std::vector<double> shift;       // u; empty means zero
  unsigned long long seed = 0;
  bool random_frame = false;       // draw the true frame from the seed
  bool catalyst = false;
};

struct ConvertResult {
  int n_total = 0;
  int n_est = 0;
  int n_conv = 0;
  double delta = 0.0;
  std::size_t grid_size = 0;
  GroupPoint true_point;
  EstimateResult estimate;
  CMatrix output;
  double distance_to_target = 0.0;
  double fidelity_to_target = 0.0;
  std::vector<std::string> caveats;
};

ConvertResult estimate_and_convert(const RepPair& pair, const CVector& psi, const CVector& phi,
                                   int n, const ConvertOptions& opt, const Tolerance& tol = {});

}  // namespace asymkit
