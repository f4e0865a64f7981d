#pragma once

#include <string>
#include <vector>

#include "asymkit/chankit.hpp"
#include "asymkit/core.hpp"
#include "asymkit/repkit.hpp"
#include "asymkit/types.hpp"

namespace asymkit {

CVector shifted_iid_state(const Representation& rep, const CVector& psi,
                          const std::vector<double>& u, int n, const Tolerance& tol = {});

struct ScanConfig {
  std::vector<int> copies;
  std::vector<std::vector<double>> shifts;
  double rate_r = 1.0;
  unsigned long long seed = 0;

  void validate(int dim_g) const;
};

struct ScanRow {
  int n = 0;
  std::vector<double> u;
  double u_norm = 0.0;
  double trace_distance = 0.0;
  double fidelity = 1.0;
  double per_copy_infidelity = 0.0;
};

// Least-squares slope of log(y) against log(x); points with y <= 1e-14 are skipped.
struct PowerFit {
  std::string what;
  double exponent = 0.0;
  double prefactor = 0.0;
  int points = 0;
};

struct ScanTable {
  std::vector<ScanRow> rows;
  std::vector<PowerFit> fits;
  std::vector<std::string> notes;
};

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                       std::string what);

ScanTable convergence_scan(const RepPair& pair, const CVector& psi, const CVector& phi,
                           const ScanConfig& config, const Tolerance& tol = {});

struct MonotonicityOptions {
  int count = 200;
  unsigned long long seed = 0;
  MetricSpec spec;
  TwirlSpec twirl;       // mode and Monte Carlo sample count; seed is derived per draw
  bool negative_control = true;
  double threshold = 1e-9;
};

struct MonotonicityReport {
  int draws = 0;
  double max_petz_violation = 0.0;
  double max_s_violation = 0.0;
  double max_sq_violation = 0.0;
  double max_covariance_defect = 0.0;
  int violations = 0;  // draws with any violation beyond threshold
  double control_max_violation = 0.0;
  bool control_flagged = false;
  std::vector<std::string> notes;
};

MonotonicityReport monotonicity_probe(const RepPair& pair, const MonotonicityOptions& opt,
                                      const Tolerance& tol = {});

// Random trace-preserving channel from a Haar isometry; n_kraus is raised to ceil(in/out) if smaller.
KrausChannel random_channel(int in_dim, int out_dim, int n_kraus, Rng& rng);

struct LargestEvReport {
  int draws = 0;
  int overlap_violations = 0;
  int metric_violations = 0;
  double min_overlap_margin = 0.0;  // |<phi|Phi>|^2 - (1 - 2 delta), minimum
  double min_metric_margin = 0.0;   // lhs - rhs, minimum
  double max_delta = 0.0;
};

LargestEvReport largest_ev_check(int count, unsigned long long seed, const MetricSpec& spec,
                                 const Tolerance& tol = {});

struct FiniteNRow {
  int n = 0;
  double admixture = 0.0;
  double trace_distance = 0.0;
  double ratio = 0.0;  // f_q(0) * petz(sigma_N, O_N) / N
  double variance = 0.0;
  bool asserted = false;
  bool pass = true;
};

struct FiniteNReport {
  std::vector<FiniteNRow> rows;
  double assert_distance = 0.05;
  double slack = 0.1;
  bool pass = true;
  std::string label = "trend probe, not a proof";
};

struct FiniteNOptions {
  int n_min = 1;
  int n_max = 8;
  double admixture_scale = 1.0;     // epsilon_N = scale / N^power
  double admixture_power = 1.0;
  MetricSpec spec;
  double assert_distance = 0.05;
  double slack = 0.1;
};

FiniteNReport finite_n_lemma2_probe(const Representation& rep, const CVector& phi,
                                   const CMatrix& o, const FiniteNOptions& opt,
                                   const Tolerance& tol = {});

struct SqSuiteReport {
  int draws = 0;
  double positivity = 0.0;
  double additivity = 0.0;
  double convexity = 0.0;
  double monotonicity = 0.0;
  double strong_monotonicity = 0.0;
  double flag_consistency = 0.0;
  double max_violation() const;
};

SqSuiteReport s_q_property_suite(const RepPair& pair, int count, unsigned long long seed,
                                 const MetricSpec& spec, const Tolerance& tol = {});

}  // namespace asymkit
