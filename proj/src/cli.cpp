#include "asymkit/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "asymkit/chankit.hpp"
#include "asymkit/core.hpp"
#include "asymkit/kernels.hpp"
#include "asymkit/numkit.hpp"
#include "asymkit/problem.hpp"
#include "asymkit/ratekit.hpp"
#include "asymkit/rng.hpp"
#include "asymkit/simkit.hpp"

#ifndef ASYMKIT_VERSION
#define ASYMKIT_VERSION "0.0.0"
#endif

namespace asymkit {

const char* version_string() { return ASYMKIT_VERSION; }

namespace {

struct Options {
  std::string command;
  std::string subcommand;
  std::string problem;
  double q = 0.5;
  int component = 0;
  std::string theta;
  bool catalyst = false;
  std::string copies;
  std::string shift_file;
  unsigned long long seed = 0;
  std::string format = "json";
  std::string out;
  std::string suite = "all";
  int count = 0;  // 0 means the suite default
  double split = 0.25;
  bool random_frame = false;
  std::string mode = "auto";
  int samples = 256;
  double tol_herm = -1, tol_norm = -1, tol_psd = -1, tol_kernel = -1, tol_residual = -1;
};

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> v;
  if (s.empty()) return v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail_validation(std::string(what) + ": cannot parse '" + item + "' as a number");
    }
  }
  return v;
}

std::vector<int> parse_copies(const std::string& s, int lo_default, int hi_default) {
  std::vector<int> out;
  if (s.empty()) {
    for (int n = lo_default; n <= hi_default; ++n) out.push_back(n);
    return out;
  }
  const auto colon = s.find(':');
  try {
    if (colon != std::string::npos) {
      const int a = std::stoi(s.substr(0, colon)), b = std::stoi(s.substr(colon + 1));
      if (a < 1 || b < a) fail_validation("--copies: expected A:B with 1 <= A <= B");
      for (int n = a; n <= b; ++n) out.push_back(n);
    } else {
      for (double d : parse_list(s, "--copies")) {
        if (d < 1 || std::floor(d) != d) fail_validation("--copies: counts must be positive integers");
        out.push_back(static_cast<int>(d));
      }
    }
  } catch (const std::logic_error&) {
    fail_validation("--copies: cannot parse '" + s + "'");
  }
  return out;
}

std::vector<std::vector<double>> load_shifts(const std::string& path, int dim_g) {
  if (path.empty()) {
    std::vector<double> zero(static_cast<std::size_t>(dim_g), 0.0), half = zero;
    half[0] = 0.5;
    return {zero, half};
  }
  std::ifstream in(path);
  if (!in) fail_validation("cannot open shift file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail_validation("shift file '" + path + "': " + e.what());
  }
  if (j.is_object() && j.contains("shifts")) j = j["shifts"];
  if (!j.is_array() || j.empty()) fail_validation("shift file: expected a non-empty list of vectors");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) fail_validation("shift file: entry " + std::to_string(i) + " is not a list");
    std::vector<double> u;
    for (const auto& x : j[i]) {
      if (!x.is_number()) fail_validation("shift file: entry " + std::to_string(i) + " has a non-number");
      u.push_back(x.get<double>());
    }
    if (static_cast<int>(u.size()) != dim_g)
      fail_validation("shift file: entry " + std::to_string(i) + " has wrong length");
    out.push_back(u);
  }
  return out;
}

json point_to_json(int component, const std::vector<double>& theta) {
  return {{"component", component}, {"theta", theta}};
}

json pencil_to_json(const PencilResult& p) {
  json j;
  j["value"] = number_to_json(p.value);
  j["method"] = method_name(p.method);
  j["kernel_eigenvalues"] = real_vector_to_json(p.kernel_eigenvalues);
  j["direction"] = p.direction ? vector_to_json(*p.direction) : json(nullptr);
  return j;
}

json sym_to_json(const SymVerdict& s) {
  json w = json::array();
  for (const auto& x : s.witnesses) {
    json e{{"kind", x.kind}, {"explanation", x.explanation}};
    if (x.kind == "direction") e["direction"] = real_vector_to_json(x.direction);
    if (x.element_index >= 0) e["element_index"] = x.element_index;
    w.push_back(e);
  }
  return {{"verdict", verdict_name(s.verdict)}, {"witnesses", w}, {"notes", s.notes}};
}

struct Context {
  Options opt;
  Problem prob;
  Tolerance tol;
  json results = json::object();
  std::vector<std::string> caveats;
  std::string csv;  // filled by table-producing commands
};

CVector pure_of(const StateBlock& s, const char* what) {
  if (!s.pure) fail_validation(std::string(what) + " must be a pure state for this command");
  return s.vector;
}

// Unitaries for the requested component pair and parameters.
std::pair<CMatrix, CMatrix> requested_element(const Context& c) {
  const RepPair pair = c.prob.pair();
  if (c.opt.component < 0 || c.opt.component >= static_cast<int>(pair.component_pairs.size()))
    fail_validation("--component " + std::to_string(c.opt.component) + " out of range (problem has " +
                    std::to_string(pair.component_pairs.size()) + " component pairs)");
  const std::vector<double> th = parse_list(c.opt.theta, "--theta");
  const auto& cp = pair.component_pairs[static_cast<std::size_t>(c.opt.component)];
  return {expm_i_hermitian(generator_combination(pair.rep_in, th), c.tol) * cp.u_in,
          expm_i_hermitian(generator_combination(pair.rep_out, th), c.tol) * cp.u_out};
}

void cmd_measure(Context& c) {
  const std::string& sub = c.opt.subcommand;
  const auto [ui, uo] = requested_element(c);
  const std::vector<double> th = parse_list(c.opt.theta, "--theta");
  c.results["point"] = point_to_json(c.opt.component, th);
  MetricSpec spec;
  spec.q = c.opt.q;
  struct Side {
    const char* name;
    const std::optional<StateBlock>* state;
    const Representation* rep;
    const CMatrix* u;
    const std::optional<U1Spec>* u1;
  };
  const Side sides[] = {{"input", &c.prob.state_in, &c.prob.rep_in, &ui, &c.prob.u1},
                        {"output", &c.prob.state_out, &c.prob.rep_out, &uo, &c.prob.u1_out}};
  bool any = false;
  for (const Side& s : sides) {
    if (!s.state->has_value()) continue;
    const StateBlock& st = **s.state;
    json r;
    if (sub == "qgt") {
      if (!st.pure) {
        c.caveats.push_back(std::string(s.name) + " state is mixed; QGT skipped");
        continue;
      }
      r["kind"] = "QGT";
      r["matrix"] = matrix_to_json(qgt(*s.rep, (*s.u) * st.vector, {}, c.tol).matrix);
    } else if (sub == "smatrix") {
      const CMatrix rho = hermitize((*s.u) * st.density() * s.u->adjoint());
      r["kind"] = "S";
      r["matrix"] = matrix_to_json(s_matrix(*s.rep, rho, {}, c.tol).matrix);
    } else if (sub == "sq") {
      const CMatrix rho = hermitize((*s.u) * st.density() * s.u->adjoint());
      const CMatrix sq = s_q_matrix(*s.rep, rho, spec, {}, c.tol).matrix;
      r["kind"] = "S_q";
      r["q"] = spec.q;
      r["matrix"] = matrix_to_json(sq);
      if (st.pure) {
        const CMatrix q = qgt(*s.rep, (*s.u) * st.vector, {}, c.tol).matrix;
        const CMatrix pred = q + ((1.0 - spec.q) / spec.q) * q.transpose();
        r["pure_state_identity_residual"] = max_abs(sq - pred);
      }
    } else if (sub == "ag") {
      std::optional<U1Spec> u1 = *s.u1;
      if (!u1) u1 = u1_spec_from_rep(*s.rep, c.tol);
      if (!u1) fail_validation("measure ag needs a U(1) problem (u1 block or one integer-spaced generator)");
      const CMatrix rho = hermitize((*s.u) * st.density() * s.u->adjoint());
      r["A_G_nats"] = u1_relative_entropy_asymmetry(*u1, rho, c.tol);
    } else {
      fail_validation("unknown measure subcommand '" + sub + "' (expected qgt, smatrix, sq, ag)");
    }
    c.results[s.name] = r;
    any = true;
  }
  if (!any) fail_validation("problem has no state to measure");
}

json rate_to_json(const RateReport& r) {
  json pc = json::array();
  for (const auto& v : r.per_component)
    pc.push_back({{"label", v.label}, {"pencil", pencil_to_json(v.pencil)},
                  {"dmax_bits", number_to_json(v.dmax_bits)}});
  return {{"rate", number_to_json(r.rate)},
          {"pencil_rate", number_to_json(r.pencil_rate)},
          {"dmax_bits", number_to_json(r.dmax_bits)},
          {"dmax_rate", number_to_json(std::exp2(-r.dmax_bits))},
          {"sym_verdict", verdict_name(r.sym.verdict)},
          {"sym", sym_to_json(r.sym)},
          {"catalyst_mode", r.catalyst_mode},
          {"per_component", pc}};
}

void cmd_rate(Context& c) {
  const std::string& sub = c.opt.subcommand;
  const RepPair pair = c.prob.pair();
  MetricSpec spec;
  spec.q = c.opt.q;
  if (sub == "rate") {
    RateOptions ro;
    ro.sym = c.prob.sym_options(c.opt.seed);
    ro.catalyst = c.opt.catalyst;
    if (c.prob.catalyst) ro.catalyst_state = c.prob.catalyst->density();
    ro.catalyst_rep = c.prob.catalyst_rep;
    const RateReport r = conversion_rate(pair, pure_of(c.prob.require_state_in(), "state_in"),
                                         pure_of(c.prob.require_state_out(), "state_out"), ro, c.tol);
    c.results = rate_to_json(r);
    for (const auto& s : r.caveats) c.caveats.push_back(s);
  } else if (sub == "reversible") {
    const ReversibilityReport r =
        reversibility_check(pair, pure_of(c.prob.require_state_in(), "state_in"),
                            pure_of(c.prob.require_state_out(), "state_out"),
                            c.prob.sym_options(c.opt.seed), c.tol);
    c.results = {{"reversible", r.reversible},
                 {"r", number_to_json(r.r)},
                 {"r_reverse", number_to_json(r.r_reverse)},
                 {"product", number_to_json(r.r * r.r_reverse)},
                 {"proportionality_gap", number_to_json(r.proportionality_gap)},
                 {"forward", sym_to_json(r.forward)},
                 {"backward", sym_to_json(r.backward)}};
  } else if (sub == "distill-bound") {
    const CMatrix rho = c.prob.require_state_in().density();
    const CVector phi = pure_of(c.prob.require_state_out(), "state_out");
    const double b = distillable_bound(pair, rho, phi, c.tol);
    const VanishingCheck v = vanishing_distillable_check(pair.rep_in, pair.rep_out, rho, phi, c.tol);
    c.results = {{"bound", number_to_json(b)},
                 {"vanishes", v.vanishes},
                 {"witness_gamma", v.witness_gamma ? vector_to_json(*v.witness_gamma) : json(nullptr)},
                 {"witness_value", v.witness_value}};
  } else if (sub == "cost-bound") {
    const CVector phi = pure_of(c.prob.require_state_out(), "state_out");
    if (c.prob.ensemble.empty()) fail_validation("cost-bound needs an ensemble in the problem file");
    const CostReport r = cost_bound(pair, c.prob.ensemble, c.prob.p_sym, phi, c.tol);
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back({{"weight", t.weight}, {"r", number_to_json(t.r)}});
    c.results = {{"bound", number_to_json(r.bound)},
                 {"terms", terms},
                 {"p_sym", c.prob.p_sym},
                 {"average_qgt", matrix_to_json(average_qgt(pair.rep_in, c.prob.ensemble, c.tol))}};
  } else if (sub == "thermo-bound") {
    const ThermoBounds b = thermo_bounds(pair.rep_in, c.prob.require_state_in().density(), pair.rep_out,
                                         pure_of(c.prob.require_state_out(), "state_out"),
                                         c.prob.rate_r, spec, c.tol);
    c.results = {{"rate_r", c.prob.rate_r},
                 {"q", spec.q},
                 {"variance_rate_required", b.variance_rate_required},
                 {"s_scalar", b.s_scalar},
                 {"s_bound_matrix", matrix_to_json(b.s_bound_matrix)},
                 {"s_bound_max_eigenvalue", b.s_bound_max_eigenvalue},
                 {"skew_information", b.skew_information},
                 {"skew_bound", b.skew_bound}};
    if (pair.rep_in.dim_g() > 1)
      c.caveats.push_back("scalar bounds use the first generator as the Hamiltonian");
  } else if (sub == "refrate") {
    const CVector phi = pure_of(c.prob.require_state_out(), "state_out");
    const CMatrix q = qgt(pair.rep_out, phi, {}, c.tol).matrix;
    const double lmax = max_eigenvalue(q);
    c.results = {{"rate", number_to_json(min_entropy_rate(q, c.tol))},
                 {"qgt_max_eigenvalue", lmax},
                 {"min_entropy_bits", number_to_json(lmax > 0 ? -std::log2(lmax) : kInf)},
                 {"target_qgt", matrix_to_json(q)}};
    if (c.prob.state_in && c.prob.state_in->pure) {
      const CMatrix qi = qgt(pair.rep_in, c.prob.state_in->vector, {}, c.tol).matrix;
      const Eigen::Index m = qi.rows();
      c.results["input_identity_deviation"] = max_abs(qi - CMatrix::Identity(m, m));
      RateOptions ro;
      ro.sym = c.prob.sym_options(c.opt.seed);
      const RateReport r = conversion_rate(pair, c.prob.state_in->vector, phi, ro, c.tol);
      c.results["direct_rate"] = number_to_json(r.rate);
    }
  } else {
    fail_validation("unknown rate subcommand '" + sub +
                    "' (expected rate, reversible, distill-bound, cost-bound, thermo-bound, refrate)");
  }
}

json channel_to_json(const KrausChannel& ch) {
  json k = json::array();
  for (const auto& m : ch.kraus_ops) k.push_back(matrix_to_json(m));
  return {{"in_dim", ch.in_dim}, {"out_dim", ch.out_dim}, {"kraus_ops", k}};
}

TwirlMode parse_mode(const std::string& s) {
  if (s == "auto") return TwirlMode::Auto;
  if (s == "finite") return TwirlMode::FiniteList;
  if (s == "u1") return TwirlMode::U1Exact;
  if (s == "mc") return TwirlMode::MonteCarlo;
  fail_validation("--mode must be one of auto, finite, u1, mc");
}

void cmd_channel(Context& c) {
  const std::string& sub = c.opt.subcommand;
  const RepPair pair = c.prob.pair();
  const CVector psi = pure_of(c.prob.require_state_in(), "state_in");
  const CVector phi = pure_of(c.prob.require_state_out(), "state_out");
  const BuiltChannel bc = build_conversion_channel(pair, psi, phi, c.tol);
  if (sub == "build") {
    const EigResult eg = herm_eig(bc.artifacts.gamma.size() ? bc.artifacts.gamma : CMatrix::Zero(1, 1), c.tol);
    // Fidelity deficit along a seeded direction for theta in [1e-3, 1e-1].
    Rng rng(c.opt.seed);
    std::vector<double> dir(static_cast<std::size_t>(pair.rep_in.dim_g()));
    double nrm = 0.0;
    for (double& d : dir) {
      d = rng.normal();
      nrm += d * d;
    }
    for (double& d : dir) d /= std::sqrt(nrm);
    std::vector<double> ts, ds;
    json curve = json::array();
    for (int i = 0; i <= 8; ++i) {
      const double t = std::pow(10.0, -3.0 + 2.0 * i / 8.0);
      std::vector<double> th(dir.size());
      for (std::size_t k = 0; k < dir.size(); ++k) th[k] = t * dir[k];
      const double d = fidelity_deficit(bc.channel, unitary_at(pair.rep_in, th, 0, c.tol) * psi,
                                        unitary_at(pair.rep_out, th, 0, c.tol) * phi);
      ts.push_back(t);
      ds.push_back(d);
      curve.push_back({{"theta", t}, {"deficit", d}});
    }
    const PowerFit fit = fit_power_law(ts, ds, "fidelity deficit vs theta");
    c.results = {
        {"channel", channel_to_json(bc.channel)},
        {"certificates",
         {{"completeness_error", bc.channel.completeness_error()},
          {"fidelity", 1.0 - fidelity_deficit(bc.channel, psi, phi)},
          {"cz_residual", bc.artifacts.cz_residual},
          {"gamma_min_eigenvalue", eg.values(0)},
          {"pencil_value", number_to_json(bc.artifacts.pencil_value)}}},
        {"artifacts",
         {{"c_in", matrix_to_json(bc.artifacts.c_in)},
          {"c_out", matrix_to_json(bc.artifacts.c_out)},
          {"z", matrix_to_json(bc.artifacts.z)},
          {"gamma", matrix_to_json(bc.artifacts.gamma)}}},
        {"deficit_curve", curve},
        {"deficit_slope", {{"exponent", fit.exponent}, {"points", fit.points}, {"direction", dir}}}};
    if (fit.points < 2)
      c.caveats.push_back("deficit vanishes identically along the probe direction; no slope fitted");
  } else if (sub == "twirl") {
    TwirlSpec ts;
    ts.mode = parse_mode(c.opt.mode);
    ts.count = c.opt.samples;
    ts.seed = c.opt.seed;
    const TwirlResult tw = twirl(bc.channel, pair, ts, c.tol);
    Rng rng(c.opt.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<CMatrix> states{projector(psi)};
    for (int i = 0; i < 4; ++i) states.push_back(rng.density(pair.rep_in.dim, 1 + static_cast<int>(rng.index(pair.rep_in.dim))));
    std::vector<ElementPair> probes;
    for (int i = 0; i < 8; ++i) probes.push_back(random_group_element(pair, rng, c.tol));
    c.results = {{"channel", channel_to_json(tw.channel)},
                 {"mode", twirl_mode_name(tw.mode_used)},
                 {"samples", tw.samples},
                 {"exact", tw.exact},
                 {"completeness_error", tw.channel.completeness_error()},
                 {"covariance_defect_before", covariance_defect(bc.channel, states, probes)},
                 {"covariance_defect_after", covariance_defect(tw.channel, states, probes)}};
    if (!tw.exact) c.caveats.push_back("Monte Carlo twirl: covariance holds only up to sampling error");
  } else {
    fail_validation("unknown channel subcommand '" + sub + "' (expected build, twirl)");
  }
}

std::string csv_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void cmd_simulate(Context& c) {
  const std::string& sub = c.opt.subcommand;
  const RepPair pair = c.prob.pair();
  const int m = pair.rep_in.dim_g();
  MetricSpec spec;
  spec.q = c.opt.q;
  if (sub == "scan") {
    ScanConfig cfg;
    cfg.copies = parse_copies(c.opt.copies, 1, 8);
    cfg.shifts = load_shifts(c.opt.shift_file, m);
    cfg.rate_r = c.prob.rate_r;
    cfg.seed = c.opt.seed;
    const ScanTable t = convergence_scan(pair, pure_of(c.prob.require_state_in(), "state_in"),
                                         pure_of(c.prob.require_state_out(), "state_out"), cfg, c.tol);
    json rows = json::array();
    std::ostringstream csv;
    csv << "N,u_norm,trace_distance,fidelity,per_copy_infidelity\n";
    for (const auto& r : t.rows) {
      rows.push_back({{"N", r.n},
                      {"u", r.u},
                      {"u_norm", r.u_norm},
                      {"trace_distance", r.trace_distance},
                      {"fidelity", r.fidelity},
                      {"per_copy_infidelity", r.per_copy_infidelity}});
      csv << r.n << ',' << csv_number(r.u_norm) << ',' << csv_number(r.trace_distance) << ','
          << csv_number(r.fidelity) << ',' << csv_number(r.per_copy_infidelity) << '\n';
    }
    json fits = json::array();
    for (const auto& f : t.fits)
      fits.push_back({{"what", f.what}, {"exponent", f.exponent}, {"prefactor", f.prefactor}, {"points", f.points}});
    c.results = {{"rows", rows}, {"fits", fits}, {"notes", t.notes}};
    c.csv = csv.str();
  } else if (sub == "convert") {
    const std::vector<int> ns = parse_copies(c.opt.copies, 4, 8);
    const auto shifts = c.opt.shift_file.empty() ? std::vector<std::vector<double>>{}
                                                 : load_shifts(c.opt.shift_file, m);
    ConvertOptions co;
    co.split_exponent = c.opt.split;
    co.seed = c.opt.seed;
    co.random_frame = c.opt.random_frame;
    co.catalyst = c.opt.catalyst;
    if (!shifts.empty()) co.shift = shifts[0];
    json rows = json::array();
    std::ostringstream csv;
    csv << "N,n_est,n_conv,trace_distance,fidelity\n";
    std::vector<std::string> cav;
    for (int n : ns) {
      const ConvertResult r = estimate_and_convert(pair, pure_of(c.prob.require_state_in(), "state_in"),
                                                   pure_of(c.prob.require_state_out(), "state_out"), n, co,
                                                   c.tol);
      rows.push_back({{"N", n},
                      {"n_est", r.n_est},
                      {"n_conv", r.n_conv},
                      {"delta", r.delta},
                      {"grid_size", r.grid_size},
                      {"true_theta", r.true_point.theta},
                      {"estimate_theta", r.estimate.point.theta},
                      {"estimate_fidelity", r.estimate.fidelity},
                      {"ties", r.estimate.ties},
                      {"trace_distance", r.distance_to_target},
                      {"fidelity", r.fidelity_to_target}});
      csv << n << ',' << r.n_est << ',' << r.n_conv << ',' << csv_number(r.distance_to_target) << ','
          << csv_number(r.fidelity_to_target) << '\n';
      for (const auto& s : r.caveats)
        if (std::find(cav.begin(), cav.end(), s) == cav.end()) cav.push_back(s);
    }
    c.results = {{"rows", rows}, {"split_exponent", co.split_exponent}, {"shift", co.shift}};
    for (const auto& s : cav) c.caveats.push_back(s);
    c.csv = csv.str();
  } else if (sub == "check") {
    const std::string& suite = c.opt.suite;
    const bool all = suite == "all";
    if (!all && suite != "monotonicity" && suite != "sq" && suite != "largest-ev" && suite != "finite-n")
      fail_validation("--suite must be one of all, monotonicity, sq, largest-ev, finite-n");
    bool pass = true;
    if (all || suite == "monotonicity") {
      MonotonicityOptions mo;
      mo.count = c.opt.count > 0 ? c.opt.count : 200;
      mo.seed = c.opt.seed;
      mo.spec = spec;
      mo.twirl.count = c.opt.samples;
      const MonotonicityReport r = monotonicity_probe(pair, mo, c.tol);
      const bool ok = r.violations == 0 && r.control_flagged;
      pass = pass && ok;
      c.results["monotonicity"] = {{"draws", r.draws},
                                   {"max_petz_violation", r.max_petz_violation},
                                   {"max_s_violation", r.max_s_violation},
                                   {"max_sq_violation", r.max_sq_violation},
                                   {"max_covariance_defect", r.max_covariance_defect},
                                   {"violations", r.violations},
                                   {"control_max_violation", r.control_max_violation},
                                   {"control_flagged", r.control_flagged},
                                   {"notes", r.notes},
                                   {"pass", ok}};
    }
    if (all || suite == "sq") {
      const SqSuiteReport r = s_q_property_suite(pair, c.opt.count > 0 ? c.opt.count : 100, c.opt.seed, spec, c.tol);
      const bool ok = r.max_violation() <= 1e-9;
      pass = pass && ok;
      c.results["sq"] = {{"draws", r.draws},
                         {"positivity", r.positivity},
                         {"additivity", r.additivity},
                         {"convexity", r.convexity},
                         {"monotonicity", r.monotonicity},
                         {"strong_monotonicity", r.strong_monotonicity},
                         {"flag_consistency", r.flag_consistency},
                         {"max_violation", r.max_violation()},
                         {"pass", ok}};
    }
    if (all || suite == "largest-ev") {
      const LargestEvReport r = largest_ev_check(c.opt.count > 0 ? c.opt.count : 500, c.opt.seed, spec, c.tol);
      const bool ok = r.overlap_violations == 0 && r.metric_violations == 0;
      pass = pass && ok;
      c.results["largest_ev"] = {{"draws", r.draws},
                                 {"overlap_violations", r.overlap_violations},
                                 {"metric_violations", r.metric_violations},
                                 {"min_overlap_margin", r.min_overlap_margin},
                                 {"min_metric_margin", r.min_metric_margin},
                                 {"max_delta", r.max_delta},
                                 {"pass", ok}};
    }
    if (all || suite == "finite-n") {
      const bool use_out = c.prob.state_out && c.prob.state_out->pure;
      const Representation& rep = use_out ? pair.rep_out : pair.rep_in;
      const CVector phi = use_out ? c.prob.state_out->vector : pure_of(c.prob.require_state_in(), "state_in");
      Rng rng(c.opt.seed);
      CVector gamma(m);
      for (int i = 0; i < m; ++i) gamma(i) = rng.cnormal();
      const CMatrix o = gamma_dagger_x(rep.generators, gamma);
      const std::vector<int> ns = parse_copies(c.opt.copies, 1, 8);
      json runs = json::array();
      bool ok = true;
      for (double power : {1.0, 2.0}) {
        FiniteNOptions lo;
        lo.n_min = ns.front();
        lo.n_max = ns.back();
        lo.admixture_power = power;
        lo.spec = spec;
        const FiniteNReport r = finite_n_lemma2_probe(rep, phi, o, lo, c.tol);
        json rows = json::array();
        for (const auto& row : r.rows)
          rows.push_back({{"N", row.n},
                          {"admixture", row.admixture},
                          {"trace_distance", row.trace_distance},
                          {"ratio", row.ratio},
                          {"variance", row.variance},
                          {"asserted", row.asserted},
                          {"pass", row.pass}});
        runs.push_back({{"admixture", "1/N^" + std::to_string(static_cast<int>(power))},
                        {"rows", rows},
                        {"assert_distance", r.assert_distance},
                        {"slack", r.slack},
                        {"label", r.label},
                        {"pass", r.pass}});
        ok = ok && r.pass;
      }
      pass = pass && ok;
      c.results["finite-n"] = {{"gamma", vector_to_json(gamma)}, {"runs", runs}, {"pass", ok}};
      c.caveats.push_back("finite-n suite is a finite-N trend probe with calibrated slack, not a proof");
    }
    c.results["pass"] = pass;
  } else {
    fail_validation("unknown simulate subcommand '" + sub + "' (expected scan, convert, check)");
  }
}

json config_echo(const Options& o, const Problem& p) {
  return {{"problem_file", o.problem},
          {"problem", serialize_problem(p)},
          {"q", o.q},
          {"component", o.component},
          {"theta", o.theta},
          {"catalyst", o.catalyst},
          {"copies", o.copies},
          {"shift_file", o.shift_file},
          {"format", o.format},
          {"suite", o.suite},
          {"count", o.count},
          {"split", o.split},
          {"random_frame", o.random_frame},
          {"mode", o.mode},
          {"samples", o.samples},
          {"tensor_cap", tensor_cap()}};
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail_validation("cannot write '" + tmp + "'");
    f << text;
    if (!f) fail_validation("write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) fail_validation("cannot move output into '" + path + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"asymkit: conversion rates and channels in the resource theory of asymmetry", "asymkit"};
  Options o;
  app.add_option("command", o.command, "measure | rate | channel | simulate")
      ->required()
      ->check(CLI::IsMember({"measure", "rate", "channel", "simulate"}));
  app.add_option("subcommand", o.subcommand, "subcommand (default depends on command)");
  app.add_option("--problem", o.problem, "problem file (JSON)")->required();
  app.add_option("--q", o.q, "metric parameter q in (0, 1)");
  app.add_option("--component", o.component, "component pair index");
  app.add_option("--theta", o.theta, "comma-separated group parameters");
  app.add_flag("--catalyst", o.catalyst, "catalytic mode: skip the symmetry gate");
  app.add_option("--copies", o.copies, "copy counts as A:B or a comma list");
  app.add_option("--shift-file", o.shift_file, "JSON list of local shifts u");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "write the report to this file");
  app.add_option("--suite", o.suite, "check suite: all, monotonicity, sq, largest-ev, finite-n");
  app.add_option("--count", o.count, "draws per suite (0 for defaults)");
  app.add_option("--split", o.split, "estimation split exponent in (0, 1/2)");
  app.add_flag("--random-frame", o.random_frame, "draw the true frame from the seed");
  app.add_option("--mode", o.mode, "twirl mode: auto, finite, u1, mc");
  app.add_option("--samples", o.samples, "Monte Carlo twirl samples");
  app.add_option("--tol-herm", o.tol_herm, "Hermiticity tolerance");
  app.add_option("--tol-norm", o.tol_norm, "state normalization tolerance");
  app.add_option("--tol-psd", o.tol_psd, "relative PSD tolerance");
  app.add_option("--tol-kernel", o.tol_kernel, "relative kernel cut for eigenvalues");
  app.add_option("--tol-residual", o.tol_residual, "residual tolerance for identities");
  app.set_version_flag("--version", std::string(ASYMKIT_VERSION));
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << ASYMKIT_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "asymkit: " << e.what() << "\n";
    return 2;
  }
  if (o.subcommand.empty()) {
    if (o.command == "measure") o.subcommand = "qgt";
    if (o.command == "rate") o.subcommand = "rate";
    if (o.command == "channel") o.subcommand = "build";
    if (o.command == "simulate") o.subcommand = "scan";
  }
  try {
    Context c;
    c.opt = o;
    c.prob = load_problem(o.problem);
    c.tol = c.prob.tol;
    if (o.tol_herm >= 0) c.tol.tol_herm = o.tol_herm;
    if (o.tol_norm >= 0) c.tol.tol_norm = o.tol_norm;
    if (o.tol_psd >= 0) c.tol.tol_psd = o.tol_psd;
    if (o.tol_kernel >= 0) c.tol.tol_kernel = o.tol_kernel;
    if (o.tol_residual >= 0) c.tol.tol_residual = o.tol_residual;
    c.tol.validate();
    if (!(o.q > 0.0 && o.q < 1.0)) fail_validation("--q must lie in (0, 1)");
    if (o.command == "measure")
      cmd_measure(c);
    else if (o.command == "rate")
      cmd_rate(c);
    else if (o.command == "channel")
      cmd_channel(c);
    else
      cmd_simulate(c);
    std::string text;
    if (o.format == "csv") {
      if (c.csv.empty()) fail_validation("--format csv is only available for simulate scan and convert");
      text = c.csv;
    } else {
      json report;
      report["tool"] = "asymkit";
      report["version"] = ASYMKIT_VERSION;
      report["command"] = o.command;
      report["subcommand"] = o.subcommand;
      report["seed"] = o.seed;
      json cfg = config_echo(o, c.prob);
      cfg["tolerances"] = {{"tol_herm", c.tol.tol_herm},
                           {"tol_norm", c.tol.tol_norm},
                           {"tol_psd", c.tol.tol_psd},
                           {"tol_kernel", c.tol.tol_kernel},
                           {"tol_residual", c.tol.tol_residual}};
      report["config"] = cfg;
      report["results"] = c.results;
      report["caveats"] = c.caveats;
      text = report.dump(2) + "\n";
    }
    write_output(text, o.out, out);
    return 0;
  } catch (const Error& e) {
    err << "asymkit: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const json::exception& e) {
    err << "asymkit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "asymkit: internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace asymkit
