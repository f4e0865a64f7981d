#include "asymkit/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "asymkit/numkit.hpp"
#include "asymkit/rng.hpp"

namespace asymkit {

namespace {

std::vector<double> scaled(const std::vector<double>& u, double s) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * s;
  return out;
}

double norm2(const std::vector<double>& u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return std::sqrt(s);
}

// Amount by which a - b fails to be PSD.
double order_violation(const CMatrix& a, const CMatrix& b) {
  return std::max(0.0, -min_eigenvalue(hermitize(a - b)));
}

CVector random_gamma(int m, Rng& rng) {
  CVector g(m);
  for (int i = 0; i < m; ++i) g(i) = rng.cnormal();
  return g;
}

}  // namespace

CVector shifted_iid_state(const Representation& rep, const CVector& psi,
                          const std::vector<double>& u, int n, const Tolerance& tol) {
  if (n < 1) fail_validation("shifted_iid_state: N must be >= 1");
  require_pure_state(psi, tol, "shifted_iid_state");
  std::size_t d = 1;
  for (int i = 0; i < n; ++i) d *= static_cast<std::size_t>(rep.dim);
  check_cap(d, "shifted_iid_state");
  const std::vector<double> th = scaled(u, 1.0 / std::sqrt(static_cast<double>(n)));
  const CVector one = unitary_at(rep, th, 0, tol) * psi;
  return tensor_power(one, n);
}

void ScanConfig::validate(int dim_g) const {
  if (copies.empty()) fail_validation("scan: copies list is empty");
  for (std::size_t i = 0; i < copies.size(); ++i) {
    if (copies[i] < 1) fail_validation("scan: copy counts must be >= 1");
    if (i > 0 && copies[i] <= copies[i - 1]) fail_validation("scan: copies must be ascending");
  }
  if (shifts.empty()) fail_validation("scan: shifts list is empty");
  for (const auto& u : shifts)
    if (static_cast<int>(u.size()) != dim_g)
      fail_validation("scan: shift vector has wrong length");
  if (!(rate_r > 0.0)) fail_validation("scan: rate must be positive");
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                       std::string what) {
  PowerFit f;
  f.what = std::move(what);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    // values at roundoff level carry no slope information
    if (!(x[i] > 0.0) || !(y[i] > 1e-14)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  f.points = n;
  if (n < 2) return f;
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) return f;
  f.exponent = (n * sxy - sx * sy) / den;
  f.prefactor = std::exp((sy - f.exponent * sx) / n);
  return f;
}

ScanTable convergence_scan(const RepPair& pair, const CVector& psi, const CVector& phi,
                           const ScanConfig& config, const Tolerance& tol) {
  config.validate(pair.rep_in.dim_g());
  const BuiltChannel bc = build_conversion_channel(pair, psi, phi, tol);
  ScanTable t;
  if (config.rate_r != 1.0)
    t.notes.push_back("rows use the single-copy channel, i.e. the rate-1 path; rate_r is echoed only");
  for (int n : config.copies) {
    std::size_t din = 1, dout = 1;
    for (int i = 0; i < n; ++i) {
      din *= static_cast<std::size_t>(pair.rep_in.dim);
      dout *= static_cast<std::size_t>(pair.rep_out.dim);
    }
    check_cap(std::max(din, dout), "convergence_scan");
    for (const auto& u : config.shifts) {
      const std::vector<double> th = scaled(u, 1.0 / std::sqrt(static_cast<double>(n)));
      const CVector ps = unitary_at(pair.rep_in, th, 0, tol) * psi;
      const CVector ph = unitary_at(pair.rep_out, th, 0, tol) * phi;
      // The channel acts copy-wise on a product input, so the output is a tensor power.
      const CMatrix one = apply_channel(bc.channel, projector(ps));
      const CMatrix out = tensor_power(one, n);
      const CVector target = tensor_power(ph, n);
      ScanRow row;
      row.n = n;
      row.u = u;
      row.u_norm = norm2(u);
      row.trace_distance =
          std::clamp(0.5 * trace_norm_hermitian(out - projector(target)), 0.0, 1.0);
      row.fidelity = std::clamp(target.dot(out * target).real(), 0.0, 1.0);
      row.per_copy_infidelity = fidelity_deficit(bc.channel, ps, ph);
      t.rows.push_back(row);
    }
  }
  // Fits: infidelity against N for each shift, and against |u| for each N.
  for (const auto& u : config.shifts) {
    if (norm2(u) == 0.0) continue;
    std::vector<double> xs, total, per;
    for (const auto& r : t.rows)
      if (r.u == u) {
        xs.push_back(r.n);
        total.push_back(1.0 - r.fidelity);
        per.push_back(r.per_copy_infidelity);
      }
    std::ostringstream os;
    os << "|u|=" << norm2(u);
    t.fits.push_back(fit_power_law(xs, total, "total infidelity vs N at " + os.str()));
    t.fits.push_back(fit_power_law(xs, per, "per-copy infidelity vs N at " + os.str()));
  }
  for (int n : config.copies) {
    std::vector<double> xs, per;
    for (const auto& r : t.rows)
      if (r.n == n && r.u_norm > 0.0) {
        xs.push_back(r.u_norm);
        per.push_back(r.per_copy_infidelity);
      }
    if (xs.size() >= 2)
      t.fits.push_back(fit_power_law(xs, per, "per-copy infidelity vs |u| at N=" + std::to_string(n)));
  }
  t.notes.push_back("fits describe trends at desk scale; they are not asserted as theorems");
  return t;
}

KrausChannel random_channel(int in_dim, int out_dim, int n_kraus, Rng& rng) {
  if (in_dim < 1 || out_dim < 1 || n_kraus < 1) fail_validation("random_channel: dimensions must be >= 1");
  // an isometry into out_dim * n_kraus rows needs at least in_dim of them
  n_kraus = std::max(n_kraus, (in_dim + out_dim - 1) / out_dim);
  const CMatrix g = rng.ginibre(static_cast<Eigen::Index>(out_dim) * n_kraus, in_dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(g.rows(), in_dim);
  KrausChannel ch;
  ch.in_dim = in_dim;
  ch.out_dim = out_dim;
  for (int a = 0; a < n_kraus; ++a) ch.kraus_ops.push_back(q.middleRows(a * out_dim, out_dim));
  return ch;
}

namespace {

struct DrawViolation {
  double petz = 0.0, s = 0.0, sq = 0.0;
};

DrawViolation monotonicity_violation(const RepPair& pair, const KrausChannel& ch,
                                     const CMatrix& rho, const CVector& gamma,
                                     const MetricSpec& spec, const Tolerance& tol) {
  DrawViolation v;
  const CMatrix out = apply_channel(ch, rho);
  const CMatrix o = gamma_dagger_x(pair.rep_in.generators, gamma);
  const CMatrix o2 = gamma_dagger_x(pair.rep_out.generators, gamma);
  v.petz = std::max(0.0, petz_norm(out, o2, spec, tol) - petz_norm(rho, o, spec, tol));
  v.s = order_violation(s_matrix(pair.rep_in, rho, {}, tol).matrix,
                        s_matrix(pair.rep_out, out, {}, tol).matrix);
  v.sq = order_violation(s_q_matrix(pair.rep_in, rho, spec, {}, tol).matrix,
                         s_q_matrix(pair.rep_out, out, spec, {}, tol).matrix);
  return v;
}

}  // namespace

MonotonicityReport monotonicity_probe(const RepPair& pair, const MonotonicityOptions& opt,
                                      const Tolerance& tol) {
  if (opt.count < 1) fail_validation("monotonicity_probe: count must be >= 1");
  opt.spec.validate();
  pair.validate(tol);
  MonotonicityReport rep;
  Rng rng(opt.seed);
  const int din = pair.rep_in.dim, dout = pair.rep_out.dim, m = pair.rep_in.dim_g();
  for (int draw = 0; draw < opt.count; ++draw) {
    const int nk = 2 + static_cast<int>(rng.index(3));
    const KrausChannel raw = random_channel(din, dout, nk, rng);
    TwirlSpec ts = opt.twirl;
    ts.seed = opt.seed * 1000003ULL + static_cast<unsigned long long>(draw);
    const TwirlResult tw = twirl(raw, pair, ts, tol);
    const int rank = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(din)));
    const CMatrix rho = rng.density(din, rank);
    const CVector gamma = random_gamma(m, rng);
    const DrawViolation v = monotonicity_violation(pair, tw.channel, rho, gamma, opt.spec, tol);
    rep.max_petz_violation = std::max(rep.max_petz_violation, v.petz);
    rep.max_s_violation = std::max(rep.max_s_violation, v.s);
    rep.max_sq_violation = std::max(rep.max_sq_violation, v.sq);
    if (std::max({v.petz, v.s, v.sq}) > opt.threshold) ++rep.violations;
    if (draw < 8) {
      std::vector<ElementPair> probes;
      for (int k = 0; k < 4; ++k) probes.push_back(random_group_element(pair, rng, tol));
      rep.max_covariance_defect =
          std::max(rep.max_covariance_defect, covariance_defect(tw.channel, {rho}, probes));
    }
    ++rep.draws;
  }
  TwirlMode mode = TwirlMode::Auto;
  twirl_elements(pair, opt.twirl, &mode, tol);
  if (mode == TwirlMode::MonteCarlo)
    rep.notes.push_back("Monte Carlo twirl: channels are covariant only up to sampling error");
  if (opt.negative_control) {
    Rng crng(opt.seed ^ 0x5bd1e995ULL);
    double worst = 0.0;
    if (din == dout) {
      // Discrete Fourier unitary applied to a symmetric basis state.
      KrausChannel f;
      f.in_dim = f.out_dim = din;
      CMatrix u(din, din);
      for (int j = 0; j < din; ++j)
        for (int k = 0; k < din; ++k)
          u(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(din)), 2.0 * M_PI * j * k / din);
      f.kraus_ops.push_back(u);
      const CMatrix e0 = projector(CVector::Unit(din, 0));
      for (int k = 0; k < 4; ++k) {
        const DrawViolation v =
            monotonicity_violation(pair, f, e0, random_gamma(m, crng), opt.spec, tol);
        worst = std::max({worst, v.petz, v.s, v.sq});
      }
    }
    for (int k = 0; k < 20; ++k) {
      const KrausChannel raw = random_channel(din, dout, 1 + static_cast<int>(crng.index(2)), crng);
      const CMatrix rho = crng.density(din, 1);
      const DrawViolation v =
          monotonicity_violation(pair, raw, rho, random_gamma(m, crng), opt.spec, tol);
      worst = std::max({worst, v.petz, v.s, v.sq});
    }
    rep.control_max_violation = worst;
    rep.control_flagged = worst >= 1e-3;
    rep.notes.push_back("negative control uses non-covariant channels; violations are expected there");
  }
  return rep;
}

LargestEvReport largest_ev_check(int count, unsigned long long seed, const MetricSpec& spec,
                                 const Tolerance& tol) {
  if (count < 1) fail_validation("largest_ev_check: count must be >= 1");
  spec.validate();
  LargestEvReport rep;
  rep.min_overlap_margin = kInf;
  rep.min_metric_margin = kInf;
  Rng rng(seed);
  for (int draw = 0; draw < count; ++draw) {
    const int d = 2 + static_cast<int>(rng.index(3));
    const CVector phi = rng.pure_state(d);
    CMatrix sigma;
    if (draw == 0) {
      sigma = projector(phi);
    } else if (draw == 1) {
      // Rank-2 mixture with an orthogonal state.
      CVector w = rng.pure_state(d);
      w -= phi * phi.dot(w);
      w /= w.norm();
      sigma = 0.7 * projector(phi) + 0.3 * projector(w);
    } else {
      const CMatrix tau = rng.density(d, 1 + static_cast<int>(rng.index(static_cast<std::size_t>(d))));
      double t = rng.uniform(0.0, 0.9);
      do {
        sigma = (1.0 - t) * projector(phi) + t * tau;
        t *= 0.5;
      } while (1.0 - phi.dot(sigma * phi).real() >= 0.5);
    }
    const double delta = std::max(0.0, 1.0 - phi.dot(sigma * phi).real());
    const EigResult e = herm_eig(sigma, tol);
    const CVector top = e.vectors.col(d - 1);
    const double overlap = std::norm(phi.dot(top));
    const double om = overlap - (1.0 - 2.0 * delta);
    const CMatrix o = rng.ginibre(d, d);
    const double lhs = petz_norm(sigma, o, spec, tol);
    const double fq = spec.f0() + spec.q * delta / (1.0 - delta);
    const double rhs = (1.0 - 2.0 * delta) * (1.0 - 2.0 * delta) / fq * generalized_variance(top, o);
    const double mm = lhs - rhs;
    if (om < -1e-12) ++rep.overlap_violations;
    if (mm < -1e-9 * std::max(1.0, rhs)) ++rep.metric_violations;
    rep.min_overlap_margin = std::min(rep.min_overlap_margin, om);
    rep.min_metric_margin = std::min(rep.min_metric_margin, mm);
    rep.max_delta = std::max(rep.max_delta, delta);
    ++rep.draws;
  }
  return rep;
}

FiniteNReport finite_n_lemma2_probe(const Representation& rep, const CVector& phi,
                                   const CMatrix& o, const FiniteNOptions& opt,
                                   const Tolerance& tol) {
  opt.spec.validate();
  require_pure_state(phi, tol, "finite-N probe state");
  if (o.rows() != rep.dim || o.cols() != rep.dim) fail_validation("finite-N probe: operator has wrong shape");
  if (opt.n_min < 1 || opt.n_max < opt.n_min) fail_validation("finite-N probe: bad N range");
  FiniteNReport r;
  r.assert_distance = opt.assert_distance;
  r.slack = opt.slack;
  const double v = generalized_variance(phi, o);
  for (int n = opt.n_min; n <= opt.n_max; ++n) {
    const CVector pn = tensor_power(phi, n);
    const Eigen::Index dn = pn.size();
    const double eps = std::min(1.0, opt.admixture_scale / std::pow(static_cast<double>(n), opt.admixture_power));
    const CMatrix sigma = (1.0 - eps) * projector(pn) +
                          (eps / static_cast<double>(dn)) * CMatrix::Identity(dn, dn);
    const CMatrix on = iid_sum(o, n);
    FiniteNRow row;
    row.n = n;
    row.admixture = eps;
    row.trace_distance = eps * (1.0 - 1.0 / static_cast<double>(dn));
    row.ratio = opt.spec.f0() * petz_norm(sigma, on, opt.spec, tol) / n;
    row.variance = v;
    row.asserted = row.trace_distance < opt.assert_distance;
    row.pass = !row.asserted || row.ratio >= (1.0 - opt.slack) * v - 1e-12;
    r.pass = r.pass && row.pass;
    r.rows.push_back(row);
  }
  return r;
}

double SqSuiteReport::max_violation() const {
  return std::max({positivity, additivity, convexity, monotonicity, strong_monotonicity,
                   flag_consistency});
}

SqSuiteReport s_q_property_suite(const RepPair& pair, int count, unsigned long long seed,
                                 const MetricSpec& spec, const Tolerance& tol) {
  if (count < 1) fail_validation("s_q_property_suite: count must be >= 1");
  spec.validate();
  pair.validate(tol);
  SqSuiteReport r;
  Rng rng(seed);
  const Representation& ri = pair.rep_in;
  const Representation& ro = pair.rep_out;
  const int din = ri.dim, dout = ro.dim;
  const Representation r2 = iid_generators(ri, 2);
  // Output system with a two-outcome flag register in front.
  Representation rflag;
  rflag.dim = 2 * dout;
  for (const CMatrix& x : ro.generators)
    rflag.generators.push_back(tensor_product(CMatrix::Identity(2, 2), x));
  rflag.component_reps.push_back(CMatrix::Identity(rflag.dim, rflag.dim));
  auto sq = [&](const Representation& rep, const CMatrix& rho) {
    return s_q_matrix(rep, rho, spec, {}, tol).matrix;
  };
  for (int draw = 0; draw < count; ++draw) {
    const CMatrix rho = rng.density(din, 1 + static_cast<int>(rng.index(static_cast<std::size_t>(din))));
    const CMatrix sig = rng.density(din, 1 + static_cast<int>(rng.index(static_cast<std::size_t>(din))));
    const CMatrix s_rho = sq(ri, rho);
    r.positivity = std::max(r.positivity, std::max(0.0, -min_eigenvalue(s_rho)));

    const CMatrix s_sig = sq(ri, sig);
    r.additivity = std::max(r.additivity, max_abs(sq(r2, tensor_product(rho, sig)) - s_rho - s_sig));

    const double p = rng.uniform();
    r.convexity = std::max(r.convexity, order_violation(p * s_rho + (1.0 - p) * s_sig,
                                                        sq(ri, p * rho + (1.0 - p) * sig)));

    const int nk = 2 + static_cast<int>(rng.index(3));
    const KrausChannel raw = random_channel(din, dout, nk, rng);
    TwirlSpec ts;
    ts.seed = seed * 7919ULL + static_cast<unsigned long long>(draw);
    const KrausChannel tw = twirl(raw, pair, ts, tol).channel;
    r.monotonicity = std::max(r.monotonicity, order_violation(s_rho, sq(ro, apply_channel(tw, rho))));

    // Two-outcome covariant instrument: twirl each half of the Kraus set.
    KrausChannel a = raw, b = raw;
    const int split = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(nk - 1)));
    a.kraus_ops.assign(raw.kraus_ops.begin(), raw.kraus_ops.begin() + split);
    b.kraus_ops.assign(raw.kraus_ops.begin() + split, raw.kraus_ops.end());
    const CMatrix ea = apply_channel(twirl(a, pair, ts, tol).channel, rho);
    const CMatrix eb = apply_channel(twirl(b, pair, ts, tol).channel, rho);
    CMatrix avg = CMatrix::Zero(ro.dim_g(), ro.dim_g());
    for (const CMatrix* e : {&ea, &eb}) {
      const double pk = e->trace().real();
      if (pk > 1e-12) avg += pk * sq(ro, *e / pk);
    }
    r.strong_monotonicity = std::max(r.strong_monotonicity, order_violation(s_rho, avg));
    CMatrix flagged = CMatrix::Zero(2 * dout, 2 * dout);
    flagged.topLeftCorner(dout, dout) = ea;
    flagged.bottomRightCorner(dout, dout) = eb;
    r.flag_consistency = std::max(r.flag_consistency, max_abs(sq(rflag, flagged) - avg));
    ++r.draws;
  }
  return r;
}

}  // namespace asymkit
