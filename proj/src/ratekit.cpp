#include "asymkit/ratekit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "asymkit/numkit.hpp"
#include "asymkit/rng.hpp"

namespace asymkit {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string method_name(PencilMethod m) {
  return m == PencilMethod::SchurGeig ? "schur_geig" : "bisection_oracle";
}

std::string order_name(MatrixOrder o) {
  switch (o) {
    case MatrixOrder::Equal: return "equal";
    case MatrixOrder::Less: return "less";
    case MatrixOrder::Greater: return "greater";
    case MatrixOrder::Incomparable: return "incomparable";
  }
  return "?";
}

namespace {

double psd_scale(const CMatrix& m) { return std::max(0.0, max_eigenvalue(m)); }

void require_psd_scaled(const CMatrix& m, const Tolerance& tol, double scale, const char* what) {
  require_hermitian(m, tol, what);
  const double lmin = min_eigenvalue(m);
  const double s = std::max(psd_scale(m), scale);
  if (lmin < 0.0 && lmin < -tol.tol_psd * s) {
    std::ostringstream os;
    os << what << ": matrix is not PSD (min eigenvalue " << lmin << ")";
    fail_precondition(os.str());
  }
}

double generator_scale(const Representation& rep) {
  double s = 0.0;
  for (const CMatrix& x : rep.generators) {
    if (x.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(x), Eigen::EigenvaluesOnly);
    const double n = es.eigenvalues().cwiseAbs().maxCoeff();
    s = std::max(s, n * n);
  }
  return s;
}

// sup_ratio with an absolute reference scale for kernel classification.
PencilResult sup_ratio_scaled(const CMatrix& a, const CMatrix& b, const Tolerance& tol,
                              double scale) {
  if (a.rows() != b.rows() || a.rows() != a.cols() || b.rows() != b.cols())
    fail_validation("sup_ratio: shape mismatch");
  require_psd_scaled(a, tol, std::max(scale, psd_scale(b)), "sup_ratio (a)");
  require_psd_scaled(b, tol, std::max(scale, psd_scale(a)), "sup_ratio (b)");
  PencilResult res;
  res.method = PencilMethod::SchurGeig;
  const double s = std::max({psd_scale(a), psd_scale(b), scale});
  const Eigen::Index n = a.rows();
  if (s == 0.0 || n == 0) {
    res.value = kInf;
    res.kernel_eigenvalues = RVector::Zero(n);
    return res;
  }
  const KernelSplit kb = kernel_split(b, tol, s);
  res.kernel_eigenvalues = kb.kernel_values;
  const Eigen::Index ns = kb.support.cols(), nk = kb.kernel.cols();
  if (ns == 0) {
    res.value = kInf;
    return res;
  }
  const CMatrix aSS = kb.support.adjoint() * a * kb.support;
  CMatrix at = aSS;
  CMatrix aKKp, aKS;
  if (nk > 0) {
    const CMatrix aKK = hermitize(kb.kernel.adjoint() * a * kb.kernel);
    aKS = kb.kernel.adjoint() * a * kb.support;
    const EigResult ek = herm_eig(aKK, tol);
    const double cut = tol.tol_kernel * s;
    aKKp = herm_apply(ek, [cut](double x) { return x > cut ? 1.0 / x : 0.0; });
    at = aSS - aKS.adjoint() * aKKp * aKS;
  }
  CMatrix m(ns, ns);
  for (Eigen::Index i = 0; i < ns; ++i)
    for (Eigen::Index j = 0; j < ns; ++j)
      m(i, j) = at(i, j) / std::sqrt(kb.support_values(i) * kb.support_values(j));
  const EigResult em = herm_eig(hermitize(m), tol);
  const double lmin = em.values(0);
  const double lmax = std::max(0.0, em.values(ns - 1));
  res.value = (lmin <= tol.tol_kernel * lmax) ? 0.0 : lmin;
  CVector y(ns);
  for (Eigen::Index i = 0; i < ns; ++i) y(i) = em.vectors(i, 0) / std::sqrt(kb.support_values(i));
  CVector v = kb.support * y;
  if (nk > 0) v -= kb.kernel * (aKKp * (aKS * y));
  if (v.norm() > 0) v /= v.norm();
  res.direction = v;
  return res;
}

}  // namespace

void require_psd(const CMatrix& m, const Tolerance& tol, const char* what) {
  require_psd_scaled(m, tol, 0.0, what);
}

PencilResult sup_ratio(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  return sup_ratio_scaled(a, b, tol, 0.0);
}

double sup_ratio_oracle(const CMatrix& a, const CMatrix& b, const Tolerance& tol, int max_iter) {
  require_psd(a, tol, "sup_ratio_oracle (a)");
  require_psd(b, tol, "sup_ratio_oracle (b)");
  const double s = std::max(psd_scale(a), psd_scale(b));
  if (s == 0.0) return kInf;
  const EigResult eb = herm_eig(b, tol);
  const Eigen::Index n = b.rows();
  if (eb.values(n - 1) <= tol.tol_kernel * s) return kInf;
  const CVector top = eb.vectors.col(n - 1);
  double hi = top.dot(a * top).real() / eb.values(n - 1);
  double lo = 0.0;
  auto feasible = [&](double r) {
    return min_eigenvalue(a - r * b) >= -1e-12 * s * (1.0 + r);
  };
  if (feasible(hi)) return hi;
  for (int it = 0; it < max_iter && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double sup_ratio_sampled(const CMatrix& a, const CMatrix& b, int draws, unsigned long long seed) {
  Rng rng(seed);
  double best = kInf;
  for (int i = 0; i < draws; ++i) {
    const CVector v = rng.pure_state(a.rows());
    const double den = v.dot(b * v).real();
    if (den <= 0.0) continue;
    best = std::min(best, v.dot(a * v).real() / den);
  }
  return best;
}

double dmax(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  const double r = sup_ratio(b, a, tol).value;
  if (r == kInf) return -kInf;
  if (r <= 0.0) return kInf;
  return -std::log2(r);
}

namespace {

bool is_pure(const CMatrix& rho, const Tolerance& tol) {
  return kernel_split(rho, tol).support.cols() == 1;
}

CVector top_vector(const CMatrix& rho, const Tolerance& tol) {
  const EigResult e = herm_eig(rho, tol);
  return e.vectors.col(e.values.size() - 1);
}

// Real PSD form whose kernel is the Lie algebra of the stabilizer.
RMatrix stabilizer_form(const Representation& rep, const CMatrix& rho, const Tolerance& tol) {
  const int m = rep.dim_g();
  if (is_pure(rho, tol)) {
    const CVector v = top_vector(rho, tol);
    return qgt(rep, v, {}, tol).matrix.real();
  }
  std::vector<CMatrix> comm;
  for (const CMatrix& x : rep.generators) comm.push_back(rho * x - x * rho);
  RMatrix f(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      f(i, j) = (comm[static_cast<std::size_t>(i)].adjoint() * comm[static_cast<std::size_t>(j)])
                    .trace()
                    .real();
  return 0.5 * (f + f.transpose());
}

bool all_generators_scalar(const Representation& rep, const Tolerance& tol) {
  for (const CMatrix& x : rep.generators) {
    const cplx c = x.trace() / static_cast<double>(x.rows());
    if (max_abs(x - c * CMatrix::Identity(x.rows(), x.cols())) > tol.tol_residual) return false;
  }
  return true;
}

bool fixes(const CMatrix& u, const CMatrix& rho, const Tolerance& tol) {
  const CMatrix moved = hermitize(u * rho * u.adjoint());
  return 0.5 * trace_norm_hermitian(moved - rho) <= tol.tol_residual;
}

RVector canonical_sign(RVector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) < 1e-15) v(i) = 0.0;
  return v;
}

}  // namespace

SymVerdict sym_check(const RepPair& pair, const CMatrix& rho_in, const CMatrix& rho_out,
                     const SymOptions& opt, const Tolerance& tol) {
  pair.validate(tol);
  require_density(rho_in, tol, "sym_check input state");
  require_density(rho_out, tol, "sym_check output state");
  if (rho_in.rows() != pair.rep_in.dim || rho_out.rows() != pair.rep_out.dim)
    fail_validation("sym_check: state dimension does not match representation");
  SymVerdict out;

  // Identity component: stabilizer algebra inclusion.
  const RMatrix fin = stabilizer_form(pair.rep_in, rho_in, tol);
  const RMatrix fout = stabilizer_form(pair.rep_out, rho_out, tol);
  const double gin = generator_scale(pair.rep_in), gout = generator_scale(pair.rep_out);
  Eigen::SelfAdjointEigenSolver<RMatrix> ein(fin);
  const double cut_in = tol.tol_kernel * std::max(ein.eigenvalues().maxCoeff(), gin);
  std::vector<Eigen::Index> kidx;
  for (Eigen::Index i = 0; i < ein.eigenvalues().size(); ++i)
    if (ein.eigenvalues()(i) <= cut_in) kidx.push_back(i);
  RMatrix kin(fin.rows(), static_cast<Eigen::Index>(kidx.size()));
  for (std::size_t j = 0; j < kidx.size(); ++j)
    kin.col(static_cast<Eigen::Index>(j)) = ein.eigenvectors().col(kidx[j]);
  if (kin.cols() > 0) {
    Eigen::SelfAdjointEigenSolver<RMatrix> eout(fout);
    const double cut_out = tol.tol_kernel * std::max(eout.eigenvalues().maxCoeff(), gout);
    const RMatrix restricted = kin.transpose() * fout * kin;
    Eigen::SelfAdjointEigenSolver<RMatrix> er(0.5 * (restricted + restricted.transpose()));
    const Eigen::Index last = er.eigenvalues().size() - 1;
    if (er.eigenvalues()(last) > cut_out) {
      Witness w;
      w.kind = "direction";
      RVector g = kin * er.eigenvectors().col(last);
      w.direction = canonical_sign(g / g.norm());
      std::ostringstream os;
      os << "generator direction stabilizes the input but moves the output (output variance "
         << er.eigenvalues()(last) << ")";
      w.explanation = os.str();
      out.witnesses.push_back(w);
      out.verdict = Verdict::Violated;
    }
  }

  // Discrete checks: component pairs, supplied elements, sampled stabilizer elements.
  std::vector<ElementPair> elems;
  for (std::size_t i = 1; i < pair.component_pairs.size(); ++i)
    elems.push_back({pair.component_pairs[i].u_in, pair.component_pairs[i].u_out});
  for (const auto& e : opt.extra_elements) elems.push_back(e);
  const std::size_t n_listed = elems.size();
  if (kin.cols() > 0 && opt.samples > 0) {
    Rng rng(opt.seed);
    for (int s = 0; s < opt.samples; ++s) {
      RVector c(kin.cols());
      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.normal();
      const RVector dir = kin * c;
      const double t = rng.uniform(-M_PI, M_PI) / std::max(dir.norm(), 1e-300);
      std::vector<double> th(static_cast<std::size_t>(dir.size()));
      for (Eigen::Index i = 0; i < dir.size(); ++i) th[static_cast<std::size_t>(i)] = t * dir(i);
      const std::size_t comp = rng.index(pair.component_pairs.size());
      const CMatrix ui = expm_i_hermitian(generator_combination(pair.rep_in, th), tol) *
                         pair.component_pairs[comp].u_in;
      const CMatrix uo = expm_i_hermitian(generator_combination(pair.rep_out, th), tol) *
                         pair.component_pairs[comp].u_out;
      elems.push_back({ui, uo});
    }
  }
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (fixes(elems[i].u_in, rho_in, tol) && !fixes(elems[i].u_out, rho_out, tol)) {
      Witness w;
      w.kind = "element";
      w.element_index = static_cast<int>(i);
      w.explanation = i < n_listed ? "listed element fixes the input but not the output"
                                   : "sampled stabilizer element fixes the input but not the output";
      out.witnesses.push_back(w);
      out.verdict = Verdict::Violated;
      break;
    }
  }

  // Complete decision procedures.
  bool complete = false;
  std::optional<U1Spec> u1in = opt.u1_in, u1out = opt.u1_out;
  if (!u1in) u1in = u1_spec_from_rep(pair.rep_in, tol);
  if (!u1out) u1out = u1_spec_from_rep(pair.rep_out, tol);
  if (pair.rep_in.dim_g() == 1 && pair.component_pairs.size() == 1 && u1in && u1out) {
    const U1Divisor din = u1_symmetry_divisor(*u1in, rho_in, tol);
    const U1Divisor dout = u1_symmetry_divisor(*u1out, rho_out, tol);
    bool incl;
    if (!dout)
      incl = true;
    else if (!din)
      incl = false;
    else
      incl = (*dout % *din) == 0;
    std::ostringstream os;
    os << "U(1) divisors: input " << (din ? std::to_string(*din) : std::string("full"))
       << ", output " << (dout ? std::to_string(*dout) : std::string("full"));
    out.notes.push_back(os.str());
    complete = true;
    if (!incl && out.verdict != Verdict::Violated) {
      Witness w;
      w.kind = "element";
      std::ostringstream ws;
      if (din)
        ws << "rotation by 2*pi/" << *din << " fixes the input but not the output";
      else
        ws << "every rotation fixes the input but not the output";
      w.explanation = ws.str();
      out.witnesses.push_back(w);
      out.verdict = Verdict::Violated;
    }
  }
  if (opt.exhaustive) {
    if (all_generators_scalar(pair.rep_in, tol) && all_generators_scalar(pair.rep_out, tol)) {
      complete = true;
      out.notes.push_back("finite group: listed elements are exhaustive");
    } else {
      out.notes.push_back("exhaustive list ignored: generators act non-trivially");
    }
  }
  if (opt.input_stabilizer_trivial) {
    complete = true;
    out.notes.push_back("input stabilizer asserted trivial by caller");
  }
  if (out.verdict != Verdict::Violated) {
    out.verdict = complete ? Verdict::Holds : Verdict::Inconclusive;
    if (!complete)
      out.notes.push_back("no complete decision procedure applies; sampled checks found no violation");
  }
  return out;
}

RateReport conversion_rate(const RepPair& pair, const CVector& psi, const CVector& phi,
                           const RateOptions& opt, const Tolerance& tol) {
  pair.validate(tol);
  require_pure_state(psi, tol, "input state");
  require_pure_state(phi, tol, "output state");
  if (psi.size() != pair.rep_in.dim || phi.size() != pair.rep_out.dim)
    fail_validation("conversion_rate: state dimension does not match representation");
  RateReport rep;
  const double scale = std::max(generator_scale(pair.rep_in), generator_scale(pair.rep_out));
  rep.pencil_rate = kInf;
  rep.dmax_bits = -kInf;
  for (std::size_t i = 0; i < pair.component_pairs.size(); ++i) {
    const CVector pi = pair.component_pairs[i].u_in * psi;
    const CVector fi = pair.component_pairs[i].u_out * phi;
    const CMatrix qi = qgt(pair.rep_in, pi, {}, tol).matrix;
    const CMatrix qo = qgt(pair.rep_out, fi, {}, tol).matrix;
    ComponentValue cv;
    cv.label = "component " + std::to_string(i);
    cv.pencil = sup_ratio_scaled(qi, qo, tol, scale);
    const double r = cv.pencil.value;
    cv.dmax_bits = r == kInf ? -kInf : (r <= 0.0 ? kInf : -std::log2(r));
    rep.pencil_rate = std::min(rep.pencil_rate, r);
    rep.dmax_bits = std::max(rep.dmax_bits, cv.dmax_bits);
    rep.per_component.push_back(cv);
  }
  rep.sym = sym_check(pair, projector(psi), projector(phi), opt.sym, tol);
  rep.catalyst_mode = opt.catalyst;
  bool gate = true;
  if (opt.catalyst) {
    gate = false;
    if (opt.catalyst_state) {
      const Representation& crep = opt.catalyst_rep ? *opt.catalyst_rep : pair.rep_in;
      RepPair cp = make_pair(crep, pair.rep_out);
      SymOptions so = opt.sym;
      so.u1_in.reset();
      so.extra_elements.clear();
      so.input_stabilizer_trivial = false;
      const SymVerdict cv = sym_check(cp, *opt.catalyst_state, projector(phi), so, tol);
      if (cv.verdict == Verdict::Violated) {
        gate = true;
        rep.caveats.push_back(
            "catalyst stabilizer is not contained in the target stabilizer; symmetry gate applied");
      } else {
        rep.caveats.push_back("catalyst mode: symmetry gate skipped (catalyst check " +
                              verdict_name(cv.verdict) + ")");
      }
    } else {
      rep.caveats.push_back("catalyst mode: symmetry gate skipped (catalyst state not supplied)");
    }
  }
  if (gate && rep.sym.verdict == Verdict::Violated) {
    rep.rate = 0.0;
  } else {
    rep.rate = rep.pencil_rate;
    if (gate && rep.sym.verdict == Verdict::Inconclusive)
      rep.caveats.push_back("symmetry inclusion not certified; rate assumes it holds");
  }
  return rep;
}

ReversibilityReport reversibility_check(const RepPair& pair, const CVector& psi,
                                        const CVector& phi, const SymOptions& opt,
                                        const Tolerance& tol) {
  pair.validate(tol);
  require_pure_state(psi, tol, "input state");
  require_pure_state(phi, tol, "output state");
  ReversibilityReport r;
  const double scale = std::max(generator_scale(pair.rep_in), generator_scale(pair.rep_out));
  const CMatrix qp = qgt(pair.rep_in, psi, {}, tol).matrix;
  const CMatrix qf = qgt(pair.rep_out, phi, {}, tol).matrix;
  r.r = sup_ratio_scaled(qp, qf, tol, scale).value;
  r.r_reverse = sup_ratio_scaled(qf, qp, tol, scale).value;
  r.forward = sym_check(pair, projector(psi), projector(phi), opt, tol);
  RepPair back;
  back.rep_in = pair.rep_out;
  back.rep_out = pair.rep_in;
  for (const auto& cp : pair.component_pairs) back.component_pairs.push_back({cp.u_out, cp.u_in});
  SymOptions bopt = opt;
  std::swap(bopt.u1_in, bopt.u1_out);
  bopt.input_stabilizer_trivial = false;
  for (auto& e : bopt.extra_elements) std::swap(e.u_in, e.u_out);
  r.backward = sym_check(back, projector(phi), projector(psi), bopt, tol);
  const double nq = qp.norm();
  if (r.r == kInf || nq <= tol.tol_kernel * std::max(scale, 1e-300)) {
    r.proportionality_gap = (qf.norm() <= tol.tol_kernel * std::max(scale, 1e-300)) ? 0.0 : 1.0;
  } else {
    r.proportionality_gap = (qp - r.r * qf).norm() / nq;
  }
  r.reversible = r.forward.verdict == Verdict::Holds && r.backward.verdict == Verdict::Holds &&
                 r.proportionality_gap <= 1e-8;
  return r;
}

double distillable_bound(const RepPair& pair, const CMatrix& rho, const CVector& phi,
                         const Tolerance& tol) {
  pair.validate(tol);
  require_density(rho, tol, "distillable_bound input state");
  require_pure_state(phi, tol, "distillable_bound target");
  const double scale = std::max(generator_scale(pair.rep_in), generator_scale(pair.rep_out));
  double best = kInf;
  for (const auto& cp : pair.component_pairs) {
    const CMatrix ri = hermitize(cp.u_in * rho * cp.u_in.adjoint());
    const CMatrix s = s_matrix(pair.rep_in, ri, {}, tol).matrix;
    const CMatrix q = qgt(pair.rep_out, cp.u_out * phi, {}, tol).matrix;
    best = std::min(best, sup_ratio_scaled(s, q, tol, scale).value);
  }
  return best;
}

VanishingCheck vanishing_distillable_check(const Representation& rep_in,
                                           const Representation& rep_out, const CMatrix& rho,
                                           const CVector& phi, const Tolerance& tol) {
  require_density(rho, tol, "vanishing_distillable_check input state");
  if (rep_in.dim_g() != rep_out.dim_g())
    fail_validation("vanishing_distillable_check: generator counts differ");
  const KernelSplit ks = kernel_split(rho, tol);
  const CMatrix pi = ks.support * ks.support.adjoint();
  const int m = rep_in.dim_g();
  const Eigen::Index d = rho.rows();
  // Columns vec([Pi, X_mu]); null vectors c give O = sum c_mu X_mu commuting with Pi.
  CMatrix a(d * d, m);
  for (int mu = 0; mu < m; ++mu) {
    const CMatrix c = pi * rep_in.generators[static_cast<std::size_t>(mu)] -
                      rep_in.generators[static_cast<std::size_t>(mu)] * pi;
    a.col(mu) = Eigen::Map<const CVector>(c.data(), d * d);
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double gscale = std::sqrt(std::max(generator_scale(rep_in), 1e-300));
  std::vector<Eigen::Index> nul;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    if (s <= tol.tol_kernel * std::max(smax, gscale)) nul.push_back(i);
  }
  VanishingCheck out;
  if (nul.empty()) return out;
  CMatrix basis(m, static_cast<Eigen::Index>(nul.size()));
  for (std::size_t j = 0; j < nul.size(); ++j)
    basis.col(static_cast<Eigen::Index>(j)) = svd.matrixV().col(nul[j]);
  const CMatrix q = qgt(rep_out, phi, {}, tol).matrix;
  const CMatrix form = hermitize(basis.adjoint() * q.conjugate() * basis);
  const EigResult ef = herm_eig(form, tol);
  const Eigen::Index last = ef.values.size() - 1;
  const double thresh = tol.tol_kernel * std::max(generator_scale(rep_out), 1e-300);
  if (ef.values(last) > thresh) {
    CVector gamma = (basis * ef.vectors.col(last)).conjugate();
    gamma /= gamma.norm();
    out.vanishes = true;
    out.witness_gamma = gamma;
    out.witness_value = gamma.dot(q * gamma).real();
  }
  return out;
}

CostReport cost_bound(const RepPair& pair, const std::vector<EnsembleTerm>& ensemble, double p_sym,
                      const CVector& phi, const Tolerance& tol) {
  pair.validate(tol);
  double total = p_sym;
  if (p_sym < 0.0) fail_validation("cost_bound: p_sym must be nonnegative");
  for (const auto& t : ensemble) {
    if (t.weight < 0.0) fail_validation("cost_bound: weights must be nonnegative");
    require_pure_state(t.state, tol, "cost_bound ensemble state");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > tol.tol_norm) fail_validation("cost_bound: weights must sum to 1");
  const double scale = std::max(generator_scale(pair.rep_in), generator_scale(pair.rep_out));
  CostReport rep;
  for (const auto& t : ensemble) {
    double ri = 0.0;
    for (const auto& cp : pair.component_pairs) {
      const CMatrix qs = qgt(pair.rep_in, cp.u_in * t.state, {}, tol).matrix;
      const CMatrix qf = qgt(pair.rep_out, cp.u_out * phi, {}, tol).matrix;
      const double s = sup_ratio_scaled(qf, qs, tol, scale).value;
      const double r = s == kInf ? 0.0 : (s <= 0.0 ? kInf : 1.0 / s);
      ri = std::max(ri, r);
    }
    rep.terms.push_back({t.weight, ri});
    if (t.weight > 0.0) rep.bound += t.weight * ri;
  }
  return rep;
}

ThermoBounds thermo_bounds(const Representation& rep, const CMatrix& rho,
                           const Representation& rep_target, const CVector& psi_target, double r,
                           const MetricSpec& spec, const Tolerance& tol) {
  spec.validate();
  require_density(rho, tol, "thermo_bounds state");
  require_pure_state(psi_target, tol, "thermo_bounds target");
  if (r < 0.0) fail_validation("thermo_bounds: rate must be nonnegative");
  ThermoBounds b;
  const CMatrix& h = rep.generators[0];
  const CMatrix& ht = rep_target.generators[0];
  const double v = generalized_variance(psi_target, ht);
  b.s_scalar = s_matrix(rep, rho, {}, tol).matrix(0, 0).real();
  b.variance_rate_required = std::max(0.0, r * v - b.s_scalar);
  const CMatrix q = qgt(rep_target, psi_target, {}, tol).matrix;
  const CMatrix sq = s_q_matrix(rep, rho, spec, {}, tol).matrix;
  b.s_bound_matrix = hermitize(r * q - sq);
  b.s_bound_max_eigenvalue = max_eigenvalue(b.s_bound_matrix);
  b.skew_information = skew_information(rho, h, spec, tol);
  b.skew_bound = std::max(0.0, r * v - b.skew_information);
  return b;
}

double min_entropy_rate(const CMatrix& q_phi, const Tolerance& tol) {
  require_hermitian(q_phi, tol, "min_entropy_rate");
  const double l = max_eigenvalue(q_phi);
  if (l <= tol.tol_kernel) return kInf;
  return 1.0 / l;
}

CMatrix average_qgt(const Representation& rep, const std::vector<EnsembleTerm>& ensemble,
                    const Tolerance& tol) {
  CMatrix acc = CMatrix::Zero(rep.dim_g(), rep.dim_g());
  for (const auto& t : ensemble) acc += t.weight * qgt(rep, t.state, {}, tol).matrix;
  return acc;
}

MatrixOrder compare_psd_order(const CMatrix& a, const CMatrix& b, double tol) {
  const CMatrix d = hermitize(a - b);
  const double lo = min_eigenvalue(d), hi = max_eigenvalue(d);
  if (lo >= -tol && hi <= tol) return MatrixOrder::Equal;
  if (lo >= -tol) return MatrixOrder::Greater;
  if (hi <= tol) return MatrixOrder::Less;
  return MatrixOrder::Incomparable;
}

}  // namespace asymkit
