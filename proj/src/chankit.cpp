#include "asymkit/chankit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "asymkit/core.hpp"
#include "asymkit/numkit.hpp"
#include "asymkit/rng.hpp"

namespace asymkit {

CMatrix KrausChannel::completeness() const {
  CMatrix s = CMatrix::Zero(in_dim, in_dim);
  for (const CMatrix& k : kraus_ops) s += k.adjoint() * k;
  return s;
}

double KrausChannel::completeness_error() const {
  return max_abs(completeness() - CMatrix::Identity(in_dim, in_dim));
}

void KrausChannel::validate(const Tolerance& tol) const {
  if (kraus_ops.empty()) fail_validation("channel has no Kraus operators");
  for (const CMatrix& k : kraus_ops)
    if (k.rows() != out_dim || k.cols() != in_dim)
      fail_validation("Kraus operator has wrong shape");
  if (completeness_error() > tol.tol_residual)
    fail_validation("channel is not trace preserving");
}

KrausChannel identity_channel(int dim) {
  KrausChannel ch;
  ch.in_dim = ch.out_dim = dim;
  ch.kraus_ops.push_back(CMatrix::Identity(dim, dim));
  return ch;
}

CMatrix complement_basis(const CVector& v) {
  const Eigen::Index d = v.size();
  std::vector<CVector> cols;
  cols.push_back(v / v.norm());
  for (Eigen::Index i = 0; i < d && static_cast<Eigen::Index>(cols.size()) < d; ++i) {
    CVector e = CVector::Zero(d);
    e(i) = 1.0;
    // Two passes of classical Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass)
      for (const CVector& c : cols) e -= c * c.dot(e);
    const double n = e.norm();
    if (n > 1e-6) cols.push_back(e / n);
  }
  CMatrix b(d, d - 1);
  for (Eigen::Index j = 1; j < d; ++j) b.col(j - 1) = cols[static_cast<std::size_t>(j)];
  return b;
}

namespace {

CMatrix c_matrix(const Representation& rep, const CVector& v, const CMatrix& basis) {
  const int m = rep.dim_g();
  CMatrix c(basis.cols(), m);
  for (int i = 0; i < m; ++i)
    c.col(i) = cplx(0.0, -1.0) * (basis.adjoint() * (rep.generators[static_cast<std::size_t>(i)] * v));
  return c;
}

}  // namespace

BuiltChannel build_conversion_channel(const RepPair& pair, const CVector& psi, const CVector& phi,
                                      const Tolerance& tol) {
  pair.validate(tol);
  require_pure_state(psi, tol, "input state");
  require_pure_state(phi, tol, "output state");
  if (psi.size() != pair.rep_in.dim || phi.size() != pair.rep_out.dim)
    fail_validation("build_conversion_channel: state dimension does not match representation");
  BuiltChannel out;
  ChannelBuildArtifacts& a = out.artifacts;
  a.basis_in = complement_basis(psi);
  a.basis_out = complement_basis(phi);
  a.c_in = c_matrix(pair.rep_in, psi, a.basis_in);
  a.c_out = c_matrix(pair.rep_out, phi, a.basis_out);
  a.z = a.c_out * pinv(a.c_in, tol);
  const Eigen::Index n_in = a.basis_in.cols();
  a.gamma = hermitize(CMatrix::Identity(n_in, n_in) - a.z.adjoint() * a.z);
  a.cz_residual = a.c_out.size() ? max_abs(a.c_out - a.z * a.c_in) : 0.0;

  const CMatrix qi = qgt(pair.rep_in, psi, {}, tol).matrix;
  const CMatrix qo = qgt(pair.rep_out, phi, {}, tol).matrix;
  a.pencil_value = sup_ratio(qi, qo, tol).value;

  EigResult eg;
  if (n_in > 0) {
    eg = herm_eig(a.gamma, tol);
    const double lmax = std::max(1.0, eg.values(n_in - 1));
    if (eg.values(0) < -tol.tol_psd * lmax) {
      std::ostringstream os;
      os << "covariance condition violated: Gamma = I - Z^dagger Z has negative eigenvalue "
         << eg.values(0) << " (pencil value " << a.pencil_value << " < 1)";
      fail_precondition(os.str());
    }
  }
  if (a.pencil_value < 1.0 - tol.tol_residual) {
    std::ostringstream os;
    os << "covariance condition violated: sup{r : Q_in >= r Q_out} = " << a.pencil_value << " < 1";
    fail_precondition(os.str());
  }

  KrausChannel& ch = out.channel;
  ch.in_dim = pair.rep_in.dim;
  ch.out_dim = pair.rep_out.dim;
  CMatrix k0 = phi * psi.adjoint();
  if (n_in > 0 && a.basis_out.cols() > 0) k0 += a.basis_out * a.z * a.basis_in.adjoint();
  ch.kraus_ops.push_back(k0);
  if (n_in > 0) {
    // Gamma passed the scaled PSD check above; clip what is left of roundoff
    const CMatrix sg = herm_apply(eg, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
    for (Eigen::Index k = 0; k < n_in; ++k) {
      // K_k = sum_l sqrt(Gamma)_{kl} |phi><l|
      const CVector row = sg.row(k).transpose();
      const CMatrix kk = phi * (a.basis_in * row.conjugate()).adjoint();
      if (kk.norm() > 1e-15) ch.kraus_ops.push_back(kk);
    }
  }
  return out;
}

CMatrix apply_channel(const KrausChannel& ch, const CMatrix& rho) {
  if (rho.rows() != ch.in_dim || rho.cols() != ch.in_dim)
    fail_validation("apply_channel: dimension mismatch");
  CMatrix out = CMatrix::Zero(ch.out_dim, ch.out_dim);
  for (const CMatrix& k : ch.kraus_ops) out += matmul(matmul(k, rho), k.adjoint());
  return hermitize(out);
}

CMatrix apply_channel_iid(const KrausChannel& ch, const CMatrix& rho, int n) {
  if (n < 1) fail_validation("apply_channel_iid: n must be >= 1");
  std::size_t din = 1;
  for (int i = 0; i < n; ++i) din *= static_cast<std::size_t>(ch.in_dim);
  if (static_cast<std::size_t>(rho.rows()) != din)
    fail_validation("apply_channel_iid: dimension mismatch");
  CMatrix cur = rho;
  // Sites before `site` are already converted.
  for (int site = 0; site < n; ++site) {
    std::size_t left = 1, right = 1;
    for (int i = 0; i < site; ++i) left *= static_cast<std::size_t>(ch.out_dim);
    for (int i = site + 1; i < n; ++i) right *= static_cast<std::size_t>(ch.in_dim);
    check_cap(left * static_cast<std::size_t>(std::max(ch.in_dim, ch.out_dim)) * right,
              "apply_channel_iid");
    const CMatrix il = CMatrix::Identity(static_cast<Eigen::Index>(left), static_cast<Eigen::Index>(left));
    const CMatrix ir =
        CMatrix::Identity(static_cast<Eigen::Index>(right), static_cast<Eigen::Index>(right));
    const Eigen::Index dout = static_cast<Eigen::Index>(left * right) * ch.out_dim;
    CMatrix next = CMatrix::Zero(dout, dout);
    for (const CMatrix& k : ch.kraus_ops) {
      const CMatrix kf = tensor_product(tensor_product(il, k), ir);
      next += matmul(matmul(kf, cur), kf.adjoint());
    }
    cur = hermitize(next);
  }
  return cur;
}

double fidelity_deficit(const KrausChannel& ch, const CVector& psi, const CVector& phi) {
  double s = 0.0;
  for (const CMatrix& k : ch.kraus_ops) {
    const CVector w = k * psi;
    s += (w - phi * phi.dot(w)).squaredNorm();
  }
  return s;
}

CMatrix kraus_to_choi(const KrausChannel& ch) {
  const Eigen::Index n = static_cast<Eigen::Index>(ch.in_dim) * ch.out_dim;
  CMatrix j = CMatrix::Zero(n, n);
  for (const CMatrix& k : ch.kraus_ops) {
    const Eigen::Map<const CVector> v(k.data(), n);
    j += v * v.adjoint();
  }
  return j;
}

KrausChannel choi_to_kraus(const CMatrix& choi, int in_dim, int out_dim, double cut) {
  const EigResult e = herm_eig(hermitize(choi));
  KrausChannel ch;
  ch.in_dim = in_dim;
  ch.out_dim = out_dim;
  const Eigen::Index n = e.values.size();
  const double lmax = std::max(0.0, e.values(n - 1));
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (e.values(i) <= cut * std::max(lmax, 1.0)) break;
    const CVector v = std::sqrt(e.values(i)) * e.vectors.col(i);
    ch.kraus_ops.push_back(Eigen::Map<const CMatrix>(v.data(), out_dim, in_dim));
  }
  return ch;
}

std::string twirl_mode_name(TwirlMode m) {
  switch (m) {
    case TwirlMode::Auto: return "auto";
    case TwirlMode::FiniteList: return "finite_list";
    case TwirlMode::U1Exact: return "u1_exact";
    case TwirlMode::MonteCarlo: return "monte_carlo";
  }
  return "?";
}

namespace {

bool generators_scalar(const Representation& rep, const Tolerance& tol) {
  for (const CMatrix& x : rep.generators) {
    const cplx c = x.trace() / static_cast<double>(x.rows());
    if (max_abs(x - c * CMatrix::Identity(x.rows(), x.cols())) > tol.tol_residual) return false;
  }
  return true;
}

long long spectral_range(const U1Spec& s) {
  const auto [lo, hi] = std::minmax_element(s.eigenvalues.begin(), s.eigenvalues.end());
  return *hi - *lo;
}

}  // namespace

ElementPair random_group_element(const RepPair& pair, Rng& rng, const Tolerance& tol) {
  const int m = pair.rep_in.dim_g();
  CMatrix ui = CMatrix::Identity(pair.rep_in.dim, pair.rep_in.dim);
  CMatrix uo = CMatrix::Identity(pair.rep_out.dim, pair.rep_out.dim);
  for (int f = 0; f < 8; ++f) {
    std::vector<double> th(static_cast<std::size_t>(m));
    for (double& t : th) t = rng.uniform(-M_PI, M_PI);
    ui = expm_i_hermitian(generator_combination(pair.rep_in, th), tol) * ui;
    uo = expm_i_hermitian(generator_combination(pair.rep_out, th), tol) * uo;
  }
  const std::size_t c = rng.index(pair.component_pairs.size());
  return {ui * pair.component_pairs[c].u_in, uo * pair.component_pairs[c].u_out};
}

std::vector<ElementPair> twirl_elements(const RepPair& pair, const TwirlSpec& spec,
                                        TwirlMode* mode_used, const Tolerance& tol) {
  TwirlMode mode = spec.mode;
  std::optional<U1Spec> si, so;
  if (mode == TwirlMode::Auto || mode == TwirlMode::U1Exact) {
    si = u1_spec_from_rep(pair.rep_in, tol);
    so = u1_spec_from_rep(pair.rep_out, tol);
  }
  if (mode == TwirlMode::Auto) {
    if (!spec.elements.empty() ||
        (generators_scalar(pair.rep_in, tol) && generators_scalar(pair.rep_out, tol)))
      mode = TwirlMode::FiniteList;
    else if (si && so)
      mode = TwirlMode::U1Exact;
    else
      mode = TwirlMode::MonteCarlo;
  }
  if (mode_used) *mode_used = mode;
  std::vector<ElementPair> el;
  switch (mode) {
    case TwirlMode::FiniteList:
      if (!spec.elements.empty()) {
        el = spec.elements;
      } else {
        for (const auto& cp : pair.component_pairs) el.push_back({cp.u_in, cp.u_out});
      }
      break;
    case TwirlMode::U1Exact: {
      if (!si || !so) fail_validation("twirl: U(1) exact mode needs integer-spaced spectra");
      const long long m = spectral_range(*si) + spectral_range(*so) + 1;
      for (const auto& cp : pair.component_pairs)
        for (long long k = 0; k < m; ++k) {
          const std::vector<double> th{2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m)};
          el.push_back({unitary_at(pair.rep_in, th, 0, tol) * cp.u_in,
                        unitary_at(pair.rep_out, th, 0, tol) * cp.u_out});
        }
      break;
    }
    case TwirlMode::MonteCarlo: {
      Rng rng(spec.seed);
      for (int s = 0; s < spec.count; ++s) el.push_back(random_group_element(pair, rng, tol));
      break;
    }
    case TwirlMode::Auto: break;
  }
  if (el.empty()) fail_validation("twirl: empty sample set");
  return el;
}

TwirlResult twirl(const KrausChannel& ch, const RepPair& pair, const TwirlSpec& spec,
                  const Tolerance& tol) {
  if (ch.in_dim != pair.rep_in.dim || ch.out_dim != pair.rep_out.dim)
    fail_validation("twirl: channel dimensions do not match representation pair");
  TwirlResult r;
  const std::vector<ElementPair> el = twirl_elements(pair, spec, &r.mode_used, tol);
  const Eigen::Index n = static_cast<Eigen::Index>(ch.in_dim) * ch.out_dim;
  CMatrix choi = CMatrix::Zero(n, n);
  const double w = 1.0 / static_cast<double>(el.size());
  for (const ElementPair& g : el)
    for (const CMatrix& k : ch.kraus_ops) {
      const CMatrix kg = g.u_out.adjoint() * k * g.u_in;
      const Eigen::Map<const CVector> v(kg.data(), n);
      choi += w * (v * v.adjoint());
    }
  r.channel = choi_to_kraus(choi, ch.in_dim, ch.out_dim);
  r.samples = static_cast<int>(el.size());
  r.exact = r.mode_used != TwirlMode::MonteCarlo;
  return r;
}

double covariance_defect(const KrausChannel& ch, const std::vector<CMatrix>& states,
                         const std::vector<ElementPair>& elements) {
  double worst = 0.0;
  for (const CMatrix& rho : states) {
    const CMatrix er = apply_channel(ch, rho);
    for (const ElementPair& g : elements) {
      const CMatrix lhs = apply_channel(ch, hermitize(g.u_in * rho * g.u_in.adjoint()));
      const CMatrix rhs = hermitize(g.u_out * er * g.u_out.adjoint());
      worst = std::max(worst, 0.5 * trace_norm_hermitian(lhs - rhs));
    }
  }
  return worst;
}

EstimateResult estimate_group_element(const Representation& rep, const CVector& psi,
                                      const CMatrix& observed, const std::vector<GroupPoint>& grid,
                                      const Tolerance& tol) {
  if (grid.empty()) fail_validation("estimate_group_element: empty grid");
  EstimateResult best;
  best.fidelity = -1.0;
  std::vector<double> fids(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CVector v = unitary_at(rep, grid[i], tol) * psi;
    fids[i] = std::clamp(v.dot(observed * v).real(), 0.0, 1.0);
    if (fids[i] > best.fidelity + 1e-12) {
      best.fidelity = fids[i];
      best.index = i;
      best.point = grid[i];
    }
  }
  best.ties = 0;
  for (double f : fids)
    if (f >= best.fidelity - 1e-12) ++best.ties;
  return best;
}

std::vector<GroupPoint> lattice_grid(int dim_g, double delta) {
  if (dim_g < 1 || !(delta > 0.0)) fail_validation("lattice_grid: bad arguments");
  const int k = static_cast<int>(std::floor(M_PI / delta));
  const int side = 2 * k + 1;
  double total = 1.0;
  for (int i = 0; i < dim_g; ++i) total *= side;
  if (total > 1e6) fail_cap("lattice_grid: grid has more than 1e6 points");
  std::vector<GroupPoint> grid;
  std::vector<int> idx(static_cast<std::size_t>(dim_g), -k);
  // Identity first so that ties resolve toward it.
  grid.push_back({0, std::vector<double>(static_cast<std::size_t>(dim_g), 0.0)});
  while (true) {
    bool zero = true;
    GroupPoint p;
    for (int v : idx) {
      p.theta.push_back(v * delta);
      zero = zero && v == 0;
    }
    if (!zero) grid.push_back(p);
    int d = 0;
    while (d < dim_g && ++idx[static_cast<std::size_t>(d)] > k) idx[static_cast<std::size_t>(d++)] = -k;
    if (d == dim_g) break;
  }
  return grid;
}

ConvertResult estimate_and_convert(const RepPair& pair, const CVector& psi, const CVector& phi,
                                   int n, const ConvertOptions& opt, const Tolerance& tol) {
  if (n < 2) fail_validation("estimate_and_convert: N must be >= 2");
  if (!(opt.split_exponent > 0.0 && opt.split_exponent < 0.5))
    fail_validation("estimate_and_convert: split exponent must lie in (0, 1/2)");
  pair.validate(tol);
  require_pure_state(psi, tol, "input state");
  require_pure_state(phi, tol, "output state");
  const int m = pair.rep_in.dim_g();
  ConvertResult r;
  r.n_total = n;
  r.n_est = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 1.0 - opt.split_exponent) - 1e-12));
  r.n_conv = n - r.n_est;
  if (r.n_conv < 1) fail_validation("estimate_and_convert: no copies left after estimation");
  std::size_t din = 1, dout = 1;
  for (int i = 0; i < r.n_conv; ++i) {
    din *= static_cast<std::size_t>(pair.rep_in.dim);
    dout *= static_cast<std::size_t>(pair.rep_out.dim);
  }
  check_cap(std::max(din, dout), "estimate_and_convert");
  r.delta = std::pow(static_cast<double>(n), -0.5 + opt.split_exponent);

  r.true_point.theta.assign(static_cast<std::size_t>(m), 0.0);
  if (opt.random_frame) {
    Rng rng(opt.seed);
    for (double& t : r.true_point.theta) t = rng.uniform(-M_PI, M_PI);
  }
  if (!opt.shift.empty()) {
    if (static_cast<int>(opt.shift.size()) != m)
      fail_validation("estimate_and_convert: shift has wrong length");
    for (int i = 0; i < m; ++i)
      r.true_point.theta[static_cast<std::size_t>(i)] +=
          opt.shift[static_cast<std::size_t>(i)] / std::sqrt(static_cast<double>(n));
  }
  const CVector psi_t = unitary_at(pair.rep_in, r.true_point, tol) * psi;
  const CVector phi_t = unitary_at(pair.rep_out, r.true_point, tol) * phi;

  // Oracle estimator: the n_est-copy fidelity is the single-copy overlap to the power n_est.
  const std::vector<GroupPoint> grid = lattice_grid(m, r.delta);
  r.grid_size = grid.size();
  r.estimate = estimate_group_element(pair.rep_in, psi, projector(psi_t), grid, tol);
  r.estimate.fidelity = std::pow(r.estimate.fidelity, r.n_est);
  if (r.estimate.ties > 1) {
    r.caveats.push_back("estimation is ambiguous: " + std::to_string(r.estimate.ties) +
                        " grid points tie (input state is stabilized along the probed directions)");
  }
  const SymVerdict sv = sym_check(pair, projector(psi), projector(phi), {}, tol);
  if (sv.verdict == Verdict::Violated && !opt.catalyst)
    r.caveats.push_back("target symmetry is not contained in input symmetry; conversion cannot be covariant");

  const CVector psi_g = unitary_at(pair.rep_in, r.estimate.point, tol) * psi;
  const CVector phi_g = unitary_at(pair.rep_out, r.estimate.point, tol) * phi;
  const BuiltChannel bc = build_conversion_channel(pair, psi_g, phi_g, tol);

  CVector in_state = psi_t, target = phi_t;
  for (int i = 1; i < r.n_conv; ++i) {
    in_state = tensor_product(in_state, psi_t);
    target = tensor_product(target, phi_t);
  }
  r.output = apply_channel_iid(bc.channel, projector(in_state), r.n_conv);
  const CMatrix tproj = projector(target);
  r.distance_to_target = std::clamp(0.5 * trace_norm_hermitian(r.output - tproj), 0.0, 1.0);
  r.fidelity_to_target = std::clamp(target.dot(r.output * target).real(), 0.0, 1.0);
  return r;
}

}  // namespace asymkit
