#include "asymkit/problem.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "asymkit/numkit.hpp"

namespace asymkit {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  fail_validation("problem field '" + path + "': " + msg);
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  bad(path, "expected a number");
}

long long as_integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (std::floor(d) == d) return static_cast<long long>(d);
  }
  bad(path, "expected an integer");
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) bad(path, "expected true or false");
  return j.get<bool>();
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) bad(path + "." + it.key(), "unknown field");
}

CMatrix direct_sum(const std::vector<CMatrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  CMatrix out = CMatrix::Zero(n, n);
  Eigen::Index o = 0;
  for (const auto& b : blocks) {
    out.block(o, o, b.rows(), b.cols()) = b;
    o += b.rows();
  }
  return out;
}

std::vector<CMatrix> builtin_generators(const json& j, const std::string& path) {
  check_keys(j, path, {"builtin", "two_j", "two_js", "eigenvalues", "scale"});
  const json& b = field(j, "builtin", path);
  if (!b.is_string()) bad(path + ".builtin", "expected a string");
  const std::string name = b.get<std::string>();
  double scale = 1.0;
  if (j.contains("scale")) scale = as_number(j["scale"], path + ".scale");
  std::vector<CMatrix> g;
  if (name == "pauli") {
    g = pauli_matrices();
  } else if (name == "spin") {
    const long long tj = as_integer(field(j, "two_j", path), path + ".two_j");
    if (tj < 0 || tj > 64) bad(path + ".two_j", "out of range");
    g = spin_matrices(static_cast<int>(tj));
  } else if (name == "spin_sum") {
    const json& ts = field(j, "two_js", path);
    if (!ts.is_array() || ts.empty()) bad(path + ".two_js", "expected a non-empty list");
    std::vector<std::vector<CMatrix>> parts;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const long long tj = as_integer(ts[i], path + ".two_js[" + std::to_string(i) + "]");
      if (tj < 0 || tj > 64) bad(path + ".two_js", "out of range");
      parts.push_back(spin_matrices(static_cast<int>(tj)));
    }
    for (int mu = 0; mu < 3; ++mu) {
      std::vector<CMatrix> blocks;
      for (const auto& p : parts) blocks.push_back(p[static_cast<std::size_t>(mu)]);
      g.push_back(direct_sum(blocks));
    }
  } else if (name == "reference") {
    // sqrt(3 / (J (J + 1))) J_mu (x) I on (2J+1)^2 dimensions.
    const long long tj = as_integer(field(j, "two_j", path), path + ".two_j");
    if (tj < 1 || tj > 16) bad(path + ".two_j", "out of range");
    const double jj = 0.5 * static_cast<double>(tj);
    const double c = std::sqrt(3.0 / (jj * (jj + 1.0)));
    const CMatrix id = CMatrix::Identity(tj + 1, tj + 1);
    for (const CMatrix& x : spin_matrices(static_cast<int>(tj))) g.push_back(c * tensor_product(x, id));
  } else if (name == "diag") {
    const json& ev = field(j, "eigenvalues", path);
    if (!ev.is_array() || ev.empty()) bad(path + ".eigenvalues", "expected a non-empty list");
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(ev.size()), static_cast<Eigen::Index>(ev.size()));
    for (std::size_t i = 0; i < ev.size(); ++i)
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
          as_number(ev[i], path + ".eigenvalues[" + std::to_string(i) + "]");
    g.push_back(h);
  } else {
    bad(path + ".builtin", "unknown builtin '" + name + "'");
  }
  for (auto& x : g) x *= scale;
  return g;
}

Representation parse_rep(const json& j, const std::string& path, const Tolerance& tol) {
  check_keys(j, path, {"dim", "label", "generators", "components"});
  const json& gj = field(j, "generators", path);
  std::vector<CMatrix> gens;
  if (gj.is_object()) {
    gens = builtin_generators(gj, path + ".generators");
  } else if (gj.is_array()) {
    if (gj.empty()) bad(path + ".generators", "needs at least one generator");
    for (std::size_t i = 0; i < gj.size(); ++i)
      gens.push_back(parse_matrix(gj[i], path + ".generators[" + std::to_string(i) + "]"));
  } else {
    bad(path + ".generators", "expected a list of matrices or a builtin object");
  }
  std::vector<CMatrix> comps;
  if (j.contains("components")) {
    const json& cj = j["components"];
    if (!cj.is_array()) bad(path + ".components", "expected a list of matrices");
    for (std::size_t i = 0; i < cj.size(); ++i)
      comps.push_back(parse_matrix(cj[i], path + ".components[" + std::to_string(i) + "]"));
  }
  std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "";
  // Component 0 is the identity; a leading identity in the file is accepted and dropped.
  if (!comps.empty() && comps[0].rows() == comps[0].cols() &&
      max_abs(comps[0] - CMatrix::Identity(comps[0].rows(), comps[0].cols())) <= tol.tol_residual)
    comps.erase(comps.begin());
  Representation r = make_representation(std::move(gens), std::move(label), std::move(comps));
  if (j.contains("dim")) {
    const long long d = as_integer(j["dim"], path + ".dim");
    if (d != r.dim) bad(path + ".dim", "declared " + std::to_string(d) + " but generators are " +
                                           std::to_string(r.dim) + "-dimensional");
  }
  for (std::size_t i = 0; i < r.generators.size(); ++i)
    if (r.generators[i].rows() != r.dim || r.generators[i].cols() != r.dim)
      bad(path + ".generators[" + std::to_string(i) + "]", "shape does not match dim");
  try {
    r.validate(tol);
  } catch (const Error& e) {
    bad(path, e.what());
  }
  return r;
}

StateBlock parse_state(const json& j, const std::string& path, const Tolerance& tol) {
  check_keys(j, path, {"type", "vector", "matrix", "rep"});
  const json& t = field(j, "type", path);
  if (!t.is_string()) bad(path + ".type", "expected \"pure\" or \"mixed\"");
  StateBlock s;
  const std::string type = t.get<std::string>();
  try {
    if (type == "pure") {
      s.pure = true;
      s.vector = parse_vector(field(j, "vector", path), path + ".vector");
      require_pure_state(s.vector, tol, "state vector");
    } else if (type == "mixed") {
      s.pure = false;
      s.matrix = parse_matrix(field(j, "matrix", path), path + ".matrix");
      require_density(s.matrix, tol, "density matrix");
    } else {
      bad(path + ".type", "expected \"pure\" or \"mixed\"");
    }
  } catch (const Error& e) {
    if (std::string(e.what()).rfind("problem field", 0) == 0) throw;
    bad(path, e.what());
  }
  return s;
}

U1Spec parse_u1(const json& j, const std::string& path, int dim, const Tolerance& tol) {
  check_keys(j, path, {"eigenvalues", "basis"});
  const json& ev = field(j, "eigenvalues", path);
  if (!ev.is_array() || ev.empty()) bad(path + ".eigenvalues", "expected a non-empty integer list");
  U1Spec s;
  for (std::size_t i = 0; i < ev.size(); ++i)
    s.eigenvalues.push_back(as_integer(ev[i], path + ".eigenvalues[" + std::to_string(i) + "]"));
  if (static_cast<int>(s.eigenvalues.size()) != dim)
    bad(path + ".eigenvalues", "length does not match the representation dimension");
  s.basis = j.contains("basis") ? parse_matrix(j["basis"], path + ".basis")
                                : CMatrix::Identity(dim, dim);
  try {
    s.validate(tol);
  } catch (const Error& e) {
    bad(path, e.what());
  }
  return s;
}

json state_to_json(const StateBlock& s) {
  json j;
  j["type"] = s.pure ? "pure" : "mixed";
  if (s.pure)
    j["vector"] = vector_to_json(s.vector);
  else
    j["matrix"] = matrix_to_json(s.matrix);
  return j;
}

json rep_to_json(const Representation& r) {
  json j;
  j["dim"] = r.dim;
  j["label"] = r.label;
  json g = json::array();
  for (const auto& x : r.generators) g.push_back(matrix_to_json(x));
  j["generators"] = g;
  if (r.component_reps.size() > 1) {
    json c = json::array();
    for (std::size_t i = 1; i < r.component_reps.size(); ++i) c.push_back(matrix_to_json(r.component_reps[i]));
    j["components"] = c;
  }
  return j;
}

json u1_to_json(const U1Spec& s) {
  json j;
  j["eigenvalues"] = s.eigenvalues;
  j["basis"] = matrix_to_json(s.basis);
  return j;
}

}  // namespace

CMatrix StateBlock::density() const { return pure ? projector(vector) : matrix; }

int StateBlock::dim() const {
  return static_cast<int>(pure ? vector.size() : matrix.rows());
}

cplx parse_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  bad(path, "expected a complex number [re, im]");
}

CMatrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad(path, "expected a non-empty list of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) bad(path + "[0]", "expected a non-empty row");
  const std::size_t cols = j[0].size();
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) bad(rp, "row length differs from the first row");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_complex(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

CVector parse_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad(path, "expected a non-empty list");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json complex_to_json(cplx z) { return json::array({number_to_json(z.real()), number_to_json(z.imag())}); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json vector_to_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
  return a;
}

json real_vector_to_json(const RVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_to_json(v(i)));
  return a;
}

RepPair Problem::pair() const {
  RepPair p;
  p.rep_in = rep_in;
  p.rep_out = rep_out;
  p.component_pairs = component_pairs;
  return p;
}

SymOptions Problem::sym_options(unsigned long long seed) const {
  SymOptions o;
  o.u1_in = u1;
  o.u1_out = u1_out;
  o.extra_elements = extra_elements;
  o.exhaustive = sym_exhaustive;
  o.input_stabilizer_trivial = input_stabilizer_trivial;
  o.samples = sym_samples;
  o.seed = seed;
  return o;
}

const StateBlock& Problem::require_state_in() const {
  if (!state_in) fail_validation("problem has no state_in");
  return *state_in;
}

const StateBlock& Problem::require_state_out() const {
  if (!state_out) fail_validation("problem has no state_out");
  return *state_out;
}

Problem parse_problem(const json& j) {
  check_keys(j, "", {"label", "description", "rep_in", "rep_out", "state_in", "state_out",
                     "component_pairs", "u1", "u1_out", "catalyst", "sym", "tolerances",
                     "ensemble", "p_sym", "rate_r"});
  Problem p;
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    check_keys(t, "tolerances", {"tol_herm", "tol_norm", "tol_psd", "tol_kernel", "tol_residual"});
    auto rd = [&](const char* k, double& dst) {
      if (t.contains(k)) dst = as_number(t[k], std::string("tolerances.") + k);
    };
    rd("tol_herm", p.tol.tol_herm);
    rd("tol_norm", p.tol.tol_norm);
    rd("tol_psd", p.tol.tol_psd);
    rd("tol_kernel", p.tol.tol_kernel);
    rd("tol_residual", p.tol.tol_residual);
    try {
      p.tol.validate();
    } catch (const Error& e) {
      bad("tolerances", e.what());
    }
  }
  if (j.contains("label")) {
    if (!j["label"].is_string()) bad("label", "expected a string");
    p.label = j["label"].get<std::string>();
  }
  p.rep_in = parse_rep(field(j, "rep_in", ""), "rep_in", p.tol);
  p.rep_out = j.contains("rep_out") ? parse_rep(j["rep_out"], "rep_out", p.tol) : p.rep_in;
  if (p.rep_in.dim_g() != p.rep_out.dim_g())
    bad("rep_out.generators", "generator count differs from rep_in");
  p.component_pairs.push_back({CMatrix::Identity(p.rep_in.dim, p.rep_in.dim),
                               CMatrix::Identity(p.rep_out.dim, p.rep_out.dim)});
  if (j.contains("component_pairs")) {
    const json& cp = j["component_pairs"];
    if (!cp.is_array()) bad("component_pairs", "expected a list");
    for (std::size_t i = 0; i < cp.size(); ++i) {
      const std::string path = "component_pairs[" + std::to_string(i) + "]";
      check_keys(cp[i], path, {"u_in", "u_out"});
      ComponentPair c{parse_matrix(field(cp[i], "u_in", path), path + ".u_in"),
                      parse_matrix(field(cp[i], "u_out", path), path + ".u_out")};
      const bool ident =
          c.u_in.rows() == p.rep_in.dim && c.u_out.rows() == p.rep_out.dim &&
          max_abs(c.u_in - CMatrix::Identity(c.u_in.rows(), c.u_in.cols())) <= p.tol.tol_residual &&
          max_abs(c.u_out - CMatrix::Identity(c.u_out.rows(), c.u_out.cols())) <= p.tol.tol_residual;
      if (i == 0 && ident) continue;
      p.component_pairs.push_back(std::move(c));
    }
  } else if (p.rep_in.component_reps.size() == p.rep_out.component_reps.size()) {
    for (std::size_t i = 1; i < p.rep_in.component_reps.size(); ++i)
      p.component_pairs.push_back({p.rep_in.component_reps[i], p.rep_out.component_reps[i]});
  }
  try {
    p.pair().validate(p.tol);
  } catch (const Error& e) {
    bad("component_pairs", e.what());
  }
  if (j.contains("state_in")) {
    p.state_in = parse_state(j["state_in"], "state_in", p.tol);
    if (p.state_in->dim() != p.rep_in.dim) bad("state_in", "dimension does not match rep_in");
  }
  if (j.contains("state_out")) {
    p.state_out = parse_state(j["state_out"], "state_out", p.tol);
    if (p.state_out->dim() != p.rep_out.dim) bad("state_out", "dimension does not match rep_out");
  }
  if (j.contains("u1")) p.u1 = parse_u1(j["u1"], "u1", p.rep_in.dim, p.tol);
  if (j.contains("u1_out")) p.u1_out = parse_u1(j["u1_out"], "u1_out", p.rep_out.dim, p.tol);
  if (j.contains("catalyst")) {
    const json& c = j["catalyst"];
    p.catalyst = parse_state(c, "catalyst", p.tol);
    if (c.contains("rep")) {
      p.catalyst_rep = parse_rep(c["rep"], "catalyst.rep", p.tol);
      if (p.catalyst_rep->dim_g() != p.rep_in.dim_g())
        bad("catalyst.rep", "generator count differs from rep_in");
    }
    const int cd = p.catalyst_rep ? p.catalyst_rep->dim : p.rep_in.dim;
    if (p.catalyst->dim() != cd) bad("catalyst", "dimension does not match its representation");
  }
  if (j.contains("sym")) {
    const json& s = j["sym"];
    check_keys(s, "sym", {"exhaustive", "input_stabilizer_trivial", "samples", "extra_elements"});
    if (s.contains("exhaustive")) p.sym_exhaustive = as_bool(s["exhaustive"], "sym.exhaustive");
    if (s.contains("input_stabilizer_trivial"))
      p.input_stabilizer_trivial = as_bool(s["input_stabilizer_trivial"], "sym.input_stabilizer_trivial");
    if (s.contains("samples")) {
      const long long n = as_integer(s["samples"], "sym.samples");
      if (n < 0 || n > 100000) bad("sym.samples", "out of range");
      p.sym_samples = static_cast<int>(n);
    }
    if (s.contains("extra_elements")) {
      const json& e = s["extra_elements"];
      if (!e.is_array()) bad("sym.extra_elements", "expected a list");
      for (std::size_t i = 0; i < e.size(); ++i) {
        const std::string path = "sym.extra_elements[" + std::to_string(i) + "]";
        check_keys(e[i], path, {"u_in", "u_out"});
        ElementPair el{parse_matrix(field(e[i], "u_in", path), path + ".u_in"),
                       parse_matrix(field(e[i], "u_out", path), path + ".u_out")};
        if (el.u_in.rows() != p.rep_in.dim || el.u_out.rows() != p.rep_out.dim)
          bad(path, "dimension mismatch");
        try {
          require_unitary(el.u_in, p.tol, "u_in");
          require_unitary(el.u_out, p.tol, "u_out");
        } catch (const Error& ex) {
          bad(path, ex.what());
        }
        p.extra_elements.push_back(std::move(el));
      }
    }
  }
  if (j.contains("ensemble")) {
    const json& e = j["ensemble"];
    if (!e.is_array()) bad("ensemble", "expected a list");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string path = "ensemble[" + std::to_string(i) + "]";
      check_keys(e[i], path, {"weight", "state"});
      EnsembleTerm t;
      t.weight = as_number(field(e[i], "weight", path), path + ".weight");
      t.state = parse_vector(field(e[i], "state", path), path + ".state");
      if (t.state.size() != p.rep_in.dim) bad(path + ".state", "dimension does not match rep_in");
      p.ensemble.push_back(std::move(t));
    }
  }
  if (j.contains("p_sym")) p.p_sym = as_number(j["p_sym"], "p_sym");
  if (j.contains("rate_r")) p.rate_r = as_number(j["rate_r"], "rate_r");
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_validation("cannot open problem file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail_validation("problem file '" + path + "': " + e.what());
  }
  return parse_problem(j);
}

json serialize_problem(const Problem& p) {
  json j;
  j["label"] = p.label;
  j["rep_in"] = rep_to_json(p.rep_in);
  j["rep_out"] = rep_to_json(p.rep_out);
  json cp = json::array();
  for (std::size_t i = 1; i < p.component_pairs.size(); ++i)
    cp.push_back({{"u_in", matrix_to_json(p.component_pairs[i].u_in)},
                  {"u_out", matrix_to_json(p.component_pairs[i].u_out)}});
  j["component_pairs"] = cp;
  if (p.state_in) j["state_in"] = state_to_json(*p.state_in);
  if (p.state_out) j["state_out"] = state_to_json(*p.state_out);
  if (p.u1) j["u1"] = u1_to_json(*p.u1);
  if (p.u1_out) j["u1_out"] = u1_to_json(*p.u1_out);
  if (p.catalyst) {
    json c = state_to_json(*p.catalyst);
    if (p.catalyst_rep) c["rep"] = rep_to_json(*p.catalyst_rep);
    j["catalyst"] = c;
  }
  json s;
  s["exhaustive"] = p.sym_exhaustive;
  s["input_stabilizer_trivial"] = p.input_stabilizer_trivial;
  s["samples"] = p.sym_samples;
  json ee = json::array();
  for (const auto& e : p.extra_elements)
    ee.push_back({{"u_in", matrix_to_json(e.u_in)}, {"u_out", matrix_to_json(e.u_out)}});
  s["extra_elements"] = ee;
  j["sym"] = s;
  j["tolerances"] = {{"tol_herm", p.tol.tol_herm},     {"tol_norm", p.tol.tol_norm},
                     {"tol_psd", p.tol.tol_psd},       {"tol_kernel", p.tol.tol_kernel},
                     {"tol_residual", p.tol.tol_residual}};
  if (!p.ensemble.empty()) {
    json e = json::array();
    for (const auto& t : p.ensemble)
      e.push_back({{"weight", t.weight}, {"state", vector_to_json(t.state)}});
    j["ensemble"] = e;
  }
  j["p_sym"] = p.p_sym;
  j["rate_r"] = p.rate_r;
  return j;
}

}  // namespace asymkit
