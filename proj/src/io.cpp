#include "curvequad/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "curvequad/error.hpp"

namespace curvequad::io {

namespace {

void write_value(std::string& out, const Json& j, int indent, int level) {
  const auto pad = [&](int l) {
    if (indent > 0) {
      out += '\n';
      out.append(static_cast<std::size_t>(indent * l), ' ');
    }
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(level + 1);
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        write_value(out, it.value(), indent, level + 1);
      }
      pad(level);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent > 0 ? ", " : ",";
        first = false;
        if (!flat) pad(level + 1);
        write_value(out, e, indent, level + 1);
      }
      if (!flat) pad(level);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
      } else {
        out += fmt::format("{:.17g}", v);
      }
      return;
    }
    default:
      out += j.dump();
  }
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(number(e, what));
  return out;
}

Json vec(const std::vector<double>& v) { return Json(v); }

Json vec(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

std::string_view density_name(DensityName n) {
  switch (n) {
    case DensityName::Uniform:
      return "uniform";
    case DensityName::Gaussian:
      return "gaussian";
    case DensityName::Tabulated:
      return "tabulated";
  }
  return "uniform";
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  write_value(out, j, indent, 0);
  out += '\n';
  return out;
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bad("cannot write " + path);
  out << text;
}

// --- polynomials -------------------------------------------------------------

Json to_json(const Polynomial& p) { return vec(p.coeffs()); }

Polynomial polynomial_from_json(const Json& j) {
  auto c = numbers(j, "polynomial coefficients");
  if (c.empty()) bad("polynomial needs at least one coefficient");
  return Polynomial(std::move(c));
}

Json to_json(const MultivariatePolynomial& p) {
  Json arr = Json::array();
  for (const auto& [alpha, c] : p.terms()) arr.push_back({{"exponents", alpha.exponents()}, {"coeff", c}});
  return arr;
}

MultivariatePolynomial multivariate_from_json(const Json& j, int nvars) {
  if (!j.is_array()) bad("multivariate polynomial must be a list of terms");
  if (nvars < 0) nvars = j.empty() ? 2 : static_cast<int>(field(j.front(), "exponents").size());
  MultivariatePolynomial p(nvars);
  for (const auto& t : j) {
    const Json& e = field(t, "exponents");
    if (!e.is_array() || static_cast<int>(e.size()) != nvars) {
      throw Error(ErrorKind::DimensionMismatch, "term exponents do not match the variable count");
    }
    std::vector<int> exps;
    for (const auto& v : e) {
      const int k = integer(v, "exponent");
      if (k < 0) bad("negative exponent");
      exps.push_back(k);
    }
    p.add_term(MultiIndex(std::move(exps)), number(field(t, "coeff"), "coeff"));
  }
  return p;
}

// --- moments and measures ----------------------------------------------------

Json to_json(const MomentVector& m) {
  Json values = Json::object();
  for (const auto& a : m.basis()) values[a.key()] = m[a];
  return {{"kind", "raw"}, {"nvars", m.nvars()}, {"max_degree", m.max_degree()}, {"values", values}};
}

MomentVector moments_from_json(const Json& j) {
  const int nvars = integer(field(j, "nvars"), "nvars");
  const int deg = integer(field(j, "max_degree"), "max_degree");
  if (nvars < 1 || deg < 0) bad("raw moments need nvars >= 1 and max_degree >= 0");
  MomentVector m(nvars, deg);
  const Json& values = field(j, "values");
  if (!values.is_object()) bad("raw moment values must be an object keyed by \"(a,b,..)\"");
  std::vector<bool> seen(m.size(), false);
  for (auto it = values.begin(); it != values.end(); ++it) {
    MultiIndex a;
    try {
      a = MultiIndex::parse_key(it.key());
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      bad("bad moment key " + it.key());
    }
    if (a.nvars() != nvars) throw Error(ErrorKind::DimensionMismatch, "moment key " + it.key() + " has wrong arity");
    const auto idx = m.basis().index_of(a);
    if (idx < 0) continue;  // above max_degree
    m.at(a) = number(it.value(), "moment value");
    seen[static_cast<std::size_t>(idx)] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw Error(ErrorKind::InsufficientDegree, "raw moments miss index " + m.basis()[i].key());
  }
  return m;
}

Json to_json(const MeasureSpec& m) {
  switch (m.kind) {
    case MeasureKind::Atoms: {
      Json atoms = Json::array();
      for (const auto& a : m.atoms) {
        if (a.x.size() == 1) {
          atoms.push_back({{"t", a.x[0]}, {"w", a.w}});
        } else {
          atoms.push_back({{"x", a.x}, {"w", a.w}});
        }
      }
      return {{"kind", "atoms"}, {"atoms", atoms}};
    }
    case MeasureKind::Density: {
      Json j = {{"kind", "density"},
                {"name", std::string(density_name(m.density.name))},
                {"support", {m.density.a, m.density.b}}};
      if (m.density.name == DensityName::Gaussian) j["mean"] = m.density.mean, j["sigma"] = m.density.sigma;
      if (m.density.name == DensityName::Tabulated) {
        Json rows = Json::array();
        for (const auto& [t, w] : m.density.table) rows.push_back({t, w});
        j["table"] = rows;
      }
      return j;
    }
    case MeasureKind::Raw:
      return to_json(*m.raw);
  }
  return {};
}

MeasureSpec measure_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) bad("measure kind must be a string");
  const auto k = kind.get<std::string>();
  MeasureSpec m;
  if (k == "atoms") {
    std::vector<Atom> atoms;
    for (const auto& a : field(j, "atoms")) {
      Atom at;
      if (a.contains("t")) {
        at.x = {number(a.at("t"), "atom t")};
      } else {
        at.x = numbers(field(a, "x"), "atom x");
      }
      at.w = number(field(a, "w"), "atom weight");
      atoms.push_back(std::move(at));
    }
    m = MeasureSpec::from_atoms(std::move(atoms));
  } else if (k == "density") {
    const auto support = numbers(field(j, "support"), "support");
    if (support.size() != 2) bad("support must be [a, b]");
    const auto name = field(j, "name").get<std::string>();
    if (name == "uniform") {
      m = MeasureSpec::uniform(support[0], support[1]);
    } else if (name == "gaussian") {
      m = MeasureSpec::gaussian(j.contains("mean") ? number(j.at("mean"), "mean") : 0.0,
                                j.contains("sigma") ? number(j.at("sigma"), "sigma") : 1.0, support[0], support[1]);
    } else if (name == "tabulated") {
      m.kind = MeasureKind::Density;
      m.density.name = DensityName::Tabulated;
      m.density.a = support[0];
      m.density.b = support[1];
      for (const auto& row : field(j, "table")) {
        const auto r = numbers(row, "table row");
        if (r.size() != 2) bad("table rows must be [t, w]");
        m.density.table.emplace_back(r[0], r[1]);
      }
    } else {
      bad("unknown density " + name);
    }
  } else if (k == "raw") {
    m = MeasureSpec::from_moments(moments_from_json(j));
  } else {
    bad("unknown measure kind " + k);
  }
  if (j.contains("pole_margin")) m.pole_margin = number(j.at("pole_margin"), "pole_margin");
  m.validate();
  return m;
}

// --- rules ---------------------------------------------------------------------

Json to_json(const QuadratureRule& r) {
  Json nodes = Json::array();
  for (int i = 0; i < r.size(); ++i) {
    std::vector<double> x(static_cast<std::size_t>(r.dim()));
    for (int k = 0; k < r.dim(); ++k) x[static_cast<std::size_t>(k)] = r.nodes(k, i);
    nodes.push_back(x);
  }
  Json j = {{"dim", r.dim()},
            {"strength", r.strength},
            {"nodes", nodes},
            {"weights", vec(r.weights)},
            {"provenance", std::string(to_string(r.provenance))}};
  if (!r.parameter_values.empty()) j["t"] = r.parameter_values;
  return j;
}

QuadratureRule rule_from_json(const Json& j) {
  QuadratureRule r;
  const int dim = integer(field(j, "dim"), "dim");
  r.strength = integer(field(j, "strength"), "strength");
  const Json& nodes = field(j, "nodes");
  const auto w = numbers(field(j, "weights"), "weights");
  if (!nodes.is_array() || nodes.size() != w.size()) {
    throw Error(ErrorKind::DimensionMismatch, "nodes and weights differ in length");
  }
  r.nodes.resize(dim, static_cast<Eigen::Index>(w.size()));
  r.weights.resize(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto x = numbers(nodes[i], "node");
    if (static_cast<int>(x.size()) != dim) throw Error(ErrorKind::DimensionMismatch, "node length differs from dim");
    for (int k = 0; k < dim; ++k) r.nodes(k, static_cast<Eigen::Index>(i)) = x[static_cast<std::size_t>(k)];
    r.weights[static_cast<Eigen::Index>(i)] = w[i];
  }
  if (j.contains("provenance")) r.provenance = provenance_from_string(j.at("provenance").get<std::string>());
  if (j.contains("t")) {
    r.parameter_values = numbers(j.at("t"), "t");
    if (r.parameter_values.size() != w.size()) {
      throw Error(ErrorKind::DimensionMismatch, "parameter values and weights differ in length");
    }
  }
  return r;
}

std::string rule_csv(const QuadratureRule& r) {
  std::string out = "index,w";
  for (int k = 0; k < r.dim(); ++k) out += fmt::format(",x{}", k);
  const bool has_t = r.parameter_values.size() == static_cast<std::size_t>(r.size());
  if (has_t) out += ",t";
  out += '\n';
  for (int i = 0; i < r.size(); ++i) {
    out += fmt::format("{},{:.17g}", i, r.weights[i]);
    for (int k = 0; k < r.dim(); ++k) out += fmt::format(",{:.17g}", r.nodes(k, i));
    if (has_t) out += fmt::format(",{:.17g}", r.parameter_values[static_cast<std::size_t>(i)]);
    out += '\n';
  }
  return out;
}

// --- curves ------------------------------------------------------------------------

Json to_json(const RationalCurve& c) {
  Json phi = Json::array();
  for (const auto& p : c.phi()) phi.push_back(to_json(p));
  return {{"kind", "rational"}, {"phi0", to_json(c.phi0())}, {"phi", phi}};
}

Json to_json(const PlaneCurve& c) {
  Json j = {{"kind", "plane"}, {"F", to_json(c.F)}};
  if (c.places_override) j["places_at_infinity"] = *c.places_override;
  return j;
}

Json to_json(const AnyCurve& c) {
  return std::visit([](const auto& v) { return to_json(v); }, c);
}

AnyCurve curve_from_json(const Json& j) {
  const auto kind = field(j, "kind").get<std::string>();
  if (kind == "rational") {
    std::vector<Polynomial> phi;
    for (const auto& p : field(j, "phi")) phi.push_back(polynomial_from_json(p));
    const Polynomial phi0 = j.contains("phi0") ? polynomial_from_json(j.at("phi0")) : Polynomial::constant(1.0);
    return RationalCurve(phi0, std::move(phi));
  }
  if (kind == "plane") {
    PlaneCurve c;
    c.F = multivariate_from_json(field(j, "F"), 2);
    if (c.F.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "plane curve with F = 0");
    if (j.contains("places_at_infinity") && !j.at("places_at_infinity").is_null()) {
      c.places_override = integer(j.at("places_at_infinity"), "places_at_infinity");
    }
    return c;
  }
  bad("unknown curve kind " + kind);
}

// --- configuration -----------------------------------------------------------------

NLPConfig config_from_json(const Json& j) {
  NLPConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) bad("config must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    if (k == "max_nodes_init") c.max_nodes_init = integer(v, "max_nodes_init");
    else if (k == "disk_radius") c.disk_radius = v.is_null() ? std::nullopt : std::optional<double>(number(v, "disk_radius"));
    else if (k == "pole_margin") c.pole_margin = number(v, "pole_margin");
    else if (k == "merge_tol") c.merge_tol = number(v, "merge_tol");
    else if (k == "weight_drop_tol") c.weight_drop_tol = number(v, "weight_drop_tol");
    else if (k == "max_outer_iters") c.max_outer_iters = integer(v, "max_outer_iters");
    else if (k == "max_inner_iters") c.max_inner_iters = integer(v, "max_inner_iters");
    else if (k == "penalty_growth") c.penalty_growth = number(v, "penalty_growth");
    else if (k == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) bad("seed must be a nonnegative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (k == "exactness_tol") c.exactness_tol = number(v, "exactness_tol");
    else if (k == "parameter_range") c.parameter_range = number(v, "parameter_range");
    else if (k == "max_drop_rounds") c.max_drop_rounds = integer(v, "max_drop_rounds");
    else if (k == "mass_node") {
      if (v.is_null()) continue;
      const auto p = numbers(v, "mass_node");
      if (p.size() != 2) bad("mass_node must be [x, y]");
      c.mass_node = std::array<double, 2>{p[0], p[1]};
    }
    // Unknown keys (tolerances for other commands, output paths) are ignored here.
  }
  if (!(c.pole_margin > 0.0) || !(c.merge_tol >= 0.0) || !(c.weight_drop_tol >= 0.0) || !(c.exactness_tol > 0.0)) {
    bad("config tolerances must be positive");
  }
  if (!(c.penalty_growth > 1.0)) bad("penalty_growth must exceed 1");
  if (c.max_nodes_init < 1 || c.max_outer_iters < 1 || c.max_inner_iters < 1) bad("solver budgets must be positive");
  if (c.disk_radius && !(*c.disk_radius > 0.0)) bad("disk_radius must be positive");
  return c;
}

Json to_json(const NLPConfig& c) {
  Json j = {{"max_nodes_init", c.max_nodes_init},   {"pole_margin", c.pole_margin},
            {"merge_tol", c.merge_tol},             {"weight_drop_tol", c.weight_drop_tol},
            {"max_outer_iters", c.max_outer_iters}, {"max_inner_iters", c.max_inner_iters},
            {"penalty_growth", c.penalty_growth},   {"seed", c.seed},
            {"exactness_tol", c.exactness_tol},     {"parameter_range", c.parameter_range},
            {"max_drop_rounds", c.max_drop_rounds}};
  j["disk_radius"] = c.disk_radius ? Json(*c.disk_radius) : Json(nullptr);
  j["mass_node"] = c.mass_node ? Json({(*c.mass_node)[0], (*c.mass_node)[1]}) : Json(nullptr);
  return j;
}

// --- reports ---------------------------------------------------------------------------

Json to_json(const Recurrence& r) { return {{"a", r.a}, {"b", r.b}}; }

Json to_json(const PsiRank& p) {
  return {{"rank", p.rank}, {"surjective", p.surjective}, {"kernel_dim", p.kernel_dim}, {"target_dim", p.target_dim}};
}

Json to_json(const ExponentCoverage& e) {
  return {{"covered", std::vector<int>(e.covered.begin(), e.covered.end())}, {"complete", e.complete}};
}

Json to_json(const BoundReport& b) {
  return {{"setting", std::string(to_string(b.setting))},
          {"kind", b.kind == BoundKind::Upper ? "upper" : "lower"},
          {"params",
           {{"strength", b.params.strength},
            {"d", b.params.d},
            {"D", b.params.D},
            {"t", b.params.t},
            {"p", b.params.p},
            {"n", b.params.n}}},
          {"value", b.value},
          {"formula", b.formula},
          {"source", b.source},
          {"advisory", b.advisory},
          {"note", b.note}};
}

Json to_json(const BoundTable& t) {
  Json reports = Json::array();
  for (const auto& r : t.reports) reports.push_back(to_json(r));
  Json omitted = Json::array();
  for (const auto& o : t.omitted) omitted.push_back({{"setting", std::string(to_string(o.setting))}, {"reason", o.reason}});
  return {{"reports", reports}, {"omitted", omitted}};
}

Json to_json(const BoundCheck& b) {
  auto rows = [](const std::vector<BoundRow>& rs) {
    Json arr = Json::array();
    for (const auto& r : rs) arr.push_back({{"bound", to_json(r.bound)}, {"achieved", r.achieved}, {"satisfied", r.satisfied}});
    return arr;
  };
  Json omitted = Json::array();
  for (const auto& o : b.omitted) omitted.push_back({{"setting", std::string(to_string(o.setting))}, {"reason", o.reason}});
  return {{"achieved", b.achieved}, {"upper", rows(b.upper)}, {"lower", rows(b.lower)}, {"omitted", omitted}};
}

Json to_json(const ExactnessReport& e) {
  return {{"max_residual", e.max_residual}, {"per_degree", e.per_degree}, {"worst_index", e.worst_index}};
}

Json to_json(const DegeneracyCheck& d) {
  return {{"k", d.k},
          {"atoms", d.atoms},
          {"rank_curve", d.rank_curve},
          {"rank_line", d.rank_line},
          {"psi_rank", d.psi_rank},
          {"ambient_dim", d.ambient_dim},
          {"curve_degenerate", d.curve_degenerate},
          {"line_degenerate", d.line_degenerate},
          {"ambient_degenerate", d.ambient_degenerate},
          {"agree", d.agree}};
}

Json to_json(const KKTReport& k) {
  Json intervals = Json::array();
  for (const auto& ic : k.sign_pattern) {
    intervals.push_back({{"lo", ic.lo},
                         {"hi", ic.hi},
                         {"minimizer", ic.minimizer},
                         {"nodes", ic.nodes},
                         {"left", ic.left},
                         {"right", ic.right},
                         {"h_roots", ic.h_roots},
                         {"candidate_bound", ic.candidate_bound}});
  }
  Json j = {{"lambda", k.lambda},
            {"H_values", k.H_values},
            {"gradient_residuals", k.gradient_residuals},
            {"sign_ok", k.sign_ok},
            {"sign_pattern", intervals},
            {"plane", k.plane},
            {"rank_deficient", k.rank_deficient},
            {"fit_rank", k.fit_rank},
            {"fit_unknowns", k.fit_unknowns},
            {"fit_residual", k.fit_residual},
            {"excluded", k.excluded},
            {"max_H", k.max_H()},
            {"max_gradient_residual", k.max_gradient_residual()}};
  if (!k.plane) j["H"] = to_json(k.H);
  return j;
}

Json to_json(const SynthesisResult& s) {
  return {{"rule", to_json(s.rule)},
          {"residual", s.residual},
          {"kkt", to_json(s.kkt)},
          {"bounds", to_json(s.bound_check)},
          {"converged", s.converged},
          {"target_nodes", s.target_nodes},
          {"target_met", s.target_met},
          {"method", s.method},
          {"message", s.message},
          {"iterations", s.outer_iterations}};
}

Json to_json(const VerificationReport& v) {
  Json deg = Json::array();
  for (const auto& d : v.degeneracy) deg.push_back(to_json(d));
  return {{"exactness", to_json(v.exactness)},
          {"tolerance", v.tolerance},
          {"bounds", to_json(v.bounds)},
          {"degeneracy", deg},
          {"verdict", v.pass ? "pass" : "fail"},
          {"reasons", v.reasons}};
}

}  // namespace curvequad::io
