#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "curvequad/bounds.hpp"
#include "curvequad/curves.hpp"
#include "curvequad/error.hpp"
#include "curvequad/gauss.hpp"
#include "curvequad/io.hpp"
#include "curvequad/kernels.hpp"
#include "curvequad/moments.hpp"
#include "curvequad/scenarios.hpp"
#include "curvequad/synthesis.hpp"
#include "curvequad/verify.hpp"

using namespace curvequad;
using io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;

struct RunConfig {
  NLPConfig nlp;
  double exactness_tol = 1e-8;
  double rank_tol = kRankTolerance;
  std::string format = "json";
  std::string out;
};

RunConfig load_config(const std::string& path) {
  RunConfig rc;
  if (!path.empty()) {
    const Json j = io::read_file(path);
    rc.nlp = io::config_from_json(j);
    rc.exactness_tol = rc.nlp.exactness_tol;
    if (j.contains("rank_tol")) rc.rank_tol = j.at("rank_tol").get<double>();
    if (j.contains("format")) rc.format = j.at("format").get<std::string>();
    if (j.contains("out")) rc.out = j.at("out").get<std::string>();
    if (!(rc.rank_tol > 0.0)) throw Error(ErrorKind::InvalidInput, "rank_tol must be positive");
  }
  if (const char* env = std::getenv("CURVEQUAD_SEED")) {
    try {
      std::size_t used = 0;
      rc.nlp.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, std::string("CURVEQUAD_SEED is not an integer: ") + env);
    }
  }
  return rc;
}

// JSON goes to --out when given, else to stdout; the text form goes to stdout
// when JSON went to a file or when the table format is requested.
void emit(const RunConfig& rc, const Json& j, const std::string& table) {
  if (!rc.out.empty()) {
    io::write_file(rc.out, io::dump(j));
    if (!table.empty()) std::fputs(table.c_str(), stdout);
  } else if (rc.format == "table" && !table.empty()) {
    std::fputs(table.c_str(), stdout);
  } else {
    std::fputs(io::dump(j).c_str(), stdout);
  }
}

std::string rule_table(const QuadratureRule& r) {
  std::string s = fmt::format("{:>5}  {:>24}", "node", "weight");
  for (int k = 0; k < r.dim(); ++k) s += fmt::format("  {:>24}", fmt::format("x{}", k));
  s += '\n';
  for (int i = 0; i < r.size(); ++i) {
    s += fmt::format("{:>5}  {:>24.17g}", i, r.weights[i]);
    for (int k = 0; k < r.dim(); ++k) s += fmt::format("  {:>24.17g}", r.nodes(k, i));
    s += '\n';
  }
  return s;
}

// Accepts a bare rule or any result object carrying one under "rule".
QuadratureRule load_rule(const std::string& path) {
  const Json j = io::read_file(path);
  return io::rule_from_json(j.is_object() && j.contains("rule") ? j.at("rule") : j);
}

int measure_nvars(const MeasureSpec& m) {
  if (m.kind == MeasureKind::Raw) return m.raw->nvars();
  if (m.kind == MeasureKind::Atoms) return std::max(1, m.atom_dim());
  return 1;
}

std::string bound_table(const std::vector<BoundReport>& reports, const std::vector<OmittedBound>& omitted) {
  std::string s = fmt::format("{:<16} {:<6} {:>8}  {:<36} {}\n", "setting", "kind", "value", "formula", "note");
  for (const auto& r : reports) {
    s += fmt::format("{:<16} {:<6} {:>8}  {:<36} {}\n", to_string(r.setting), r.kind == BoundKind::Upper ? "upper" : "lower",
                     r.value, r.formula, r.advisory ? "[advisory] " + r.note : r.note);
  }
  for (const auto& o : omitted) s += fmt::format("{:<16} {:<6} {:>8}  {}\n", to_string(o.setting), "-", "-", o.reason);
  return s;
}

std::string verification_summary(const VerificationReport& v) {
  std::string s = fmt::format("verdict: {}\n", v.pass ? "PASS" : "FAIL");
  s += fmt::format("exactness: max residual {:.3e} (tolerance {:.1e}, worst index {})\n", v.exactness.max_residual,
                   v.tolerance, v.exactness.worst_index);
  s += fmt::format("nodes after canonicalization: {}\n", v.bounds.achieved);
  for (const auto& r : v.bounds.upper) {
    s += fmt::format("  upper {:<16} {:>6}  {}\n", to_string(r.bound.setting), r.bound.value, r.satisfied ? "ok" : "EXCEEDED");
  }
  for (const auto& r : v.bounds.lower) {
    s += fmt::format("  lower {:<16} {:>6}  {}{}\n", to_string(r.bound.setting), r.bound.value,
                     r.satisfied ? "ok" : "UNDERCUT", r.bound.advisory ? " (advisory)" : "");
  }
  for (const auto& d : v.degeneracy) {
    s += fmt::format("  degeneracy k={}: rank M_k(mu)={} rank psi={} rank M_Dk(nu)={} -> {}\n", d.k, d.rank_curve, d.psi_rank,
                     d.rank_line, d.agree ? "agree" : "DISAGREE");
  }
  for (const auto& r : v.reasons) s += "  reason: " + r + '\n';
  return s;
}

std::string synthesis_summary(const SynthesisResult& r) {
  std::string s = fmt::format("method {}: {} nodes (target {}, {}), residual {:.3e}, {}\n", r.method, r.rule.size(), r.target_nodes,
                              r.target_met ? "met" : "not met", r.residual, r.converged ? "converged" : "NOT converged");
  if (!r.message.empty()) s += "note: " + r.message + '\n';
  return s + rule_table(r.rule);
}

// --- bench ---------------------------------------------------------------------

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Json bench_scenarios(const RunConfig& rc, std::string& table) {
  Json rows = Json::array();
  auto add = [&](const std::string& name, const std::string& penalty, double secs, int nodes, int target, double residual,
                 bool converged, int iterations) {
    rows.push_back({{"scenario", name},
                    {"penalty", penalty},
                    {"seconds", secs},
                    {"nodes", nodes},
                    {"target", target},
                    {"residual", residual},
                    {"converged", converged},
                    {"iterations", iterations}});
    table += fmt::format("{:<34} {:<8} {:>9.4f} {:>6} {:>6} {:>11.3e} {:>5} {:>6}\n", name, penalty, secs, nodes, target, residual,
                         converged ? "yes" : "no", iterations);
  };
  table += fmt::format("{:<34} {:<8} {:>9} {:>6} {:>6} {:>11} {:>5} {:>6}\n", "scenario", "penalty", "seconds", "nodes", "target",
                       "residual", "conv", "iters");

  {
    const auto t0 = Clock::now();
    const MeasureSpec nu = MeasureSpec::uniform(-1.0, 1.0);
    double worst = 0.0;
    int nodes = 0;
    for (int k = 1; k <= 19; ++k) {
      const MomentVector m = line_moments(nu, std::max(k, gauss_moment_degree(k)));
      const QuadratureRule r = gauss_rule(m, k);
      worst = std::max(worst, check_exactness(r, m, k).max_residual);
      nodes = r.size();
    }
    add("gauss uniform[-1,1] strengths 1..19", "-", seconds_since(t0), nodes, minimal_nodes(19), worst, true, 0);
  }
  {
    const RationalCurve c = scenarios::twisted_cubic();
    const MeasureSpec nu = MeasureSpec::uniform(0.0, 1.0);
    for (int s = 1; s <= 4; ++s) {
      const auto t0 = Clock::now();
      const SynthesisResult r = pullback_gauss(c, nu, 2 * s - 1);
      add(fmt::format("pullback twisted cubic k={}", 2 * s - 1), "-", seconds_since(t0), r.rule.size(), r.target_nodes, r.residual,
          r.converged, 0);
    }
    const auto t0 = Clock::now();
    const SynthesisResult r = nlp_rational(c, curve_moments(nu, c, 3), 3, rc.nlp, &nu);
    add("nlp twisted cubic k=3", "sum h", seconds_since(t0), r.rule.size(), r.target_nodes, r.residual, r.converged,
        r.outer_iterations);
  }
  {
    const auto t0 = Clock::now();
    const MeasureSpec mu = scenarios::random_parabola_atoms(rc.nlp.seed, 100);
    const MomentVector m = ambient_moments(mu, 2, 3);
    QuadratureRule start;
    start.nodes.resize(2, 100);
    start.weights.resize(100);
    for (int i = 0; i < 100; ++i) {
      start.nodes(0, i) = mu.atoms[static_cast<std::size_t>(i)].x[0];
      start.nodes(1, i) = mu.atoms[static_cast<std::size_t>(i)].x[1];
      start.weights[i] = mu.atoms[static_cast<std::size_t>(i)].w;
    }
    const QuadratureRule r = caratheodory_prune(start, m, 3);
    add("prune 100 parabola atoms k=3", "-", seconds_since(t0), r.size(), 7, check_exactness(r, m, 3).max_residual, true, 0);
  }
  {
    const auto t0 = Clock::now();
    const SynthesisResult r = nlp_plane(scenarios::unit_circle(), scenarios::circle_uniform_moments(3), 3, rc.nlp);
    add("nlp circle uniform k=3", "sum w", seconds_since(t0), r.rule.size(), r.target_nodes, r.residual, r.converged,
        r.outer_iterations);
  }
  {
    const RationalCurve c = scenarios::inverse_curve();
    const MeasureSpec nu = MeasureSpec::uniform(1.0, 2.0);
    const auto t0 = Clock::now();
    const SynthesisResult r = nlp_rational(c, curve_moments(nu, c, 3), 3, rc.nlp, &nu);
    add("nlp (1/t, t) on [1,2] k=3", "sum h", seconds_since(t0), r.rule.size(), r.target_nodes, r.residual, r.converged,
        r.outer_iterations);
  }
  return rows;
}

Json bench_kernels(const std::vector<int>& sizes, int strength, int repeats, std::uint64_t seed, std::string& table) {
  Json rows = Json::array();
  table += fmt::format("\n{:>8} {:>8} {:>12} {:>12} {:>8} {:>9}\n", "nodes", "monos", "serial [s]", "omp [s]", "speedup", "identical");
  const MonomialBasis basis(3, strength);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : sizes) {
    Eigen::MatrixXd x(3, n);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < 3; ++k) x(k, i) = u(rng);
      w[i] = 0.5 + 0.5 * (u(rng) + 1.0);
    }
    auto time = [&](auto&& build, auto&& acc) {
      double best = 1e300;
      Eigen::VectorXd m;
      for (int r = 0; r < repeats; ++r) {
        const auto t0 = Clock::now();
        const Eigen::MatrixXd A = build(basis, x);
        m = acc(A, w);
        best = std::min(best, seconds_since(t0));
      }
      return std::make_pair(best, m);
    };
    const auto [ts, ms] = time(kernels::serial::monomial_matrix, kernels::serial::accumulate);
    const auto [to, mo] = time(kernels::omp::monomial_matrix, kernels::omp::accumulate);
    const bool same = ms == mo;
    rows.push_back({{"nodes", n}, {"monomials", static_cast<int>(basis.size())}, {"serial_seconds", ts}, {"omp_seconds", to},
                    {"identical", same}});
    table += fmt::format("{:>8} {:>8} {:>12.6f} {:>12.6f} {:>8.2f} {:>9}\n", n, basis.size(), ts, to, ts / std::max(to, 1e-12),
                         same ? "yes" : "NO");
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrature rules on algebraic and rational curves"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_path, format;
  app.add_option("--config", config_path, "Run configuration JSON")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Write the JSON result to this file");
  app.add_option("--format", format, "Output format on stdout")->check(CLI::IsMember({"json", "table", "csv"}));

  std::string curve_path, measure_path, rule_path, csv_path, setting = "all", method = "pullback";
  int degree = 0, strength = -1, s_arg = -1, d_arg = 1, D_arg = -1, t_arg = 0, p_arg = 0, n_arg = 2, nvars = 0, degeneracy = 0;
  int repeats = 3;
  double tol = -1.0, merge_tol = 1e-6;
  bool with_recurrence = false, quick = false;
  std::vector<int> sizes{512, 4096, 32768};

  auto* moments = app.add_subcommand("moments", "Moments of a measure, on a curve or in the plane");
  moments->add_option("--measure", measure_path, "Measure JSON")->required()->check(CLI::ExistingFile);
  moments->add_option("--curve", curve_path, "Curve JSON (moments of the pushforward)")->check(CLI::ExistingFile);
  moments->add_option("--degree", degree, "Maximal total degree")->required()->check(CLI::NonNegativeNumber);
  moments->add_option("--nvars", nvars, "Ambient dimension for measures given in R^n");

  auto* gauss = app.add_subcommand("gauss", "Gauss rule of a measure on the line");
  gauss->add_option("--measure", measure_path, "Measure JSON")->required()->check(CLI::ExistingFile);
  gauss->add_option("--strength", strength, "Strength")->required()->check(CLI::NonNegativeNumber);
  gauss->add_flag("--recurrence", with_recurrence, "Include the recurrence coefficients");

  auto* psi = app.add_subcommand("psi-rank", "Rank of p -> p o phi on polynomials of degree <= s");
  psi->add_option("--curve", curve_path, "Rational curve JSON")->required()->check(CLI::ExistingFile);
  psi->add_option("--s", s_arg, "Degree s")->required()->check(CLI::NonNegativeNumber);
  psi->add_option("--tol", tol, "Relative rank tolerance");

  auto* cover = app.add_subcommand("exponent-coverage", "Exponents reached by (t, t^(d-1), t^d) at degree s");
  cover->add_option("--d", d_arg, "Curve degree d")->required()->check(CLI::PositiveNumber);
  cover->add_option("--s", s_arg, "Degree s")->required()->check(CLI::NonNegativeNumber);

  auto* places = app.add_subcommand("places-at-infinity", "Real places at infinity of a plane curve");
  places->add_option("--curve", curve_path, "Plane curve JSON")->required()->check(CLI::ExistingFile);

  auto* bounds = app.add_subcommand("bounds", "Node-count bounds");
  bounds->add_option("--setting", setting, "all, xd, or one setting name");
  bounds->add_option("--s", s_arg, "s in strength 2s-1 (for --setting xd: the strength itself)");
  bounds->add_option("--strength", strength, "Strength, overriding --s");
  bounds->add_option("--d", d_arg, "Plane-curve degree d")->check(CLI::PositiveNumber);
  bounds->add_option("--D", D_arg, "Parametrization degree D (defaults to d)");
  bounds->add_option("--t", t_arg, "Real places at infinity");
  bounds->add_option("--p", p_arg, "Real zeros of phi0");
  bounds->add_option("--n", n_arg, "Ambient dimension");

  auto* synth = app.add_subcommand("synthesize", "Construct a rule on a curve");
  synth->add_option("--curve", curve_path, "Curve JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("--measure", measure_path, "Measure JSON")->required()->check(CLI::ExistingFile);
  synth->add_option("--strength", strength, "Strength")->required()->check(CLI::NonNegativeNumber);
  synth->add_option("--method", method, "pullback, nlp or prune")->check(CLI::IsMember({"pullback", "nlp", "prune"}));
  synth->add_option("--csv", csv_path, "Also write nodes and weights as CSV");

  auto* prune = app.add_subcommand("prune", "Caratheodory pruning of a rule");
  prune->add_option("--rule", rule_path, "Rule JSON")->required()->check(CLI::ExistingFile);
  prune->add_option("--strength", strength, "Strength (defaults to the rule's)");
  prune->add_option("--measure", measure_path, "Target measure (defaults to the rule's own moments)")->check(CLI::ExistingFile);
  prune->add_option("--curve", curve_path, "Rational curve carrying a parameter-line measure")->check(CLI::ExistingFile);
  prune->add_option("--merge-tol", merge_tol, "Merge tolerance");
  prune->add_option("--csv", csv_path, "Also write nodes and weights as CSV");

  auto* verify = app.add_subcommand("verify", "Check a rule against a curve and a measure");
  verify->add_option("--rule", rule_path, "Rule JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--curve", curve_path, "Curve JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--measure", measure_path, "Measure JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--strength", strength, "Strength (defaults to the rule's)");
  verify->add_option("--tol", tol, "Exactness tolerance");
  verify->add_option("--degeneracy", degeneracy, "Also compare degeneracy on curve and line for k = 1..K");

  auto* bench = app.add_subcommand("bench", "Run the reference scenarios and time serial against OpenMP kernels");
  bench->add_option("--sizes", sizes, "Node counts for the kernel timing");
  bench->add_option("--repeats", repeats, "Repetitions per kernel timing")->check(CLI::PositiveNumber);
  bench->add_flag("--quick", quick, "Skip the kernel timing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    RunConfig rc = load_config(config_path);
    if (!out_path.empty()) rc.out = out_path;
    if (!format.empty()) rc.format = format;

    if (cmd == "moments") {
      const MeasureSpec mu = io::measure_from_json(io::read_file(measure_path));
      MomentVector m(1, 0);
      if (!curve_path.empty()) {
        const AnyCurve c = io::curve_from_json(io::read_file(curve_path));
        if (const auto* rc_curve = std::get_if<RationalCurve>(&c)) {
          m = curve_moments(mu, *rc_curve, degree);
        } else {
          m = ambient_moments(mu, 2, degree);
        }
      } else {
        const int nv = nvars > 0 ? nvars : measure_nvars(mu);
        m = nv == 1 && mu.kind != MeasureKind::Raw ? line_moments(mu, degree) : ambient_moments(mu, nv, degree);
      }
      std::string table;
      for (const auto& a : m.basis()) table += fmt::format("{:<16} {:.17g}\n", a.key(), m[a]);
      emit(rc, io::to_json(m), table);
      return kExitOk;
    }

    if (cmd == "gauss") {
      const MeasureSpec mu = io::measure_from_json(io::read_file(measure_path));
      if (measure_nvars(mu) != 1) throw Error(ErrorKind::DimensionMismatch, "gauss needs a measure on the line");
      const MomentVector m = line_moments(mu, gauss_moment_degree(strength));
      const QuadratureRule r = gauss_rule(m, strength);
      Json j = io::to_json(r);
      if (with_recurrence) {
        try {
          j["recurrence"] = io::to_json(recurrence_from_moments(m, minimal_nodes(strength)));
        } catch (const DegenerateMeasure& e) {
          j["recurrence"] = nullptr;
          j["degenerate_depth"] = e.depth();
        }
      }
      if (rc.format == "csv") {
        std::fputs(io::rule_csv(r).c_str(), stdout);
        if (!rc.out.empty()) io::write_file(rc.out, io::dump(j));
        return kExitOk;
      }
      emit(rc, j, rule_table(r));
      return kExitOk;
    }

    if (cmd == "psi-rank") {
      const AnyCurve c = io::curve_from_json(io::read_file(curve_path));
      const auto* curve = std::get_if<RationalCurve>(&c);
      if (!curve) throw Error(ErrorKind::InvalidInput, "psi-rank needs a rational curve");
      const PsiRank pr = psi_rank(*curve, s_arg, tol > 0.0 ? tol : rc.rank_tol);
      Json j = io::to_json(pr);
      j["s"] = s_arg;
      j["D"] = curve->D();
      emit(rc, j,
           fmt::format("s={} D={}: rank {} of {} ({}), kernel dimension {}\n", s_arg, curve->D(), pr.rank, pr.target_dim,
                       pr.surjective ? "surjective" : "not surjective", pr.kernel_dim));
      return kExitOk;
    }

    if (cmd == "exponent-coverage") {
      const ExponentCoverage e = exponent_coverage(d_arg, s_arg);
      Json j = io::to_json(e);
      std::vector<int> missing;
      for (int k = 0; k <= d_arg * s_arg; ++k) {
        if (!e.covered.count(k)) missing.push_back(k);
      }
      j["missing"] = missing;
      j["d"] = d_arg;
      j["s"] = s_arg;
      emit(rc, j,
           fmt::format("d={} s={}: {} of {} exponents covered, {}\n", d_arg, s_arg, e.covered.size(), d_arg * s_arg + 1,
                       e.complete ? "complete" : "incomplete"));
      return kExitOk;
    }

    if (cmd == "places-at-infinity") {
      const AnyCurve c = io::curve_from_json(io::read_file(curve_path));
      const auto* pc = std::get_if<PlaneCurve>(&c);
      if (!pc) throw Error(ErrorKind::InvalidInput, "places-at-infinity needs a plane curve");
      const int t = places_at_infinity(*pc);
      emit(rc, Json{{"places_at_infinity", t}, {"degree", pc->degree()}},
           fmt::format("degree {}, {} real place(s) at infinity\n", pc->degree(), t));
      return kExitOk;
    }

    if (cmd == "bounds") {
      if (setting == "xd") {
        if (s_arg < 0 && strength < 0) throw Error(ErrorKind::InvalidInput, "--setting xd needs --s");
        const int k = strength >= 0 ? strength : s_arg;
        BoundParams bp;
        bp.strength = k;
        bp.d = d_arg;
        bp.D = d_arg;
        bp.n = 2;
        const BoundTable t = upper_bounds(bp);
        Json arr = Json::array();
        std::vector<BoundReport> picked;
        for (const auto setting_id : {BoundSetting::ZalarBaseline, BoundSetting::RationalOdd, BoundSetting::RationalEven,
                                      BoundSetting::XdCurve}) {
          if (const auto* r = t.find(setting_id)) picked.push_back(*r), arr.push_back(io::to_json(*r));
        }
        std::string table = fmt::format("{:<8}", "(s,d)");
        for (const auto& r : picked) table += fmt::format(" {:>16}", to_string(r.setting));
        table += fmt::format("\n{:<8}", fmt::format("({},{})", k, d_arg));
        for (const auto& r : picked) table += fmt::format(" {:>16}", r.value);
        table += '\n';
        emit(rc, arr, table);
        return kExitOk;
      }
      BoundParams bp;
      bp.strength = strength >= 0 ? strength : (s_arg >= 1 ? 2 * s_arg - 1 : 1);
      bp.d = d_arg;
      bp.D = D_arg > 0 ? D_arg : d_arg;
      bp.t = t_arg;
      bp.p = p_arg;
      bp.n = n_arg;
      BoundTable t = upper_bounds(bp);
      BoundReport lb = lower_bound(bp.D, bp.strength);
      lb.params.n = bp.n;
      t.reports.push_back(lb);
      std::vector<BoundReport> picked;
      std::vector<OmittedBound> omitted;
      if (setting != "all") {
        const BoundSetting want = bound_setting_from_string(setting);
        for (const auto& r : t.reports) {
          if (r.setting == want) picked.push_back(r);
        }
        for (const auto& o : t.omitted) {
          if (o.setting == want) omitted.push_back(o);
        }
      } else {
        picked = t.reports;
        omitted = t.omitted;
      }
      Json arr = Json::array();
      for (const auto& r : picked) arr.push_back(io::to_json(r));
      for (const auto& o : omitted) arr.push_back({{"setting", std::string(to_string(o.setting))}, {"omitted", o.reason}});
      emit(rc, arr, bound_table(picked, omitted));
      return kExitOk;
    }

    if (cmd == "synthesize") {
      const AnyCurve c = io::curve_from_json(io::read_file(curve_path));
      const MeasureSpec mu = io::measure_from_json(io::read_file(measure_path));
      SynthesisResult res;
      if (const auto* curve = std::get_if<RationalCurve>(&c)) {
        if (method == "pullback") {
          res = pullback_gauss(*curve, mu, strength);
        } else if (method == "nlp") {
          res = nlp_rational(*curve, curve_moments(mu, *curve, strength), strength, rc.nlp, &mu);
        } else {
          const MomentVector m = curve_moments(mu, *curve, strength);
          res.method = "prune";
          res.rule = initial_rule(*curve, m, strength, rc.nlp, &mu);
          res.residual = check_exactness(res.rule, m, strength).max_residual;
          res.converged = res.residual <= rc.exactness_tol;
          res.target_nodes = static_cast<int>(monomial_count(curve->n(), strength));
          res.target_met = res.rule.size() <= res.target_nodes;
          res.bound_check = check_bounds(res.rule, *curve, strength,
                                         curve->is_polynomial() ? lower_bound_context(*curve, mu, strength) : LowerBoundContext{});
        }
      } else {
        const auto& pc = std::get<PlaneCurve>(c);
        const MomentVector m = ambient_moments(mu, 2, strength);
        if (method == "pullback") {
          throw Error(ErrorKind::InvalidInput, "pullback needs a rational curve with a polynomial parametrization");
        } else if (method == "nlp") {
          res = nlp_plane(pc, m, strength, rc.nlp, &mu);
        } else {
          res.method = "prune";
          res.rule = initial_rule(pc, m, strength, rc.nlp, &mu);
          res.residual = check_exactness(res.rule, m, strength).max_residual;
          res.converged = res.residual <= rc.exactness_tol;
          res.target_nodes = static_cast<int>(monomial_count(2, strength));
          res.target_met = res.rule.size() <= res.target_nodes;
          res.bound_check = check_bounds(res.rule, pc, strength);
        }
      }
      if (!csv_path.empty()) io::write_file(csv_path, io::rule_csv(res.rule));
      if (rc.format == "csv") {
        std::fputs(io::rule_csv(res.rule).c_str(), stdout);
        if (!rc.out.empty()) io::write_file(rc.out, io::dump(io::to_json(res)));
        return kExitOk;
      }
      emit(rc, io::to_json(res), synthesis_summary(res));
      return kExitOk;
    }

    if (cmd == "prune") {
      const QuadratureRule rule = load_rule(rule_path);
      const int k = strength >= 0 ? strength : rule.strength;
      MomentVector m(rule.dim(), k);
      if (!measure_path.empty()) {
        const MeasureSpec mu = io::measure_from_json(io::read_file(measure_path));
        if (!curve_path.empty()) {
          const AnyCurve c = io::curve_from_json(io::read_file(curve_path));
          if (const auto* curve = std::get_if<RationalCurve>(&c)) {
            m = curve_moments(mu, *curve, k);
          } else {
            m = ambient_moments(mu, 2, k);
          }
        } else {
          m = ambient_moments(mu, rule.dim(), k);
        }
      } else {
        const MonomialBasis basis(rule.dim(), k);
        const Eigen::VectorXd v = kernels::accumulate(kernels::monomial_matrix(basis, rule.nodes), rule.weights);
        m = MomentVector(rule.dim(), k, std::vector<double>(v.data(), v.data() + v.size()));
      }
      const QuadratureRule pruned = caratheodory_prune(rule, m, k, merge_tol);
      const double residual = check_exactness(pruned, m, k).max_residual;
      Json j = {{"rule", io::to_json(pruned)}, {"nodes_before", rule.size()}, {"nodes_after", pruned.size()}, {"residual", residual}};
      if (!csv_path.empty()) io::write_file(csv_path, io::rule_csv(pruned));
      emit(rc, j, fmt::format("{} -> {} nodes, residual {:.3e}\n", rule.size(), pruned.size(), residual) + rule_table(pruned));
      return kExitOk;
    }

    if (cmd == "verify") {
      const QuadratureRule rule = load_rule(rule_path);
      const AnyCurve c = io::curve_from_json(io::read_file(curve_path));
      const MeasureSpec mu = io::measure_from_json(io::read_file(measure_path));
      const int k = strength >= 0 ? strength : rule.strength;
      VerificationReport v = verify_rule(rule, c, mu, k, tol > 0.0 ? tol : rc.exactness_tol);
      if (degeneracy > 0) {
        const auto* curve = std::get_if<RationalCurve>(&c);
        if (!curve) throw Error(ErrorKind::InvalidInput, "--degeneracy needs a rational curve");
        for (int kk = 1; kk <= degeneracy; ++kk) v.degeneracy.push_back(degeneracy_transfer(*curve, mu, kk, rc.rank_tol));
      }
      emit(rc, io::to_json(v), verification_summary(v));
      return v.pass ? kExitOk : kExitVerifyFailed;
    }

    if (cmd == "bench") {
      std::string table;
      Json j;
      j["scenarios"] = bench_scenarios(rc, table);
      if (!quick) j["kernels"] = bench_kernels(sizes, 6, repeats, rc.nlp.seed, table);
      j["seed"] = rc.nlp.seed;
      emit(rc, j, table);
      return kExitOk;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: command=%s kind=%s message=\"%s\"\n", cmd.c_str(), std::string(to_string(e.kind())).c_str(),
                 e.what());
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: command=%s kind=InvalidInput message=\"%s\"\n", cmd.c_str(), e.what());
    return kExitInput;
  }
  return kExitOk;
}
