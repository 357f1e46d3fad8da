#include "curvequad/quadrature_rule.hpp"

#include <string>

#include "curvequad/error.hpp"

namespace curvequad {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Gauss: return "gauss";
    case Provenance::Pullback: return "pullback";
    case Provenance::NlpPlane: return "nlp-plane";
    case Provenance::NlpRational: return "nlp-rational";
    case Provenance::Pruned: return "pruned";
  }
  return "gauss";
}

Provenance provenance_from_string(std::string_view s) {
  for (auto p : {Provenance::Gauss, Provenance::Pullback, Provenance::NlpPlane,
                 Provenance::NlpRational, Provenance::Pruned}) {
    if (to_string(p) == s) return p;
  }
  throw Error(ErrorKind::InvalidInput, "unknown provenance '" + std::string(s) + "'");
}

QuadratureRule canonicalize(const QuadratureRule& rule, double merge_tol, double drop_tol) {
  const double mass = rule.weights.cwiseAbs().sum();
  const bool has_t = rule.parameter_values.size() == static_cast<std::size_t>(rule.size());
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> ws, ts;
  for (int i = 0; i < rule.size(); ++i) {
    const double w = rule.weights[i];
    if (w <= drop_tol * mass) continue;
    const Eigen::VectorXd x = rule.nodes.col(i);
    bool merged = false;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if ((pts[j] - x).norm() <= merge_tol) {
        const double total = ws[j] + w;
        pts[j] = (ws[j] * pts[j] + w * x) / total;
        if (has_t) ts[j] = (ws[j] * ts[j] + w * rule.parameter_values[static_cast<std::size_t>(i)]) / total;
        ws[j] = total;
        merged = true;
        break;
      }
    }
    if (!merged) {
      pts.push_back(x);
      ws.push_back(w);
      if (has_t) ts.push_back(rule.parameter_values[static_cast<std::size_t>(i)]);
    }
  }
  QuadratureRule out;
  out.strength = rule.strength;
  out.provenance = rule.provenance;
  out.nodes.resize(rule.dim(), static_cast<Eigen::Index>(pts.size()));
  out.weights.resize(static_cast<Eigen::Index>(ws.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    out.nodes.col(static_cast<Eigen::Index>(j)) = pts[j];
    out.weights[static_cast<Eigen::Index>(j)] = ws[j];
  }
  out.parameter_values = std::move(ts);
  return out;
}

}  // namespace curvequad
