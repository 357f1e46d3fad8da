#pragma once

#include <json.hpp>
#include <string>

#include "curvequad/bounds.hpp"
#include "curvequad/curves.hpp"
#include "curvequad/gauss.hpp"
#include "curvequad/moments.hpp"
#include "curvequad/polynomial.hpp"
#include "curvequad/quadrature_rule.hpp"
#include "curvequad/rational_curve.hpp"
#include "curvequad/synthesis.hpp"
#include "curvequad/verify.hpp"

// JSON interchange. Keys are emitted sorted and floating values with 17
// significant digits, so identical inputs give byte-identical files.

namespace curvequad::io {

using Json = nlohmann::json;

std::string dump(const Json& j, int indent = 2);

Json read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

Json to_json(const MultivariatePolynomial& p);
/// `nvars` < 0 takes the length of the first exponent list.
MultivariatePolynomial multivariate_from_json(const Json& j, int nvars = -1);

Json to_json(const MomentVector& m);
MomentVector moments_from_json(const Json& j);

Json to_json(const MeasureSpec& m);
MeasureSpec measure_from_json(const Json& j);

Json to_json(const QuadratureRule& r);
QuadratureRule rule_from_json(const Json& j);

Json to_json(const RationalCurve& c);
Json to_json(const PlaneCurve& c);
Json to_json(const AnyCurve& c);
AnyCurve curve_from_json(const Json& j);

NLPConfig config_from_json(const Json& j);
Json to_json(const NLPConfig& c);

Json to_json(const Recurrence& r);
Json to_json(const PsiRank& p);
Json to_json(const ExponentCoverage& e);
Json to_json(const BoundReport& b);
Json to_json(const BoundTable& t);
Json to_json(const BoundCheck& b);
Json to_json(const ExactnessReport& e);
Json to_json(const DegeneracyCheck& d);
Json to_json(const KKTReport& k);
Json to_json(const SynthesisResult& s);
Json to_json(const VerificationReport& v);

/// "index,w,x0,x1,..[,t]" rows for plotting.
std::string rule_csv(const QuadratureRule& r);

}  // namespace curvequad::io
