#include "curvequad/scenarios.hpp"

#include <random>

namespace curvequad::scenarios {

RationalCurve twisted_cubic() { return RationalCurve::monomial({1, 2, 3}); }

RationalCurve inverse_curve() {
  return RationalCurve(Polynomial({0.0, 1.0}), {Polynomial({1.0}), Polynomial({0.0, 0.0, 1.0})});
}

PlaneCurve unit_circle() {
  PlaneCurve c;
  c.F.add_term(MultiIndex({2, 0}), 1.0);
  c.F.add_term(MultiIndex({0, 2}), 1.0);
  c.F.add_term(MultiIndex({0, 0}), -1.0);
  return c;
}

PlaneCurve parabola() {
  PlaneCurve c;
  c.F.add_term(MultiIndex({0, 1}), 1.0);
  c.F.add_term(MultiIndex({2, 0}), -1.0);
  return c;
}

MomentVector circle_uniform_moments(int max_degree) {
  auto dfact = [](int n) {
    double r = 1.0;
    for (int k = n; k > 1; k -= 2) r *= k;
    return r;
  };
  MomentVector m(2, max_degree);
  for (const auto& a : m.basis()) {
    const int p = a[0], q = a[1];
    m.at(a) = (p % 2 == 0 && q % 2 == 0) ? dfact(p - 1) * dfact(q - 1) / dfact(p + q) : 0.0;
  }
  return m;
}

MeasureSpec random_line_atoms(std::uint64_t seed, int count, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(lo, hi), wt(0.5, 1.5);
  std::vector<double> t, w;
  for (int i = 0; i < count; ++i) {
    t.push_back(pos(rng));
    w.push_back(wt(rng));
  }
  return MeasureSpec::from_parameter_atoms(t, w);
}

MeasureSpec random_parabola_atoms(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-1.0, 1.0), wt(0.5, 1.5);
  std::vector<Atom> atoms;
  for (int i = 0; i < count; ++i) {
    const double x = pos(rng);
    atoms.push_back({{x, x * x}, wt(rng)});
  }
  return MeasureSpec::from_atoms(std::move(atoms));
}

}  // namespace curvequad::scenarios
