// Serial reference against the OpenMP kernels on random nodes.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "curvequad/kernels.hpp"

namespace {

using namespace curvequad;
namespace K = curvequad::kernels;

constexpr int kDegree = 8;

Eigen::MatrixXd random_nodes(int dim, int n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd x(dim, n);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  return x;
}

const RationalCurve& twisted_cubic() {
  static const RationalCurve c = RationalCurve::monomial({1, 2, 3});
  return c;
}

template <auto Fn>
void monomial_matrix(benchmark::State& state) {
  const MonomialBasis basis(3, kDegree);
  const Eigen::MatrixXd x = random_nodes(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(basis, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void curve_monomial_matrix(benchmark::State& state) {
  const MonomialBasis basis(3, kDegree);
  const Eigen::MatrixXd x = random_nodes(1, static_cast<int>(state.range(0)));
  const std::span<const double> t(x.data(), static_cast<std::size_t>(x.size()));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(basis, twisted_cubic(), t));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void accumulate(benchmark::State& state) {
  const MonomialBasis basis(3, kDegree);
  const auto n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd A = K::serial::monomial_matrix(basis, random_nodes(3, n));
  const Eigen::VectorXd w = random_nodes(1, n).row(0).transpose().cwiseAbs();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(A, w));
  state.SetItemsProcessed(state.iterations() * n);
}

#define CURVEQUAD_SIZES RangeMultiplier(8)->Range(64, 32768)

BENCHMARK(monomial_matrix<K::serial::monomial_matrix>)->Name("monomial_matrix/serial")->CURVEQUAD_SIZES;
BENCHMARK(monomial_matrix<K::omp::monomial_matrix>)->Name("monomial_matrix/omp")->CURVEQUAD_SIZES;
BENCHMARK(curve_monomial_matrix<K::serial::curve_monomial_matrix>)->Name("curve_monomial_matrix/serial")->CURVEQUAD_SIZES;
BENCHMARK(curve_monomial_matrix<K::omp::curve_monomial_matrix>)->Name("curve_monomial_matrix/omp")->CURVEQUAD_SIZES;
BENCHMARK(accumulate<K::serial::accumulate>)->Name("accumulate/serial")->CURVEQUAD_SIZES;
BENCHMARK(accumulate<K::omp::accumulate>)->Name("accumulate/omp")->CURVEQUAD_SIZES;

}  // namespace

BENCHMARK_MAIN();
