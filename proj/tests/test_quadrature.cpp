#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gls/montecarlo.hpp"
#include "gls/quadrature.hpp"

using namespace gls;

namespace {
constexpr double pi = std::numbers::pi;
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("tanh-sinh on smooth and endpoint-singular integrands") {
  const QuadResult e = tanh_sinh([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(rel(e.value, std::exp(1.0) - 1.0) <= 1e-13);
  CHECK(e.abs_error <= 1e-9 * e.value);
  const QuadResult s = tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(rel(s.value, 2.0) <= 1e-10);
  const QuadResult l = tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0);
  CHECK(rel(l.value, -1.0) <= 1e-10);
  const QuadResult c = tanh_sinh([](double x) { return std::sqrt(1.0 - x * x); }, -1.0, 1.0);
  CHECK(rel(c.value, pi / 2.0) <= 1e-12);
  // Algebraic singularity x^(-0.9): integral 10.
  const QuadResult h = tanh_sinh([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0);
  CHECK(rel(h.value, 10.0) <= 1e-8);
}

TEST_CASE("tanh-sinh on a tiny interval far from the origin") {
  const double a = 1e6, b = 1e6 + 1e-6;
  const QuadResult r = tanh_sinh([](double x) { return x; }, a, b);
  CHECK(rel(r.value, 0.5 * (b - a) * (b + a)) <= 1e-12);
}

TEST_CASE("nested integral over the unit disk") {
  NestedProblem prob;
  prob.dim = 2;
  prob.power = {1.0};
  prob.leaf = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  prob.slice = [](int k, std::span<const double> x, double& lo, double& hi, std::vector<double>&) {
    if (k == 1) {
      lo = -1.0;
      hi = 1.0;
      return true;
    }
    const double h = std::sqrt(std::max(0.0, 1.0 - x[1] * x[1]));
    lo = -h;
    hi = h;
    return h > 0.0;
  };
  const QuadResult r = integrate_nested(prob);
  CHECK(rel(r.value, pi / 2.0) <= 1e-9);
}

TEST_CASE("nested integral with powers between levels") {
  // int_0^1 ( int_0^1 (x0 + x1) dx0 )^2 dx1 = int_0^1 (1/2 + x1)^2 dx1 = 13/12.
  NestedProblem prob;
  prob.dim = 2;
  prob.power = {2.0};
  prob.leaf = [](std::span<const double> x) { return x[0] + x[1]; };
  prob.slice = [](int, std::span<const double>, double& lo, double& hi, std::vector<double>&) {
    lo = 0.0;
    hi = 1.0;
    return true;
  };
  CHECK(rel(integrate_nested(prob).value, 13.0 / 12.0) <= 1e-12);
  prob.level0 = [](double lo, double hi, std::span<const double> x) {
    return 0.5 * (hi * hi - lo * lo) + x[1] * (hi - lo);
  };
  CHECK(rel(integrate_nested(prob).value, 13.0 / 12.0) <= 1e-12);
}

TEST_CASE("seeded generator") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(a.next() != c.next());
}

TEST_CASE("split budget") {
  const auto b = split_budget(1'000'000, 2);
  REQUIRE(b.size() == 2);
  CHECK(b[0] >= 2);
  CHECK(b[0] * b[1] <= 1'000'000);
  CHECK(b[0] * b[1] >= 900'000);
  CHECK(split_budget(1000, 1) == std::vector<long>{1000});
}

TEST_CASE("nested Monte Carlo: plain mean and standard error") {
  NestedMcProblem prob;
  prob.dim = 1;
  prob.inner = [](std::span<const double> x) { return x[0] * x[0]; };
  prob.groups = {McGroup{0, 1, 1.0, 200'000, false}};
  prob.lo = {0.0};
  prob.hi = {1.0};
  Rng rng(9);
  const McResult r = integrate_nested_mc(prob, rng);
  CHECK(std::abs(r.value - 1.0 / 3.0) <= 4.0 * r.std_error);
  // sigma of x^2 on [0,1] is sqrt(4/45).
  CHECK(rel(r.std_error, std::sqrt(4.0 / 45.0 / 200'000.0)) <= 0.05);
}
