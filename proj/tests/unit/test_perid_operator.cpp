#include "oracles/oracles.hpp"
#include "pdcheb/perid_operator.hpp"
#include "pdcheb/reference.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pdcheb;

namespace {

std::vector<double> sample(const ChebGrid& g, double (*f)(double)) {
  std::vector<double> out(g.size());
  for (int k = 0; k < g.size(); ++k) out[k] = f(g.node(k));
  return out;
}

double gauss(double x) { return std::exp(-x * x); }

bool interior(double x, double delta) { return 1.0 - std::abs(x) >= delta; }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("perid_operator") {
  TEST_CASE("convolution of trivial fields") {
    const ChebGrid g(32);
    const auto kernel = Micromodulus::gaussian(0.1, true);
    const ConvolutionOperator op(kernel, g);

    const auto zero = convolve_fast(op, Coeffs1D{std::vector<double>(33, 0.0)});
    CHECK(max_abs(zero) == 0.0);

    std::vector<double> one(33, 0.0);
    one[0] = 1.0;
    const auto fast_one = convolve_fast(op, Coeffs1D{one});
    const auto direct_one = convolve_direct(kernel, std::vector<double>(33, 1.0), g);
    for (int k = 0; k < g.size(); ++k) {
      CHECK(std::abs(fast_one[k] - op.mass()[k]) < 1e-15);
      if (!interior(g.node(k), 0.1)) continue;
      CHECK(std::abs(fast_one[k] - kernel.beta()) < 1e-12);
      CHECK(std::abs(direct_one[k] - kernel.beta()) < 1e-10);
    }

    const auto none = Micromodulus::tabulated(0.1, 0.1, std::vector<double>(4, 0.0), true);
    CHECK(max_abs(convolve_direct(none, sample(g, gauss), g)) == 0.0);

    // first moment of an even kernel vanishes
    const auto linear = convolve_direct(kernel, sample(g, [](double x) { return x; }), g);
    for (int k = 0; k < g.size(); ++k) {
      if (interior(g.node(k), 0.1)) CHECK(std::abs(linear[k] - kernel.beta() * g.node(k)) < 1e-10);
    }

    CHECK_THROWS_AS(convolve_fast(op, Coeffs1D{std::vector<double>(10, 0.0)}), std::invalid_argument);
  }

  TEST_CASE("fast and direct modes agree on a smooth field") {
    const ChebGrid g(128);
    const auto u = sample(g, gauss);
    for (bool truncate : {true, false}) {
      const auto kernel = Micromodulus::gaussian(0.1, truncate);
      const auto fast = apply_L(u, kernel, g, ConvolutionMode::fast);
      const auto direct = apply_L(u, kernel, g, ConvolutionMode::direct);
      double gap = 0.0, scale = 0.0;
      for (int k = 0; k < g.size(); ++k) {
        if (!interior(g.node(k), 0.1)) continue;
        gap = std::max(gap, std::abs(fast[k] - direct[k]));
        scale = std::max(scale, std::abs(direct[k]));
      }
      CHECK(scale > 0.0);
      CHECK(gap <= 1e-6 * scale);
    }
  }

  TEST_CASE("fast L equals the integral form at every node, boundary included") {
    const ChebGrid g(24);
    const auto u = sample(g, [](double x) { return std::sin(2.0 * x) + 0.3 * x * x; });
    const Coeffs1D coeffs = forward_1d(u, g);
    auto interpolant = [&](double y) { return oracle::series(coeffs.values, y); };
    for (bool truncate : {true, false}) {
      const auto kernel = Micromodulus::gaussian(0.2, truncate);
      const auto fast = apply_L(u, kernel, g, ConvolutionMode::fast);
      const double radius = truncate ? 0.2 : 10.0;
      for (int k = 0; k < g.size(); ++k) {
        const double expected =
            oracle::peridynamic_L([&](double xi) { return kernel(xi); }, radius, interpolant, g.node(k));
        CHECK(std::abs(fast[k] - expected) < 1e-12);
      }
    }
  }

  TEST_CASE("equilibrium: constants are annihilated") {
    for (int n : {2, 8, 33, 128, 256}) {
      const ChebGrid g(n);
      for (bool truncate : {true, false}) {
        const PeridynamicOperator op(Micromodulus::gaussian(0.1, truncate), g);
        for (double c : {-2.0, -1.0, 0.5, 1.0, 2.0}) CHECK(max_abs(op.apply(std::vector<double>(g.size(), c))) <= 1e-10);
      }
    }
    const ChebGrid g(32);
    const auto kernel = Micromodulus::gaussian(0.1, true);
    for (double c : {-2.0, 2.0}) {
      CHECK(max_abs(apply_L(std::vector<double>(33, c), kernel, g, ConvolutionMode::direct)) <= 1e-10);
    }
    CHECK(max_abs(apply_L(std::vector<double>(33, 0.0), kernel, g, ConvolutionMode::fast)) == 0.0);
  }

  TEST_CASE("property: cubic homogeneity and oddness") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const ChebGrid g(40);
    const PeridynamicOperator op(Micromodulus::gaussian(0.15, false), g);
    for (int trial = 0; trial < 20; ++trial) {
      const double a = coef(rng), b = coef(rng), c = coef(rng);
      std::vector<double> u(g.size());
      for (int k = 0; k < g.size(); ++k) u[k] = a + b * g.node(k) + c * std::cos(3.0 * g.node(k));
      const auto base = op.apply(u);
      const double scale = std::max(1e-300, max_abs(base));
      for (double s : {2.0, -1.0, 0.5}) {
        std::vector<double> su(u);
        for (double& v : su) v *= s;
        const auto scaled = op.apply(su);
        for (int k = 0; k < g.size(); ++k) CHECK(std::abs(scaled[k] - s * s * s * base[k]) <= 1e-9 * std::abs(s * s * s) * scale);
      }
      std::vector<double> neg(u);
      for (double& v : neg) v = -v;
      const auto flipped = op.apply(neg);
      for (int k = 0; k < g.size(); ++k) CHECK(std::abs(flipped[k] + base[k]) <= 1e-14 * scale);
    }
  }

  TEST_CASE("batched slices match the serial reference") {
    std::mt19937_64 rng(32);
    const ChebGrid g(20);
    const PeridynamicOperator op(Micromodulus::gaussian(0.1, true), g);
    const Eigen::MatrixXd u = oracle::random_matrix(21, 13, rng);
    const Eigen::MatrixXd batched = op.apply_slices(u);
    const Eigen::MatrixXd serial = reference::apply_slices_serial(op.convolution(), u);
    CHECK((batched - serial).cwiseAbs().maxCoeff() < 1e-13);
    CHECK_THROWS_AS(op.apply_slices(Eigen::MatrixXd::Zero(5, 2)), std::invalid_argument);
  }

  TEST_CASE("linearization matches finite differences") {
    std::mt19937_64 rng(33);
    const ChebGrid g(16);
    const PeridynamicOperator op(Micromodulus::gaussian(0.3, false), g);
    const Eigen::VectorXd u = oracle::random_matrix(17, 1, rng);
    const std::vector<double> uv(u.data(), u.data() + u.size());
    const Eigen::MatrixXd jac = op.linearize(uv);
    const auto base = op.apply(uv);
    for (int q = 0; q < g.size(); ++q) {
      const double h = 1e-6;
      std::vector<double> up(uv), um(uv);
      up[q] += h;
      um[q] -= h;
      const auto fp = op.apply(up), fm = op.apply(um);
      for (int p = 0; p < g.size(); ++p) CHECK(std::abs((fp[p] - fm[p]) / (2 * h) - jac(p, q)) < 1e-7);
    }
    for (int p = 0; p < g.size(); ++p) CHECK(std::abs(jac.row(p).sum()) < 1e-13);
  }
}
