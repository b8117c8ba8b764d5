#pragma once

#include "pdcheb/cheb_core.hpp"
#include "pdcheb/micromodulus.hpp"

#include <functional>
#include <variant>
#include <vector>

namespace pdcheb {

/// Affine bijection between a physical interval [lo, hi] and [-1, 1].
struct AffineMap {
  double lo = -1.0;
  double hi = 1.0;

  double scale() const { return 0.5 * (hi - lo); }
  double to_reference(double x) const { return (2.0 * x - lo - hi) / (hi - lo); }
  double from_reference(double xi) const { return lo + scale() * (xi + 1.0); }
  bool is_identity() const { return lo == -1.0 && hi == 1.0; }
};

/// Initial datum: a function of the physical coordinate, or values already
/// tabulated at the spatial Gauss-Lobatto nodes.
class InitialData {
 public:
  using Function = std::function<double(double)>;

  InitialData() : source_(Function([](double) { return 0.0; })) {}
  InitialData(Function fn) : source_(std::move(fn)) {}  // NOLINT: implicit by design of call sites
  static InitialData tabulated(std::vector<double> nodal_values);

  std::vector<double> sample(const ChebGrid& grid, const AffineMap& space) const;

 private:
  std::variant<Function, std::vector<double>> source_;
};

struct ProblemSpec {
  int n_max = 16;
  Micromodulus kernel = Micromodulus::gaussian(0.1, true);
  InitialData u0;
  InitialData v0;
  AffineMap space_map;
  AffineMap time_map;

  double horizon() const { return kernel.horizon(); }

  /// Throws std::invalid_argument when the problem is malformed.
  void validate() const;
};

}  // namespace pdcheb
