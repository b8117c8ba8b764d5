#pragma once

#include <string>
#include <vector>

namespace pdcheb {

enum class KernelKind { gaussian, tabulated };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

/// Even micromodulus C(xi) with horizon delta. Immutable; beta = int C is
/// computed once at construction.
///
/// The gaussian kind is C(xi) = exp(-xi^2). The tabulated kind holds samples
/// of C(r) for r in [0, extent] taken at the points returned by
/// `tabulation_points` and interpolates them with a Chebyshev series in r;
/// it vanishes for |xi| > extent. With `truncate` set, C is zero for |xi| > delta.
class Micromodulus {
 public:
  static Micromodulus gaussian(double horizon, bool truncate);
  static Micromodulus tabulated(double horizon, double extent, std::vector<double> samples,
                                bool truncate);

  /// Radii r_k in [0, extent] at which tabulated samples must be given.
  static std::vector<double> tabulation_points(double extent, int degree);

  double operator()(double xi) const;

  KernelKind kind() const { return kind_; }
  double horizon() const { return horizon_; }
  bool truncated() const { return truncate_; }
  double beta() const { return beta_; }
  double extent() const { return extent_; }
  const std::vector<double>& samples() const { return samples_; }

  /// Largest |xi| with C(xi) possibly nonzero (infinity for untruncated gaussian).
  double support_radius() const;

 private:
  Micromodulus(KernelKind kind, double horizon, bool truncate);

  KernelKind kind_;
  double horizon_;
  bool truncate_;
  double extent_ = 0.0;
  std::vector<double> samples_;
  std::vector<double> coeffs_;
  double beta_ = 0.0;
};

double eval_micromodulus(const Micromodulus& c, double xi);

/// Adaptive quadrature of C over [-delta, delta] when truncated, otherwise
/// over [-1 - delta, 1 + delta] intersected with the support.
double compute_beta(const Micromodulus& c);

}  // namespace pdcheb
