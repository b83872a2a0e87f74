#pragma once

#include "negmono/qstate.hpp"

#include <span>
#include <vector>

namespace negmono::detail {

/// Weighted pure-state negativity p·N(ψ) of an unnormalized vector ṽ = √p |ψ⟩,
/// computed as ‖M‖_*² − ‖M‖_F² where M is ṽ reshaped across the cut.
/// Homogeneous of degree 2, so it never divides by the weight.
class NegativityKernel {
public:
  NegativityKernel(const Dims& dims, std::span<const int> a_side);

  double operator()(const cplx* v);
  int dim() const noexcept { return static_cast<int>(flat_.size()); }

  /// Singular values enter as √(σ² + ε²) − ε, which rounds off the kinks where the
  /// Schmidt rank drops. ε = 0 gives the exact value.
  void set_smoothing(double eps) noexcept { eps_ = eps; }

private:
  int small_ = 0;
  int large_ = 0;
  std::vector<int> flat_;  // flat amplitude index of entry (s, l), stored at s * large_ + l
  Matrix work_;
  double eps_ = 0.0;
};

}  // namespace negmono::detail
