#pragma once

#include "negmono/qstate.hpp"
#include "negmono/roof.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace negmono {

/// An A|B cut of a multipartite system. `b_side` is always the complement of `a_side`.
struct Bipartition {
  std::vector<int> a_side;
  std::vector<int> b_side;

  /// Throws std::invalid_argument unless `a_side` is a nonempty proper subset of the factors.
  static Bipartition of(const Dims& dims, std::span<const int> a_side);
  /// Factor 0 against everything else.
  static Bipartition first_vs_rest(const Dims& dims);
};

enum class MeasureMethod { PureFormula, TwoQubitClosedForm, RoofOptimizer };
std::string_view to_string(MeasureMethod m);

struct MeasureValue {
  double value = 0.0;
  MeasureMethod method = MeasureMethod::PureFormula;
  double certified_gap = 0.0;
};

/// ‖ρ^{T_B}‖₁ − 1, with roundoff negatives above -1e-12 reported as 0.
double negativity(const DensityMatrix& rho, const Bipartition& cut);

/// Pure-state negativity from the Schmidt coefficients: (Σ s_i)² − 1.
double pure_negativity(const PureState& psi, const Bipartition& cut);

/// 2(1 − tr ρ_A²).
double pure_tangle(const PureState& psi, const Bipartition& cut);

/// Squared negativity of a pure state; its own convex and concave roof.
double pure_scren(const PureState& psi, const Bipartition& cut);

/// Square roots of the eigenvalues of ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y), descending.
std::array<double, 4> spin_flip_spectrum(const DensityMatrix& rho);

/// Squared Wootters concurrence of a two-qubit state.
double two_qubit_tangle(const DensityMatrix& rho);
/// Squared concurrence of assistance, (Σ μ_i)².
double two_qubit_toa(const DensityMatrix& rho);

/// Squared convex-roof extended negativity.
MeasureValue scren(const DensityMatrix& rho, const Bipartition& cut, const RoofConfig& config = {});
/// Squared convex-roof extended negativity of assistance.
MeasureValue screnoa(const DensityMatrix& rho, const Bipartition& cut, const RoofConfig& config = {});

inline constexpr double kNegativeClamp = 1e-12;

}  // namespace negmono
