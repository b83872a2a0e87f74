#pragma once

#include "negmono/qstate.hpp"

#include <cstdint>
#include <vector>

namespace negmono {

struct Bipartition;

enum class RoofDirection { Min, Max };

/// Search settings for optimizing a roof functional over pure-state decompositions.
struct RoofConfig {
  int cardinality = 0;  // decomposition size m; 0 selects min(rank², 16), raised to rank if needed
  int restarts = 32;
  int max_iters = 20000;  // sweeps per restart
  double step_tolerance = 1e-7;
  std::uint64_t seed = 0;
  RoofDirection direction = RoofDirection::Min;

  /// Throws std::invalid_argument on non-positive restarts, tolerances or iteration budgets.
  void validate() const;
};

struct Decomposition {
  std::vector<double> weights;
  std::vector<PureState> states;
};

struct RoofResult {
  double value = 0.0;  // mean pure-state negativity at the optimum, not squared
  std::vector<double> weights;
  std::vector<PureState> states;
  double restart_spread = 0.0;
  std::vector<double> restart_values;
  int cardinality = 0;
  int rank = 0;
};

/// Eigenvalues above this are counted toward the rank of a density matrix.
inline constexpr double kRankCutoff = 1e-12;

/// Eigenpairs of ρ with eigenvalue above kRankCutoff, largest first.
struct Spectrum {
  Eigen::VectorXd values;
  Matrix vectors;  // columns
};
Spectrum support_spectrum(const DensityMatrix& rho);

/// Decomposition ṽ_k = Σ_j V_kj √q_j |φ_j⟩ induced by an m×r isometry V acting on the eigenbasis of ρ.
/// Throws std::invalid_argument if V has the wrong column count or V†V ≠ I within 1e-10.
Decomposition decomposition_from_isometry(const DensityMatrix& rho, const Matrix& isometry);

/// Best mean negativity Σ p_k N(ψ_k) over decompositions, by derivative-free local search on the
/// isometry with seeded random restarts.
RoofResult optimize_roof(const DensityMatrix& rho, const Bipartition& cut, const RoofConfig& config);

/// Decomposition size used for a state of the given rank.
int effective_cardinality(const RoofConfig& config, int rank);

}  // namespace negmono
