#include "negmono/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace negmono {

Bipartition Bipartition::of(const Dims& dims, std::span<const int> a_side) {
  Bipartition cut;
  cut.a_side = checked_subsystems(dims, a_side);
  if (cut.a_side.empty() || static_cast<int>(cut.a_side.size()) >= dims.count()) {
    throw std::invalid_argument("Bipartition: A side must be a nonempty proper subset of the factors");
  }
  cut.b_side = complement(dims, cut.a_side);
  return cut;
}

Bipartition Bipartition::first_vs_rest(const Dims& dims) {
  const int first = 0;
  return of(dims, std::span<const int>(&first, 1));
}

std::string_view to_string(MeasureMethod m) {
  switch (m) {
    case MeasureMethod::PureFormula: return "PureFormula";
    case MeasureMethod::TwoQubitClosedForm: return "TwoQubitClosedForm";
    case MeasureMethod::RoofOptimizer: return "RoofOptimizer";
  }
  return "?";
}

namespace {

double clamp_nonnegative(double x) {
  return (x < 0.0 && x > -kNegativeClamp) ? 0.0 : x;
}

void require_cut_matches(const Dims& dims, const Bipartition& cut) {
  if (static_cast<int>(cut.a_side.size() + cut.b_side.size()) != dims.count()) {
    throw std::invalid_argument("bipartition does not cover the state's factors");
  }
  checked_subsystems(dims, cut.a_side);
  checked_subsystems(dims, cut.b_side);
}

void require_two_qubits(const DensityMatrix& rho) {
  if (!(rho.dims() == Dims{2, 2})) {
    throw std::invalid_argument("two-qubit closed form requires dims [2,2]");
  }
}

}  // namespace

double negativity(const DensityMatrix& rho, const Bipartition& cut) {
  require_cut_matches(rho.dims(), cut);
  return clamp_nonnegative(trace_norm(partial_transpose(rho, cut.b_side)) - 1.0);
}

double pure_negativity(const PureState& psi, const Bipartition& cut) {
  require_cut_matches(psi.dims(), cut);
  const double s = schmidt(psi, cut.a_side).coefficients.sum();
  return clamp_nonnegative(s * s - 1.0);
}

double pure_tangle(const PureState& psi, const Bipartition& cut) {
  require_cut_matches(psi.dims(), cut);
  const DensityMatrix rho_a = partial_trace(density(psi), cut.a_side);
  return clamp_nonnegative(2.0 * (1.0 - purity(rho_a)));
}

double pure_scren(const PureState& psi, const Bipartition& cut) {
  const double n = pure_negativity(psi, cut);
  return n * n;
}

std::array<double, 4> spin_flip_spectrum(const DensityMatrix& rho) {
  require_two_qubits(rho);
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;

  // μ² are the eigenvalues of ρρ̃, which shares its spectrum with √ρ ρ̃ √ρ = A A† for
  // A = √ρ (Y⊗Y) √ρ*. Taking μ as singular values of A avoids square-rooting roundoff.
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  // Eigenvalues at roundoff level would leak O(√eps) into √ρ; treat them as exact zeros.
  const Eigen::VectorXd root =
      es.eigenvalues().unaryExpr([](double q) { return q > kRankCutoff ? std::sqrt(q) : 0.0; });
  const Matrix sqrt_rho = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
  const Matrix a = sqrt_rho * yy * sqrt_rho.conjugate();
  Eigen::JacobiSVD<Matrix> svd(a);

  std::array<double, 4> mu{};
  for (int i = 0; i < 4; ++i) mu[i] = svd.singularValues()[i];
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return mu;
}

double two_qubit_tangle(const DensityMatrix& rho) {
  const auto mu = spin_flip_spectrum(rho);
  const double c = std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
  return c * c;
}

double two_qubit_toa(const DensityMatrix& rho) {
  const auto mu = spin_flip_spectrum(rho);
  const double c = mu[0] + mu[1] + mu[2] + mu[3];
  return c * c;
}

namespace {

MeasureValue roof_measure(const DensityMatrix& rho, const Bipartition& cut, RoofConfig config,
                          RoofDirection direction) {
  require_cut_matches(rho.dims(), cut);
  const Spectrum spec = support_spectrum(rho);
  if (spec.values.size() == 1) {
    const PureState psi = ket(Vector(spec.vectors.col(0)), rho.dims());
    return {pure_scren(psi, cut), MeasureMethod::PureFormula, 0.0};
  }
  if (rho.dims() == Dims{2, 2}) {
    const double v = direction == RoofDirection::Min ? two_qubit_tangle(rho) : two_qubit_toa(rho);
    return {v, MeasureMethod::TwoQubitClosedForm, 0.0};
  }
  config.direction = direction;
  const RoofResult result = optimize_roof(rho, cut, config);
  const auto [lo, hi] = std::minmax_element(result.restart_values.begin(), result.restart_values.end());
  return {result.value * result.value, MeasureMethod::RoofOptimizer, (*hi) * (*hi) - (*lo) * (*lo)};
}

}  // namespace

MeasureValue scren(const DensityMatrix& rho, const Bipartition& cut, const RoofConfig& config) {
  return roof_measure(rho, cut, config, RoofDirection::Min);
}

MeasureValue screnoa(const DensityMatrix& rho, const Bipartition& cut, const RoofConfig& config) {
  return roof_measure(rho, cut, config, RoofDirection::Max);
}

}  // namespace negmono
