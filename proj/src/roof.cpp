#include "negmono/roof.hpp"

#include "negativity_kernel.hpp"
#include "negmono/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace negmono {

namespace detail {

NegativityKernel::NegativityKernel(const Dims& dims, std::span<const int> a_side) {
  const auto layout = bipartite_layout(dims, a_side);
  const bool transpose = layout.rows > layout.cols;
  small_ = transpose ? layout.cols : layout.rows;
  large_ = transpose ? layout.rows : layout.cols;
  flat_.assign(static_cast<std::size_t>(dims.total()), 0);
  for (int i = 0; i < dims.total(); ++i) {
    const int s = transpose ? layout.col_of[i] : layout.row_of[i];
    const int l = transpose ? layout.row_of[i] : layout.col_of[i];
    flat_[static_cast<std::size_t>(s * large_ + l)] = i;
  }
  work_.resize(small_, large_);
}

double NegativityKernel::operator()(const cplx* v) {
  if (small_ == 1) return 0.0;
  if (small_ == 2) {
    // Cauchy–Binet: det(M M†) as a sum of squared 2×2 minors, free of cancellation.
    const int* row0 = flat_.data();
    const int* row1 = flat_.data() + large_;
    double det = 0.0;
    for (int c = 0; c < large_; ++c) {
      const cplx a0 = v[row0[c]];
      const cplx b0 = v[row1[c]];
      for (int d = c + 1; d < large_; ++d) {
        det += std::norm(a0 * v[row1[d]] - v[row0[d]] * b0);
      }
    }
    if (eps_ == 0.0) return 2.0 * std::sqrt(det);
    return 2.0 * (std::sqrt(det + eps_ * eps_) - eps_);
  }
  double frob = 0.0;
  for (int s = 0; s < small_; ++s) {
    for (int l = 0; l < large_; ++l) {
      const cplx x = v[flat_[static_cast<std::size_t>(s * large_ + l)]];
      work_(s, l) = x;
      frob += std::norm(x);
    }
  }
  Eigen::JacobiSVD<Matrix> svd(work_);
  if (eps_ == 0.0) {
    const double nuclear = svd.singularValues().sum();
    return std::max(0.0, nuclear * nuclear - frob);
  }
  double sum = 0.0, squares = 0.0;
  for (double sigma : svd.singularValues()) {
    const double t = std::sqrt(sigma * sigma + eps_ * eps_) - eps_;
    sum += t;
    squares += t * t;
  }
  return std::max(0.0, sum * sum - squares);
}

}  // namespace detail

void RoofConfig::validate() const {
  if (cardinality < 0) throw std::invalid_argument("RoofConfig: cardinality must be >= 0");
  if (restarts < 1) throw std::invalid_argument("RoofConfig: restarts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("RoofConfig: max_iters must be >= 1");
  if (!(step_tolerance > 0.0)) throw std::invalid_argument("RoofConfig: step_tolerance must be > 0");
}

int effective_cardinality(const RoofConfig& config, int rank) {
  if (config.cardinality == 0) {
    return std::max(rank, std::min(rank * rank, 16));
  }
  if (config.cardinality < rank) {
    throw std::invalid_argument("RoofConfig: cardinality " + std::to_string(config.cardinality) +
                                " is below the rank " + std::to_string(rank));
  }
  return config.cardinality;
}

Spectrum support_spectrum(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const Eigen::VectorXd& q = es.eigenvalues();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = q.size() - 1; j >= 0; --j) {
    if (q[j] > kRankCutoff) kept.push_back(j);
  }
  Spectrum out;
  out.values.resize(static_cast<Eigen::Index>(kept.size()));
  out.vectors.resize(rho.dim(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    out.values[static_cast<Eigen::Index>(k)] = q[kept[k]];
    out.vectors.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(kept[k]);
  }
  return out;
}

namespace {

// Columns are the unnormalized decomposition vectors: W = Φ diag(√q) Vᵀ, D×m.
Matrix weighted_basis(const Spectrum& spec) {
  return spec.vectors * spec.values.cwiseSqrt().asDiagonal();
}

Decomposition split_columns(const Matrix& w, const Dims& dims) {
  Decomposition out;
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    const double p = w.col(k).squaredNorm();
    if (p == 0.0) continue;
    out.weights.push_back(p);
    out.states.push_back(ket(Vector(w.col(k)), dims));
  }
  return out;
}

struct Generator {
  int i;
  int j;
  bool imaginary;
};

// Rotates columns i and j of `m` by exp(θ G) for the generator G.
inline void rotate_pair(cplx* ci, cplx* cj, Eigen::Index n, double theta, bool imaginary) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (!imaginary) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const cplx a = ci[r];
      const cplx b = cj[r];
      ci[r] = c * a - s * b;
      cj[r] = s * a + c * b;
    }
  } else {
    const cplx is(0.0, s);
    for (Eigen::Index r = 0; r < n; ++r) {
      const cplx a = ci[r];
      const cplx b = cj[r];
      ci[r] = c * a + is * b;
      cj[r] = is * a + c * b;
    }
  }
}

struct RestartOutcome {
  double value;
  Matrix isometry_t;  // r×m, transpose of V
};

RestartOutcome run_restart(const Matrix& basis, detail::NegativityKernel& kernel, int m, const RoofConfig& config,
                           std::uint64_t seed) {
  const Eigen::Index rank = basis.cols();
  const Eigen::Index dim = basis.rows();
  const double sign = config.direction == RoofDirection::Min ? 1.0 : -1.0;

  std::mt19937_64 rng(seed);
  Matrix v = haar_random_isometry(m, static_cast<int>(rank), rng);
  Matrix vt = v.transpose();   // r×m
  Matrix w = basis * vt;       // D×m
  std::vector<double> contrib(static_cast<std::size_t>(m));
  auto refresh = [&] {
    w.noalias() = basis * vt;
    for (int k = 0; k < m; ++k) contrib[k] = kernel(w.col(k).data());
  };
  refresh();

  std::vector<Generator> gens;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      gens.push_back({i, j, false});
      gens.push_back({i, j, true});
    }
  }
  std::vector<double> step(gens.size());
  Vector wi(dim), wj(dim);

  // Minimization is drawn onto the nonsmooth set where some term has Schmidt rank one, and
  // coordinate moves stall there. A short continuation in the smoothing parameter avoids that.
  std::vector<double> stages{0.0};
  if (config.direction == RoofDirection::Min) stages = {1e-2, 1e-3, 1e-4, 1e-5, 0.0};

  for (std::size_t stage = 0; stage < stages.size(); ++stage) {
    kernel.set_smoothing(stages[stage]);
    refresh();
    std::fill(step.begin(), step.end(), stage == 0 ? 0.4 : 0.05);
    for (int sweep = 0; sweep < config.max_iters; ++sweep) {
      bool active = false;
      for (std::size_t g = 0; g < gens.size(); ++g) {
        if (step[g] < config.step_tolerance) continue;
        active = true;
        const auto [i, j, imag] = gens[g];
        const double before = contrib[i] + contrib[j];
        bool accepted = false;
        for (double theta : {step[g], -step[g]}) {
          wi = w.col(i);
          wj = w.col(j);
          rotate_pair(wi.data(), wj.data(), dim, theta, imag);
          const double ci = kernel(wi.data());
          const double cj = kernel(wj.data());
          if (sign * (ci + cj - before) < 0.0) {
            w.col(i) = wi;
            w.col(j) = wj;
            contrib[i] = ci;
            contrib[j] = cj;
            rotate_pair(vt.col(i).data(), vt.col(j).data(), rank, theta, imag);
            accepted = true;
            break;
          }
        }
        step[g] = accepted ? std::min(2.0 * step[g], 1.0) : 0.5 * step[g];
      }
      // Rotations are unitary up to roundoff; restore the isometry once per sweep.
      Matrix vfix = vt.transpose();
      orthonormalize_columns(vfix);
      vt = vfix.transpose();
      refresh();
      if (!active) break;
    }
  }

  double total = 0.0;
  for (double c : contrib) total += c;
  return {std::max(0.0, total), std::move(vt)};
}

}  // namespace

Decomposition decomposition_from_isometry(const DensityMatrix& rho, const Matrix& isometry) {
  const Spectrum spec = support_spectrum(rho);
  if (isometry.cols() != spec.values.size()) {
    throw std::invalid_argument("decomposition_from_isometry: isometry has " + std::to_string(isometry.cols()) +
                                " columns but rank is " + std::to_string(spec.values.size()));
  }
  const Matrix gram = isometry.adjoint() * isometry;
  if ((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("decomposition_from_isometry: columns are not orthonormal");
  }
  return split_columns(weighted_basis(spec) * isometry.transpose(), rho.dims());
}

RoofResult optimize_roof(const DensityMatrix& rho, const Bipartition& cut, const RoofConfig& config) {
  config.validate();
  const Spectrum spec = support_spectrum(rho);
  const int rank = static_cast<int>(spec.values.size());
  const int m = effective_cardinality(config, rank);
  const Matrix basis = weighted_basis(spec);
  detail::NegativityKernel kernel(rho.dims(), cut.a_side);

  RoofResult result;
  result.rank = rank;
  result.cardinality = m;

  std::size_t best = 0;
  Matrix best_vt;
  for (int r = 0; r < config.restarts; ++r) {
    auto outcome = run_restart(basis, kernel, m, config, derive_seed(config.seed, static_cast<std::uint64_t>(r)));
    result.restart_values.push_back(outcome.value);
    const bool better = r == 0 || (config.direction == RoofDirection::Min ? outcome.value < result.restart_values[best]
                                                                          : outcome.value > result.restart_values[best]);
    if (better) {
      best = static_cast<std::size_t>(r);
      best_vt = std::move(outcome.isometry_t);
    }
  }

  const auto [lo, hi] = std::minmax_element(result.restart_values.begin(), result.restart_values.end());
  result.restart_spread = *hi - *lo;
  result.value = result.restart_values[best];
  auto decomposition = split_columns(basis * best_vt, rho.dims());
  result.weights = std::move(decomposition.weights);
  result.states = std::move(decomposition.states);
  return result;
}

}  // namespace negmono
