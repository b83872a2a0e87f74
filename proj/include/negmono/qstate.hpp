#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

namespace negmono {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Local Hilbert-space dimensions of a multipartite system, subsystem 0 leftmost.
class Dims {
public:
  Dims() = default;
  explicit Dims(std::vector<int> factors);
  Dims(std::initializer_list<int> factors) : Dims(std::vector<int>(factors)) {}

  const std::vector<int>& factors() const noexcept { return factors_; }
  int count() const noexcept { return static_cast<int>(factors_.size()); }
  int operator[](int i) const { return factors_.at(static_cast<std::size_t>(i)); }
  /// Product of all factors.
  int total() const noexcept { return total_; }

  /// Dims of the listed subsystems, in the order given.
  Dims select(std::span<const int> subsystems) const;
  Dims concat(const Dims& other) const;

  friend bool operator==(const Dims& a, const Dims& b) { return a.factors_ == b.factors_; }

private:
  std::vector<int> factors_;
  int total_ = 1;
};

/// Normalized pure state over a tensor product, row-major amplitude layout.
class PureState {
public:
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  const Dims& dims() const noexcept { return dims_; }
  int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }

  /// Wraps an amplitude vector whose norm is already 1 (checked to 1e-12).
  static PureState from_normalized(Vector amplitudes, Dims dims);

private:
  PureState(Vector amplitudes, Dims dims) : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {}
  friend PureState ket(const Vector&, const Dims&);

  Vector amplitudes_;
  Dims dims_;
};

/// Hermitian, unit-trace, positive semidefinite matrix with factor dimensions.
class DensityMatrix {
public:
  /// Validates and symmetrizes. Throws std::invalid_argument on any violated invariant.
  DensityMatrix(Matrix matrix, Dims dims);

  const Matrix& matrix() const noexcept { return matrix_; }
  const Dims& dims() const noexcept { return dims_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

private:
  Matrix matrix_;
  Dims dims_;
};

struct SchmidtForm {
  Eigen::VectorXd coefficients;  // non-increasing
  std::vector<Vector> left_basis;
  std::vector<Vector> right_basis;
  std::vector<int> left;   // subsystems on the left, ascending
  std::vector<int> right;  // complement, ascending
  Dims dims;               // dims of the decomposed state
};

/// Row/column index of every flat amplitude index when the factors in `rows`
/// are grouped as the matrix row and the remaining factors as the column.
/// Both groups keep their original relative order.
struct BipartiteLayout {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_of;
  std::vector<int> col_of;
};

BipartiteLayout bipartite_layout(const Dims& dims, std::span<const int> rows);

/// Sorted copy of an index set; throws std::invalid_argument on out-of-range or repeated entries.
std::vector<int> checked_subsystems(const Dims& dims, std::span<const int> subsystems);
std::vector<int> complement(const Dims& dims, std::span<const int> subsystems);

PureState ket(const Vector& amplitudes, const Dims& dims);
PureState ket(std::span<const cplx> amplitudes, const Dims& dims);
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix density(const PureState& psi);

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
Matrix partial_transpose(const DensityMatrix& rho, std::span<const int> subsystems);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const Matrix& m);
double purity(const DensityMatrix& rho);

/// Eigenvalues (ascending) of a Hermitian matrix; symmetrizes small asymmetry and
/// throws std::invalid_argument beyond kHermitianTolerance.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);
Matrix hermitian_part(const Matrix& m);

SchmidtForm schmidt(const PureState& psi, std::span<const int> left);
/// Rebuilds Σ c_i |l_i⟩⊗|r_i⟩ in the original factor order.
Vector reconstruct(const SchmidtForm& form);

/// Mixes a base seed with a stream index (sample, restart, shard) into an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

PureState haar_random_pure(const Dims& dims, std::uint64_t seed);
Vector gaussian_vector(int n, std::mt19937_64& rng);
/// m×r matrix with orthonormal columns drawn from the Haar measure.
Matrix haar_random_isometry(int rows, int cols, std::mt19937_64& rng);
/// Reduced state of a Haar pure state on `dims` ⊗ C^env (induced measure).
DensityMatrix random_mixed_state(const Dims& dims, int env_dim, std::uint64_t seed);

/// Re-orthonormalizes the columns of `v` in place by Householder QR, keeping column phases.
void orthonormalize_columns(Matrix& v);

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

struct LoadedState {
  PureState state;
  double normalization;  // factor applied to the stored amplitudes
};

/// `{"dims":[...], "amplitudes":[[re,im],...]}`
LoadedState parse_state_json(const std::string& text);
LoadedState read_state_file(const std::filesystem::path& path);
std::string state_to_json(const PureState& psi);

}  // namespace negmono
