#include "negmono/qstate.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace negmono {

Dims::Dims(std::vector<int> factors) : factors_(std::move(factors)) {
  for (int f : factors_) {
    if (f < 2) {
      throw std::invalid_argument("Dims: every factor must be >= 2, got " + std::to_string(f));
    }
    total_ *= f;
  }
}

Dims Dims::select(std::span<const int> subsystems) const {
  std::vector<int> out;
  out.reserve(subsystems.size());
  for (int s : subsystems) {
    out.push_back((*this)[s]);
  }
  return Dims(std::move(out));
}

Dims Dims::concat(const Dims& other) const {
  std::vector<int> out = factors_;
  out.insert(out.end(), other.factors_.begin(), other.factors_.end());
  return Dims(std::move(out));
}

std::vector<int> checked_subsystems(const Dims& dims, std::span<const int> subsystems) {
  std::vector<int> out(subsystems.begin(), subsystems.end());
  std::sort(out.begin(), out.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0 || out[i] >= dims.count()) {
      throw std::invalid_argument("subsystem index " + std::to_string(out[i]) + " out of range for " +
                                  std::to_string(dims.count()) + " factors");
    }
    if (i > 0 && out[i] == out[i - 1]) {
      throw std::invalid_argument("subsystem index " + std::to_string(out[i]) + " repeated");
    }
  }
  return out;
}

std::vector<int> complement(const Dims& dims, std::span<const int> subsystems) {
  const auto sorted = checked_subsystems(dims, subsystems);
  std::vector<int> out;
  for (int s = 0; s < dims.count(); ++s) {
    if (!std::binary_search(sorted.begin(), sorted.end(), s)) {
      out.push_back(s);
    }
  }
  return out;
}

namespace {

// Digit of every subsystem for a flat index, row-major with subsystem 0 leftmost.
std::vector<int> strides_of(const Dims& dims) {
  std::vector<int> strides(static_cast<std::size_t>(dims.count()), 1);
  for (int s = dims.count() - 2; s >= 0; --s) {
    strides[s] = strides[s + 1] * dims[s + 1];
  }
  return strides;
}

double max_asymmetry(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

BipartiteLayout bipartite_layout(const Dims& dims, std::span<const int> rows) {
  const auto row_set = checked_subsystems(dims, rows);
  const auto col_set = complement(dims, row_set);
  const auto strides = strides_of(dims);

  BipartiteLayout layout;
  layout.rows = 1;
  for (int s : row_set) layout.rows *= dims[s];
  layout.cols = dims.total() / layout.rows;
  layout.row_of.resize(static_cast<std::size_t>(dims.total()));
  layout.col_of.resize(static_cast<std::size_t>(dims.total()));

  for (int flat = 0; flat < dims.total(); ++flat) {
    int r = 0;
    for (int s : row_set) r = r * dims[s] + (flat / strides[s]) % dims[s];
    int c = 0;
    for (int s : col_set) c = c * dims[s] + (flat / strides[s]) % dims[s];
    layout.row_of[flat] = r;
    layout.col_of[flat] = c;
  }
  return layout;
}

PureState PureState::from_normalized(Vector amplitudes, Dims dims) {
  if (amplitudes.size() != dims.total()) {
    throw std::invalid_argument("PureState: amplitude count does not match dims");
  }
  if (std::abs(amplitudes.norm() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("PureState: amplitudes are not normalized");
  }
  return ket(amplitudes, dims);
}

PureState ket(const Vector& amplitudes, const Dims& dims) {
  if (amplitudes.size() != dims.total()) {
    throw std::invalid_argument("ket: " + std::to_string(amplitudes.size()) + " amplitudes for ambient dimension " +
                                std::to_string(dims.total()));
  }
  const double norm = amplitudes.norm();
  if (norm == 0.0 || !std::isfinite(norm)) {
    throw std::invalid_argument("ket: amplitude vector has zero or non-finite norm");
  }
  return PureState(amplitudes / norm, dims);
}

PureState ket(std::span<const cplx> amplitudes, const Dims& dims) {
  Vector v(static_cast<Eigen::Index>(amplitudes.size()));
  for (std::size_t i = 0; i < amplitudes.size(); ++i) v[static_cast<Eigen::Index>(i)] = amplitudes[i];
  return ket(v, dims);
}

PureState tensor(const PureState& a, const PureState& b) {
  Vector out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a.amplitudes()[i] * b.amplitudes();
  }
  return ket(out, a.dims().concat(b.dims()));
}

DensityMatrix::DensityMatrix(Matrix matrix, Dims dims) : dims_(std::move(dims)) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != dims_.total()) {
    throw std::invalid_argument("DensityMatrix: shape does not match dims");
  }
  if (max_asymmetry(matrix) > kHermitianTolerance) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  }
  matrix_ = hermitian_part(matrix);
  if (std::abs(matrix_.trace().real() - 1.0) > kTraceTolerance) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTolerance) {
    throw std::invalid_argument("DensityMatrix: matrix has a negative eigenvalue");
  }
}

DensityMatrix density(const PureState& psi) {
  const Vector& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint(), psi.dims());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: keep set is empty");
  }
  const auto layout = bipartite_layout(rho.dims(), keep);
  const auto kept = checked_subsystems(rho.dims(), keep);
  const int n = rho.dim();
  const Matrix& m = rho.matrix();

  Matrix out = Matrix::Zero(layout.rows, layout.rows);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (layout.col_of[i] == layout.col_of[j]) {
        out(layout.row_of[i], layout.row_of[j]) += m(i, j);
      }
    }
  }
  return DensityMatrix(std::move(out), rho.dims().select(kept));
}

Matrix partial_transpose(const DensityMatrix& rho, std::span<const int> subsystems) {
  const auto selected = checked_subsystems(rho.dims(), subsystems);
  const auto strides = strides_of(rho.dims());
  const int n = rho.dim();

  std::vector<int> sel(static_cast<std::size_t>(n), 0);
  for (int flat = 0; flat < n; ++flat) {
    for (int s : selected) sel[flat] += ((flat / strides[s]) % rho.dims()[s]) * strides[s];
  }

  const Matrix& m = rho.matrix();
  Matrix out(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out(i - sel[i] + sel[j], j - sel[j] + sel[i]) = m(i, j);
    }
  }
  return out;
}

Matrix hermitian_part(const Matrix& m) {
  return (m + m.adjoint()) * 0.5;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not square");
  }
  if (m.size() == 0) return Eigen::VectorXd();
  if (max_asymmetry(m) > kHermitianTolerance) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double trace_norm(const Matrix& m) {
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

double purity(const DensityMatrix& rho) {
  // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
  return rho.matrix().squaredNorm();
}

SchmidtForm schmidt(const PureState& psi, std::span<const int> left) {
  if (left.empty() || static_cast<int>(left.size()) >= psi.dims().count()) {
    throw std::invalid_argument("schmidt: bipartition must leave both sides nonempty");
  }
  SchmidtForm form;
  form.dims = psi.dims();
  form.left = checked_subsystems(psi.dims(), left);
  form.right = complement(psi.dims(), form.left);

  const auto layout = bipartite_layout(psi.dims(), form.left);
  Matrix m(layout.rows, layout.cols);
  for (int i = 0; i < psi.dim(); ++i) m(layout.row_of[i], layout.col_of[i]) = psi.amplitudes()[i];

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  form.coefficients = svd.singularValues();
  for (Eigen::Index k = 0; k < form.coefficients.size(); ++k) {
    form.left_basis.emplace_back(svd.matrixU().col(k));
    form.right_basis.emplace_back(svd.matrixV().col(k).conjugate());
  }
  return form;
}

Vector reconstruct(const SchmidtForm& form) {
  const auto layout = bipartite_layout(form.dims, form.left);
  Vector out = Vector::Zero(form.dims.total());
  for (int i = 0; i < form.dims.total(); ++i) {
    for (Eigen::Index k = 0; k < form.coefficients.size(); ++k) {
      out[i] += form.coefficients[k] * form.left_basis[k][layout.row_of[i]] * form.right_basis[k][layout.col_of[i]];
    }
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector gaussian_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = cplx(re, im);
  }
  return v;
}

PureState haar_random_pure(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return ket(gaussian_vector(dims.total(), rng), dims);
}

void orthonormalize_columns(Matrix& v) {
  Eigen::HouseholderQR<Matrix> qr(v);
  Matrix q = qr.householderQ() * Matrix::Identity(v.rows(), v.cols());
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  v = std::move(q);
}

Matrix haar_random_isometry(int rows, int cols, std::mt19937_64& rng) {
  if (cols > rows) {
    throw std::invalid_argument("haar_random_isometry: more columns than rows");
  }
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) g.col(j) = gaussian_vector(rows, rng);
  orthonormalize_columns(g);
  return g;
}

DensityMatrix random_mixed_state(const Dims& dims, int env_dim, std::uint64_t seed) {
  if (env_dim < 1) throw std::invalid_argument("random_mixed_state: environment dimension must be >= 1");
  if (env_dim == 1) return density(haar_random_pure(dims, seed));
  const Dims full = dims.concat(Dims({env_dim}));
  const PureState psi = haar_random_pure(full, seed);
  std::vector<int> keep(static_cast<std::size_t>(dims.count()));
  std::iota(keep.begin(), keep.end(), 0);
  return partial_trace(density(psi), keep);
}

LoadedState parse_state_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.contains("dims") || !j.contains("amplitudes")) {
    throw std::invalid_argument("state json: expected keys \"dims\" and \"amplitudes\"");
  }
  const Dims dims(j.at("dims").get<std::vector<int>>());
  const auto& amps = j.at("amplitudes");
  if (!amps.is_array()) {
    throw std::invalid_argument("state json: \"amplitudes\" must be an array");
  }
  Vector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const auto& a = amps[i];
    if (a.is_number()) {
      v[static_cast<Eigen::Index>(i)] = cplx(a.get<double>(), 0.0);
    } else if (a.is_array() && a.size() == 2) {
      v[static_cast<Eigen::Index>(i)] = cplx(a[0].get<double>(), a[1].get<double>());
    } else {
      throw std::invalid_argument("state json: amplitude " + std::to_string(i) + " must be [re, im]");
    }
  }
  const double norm = v.norm();
  PureState psi = ket(v, dims);
  return LoadedState{std::move(psi), 1.0 / norm};
}

LoadedState read_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open state file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_state_json(buffer.str());
}

std::string state_to_json(const PureState& psi) {
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  std::string out = "{\"dims\":[";
  for (int i = 0; i < psi.dims().count(); ++i) {
    if (i) out += ',';
    out += std::to_string(psi.dims()[i]);
  }
  out += "],\"amplitudes\":[";
  for (int i = 0; i < psi.dim(); ++i) {
    if (i) out += ',';
    out += '[' + num(psi.amplitudes()[i].real()) + ',' + num(psi.amplitudes()[i].imag()) + ']';
  }
  out += "]}";
  return out;
}

}  // namespace negmono
