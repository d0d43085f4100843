#pragma once

// Dense complex linear algebra and entropy kernel.
//
// All entropies are in bits. Eigenvalues below kEigenCutoff count as exact
// zeros in entropy sums.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sdc/errors.hpp"

namespace sdc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Dims = std::vector<std::size_t>;

inline constexpr double kEigenCutoff = 1e-12;
inline constexpr double kNegativeEigenTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kEigInputTolerance = 1e-8;
inline constexpr double kProbabilityTolerance = 1e-9;
/// Largest total Hilbert-space dimension handled (two copies of a qutrit pair).
inline constexpr std::size_t kMaxDimension = 81;

inline std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

inline double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double hermitian_residual(const ComplexMatrix& a) {
  return max_abs(a - a.adjoint());
}

inline ComplexMatrix identity(std::size_t d) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexMatrix kron(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues descending.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;  // columns, matching eigenvalues

  ComplexMatrix reconstruct() const {
    Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(
        eigenvalues.data(), static_cast<Eigen::Index>(eigenvalues.size()));
    return eigenvectors * lam.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }
};

inline Spectrum hermitian_eig(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidMatrix("hermitian_eig: matrix is not square");
  if (const double r = hermitian_residual(a); r > kEigInputTolerance) {
    throw InvalidMatrix("hermitian_eig: matrix is not Hermitian (residual " + std::to_string(r) +
                        ")");
  }
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw InvalidMatrix("hermitian_eig: no convergence");

  const auto n = sym.rows();
  Spectrum s;
  s.eigenvalues.resize(static_cast<std::size_t>(n));
  s.eigenvectors.resize(n, n);
  // Eigen sorts ascending.
  for (Eigen::Index i = 0; i < n; ++i) {
    s.eigenvalues[static_cast<std::size_t>(i)] = solver.eigenvalues()(n - 1 - i);
    s.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return s;
}

/// Hermitian, unit-trace, positive semidefinite matrix over a list of subsystems.
class DensityMatrix {
 public:
  /// Validates every invariant; throws InvalidMatrix or DimensionError.
  DensityMatrix(ComplexMatrix mat, Dims dims) : mat_(std::move(mat)), dims_(std::move(dims)) {
    check_shape();
    if (!mat_.allFinite()) throw InvalidMatrix("density matrix has non-finite entries");
    if (const double r = hermitian_residual(mat_); r > kHermitianTolerance) {
      throw InvalidMatrix("density matrix is not Hermitian (residual " + std::to_string(r) + ")");
    }
    if (std::abs(mat_.trace() - Complex{1.0}) > kTraceTolerance) {
      throw InvalidMatrix("density matrix trace is not 1");
    }
    const auto spec = hermitian_eig(mat_);
    if (spec.eigenvalues.back() < -kNegativeEigenTolerance) {
      throw InvalidMatrix("density matrix has a negative eigenvalue " +
                          std::to_string(spec.eigenvalues.back()));
    }
  }

  /// For matrices produced by trace-preserving, positivity-preserving maps.
  /// Only the shape is checked.
  static DensityMatrix unchecked(ComplexMatrix mat, Dims dims) {
    DensityMatrix rho;
    rho.mat_ = std::move(mat);
    rho.dims_ = std::move(dims);
    rho.check_shape();
    return rho;
  }

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }
  std::size_t subsystems() const noexcept { return dims_.size(); }

 private:
  DensityMatrix() = default;

  void check_shape() const {
    if (mat_.rows() != mat_.cols()) throw DimensionError("density matrix is not square");
    if (dims_.empty() || product(dims_) != dim()) {
      throw DimensionError("subsystem dimensions do not multiply to the matrix side");
    }
    if (std::find(dims_.begin(), dims_.end(), std::size_t{0}) != dims_.end()) {
      throw DimensionError("zero subsystem dimension");
    }
  }

  ComplexMatrix mat_;
  Dims dims_;
};

inline DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix::unchecked(kron(a.matrix(), b.matrix()), std::move(dims));
}

namespace detail {

// Row-major multi-index strides: index = sum digit[i] * stride[i].
inline std::vector<std::size_t> strides(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

}  // namespace detail

/// Reduced operator on the subsystems listed in `keep` (any order; output keeps
/// the original relative order).
inline ComplexMatrix partial_trace(const ComplexMatrix& a, const Dims& dims,
                                   std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (auto k : keep) {
    if (k >= dims.size()) throw std::out_of_range("partial_trace: subsystem index out of range");
  }
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (!std::binary_search(keep.begin(), keep.end(), i)) traced.push_back(i);
  }
  const auto stride = detail::strides(dims);
  Dims keep_dims, traced_dims;
  for (auto k : keep) keep_dims.push_back(dims[k]);
  for (auto t : traced) traced_dims.push_back(dims[t]);
  const std::size_t nk = product(keep_dims);
  const std::size_t nt = product(traced_dims);

  // Full-space offsets for each kept / traced multi-index.
  auto offsets = [&](const std::vector<std::size_t>& which, const Dims& sub) {
    std::vector<std::size_t> off(product(sub), 0);
    const auto sub_stride = detail::strides(sub);
    for (std::size_t flat = 0; flat < off.size(); ++flat) {
      std::size_t o = 0;
      for (std::size_t j = 0; j < which.size(); ++j) {
        o += ((flat / sub_stride[j]) % sub[j]) * stride[which[j]];
      }
      off[flat] = o;
    }
    return off;
  };
  const auto keep_off = offsets(keep, keep_dims);
  const auto trace_off = offsets(traced, traced_dims);

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(nk),
                                          static_cast<Eigen::Index>(nk));
  for (std::size_t i = 0; i < nk; ++i) {
    for (std::size_t j = 0; j < nk; ++j) {
      Complex acc{0.0};
      for (std::size_t t = 0; t < nt; ++t) {
        acc += a(static_cast<Eigen::Index>(keep_off[i] + trace_off[t]),
                 static_cast<Eigen::Index>(keep_off[j] + trace_off[t]));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
  if (keep.empty()) throw std::out_of_range("partial_trace: nothing kept");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  auto reduced = partial_trace(rho.matrix(), rho.dims(), keep);
  Dims dims;
  for (auto k : keep) dims.push_back(rho.dims()[k]);
  return DensityMatrix::unchecked(std::move(reduced), std::move(dims));
}

/// Reorders tensor factors: output subsystem i is input subsystem perm[i].
inline ComplexMatrix permute_subsystems(const ComplexMatrix& a, const Dims& dims,
                                        std::span<const std::size_t> perm) {
  if (perm.size() != dims.size()) throw DimensionError("permutation length mismatch");
  std::vector<bool> seen(dims.size(), false);
  for (auto p : perm) {
    if (p >= dims.size() || seen[p]) throw DimensionError("invalid subsystem permutation");
    seen[p] = true;
  }
  const auto in_stride = detail::strides(dims);
  Dims out_dims;
  for (auto p : perm) out_dims.push_back(dims[p]);
  const auto out_stride = detail::strides(out_dims);
  const std::size_t n = product(dims);

  std::vector<std::size_t> map(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t src = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      src += ((flat / out_stride[i]) % out_dims[i]) * in_stride[perm[i]];
    }
    map[flat] = src;
  }
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          a(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j]));
    }
  }
  return out;
}

inline DensityMatrix permute_subsystems(const DensityMatrix& rho,
                                        std::span<const std::size_t> perm) {
  Dims out_dims;
  for (auto p : perm) out_dims.push_back(p < rho.dims().size() ? rho.dims()[p] : 0);
  return DensityMatrix::unchecked(permute_subsystems(rho.matrix(), rho.dims(), perm),
                                  std::move(out_dims));
}

/// -sum p log2 p over already-validated weights; tiny and negative weights count as zero.
inline double entropy_of_weights(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights) {
    if (w > kEigenCutoff) h -= w * std::log2(w);
  }
  return std::max(h, 0.0);  // rounding on rank-one inputs
}

inline double shannon_entropy(std::span<const double> p) {
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < -1e-12) {
      throw ParameterError("probabilities", "entry is negative or not finite");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw ParameterError("probabilities", "do not sum to 1 (sum " + std::to_string(sum) + ")");
  }
  return entropy_of_weights(p);
}

inline double shannon_entropy(std::initializer_list<double> p) {
  return shannon_entropy(std::span<const double>(p.begin(), p.size()));
}

/// H2(x) = -x log2 x - (1-x) log2 (1-x).
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("x", "binary entropy argument outside [0,1]");
  return shannon_entropy({x, 1.0 - x});
}

inline double von_neumann_entropy(const ComplexMatrix& a) {
  return entropy_of_weights(hermitian_eig(a).eigenvalues);
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.matrix());
}

/// S(rho || sigma) in bits. Throws SupportViolation when rho has weight outside
/// the support of sigma.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative_entropy: dimension mismatch");
  const auto s = hermitian_eig(sigma.matrix());
  double cross = 0.0;  // tr rho log2 sigma
  for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
    const auto v = s.eigenvectors.col(static_cast<Eigen::Index>(j));
    const double weight = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    const double lam = s.eigenvalues[j];
    if (lam <= kEigenCutoff) {
      if (weight > 1e-10) {
        throw SupportViolation("relative_entropy: support of rho not contained in support of sigma");
      }
      continue;
    }
    cross += weight * std::log2(lam);
  }
  const double value = -von_neumann_entropy(rho) - cross;
  // rounding noise around zero only
  return (value < 0.0 && value > -1e-10) ? 0.0 : value;
}

}  // namespace sdc
