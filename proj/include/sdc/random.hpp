#pragma once

// Seeded random matrices for property checks and optimizer restarts.

#include <cstdint>
#include <random>

#include "sdc/qlin.hpp"

namespace sdc {

using Rng = std::mt19937_64;

/// Independent stream for sub-task `index` of a run seeded with `seed`. Does not
/// depend on scheduling order.
inline Rng derived_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x5dc5dcu};
  return Rng(seq);
}

inline ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex{normal(rng), normal(rng)};
  }
  return g;
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
inline ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  const ComplexMatrix g = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

/// Random full-rank (or rank-`rank`) mixed state, induced measure.
inline DensityMatrix random_density_matrix(const Dims& dims, Rng& rng, std::size_t rank = 0) {
  const std::size_t n = product(dims);
  if (rank == 0) rank = n;
  const ComplexMatrix g = random_ginibre(n, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho), dims);
}

inline DensityMatrix random_pure_state(const Dims& dims, Rng& rng) {
  return random_density_matrix(dims, rng, 1);
}

inline std::vector<double> random_probabilities(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = expo(rng));
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace sdc
