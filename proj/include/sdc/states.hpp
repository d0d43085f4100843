#pragma once

// Resource states: Bell, Werner, Bell-diagonal, GHZ and k-copy tensor powers.
//
// Subsystem order within one copy is sender first, receiver second. k copies
// are regrouped as [a_1..a_k, b_1..b_k].

#include <array>
#include <memory>
#include <variant>

#include "sdc/weyl.hpp"

namespace sdc {

inline void check_total_dimension(double total) {
  if (total > static_cast<double>(kMaxDimension)) {
    throw DimensionError("total Hilbert dimension " + std::to_string(static_cast<long long>(total)) +
                         " exceeds the supported maximum of " + std::to_string(kMaxDimension));
  }
}

/// |psi_00> = (1/sqrt d) sum_j |jj>.
inline ComplexVector bell_vector(std::size_t d, std::size_t m = 0, std::size_t n = 0) {
  const WeylIndex idx{m, n, d};
  check_total_dimension(static_cast<double>(d * d));
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t j = 0; j < d; ++j) {
    psi(static_cast<Eigen::Index>(j * d + j)) = 1.0 / std::sqrt(static_cast<double>(d));
  }
  return kron(weyl_op(idx), identity(d)) * psi;
}

inline DensityMatrix pure_state(const ComplexVector& psi, Dims dims) {
  ComplexMatrix rho = psi * psi.adjoint();
  return DensityMatrix::unchecked(std::move(rho), std::move(dims));
}

/// (V_mn (x) I) |psi_00>.
inline DensityMatrix bell_state(std::size_t d, std::size_t m = 0, std::size_t n = 0) {
  return pure_state(bell_vector(d, m, n), {d, d});
}

/// eta |psi_00><psi_00| + (1 - eta) I / d^2.
inline DensityMatrix werner_state(std::size_t d, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta", "must lie in [0,1]");
  const auto bell = bell_state(d);
  ComplexMatrix rho = eta * bell.matrix() +
                      (1.0 - eta) / static_cast<double>(d * d) * identity(d * d);
  return DensityMatrix::unchecked(std::move(rho), {d, d});
}

/// Qubit Bell basis: rho_n = (sigma_n (x) I)|Phi+><Phi+|(sigma_n (x) I).
inline DensityMatrix bell_basis_state(std::size_t sigma) {
  const auto idx = pauli_sigma_index(sigma);
  return bell_state(2, idx.m, idx.n);
}

inline DensityMatrix bell_diagonal(std::span<const double> p) {
  if (p.size() != 4) throw ParameterError("p4", "Bell-diagonal state needs 4 probabilities");
  shannon_entropy(p);  // validates normalization
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (std::size_t s = 0; s < 4; ++s) rho += std::max(p[s], 0.0) * bell_basis_state(s).matrix();
  return DensityMatrix::unchecked(std::move(rho), {2, 2});
}

inline DensityMatrix bell_diagonal(const std::array<double, 4>& p) {
  return bell_diagonal(std::span<const double>(p));
}

/// Bell-diagonal weights equivalent to a qubit Werner state.
inline std::array<double, 4> werner_bell_weights(double eta) {
  const double off = (1.0 - eta) / 4.0;
  return {(1.0 + 3.0 * eta) / 4.0, off, off, off};
}

/// (|0...0> + |1...1>)/sqrt 2 on `parties` qubits.
inline DensityMatrix ghz_state(std::size_t parties) {
  if (parties < 2) throw ParameterError("parties", "GHZ state needs at least 2 parties");
  check_total_dimension(std::pow(2.0, static_cast<double>(parties)));
  const auto n = static_cast<Eigen::Index>(std::size_t{1} << parties);
  ComplexVector psi = ComplexVector::Zero(n);
  psi(0) = psi(n - 1) = 1.0 / std::sqrt(2.0);
  return pure_state(psi, Dims(parties, 2));
}

/// k-fold tensor power of a bipartite state, regrouped as [a_1..a_k, b_1..b_k].
inline DensityMatrix k_copies(const DensityMatrix& rho, std::size_t k) {
  if (k == 0) throw ParameterError("k", "must be at least 1");
  if (rho.subsystems() != 2) throw DimensionError("k_copies expects a bipartite state");
  check_total_dimension(std::pow(static_cast<double>(rho.dim()), static_cast<double>(k)));
  if (k == 1) return rho;
  ComplexMatrix m = rho.matrix();
  Dims dims = rho.dims();
  for (std::size_t i = 1; i < k; ++i) {
    m = kron(m, rho.matrix());
    dims.insert(dims.end(), rho.dims().begin(), rho.dims().end());
  }
  // Interleaved [a1 b1 a2 b2 ...] -> [a1 a2 ... b1 b2 ...].
  std::vector<std::size_t> perm;
  for (std::size_t i = 0; i < k; ++i) perm.push_back(2 * i);
  for (std::size_t i = 0; i < k; ++i) perm.push_back(2 * i + 1);
  return permute_subsystems(DensityMatrix::unchecked(std::move(m), std::move(dims)), perm);
}

// ---- declarative description ----

struct StateSpec;

namespace spec {
struct Bell {
  std::size_t d = 2, m = 0, n = 0;
};
struct Werner {
  std::size_t d = 2;
  double eta = 1.0;
};
struct BellDiagonal {
  std::array<double, 4> p{1.0, 0.0, 0.0, 0.0};
};
struct Ghz {
  std::size_t parties = 2;
};
struct KCopy {
  std::shared_ptr<const StateSpec> inner;
  std::size_t k = 1;
};
struct Explicit {
  std::shared_ptr<const DensityMatrix> rho;
};
}  // namespace spec

struct StateSpec {
  std::variant<spec::Bell, spec::Werner, spec::BellDiagonal, spec::Ghz, spec::KCopy,
               spec::Explicit>
      kind;
};

inline DensityMatrix build_state(const StateSpec& s) {
  struct Visitor {
    DensityMatrix operator()(const spec::Bell& b) const { return bell_state(b.d, b.m, b.n); }
    DensityMatrix operator()(const spec::Werner& w) const { return werner_state(w.d, w.eta); }
    DensityMatrix operator()(const spec::BellDiagonal& b) const { return bell_diagonal(b.p); }
    DensityMatrix operator()(const spec::Ghz& g) const { return ghz_state(g.parties); }
    DensityMatrix operator()(const spec::KCopy& c) const {
      if (!c.inner) throw std::invalid_argument("KCopy without inner state");
      return k_copies(build_state(*c.inner), c.k);
    }
    DensityMatrix operator()(const spec::Explicit& e) const {
      if (!e.rho) throw std::invalid_argument("Explicit state without matrix");
      return *e.rho;
    }
  };
  return std::visit(Visitor{}, s.kind);
}

}  // namespace sdc
