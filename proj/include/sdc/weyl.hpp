#pragma once

// Weyl displacement operators V_mn = sum_k exp(2 pi i k n / d) |k><k+m mod d|.

#include <numbers>
#include <string>

#include "sdc/qlin.hpp"

namespace sdc {

struct WeylIndex {
  std::size_t m = 0;  // shift
  std::size_t n = 0;  // phase
  std::size_t d = 2;

  WeylIndex() = default;
  WeylIndex(std::size_t m_, std::size_t n_, std::size_t d_) : m(m_), n(n_), d(d_) {
    if (d < 2) throw DimensionError("Weyl index: dimension must be at least 2");
    if (m >= d || n >= d) {
      throw std::out_of_range("Weyl index (" + std::to_string(m) + "," + std::to_string(n) +
                              ") out of range for d=" + std::to_string(d));
    }
  }

  /// Position in a d*d table, m-major.
  std::size_t flat() const noexcept { return m * d + n; }
  static WeylIndex from_flat(std::size_t flat, std::size_t d) { return {flat / d, flat % d, d}; }

  friend bool operator==(const WeylIndex&, const WeylIndex&) = default;
};

inline Complex root_of_unity(std::size_t power, std::size_t d) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(power % d) /
                       static_cast<double>(d);
  return std::polar(1.0, angle);
}

inline ComplexMatrix weyl_op(const WeylIndex& idx) {
  const auto d = static_cast<Eigen::Index>(idx.d);
  ComplexMatrix v = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < idx.d; ++k) {
    v(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>((k + idx.m) % idx.d)) =
        root_of_unity(k * idx.n, idx.d);
  }
  return v;
}

/// Phase c with V_a V_b = c V_b V_a, c = exp(2 pi i (n_b m_a - n_a m_b) / d).
inline Complex weyl_commutation_phase(const WeylIndex& a, const WeylIndex& b) {
  const std::size_t d = a.d;
  const std::size_t power = (b.n * a.m + d * d - (a.n * b.m) % (d * d)) % d;
  return root_of_unity(power, d);
}

/// Qubit labels: sigma_0 = (0,0), sigma_x = (1,0), sigma_y ~ (1,1), sigma_z = (0,1).
/// V_11 = i sigma_y; the phase cancels under conjugation.
inline WeylIndex pauli_sigma_index(std::size_t sigma) {
  static constexpr std::size_t m[4] = {0, 1, 1, 0};
  static constexpr std::size_t n[4] = {0, 0, 1, 1};
  if (sigma > 3) throw std::out_of_range("Pauli label must be 0..3");
  return {m[sigma], n[sigma], 2};
}

inline ComplexMatrix pauli_sigma(std::size_t sigma) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  switch (sigma) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::out_of_range("Pauli label must be 0..3");
  }
  return s;
}

}  // namespace sdc
