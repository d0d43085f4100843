#pragma once

// Reference computations for the tests. These deliberately avoid the library's
// own code paths: plain loops, explicit matrices, closed forms.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline double shannon_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h / std::log(2.0);
}

inline double h2(double x) { return shannon_bits({x, 1.0 - x}); }

/// Spectrum of the qubit Werner state: (1+3 eta)/4 once, (1-eta)/4 three times.
inline std::vector<double> werner_spectrum(double eta) {
  const double off = (1.0 - eta) / 4.0;
  return {(1.0 + 3.0 * eta) / 4.0, off, off, off};
}

inline double werner_entropy(double eta) { return shannon_bits(werner_spectrum(eta)); }

/// Weyl operator written out from its defining sum.
inline Mat weyl(int m, int n, int d) {
  Mat v = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double angle = 2.0 * std::numbers::pi * k * n / d;
    v(k, (k + m) % d) = cd(std::cos(angle), std::sin(angle));
  }
  return v;
}

inline Mat kron2(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// tr_a for a (da*db) square operator, by direct index contraction.
inline Mat trace_first(const Mat& rho, int da, int db) {
  Mat out = Mat::Zero(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int a = 0; a < da; ++a) out(i, j) += rho(a * db + i, a * db + j);
  return out;
}

/// tr_b for a (da*db) square operator.
inline Mat trace_second(const Mat& rho, int da, int db) {
  Mat out = Mat::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int b = 0; b < db; ++b) out(i, j) += rho(i * db + b, j * db + b);
  return out;
}

/// det(A - lambda I) via LU; zero when lambda is an eigenvalue.
inline double char_poly(const Mat& a, double lambda) {
  const Mat shifted = a - lambda * Mat::Identity(a.rows(), a.cols());
  return std::abs(shifted.fullPivLu().determinant());
}

/// sum_k q_k K_k rho K_k^dagger with explicit dense operators.
inline Mat apply_dense(const std::vector<std::pair<double, Mat>>& terms, const Mat& rho) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& [q, k] : terms) out += q * k * rho * k.adjoint();
  return out;
}

inline Mat bell_projector(int d) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  for (int j = 0; j < d; ++j) psi(j * d + j) = 1.0 / std::sqrt(double(d));
  return psi * psi.adjoint();
}

inline double entropy_bits(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (auto& x : ev) x = x < 0 ? 0 : x;
  return shannon_bits(ev);
}

/// Root of an increasing-or-decreasing f on [lo, hi] by plain bisection.
template <class F>
double bisect(F f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
