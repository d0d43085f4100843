#pragma once

// Minimization of channel-output entropy over sender-side encodings, and the
// root finders for thresholds and crossover curves.

#include <atomic>
#include <mutex>
#include <functional>
#include <thread>

#include <Eigen/SVD>

#include "sdc/capacity.hpp"
#include "sdc/nelder_mead.hpp"

namespace sdc {

struct OptimizerOptions {
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t max_iterations = 2000;
  std::size_t threads = 1;
  double initial_step = 0.5;
};

// ---- unitary parameterization ----

/// Orthogonal basis of traceless Hermitian n x n matrices (generalized
/// Gell-Mann): symmetric and antisymmetric off-diagonal pairs, then diagonals.
inline std::vector<ComplexMatrix> gell_mann_basis(std::size_t n) {
  std::vector<ComplexMatrix> basis;
  const auto N = static_cast<Eigen::Index>(n);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index k = j + 1; k < N; ++k) {
      ComplexMatrix s = ComplexMatrix::Zero(N, N), a = ComplexMatrix::Zero(N, N);
      s(j, k) = s(k, j) = 1.0;
      a(j, k) = Complex(0, -1);
      a(k, j) = Complex(0, 1);
      basis.push_back(std::move(s));
      basis.push_back(std::move(a));
    }
  }
  for (Eigen::Index l = 1; l < N; ++l) {
    ComplexMatrix h = ComplexMatrix::Zero(N, N);
    const double c = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) h(j, j) = c;
    h(l, l) = -c * static_cast<double>(l);
    basis.push_back(std::move(h));
  }
  return basis;
}

/// exp(i H) for Hermitian H.
inline ComplexMatrix exp_i_hermitian(const ComplexMatrix& h) {
  const auto spec = hermitian_eig(h);
  ComplexVector phases(static_cast<Eigen::Index>(spec.eigenvalues.size()));
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    phases(static_cast<Eigen::Index>(i)) = std::polar(1.0, spec.eigenvalues[i]);
  }
  return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

enum class UnitaryStructure { global, local };

struct UnitaryParam {
  std::vector<double> generator;
  UnitaryStructure structure = UnitaryStructure::global;
  Dims dims;  // sender subsystem dimensions

  static std::size_t parameter_count(UnitaryStructure s, const Dims& dims) {
    if (s == UnitaryStructure::global) {
      const auto n = product(dims);
      return n * n - 1;
    }
    std::size_t c = 0;
    for (auto d : dims) c += d * d - 1;
    return c;
  }

  static UnitaryParam identity(UnitaryStructure s, Dims dims) {
    const auto n = parameter_count(s, dims);
    return {std::vector<double>(n, 0.0), s, std::move(dims)};
  }

  ComplexMatrix matrix() const {
    if (generator.size() != parameter_count(structure, dims)) {
      throw DimensionError("unitary generator has the wrong length");
    }
    auto exp_block = [&](std::size_t n, std::size_t offset) {
      const auto basis = gell_mann_basis(n);
      ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
      for (std::size_t j = 0; j < basis.size(); ++j) h += generator[offset + j] * basis[j];
      return exp_i_hermitian(h);
    };
    if (structure == UnitaryStructure::global) return exp_block(product(dims), 0);
    ComplexMatrix u = sdc::identity(1);
    std::size_t offset = 0;
    for (auto d : dims) {
      u = kron(u, exp_block(d, offset));
      offset += d * d - 1;
    }
    return u;
  }

  KrausChannel channel() const { return KrausChannel::unitary(matrix(), dims); }
};

// ---- CPTP parameterization ----

/// Isometry sender -> sender (x) environment, environment dimension D^2,
/// from a complex (D * D^2) x D matrix orthonormalized by its polar factor.
/// Kraus operator e has entries W(s * D^2 + e, s').
struct CptpParam {
  std::vector<double> entries;  // real and imaginary parts, row-major
  Dims dims;

  static std::size_t environment_dim(const Dims& dims) {
    const auto n = product(dims);
    return n * n;
  }
  static std::size_t parameter_count(const Dims& dims) {
    const auto n = product(dims);
    return 2 * n * environment_dim(dims) * n;
  }

  /// Embeds the given Kraus operators (at most D^2 of them) as the starting isometry.
  static CptpParam from_kraus(const std::vector<ComplexMatrix>& ops, Dims dims) {
    const auto n = product(dims);
    const auto env = environment_dim(dims);
    if (ops.size() > env) throw DimensionError("more Kraus operators than environment levels");
    CptpParam p{std::vector<double>(parameter_count(dims), 0.0), std::move(dims)};
    for (std::size_t e = 0; e < ops.size(); ++e) {
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
          const auto z = ops[e](static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t));
          const std::size_t idx = 2 * ((s * env + e) * n + t);
          p.entries[idx] = z.real();
          p.entries[idx + 1] = z.imag();
        }
      }
    }
    return p;
  }

  static CptpParam identity(Dims dims) {
    const auto n = product(dims);
    return from_kraus({sdc::identity(n)}, std::move(dims));
  }

  ComplexMatrix isometry() const {
    const auto n = product(dims);
    const auto env = environment_dim(dims);
    if (entries.size() != parameter_count(dims)) {
      throw DimensionError("CPTP parameter vector has the wrong length");
    }
    ComplexMatrix a(static_cast<Eigen::Index>(n * env), static_cast<Eigen::Index>(n));
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.cols(); ++c) {
        const auto idx = 2 * static_cast<std::size_t>(r * a.cols() + c);
        a(r, c) = Complex(entries[idx], entries[idx + 1]);
      }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
  }

  std::vector<ComplexMatrix> kraus_ops() const {
    const auto n = static_cast<Eigen::Index>(product(dims));
    const auto env = static_cast<Eigen::Index>(environment_dim(dims));
    const auto w = isometry();
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index e = 0; e < env; ++e) {
      ComplexMatrix k(n, n);
      for (Eigen::Index s = 0; s < n; ++s) k.row(s) = w.row(s * env + e);
      if (k.cwiseAbs().maxCoeff() > 0.0) ops.push_back(std::move(k));
    }
    return ops;
  }

  KrausChannel channel() const { return {kraus_ops(), dims}; }
};

struct OptResult {
  double best_value = 0.0;
  std::variant<UnitaryParam, CptpParam> best_param;
  std::size_t restarts_used = 0;
  bool converged = false;           // the restart that produced best_value converged
  std::size_t converged_restarts = 0;
  std::uint64_t seed = 0;
  double identity_value = 0.0;      // entropy with no pre-processing
  std::vector<double> restart_values;

  KrausChannel encoding() const {
    return std::visit([](const auto& p) { return p.channel(); }, best_param);
  }
};

namespace detail {

inline Dims sender_dims_of(const DensityMatrix& rho, const Channel& ch) {
  if (channel_dims(ch) != rho.dims()) throw DimensionError("channel and state dims differ");
  const auto senders = channel_sender_count(ch);
  return Dims(rho.dims().begin(), rho.dims().begin() + static_cast<std::ptrdiff_t>(senders));
}

inline double encoded_output_entropy(const KrausChannel& enc, const DensityMatrix& rho,
                                     const Channel& ch) {
  return von_neumann_entropy(apply_channel(ch, enc.apply_on_leading(rho)));
}

// Runs restart(i) for i in [0, restarts) on up to `threads` workers and keeps the
// minimum, preferring the lowest restart index on ties.
template <class Param>
OptResult run_restarts(const OptimizerOptions& opts,
                       const std::function<std::pair<Param, SimplexResult>(std::size_t)>& restart) {
  if (opts.restarts == 0) throw ParameterError("restarts", "must be at least 1");
  std::vector<std::optional<std::pair<Param, SimplexResult>>> results(opts.restarts);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < opts.restarts;) {
      try {
        results[i] = restart(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(opts.threads, 1, opts.restarts);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  OptResult out;
  out.seed = opts.seed;
  out.restarts_used = opts.restarts;
  std::size_t best = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i]->second;
    out.restart_values.push_back(r.value);
    if (r.converged) ++out.converged_restarts;
    if (r.value < results[best]->second.value) best = i;
  }
  out.best_value = std::max(0.0, results[best]->second.value);
  out.converged = results[best]->second.converged;
  out.best_param = results[best]->first;
  return out;
}

inline SimplexOptions simplex_options(const OptimizerOptions& opts) {
  return {opts.tol, opts.max_iterations, opts.initial_step};
}

}  // namespace detail

/// min over sender unitaries U of S(L((U (x) I) rho (U (x) I)^dagger)).
/// Restart 0 starts at the identity; the rest start at seeded random generators.
inline OptResult min_output_entropy_unitary(const DensityMatrix& rho, const Channel& ch,
                                            UnitaryStructure structure = UnitaryStructure::global,
                                            const OptimizerOptions& opts = {}) {
  const Dims sdims = detail::sender_dims_of(rho, ch);
  const auto n = UnitaryParam::parameter_count(structure, sdims);
  auto objective = [&](const std::vector<double>& x) {
    const UnitaryParam p{x, structure, sdims};
    return detail::encoded_output_entropy(p.channel(), rho, ch);
  };
  std::function<std::pair<UnitaryParam, SimplexResult>(std::size_t)> restart =
      [&](std::size_t i) {
        std::vector<double> x0(n, 0.0);
        if (i > 0) {
          auto rng = derived_rng(opts.seed, i);
          std::normal_distribution<double> normal(0.0, 1.0);
          for (auto& v : x0) v = normal(rng);
        }
        auto r = nelder_mead(objective, std::move(x0), detail::simplex_options(opts));
        return std::pair{UnitaryParam{r.x, structure, sdims}, std::move(r)};
      };
  auto out = detail::run_restarts<UnitaryParam>(opts, restart);
  out.identity_value = objective(std::vector<double>(n, 0.0));
  return out;
}

/// min over sender CPTP maps G of S(L(G(rho))). Restart 0 starts at the
/// identity, restart 1 at the unitary optimum, the rest at seeded random
/// isometries.
inline OptResult min_output_entropy_cptp(const DensityMatrix& rho, const Channel& ch,
                                         const OptimizerOptions& opts = {}) {
  const Dims sdims = detail::sender_dims_of(rho, ch);
  const auto n = CptpParam::parameter_count(sdims);
  auto objective = [&](const std::vector<double>& x) {
    const CptpParam p{x, sdims};
    return detail::encoded_output_entropy(p.channel(), rho, ch);
  };
  std::optional<CptpParam> unitary_start;
  if (opts.restarts > 1) {
    const auto u = min_output_entropy_unitary(rho, ch, UnitaryStructure::global, opts);
    unitary_start = CptpParam::from_kraus(u.encoding().ops(), sdims);
  }
  std::function<std::pair<CptpParam, SimplexResult>(std::size_t)> restart = [&](std::size_t i) {
    std::vector<double> x0;
    if (i == 0) {
      x0 = CptpParam::identity(sdims).entries;
    } else if (i == 1) {
      x0 = unitary_start->entries;
    } else {
      auto rng = derived_rng(opts.seed, i);
      std::normal_distribution<double> normal(0.0, 1.0);
      x0.resize(n);
      for (auto& v : x0) v = normal(rng);
    }
    auto r = nelder_mead(objective, std::move(x0), detail::simplex_options(opts));
    return std::pair{CptpParam{r.x, sdims}, std::move(r)};
  };
  auto out = detail::run_restarts<CptpParam>(opts, restart);
  out.identity_value = objective(CptpParam::identity(sdims).entries);
  return out;
}

// ---- root finding ----

struct Root {
  double x = 0.0;
  double residual = 0.0;  // f(x)
};

/// Bisection on a bracket with f(lo) * f(hi) <= 0. Stops once the bracket is
/// narrower than 2 tol and |f| <= tol at the midpoint.
inline Root bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw ParameterError("tol", "must be positive");
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0};
  if (fhi == 0.0) return {hi, 0.0};
  if (flo * fhi > 0.0) throw std::domain_error("bisection bracket has no sign change");
  double mid = 0.5 * (lo + hi), fmid = f(mid);
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 2.0 * tol && std::abs(fmid) <= tol) break;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    mid = 0.5 * (lo + hi);
    fmid = f(mid);
  }
  return {mid, fmid};
}

/// Brackets [x_i, x_{i+1}] of a 100-step grid on [lo, hi] where f changes sign strictly.
inline std::vector<std::pair<double, double>> sign_change_brackets(
    const std::function<double(double)>& f, double lo, double hi, std::size_t steps = 100) {
  std::vector<std::pair<double, double>> out;
  double prev_x = lo, prev_f = f(lo);
  for (std::size_t i = 1; i <= steps; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps);
    const double fx = f(x);
    if (prev_f * fx < 0.0) out.emplace_back(prev_x, x);
    prev_x = x;
    prev_f = fx;
  }
  return out;
}

/// Capacity with a qubit Bell state and depolarising noise of strength p on both halves.
inline double depolarising_bell_capacity(double p) {
  return c_two_sided_depolarising(bell_state(2), 2, p);
}

/// p at which the Bell-state capacity drops to the classical capacity 1 - H2(p/2).
inline Root depolarising_transition_threshold(double tol = 1e-5) {
  const std::function<double(double)> gap = [](double p) {
    return depolarising_bell_capacity(p) - classical_capacity_dep_qubit(p);
  };
  const auto brackets = sign_change_brackets(gap, 0.0, 1.0);
  if (brackets.empty()) throw std::domain_error("no sign change for the transition threshold");
  return bisect(gap, brackets.front().first, brackets.front().second, tol);
}

/// C_un - C_gamma for a Bell state through the correlated quasi-classical channel.
inline double quasiclassical_advantage_gap(double p, double mu) {
  return c_quasiclassical_werner(1.0, p, mu) - transferred_info_quasiclassical_gamma(p);
}

/// Correlation degree above which the unitary encoding beats the reset
/// pre-processing at noise p; nullopt when there is no crossing in [0,1].
inline std::optional<Root> crossover_mu_tilde(double p, double tol = 1e-5) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("p", "must lie in (0,1)");
  const std::function<double(double)> gap = [p](double mu) {
    return quasiclassical_advantage_gap(p, mu);
  };
  const auto brackets = sign_change_brackets(gap, 0.0, 1.0);
  if (brackets.empty()) return std::nullopt;
  return bisect(gap, brackets.front().first, brackets.front().second, tol);
}

struct PRange {
  Root low, high;  // within [0, 0.5]; the mirrored range is [1 - high, 1 - low]
};

/// Noise range in [0, 0.5] where the reset pre-processing beats the unitary
/// encoding at correlation mu; nullopt when it never does.
inline std::optional<PRange> crossover_p_range(double mu, double tol = 1e-5) {
  check_unit_interval(mu, "mu");
  const std::function<double(double)> advantage = [mu](double p) {
    return -quasiclassical_advantage_gap(p, mu);
  };
  constexpr std::size_t steps = 100;
  constexpr double zero = 1e-12;
  std::vector<double> xs(steps + 1), fs(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    xs[i] = 0.5 * static_cast<double>(i) / static_cast<double>(steps);
    fs[i] = advantage(xs[i]);
  }
  std::size_t first = 0;
  while (first <= steps && fs[first] <= zero) ++first;
  if (first > steps) return std::nullopt;
  std::size_t last = first;
  while (last + 1 <= steps && fs[last + 1] > zero) ++last;

  auto edge = [&](std::size_t inside, std::size_t outside) -> Root {
    if (fs[outside] >= -zero) return {xs[outside], fs[outside]};
    return bisect(advantage, std::min(xs[inside], xs[outside]),
                  std::max(xs[inside], xs[outside]), tol);
  };
  PRange r;
  r.low = first == 0 ? Root{xs[0], fs[0]} : edge(first, first - 1);
  r.high = last == steps ? Root{xs[steps], fs[steps]} : edge(last, last + 1);
  return r;
}

/// Werner visibility at which the unitary capacity equals the reset
/// pre-processing value 1 - H2(q) for the fully correlated channel.
inline Root crossover_eta_tilde(double q, double tol = 1e-5) {
  check_unit_interval(q, "q");
  const std::function<double(double)> gap = [q](double eta) {
    return c_fully_correlated_werner(eta) - transferred_info_fully_gamma(q);
  };
  const double g0 = gap(0.0);
  if (std::abs(g0) <= tol) return {0.0, g0};
  const auto brackets = sign_change_brackets(gap, 0.0, 1.0);
  if (brackets.empty()) throw std::domain_error("no sign change for the eta crossover");
  return bisect(gap, brackets.front().first, brackets.front().second, tol);
}

}  // namespace sdc
