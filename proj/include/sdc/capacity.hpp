#pragma once

// Holevo quantity of encoding ensembles and the closed-form dense coding
// capacities for covariant (Pauli) channels. All values in bits.
//
// For a channel covariant under sender-side Weyl operators the capacity with
// encodings restricted to a set G is
//
//   C = log2 D_A + S(L_b(rho_b)) - min_{g in G} S(L(g(rho)))
//
// and the minimum is attained by the ensemble {V_i o g_min, 1/D_A^2}. The
// minimizer is an input here; the optimize module searches for it.

#include <optional>

#include "sdc/channels.hpp"
#include "sdc/states.hpp"

namespace sdc {

struct EncodingMember {
  double probability;
  KrausChannel map;  // acts on the leading (sender) subsystems
};

struct EncodingEnsemble {
  std::vector<EncodingMember> members;

  void validate() const {
    if (members.empty()) throw std::invalid_argument("empty encoding ensemble");
    double total = 0.0;
    for (const auto& m : members) {
      if (m.probability < -1e-12) throw ParameterError("probability", "negative ensemble weight");
      total += m.probability;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      throw ParameterError("probability", "ensemble weights do not sum to 1");
    }
  }
};

struct CapacityReport {
  double value = 0.0;
  std::string case_id;
  std::string formula_id;
  std::vector<std::pair<std::string, double>> inputs;
  std::optional<EncodingEnsemble> witness;
  /// value does not exceed log2 of the senders' dimension, i.e. no gain over
  /// sending the systems without shared entanglement.
  bool below_classical_benchmark = false;
};

// ---- Holevo quantity ----

namespace detail {

struct ReceivedEnsemble {
  std::vector<double> weights;
  std::vector<DensityMatrix> outputs;
  ComplexMatrix average;
};

inline ReceivedEnsemble receive(const EncodingEnsemble& ensemble, const DensityMatrix& rho,
                                const Channel& ch) {
  ensemble.validate();
  ReceivedEnsemble r;
  r.average = ComplexMatrix::Zero(static_cast<Eigen::Index>(rho.dim()),
                                  static_cast<Eigen::Index>(rho.dim()));
  for (const auto& m : ensemble.members) {
    auto out = apply_channel(ch, m.map.apply_on_leading(rho));
    r.average += m.probability * out.matrix();
    r.weights.push_back(m.probability);
    r.outputs.push_back(std::move(out));
  }
  return r;
}

}  // namespace detail

/// S(average output) - sum_i p_i S(output_i).
inline double holevo_chi(const EncodingEnsemble& ensemble, const DensityMatrix& rho,
                         const Channel& ch) {
  const auto r = detail::receive(ensemble, rho, ch);
  double mean_entropy = 0.0;
  for (std::size_t i = 0; i < r.outputs.size(); ++i) {
    if (r.weights[i] > 0.0) mean_entropy += r.weights[i] * von_neumann_entropy(r.outputs[i]);
  }
  return von_neumann_entropy(r.average) - mean_entropy;
}

/// sum_i p_i S(output_i || average output); equal to holevo_chi.
inline double holevo_chi_relative(const EncodingEnsemble& ensemble, const DensityMatrix& rho,
                                  const Channel& ch) {
  const auto r = detail::receive(ensemble, rho, ch);
  const auto avg = DensityMatrix::unchecked(r.average, rho.dims());
  double chi = 0.0;
  for (std::size_t i = 0; i < r.outputs.size(); ++i) {
    if (r.weights[i] > 0.0) chi += r.weights[i] * relative_entropy(r.outputs[i], avg);
  }
  return chi;
}

// ---- building blocks ----

/// Number of leading subsystems whose dimensions multiply to `sender_dim`.
inline std::size_t leading_subsystems_for(const Dims& dims, std::size_t sender_dim) {
  std::size_t acc = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    acc *= dims[i];
    if (acc == sender_dim && i + 1 < dims.size()) return i + 1;
    if (acc > sender_dim) break;
  }
  throw DimensionError("sender dimension " + std::to_string(sender_dim) +
                       " does not match a proper prefix of the subsystems");
}

/// S(tr_senders L(rho)): entropy of the receivers' marginal after the channel.
inline double receiver_output_entropy(const DensityMatrix& rho, const Channel& ch,
                                      std::size_t senders) {
  const auto out = apply_channel(ch, rho);
  std::vector<std::size_t> keep;
  for (std::size_t i = senders; i < out.subsystems(); ++i) keep.push_back(i);
  return von_neumann_entropy(partial_trace(out, keep));
}

inline double output_entropy(const DensityMatrix& rho, const Channel& ch) {
  return von_neumann_entropy(apply_channel(ch, rho));
}

/// log2 D_A + S(L_b(rho_b)) - min_entropy.
inline double capacity_via_min_entropy(const DensityMatrix& rho, const Channel& ch,
                                       double min_entropy, std::size_t sender_dim) {
  const auto senders = leading_subsystems_for(rho.dims(), sender_dim);
  return std::log2(static_cast<double>(sender_dim)) +
         receiver_output_entropy(rho, ch, senders) - min_entropy;
}

/// Every product of Weyl operators over `dims`, as dense matrices.
inline std::vector<ComplexMatrix> weyl_products(const Dims& dims) {
  std::vector<ComplexMatrix> ops;
  for (const auto& op : sender_weyl_ops(dims, dims.size())) ops.push_back(op.dense());
  return ops;
}

/// {V_i o gamma_min, 1/D^2} over all sender-side Weyl products V_i.
inline EncodingEnsemble optimal_ensemble(const KrausChannel& gamma_min) {
  const auto ops = weyl_products(gamma_min.dims());
  EncodingEnsemble e;
  const double p = 1.0 / static_cast<double>(ops.size());
  e.members.reserve(ops.size());
  for (const auto& v : ops) e.members.push_back({p, gamma_min.followed_by(v)});
  return e;
}

inline EncodingEnsemble weyl_ensemble(const Dims& sender_dims) {
  return optimal_ensemble(KrausChannel::identity_map(sender_dims));
}

/// Kraus operators |0><1| and |0><0|: resets the sender qubit to |0>.
inline KrausChannel reset_to_zero_preprocessing() {
  ComplexMatrix e1 = ComplexMatrix::Zero(2, 2), e2 = ComplexMatrix::Zero(2, 2);
  e1(0, 1) = 1.0;
  e2(0, 0) = 1.0;
  return {{e1, e2}, {2}};
}

// ---- closed forms ----

/// log2 d_A + S(rho_b) - S(rho) for a noiseless channel, reported raw (may be
/// below log2 d_A for states not useful for dense coding).
inline double c_noiseless(const DensityMatrix& rho) {
  if (rho.subsystems() < 2) throw DimensionError("c_noiseless expects a bipartite state");
  std::vector<std::size_t> keep;
  for (std::size_t i = 1; i < rho.subsystems(); ++i) keep.push_back(i);
  return std::log2(static_cast<double>(rho.dims()[0])) +
         von_neumann_entropy(partial_trace(rho, keep)) - von_neumann_entropy(rho);
}

/// Werner state, Pauli noise on the transmitted half only:
/// log2 d^2 - H({(1-eta)/d^2 + eta q_mn}).
inline double c_one_sided_pauli_werner(std::size_t d, double eta, const PauliTable& q) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta", "must lie in [0,1]");
  if (q.uses != 1 || q.d != d) throw DimensionError("expected a single-use table of dimension d");
  q.validate();
  auto w = q.dense();
  const double floor = (1.0 - eta) / static_cast<double>(d * d);
  for (auto& x : w) x = floor + eta * x;
  return std::log2(static_cast<double>(d * d)) - shannon_entropy(w);
}

/// Bell state, one-sided Pauli noise: log2 d^2 - H(q).
inline double c_one_sided_pauli_bell(const PauliTable& q) {
  return c_one_sided_pauli_werner(q.d, 1.0, q);
}

/// Any state, independent depolarising noise on both halves. Independent of
/// local unitaries applied to rho.
inline double c_two_sided_depolarising(const DensityMatrix& rho, std::size_t d, double p) {
  if (rho.dims() != Dims{d, d}) throw DimensionError("expected a d x d bipartite state");
  const Channel ch = two_sided_depolarising(d, p);
  return std::log2(static_cast<double>(d)) + receiver_output_entropy(rho, ch, 1) -
         output_entropy(rho, ch);
}

/// Classical capacity of the qubit depolarising channel, 1 - H2(p/2).
inline double classical_capacity_dep_qubit(double p) {
  check_unit_interval(p, "p");
  return 1.0 - binary_entropy(p / 2.0);
}

/// Qubit Werner state through the correlated quasi-classical channel, identity
/// pre-encoding: 2 - S(L(rho_w)).
inline double c_quasiclassical_werner(double eta, double p, double mu) {
  const Channel ch = quasiclassical_correlated(p, mu);
  return 2.0 - output_entropy(werner_state(2, eta), ch);
}

/// Bell-diagonal state through a fully correlated qubit Pauli channel:
/// 2 - H(p), independent of the channel probabilities.
inline double c_fully_correlated_bell_diagonal(std::span<const double> p4) {
  if (p4.size() != 4) throw ParameterError("p4", "needs 4 probabilities");
  return 2.0 - shannon_entropy(p4);
}

inline double c_fully_correlated_bell_diagonal(const std::array<double, 4>& p4) {
  return c_fully_correlated_bell_diagonal(std::span<const double>(p4));
}

inline double c_fully_correlated_werner(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta", "must lie in [0,1]");
  return c_fully_correlated_bell_diagonal(werner_bell_weights(eta));
}

/// Bell state, correlated quasi-classical channel, sender reset to |0>:
/// 1 - H2(p).
inline double transferred_info_quasiclassical_gamma(double p) {
  check_unit_interval(p, "p");
  return 1.0 - binary_entropy(p);
}

/// Werner state, fully correlated channel, sender reset to |0>, with
/// q = q_0 + q_3: 1 - H2(q).
inline double transferred_info_fully_gamma(double q) {
  check_unit_interval(q, "q");
  return 1.0 - binary_entropy(q);
}

/// k copies of a Bell state, Pauli noise on the k senders with joint table q:
/// k log2 d^2 - H(q).
inline double c_kcopy_bell_correlated(std::size_t d, std::size_t k, const PauliTable& q) {
  if (k == 0) throw ParameterError("k", "must be at least 1");
  if (q.d != d || q.uses != k) throw DimensionError("expected a k-use table of dimension d");
  q.validate();
  return static_cast<double>(k) * std::log2(static_cast<double>(d * d)) - q.entropy();
}

/// k copies of a Bell-diagonal state, fully correlated qubit channel: k (2 - H(p)).
inline double c_kcopy_bell_diagonal_fully(std::size_t k, std::span<const double> p4) {
  if (k == 0) throw ParameterError("k", "must be at least 1");
  return static_cast<double>(k) * c_fully_correlated_bell_diagonal(p4);
}

inline double c_kcopy_bell_diagonal_fully(std::size_t k, const std::array<double, 4>& p4) {
  return c_kcopy_bell_diagonal_fully(k, std::span<const double>(p4));
}

/// GHZ state of 2k qubits (2k - 1 senders), fully correlated channel: 2k.
inline double c_ghz_fully(std::size_t k) {
  if (k == 0) throw ParameterError("k", "must be at least 1");
  return 2.0 * static_cast<double>(k);
}

/// k copies of any d x d state, independent depolarising noise everywhere:
/// k times the single-copy two-sided value.
inline double c_kcopy_depolarising(std::size_t k, const DensityMatrix& rho, std::size_t d,
                                   double p) {
  if (k == 0) throw ParameterError("k", "must be at least 1");
  return static_cast<double>(k) * c_two_sided_depolarising(rho, d, p);
}

}  // namespace sdc
