#pragma once

// Pauli (Weyl) channels, Kraus channels and covariance checks.
//
// A Pauli channel is stored as a list of blocks. Each block carries a sparse
// probability table over tuples of Weyl indices for a group of subsystems;
// blocks act on disjoint subsystems and are independent of each other. An
// uncorrelated channel is one block per subsystem, a correlated one puts the
// correlated subsystems in one block.

#include <concepts>
#include <map>
#include <optional>
#include <variant>

#include "sdc/random.hpp"
#include "sdc/weyl.hpp"

namespace sdc {

/// Probability table over tuples of Weyl indices, one per channel use.
/// Keys hold WeylIndex::flat() per use; zero entries are not stored.
struct PauliTable {
  std::size_t d = 2;
  std::size_t uses = 1;
  std::map<std::vector<std::size_t>, double> probs;

  double probability(const std::vector<std::size_t>& key) const {
    const auto it = probs.find(key);
    return it == probs.end() ? 0.0 : it->second;
  }

  double total() const {
    double s = 0.0;
    for (const auto& [_, p] : probs) s += p;
    return s;
  }

  double entropy() const {
    std::vector<double> w;
    w.reserve(probs.size());
    for (const auto& [_, p] : probs) w.push_back(p);
    return shannon_entropy(w);
  }

  /// Single-use table as a dense d*d vector, m-major.
  std::vector<double> dense() const {
    if (uses != 1) throw DimensionError("dense(): table has more than one use");
    std::vector<double> out(d * d, 0.0);
    for (const auto& [k, p] : probs) out[k[0]] = p;
    return out;
  }

  void validate() const {
    if (d < 2) throw DimensionError("Pauli table dimension must be at least 2");
    for (const auto& [k, p] : probs) {
      if (k.size() != uses) throw DimensionError("Pauli table key has wrong number of uses");
      for (auto f : k) {
        if (f >= d * d) throw std::out_of_range("Pauli table key out of range");
      }
      if (!std::isfinite(p) || p < -1e-12) {
        throw ParameterError("probabilities", "Pauli table entry is negative");
      }
    }
    if (std::abs(total() - 1.0) > kProbabilityTolerance) {
      throw ParameterError("probabilities", "Pauli table does not sum to 1");
    }
  }

  static PauliTable from_dense(std::size_t d, std::span<const double> q) {
    if (q.size() != d * d) throw DimensionError("single-use table needs d*d entries");
    PauliTable t{d, 1, {}};
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] != 0.0) t.probs[{i}] = q[i];
    }
    t.validate();
    return t;
  }
};

inline void check_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw ParameterError(name, "must lie in [0,1]");
}

/// q_00 = 1 - p + p/d^2, every other entry p/d^2.
inline PauliTable depolarising_probs(std::size_t d, double p) {
  check_unit_interval(p, "p");
  std::vector<double> q(d * d, p / static_cast<double>(d * d));
  q[0] = 1.0 - p + p / static_cast<double>(d * d);
  return PauliTable::from_dense(d, q);
}

/// q_mn = (1-p)/d for m = 0, p/(d(d-1)) otherwise.
inline PauliTable quasiclassical_probs(std::size_t d, double p) {
  check_unit_interval(p, "p");
  if (d < 2) throw DimensionError("quasi-classical channel needs d >= 2");
  const double dd = static_cast<double>(d);
  std::vector<double> q(d * d);
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t n = 0; n < d; ++n) {
      q[m * d + n] = (m == 0) ? (1.0 - p) / dd : p / (dd * (dd - 1.0));
    }
  }
  return PauliTable::from_dense(d, q);
}

/// Qubit table from probabilities indexed by Pauli label (sigma_0..sigma_3).
inline PauliTable sigma_probs(std::span<const double> q4) {
  if (q4.size() != 4) throw DimensionError("sigma_probs needs 4 probabilities");
  std::vector<double> q(4, 0.0);
  for (std::size_t s = 0; s < 4; ++s) q[pauli_sigma_index(s).flat()] = q4[s];
  return PauliTable::from_dense(2, q);
}

inline PauliTable identity_table(std::size_t d, std::size_t uses = 1) {
  PauliTable t{d, uses, {}};
  t.probs[std::vector<std::size_t>(uses, 0)] = 1.0;
  return t;
}

/// Independent joint table a x b.
inline PauliTable product_table(const PauliTable& a, const PauliTable& b) {
  if (a.d != b.d) throw DimensionError("product_table: dimension mismatch");
  PauliTable t{a.d, a.uses + b.uses, {}};
  for (const auto& [ka, pa] : a.probs) {
    for (const auto& [kb, pb] : b.probs) {
      auto key = ka;
      key.insert(key.end(), kb.begin(), kb.end());
      if (pa * pb != 0.0) t.probs[key] += pa * pb;
    }
  }
  return t;
}

inline PauliTable power_table(const PauliTable& q, std::size_t uses) {
  if (uses == 0) throw ParameterError("uses", "must be at least 1");
  PauliTable t = q;
  for (std::size_t i = 1; i < uses; ++i) t = product_table(t, q);
  return t;
}

/// Same Weyl error on every use, drawn from the single-use table q.
inline PauliTable fully_correlated_table(const PauliTable& q, std::size_t uses) {
  if (q.uses != 1) throw DimensionError("fully_correlated_table expects a single-use table");
  PauliTable t{q.d, uses, {}};
  for (const auto& [k, p] : q.probs) t.probs[std::vector<std::size_t>(uses, k[0])] = p;
  return t;
}

/// q_{mn,m'n'} = (1-mu) q_mn q_m'n' + mu q_mn delta_mm' delta_nn'.
inline PauliTable correlate_pairwise(const PauliTable& q, double mu) {
  check_unit_interval(mu, "mu");
  if (q.uses != 1) throw DimensionError("correlate_pairwise expects a single-use table");
  PauliTable t{q.d, 2, {}};
  for (const auto& [ka, pa] : q.probs) {
    for (const auto& [kb, pb] : q.probs) {
      double v = (1.0 - mu) * pa * pb;
      if (ka[0] == kb[0]) v += mu * pa;
      if (v != 0.0) t.probs[{ka[0], kb[0]}] = v;
    }
  }
  return t;
}

/// Pair (j, l), j < l, for each correlation degree, in the order expected by
/// multiparty_correlated_probs: (0,1), (0,2), ..., (0,P-1), (1,2), ...
inline std::vector<std::pair<std::size_t, std::size_t>> correlation_pairs(std::size_t parties) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < parties; ++j) {
    for (std::size_t l = j + 1; l < parties; ++l) pairs.emplace_back(j, l);
  }
  return pairs;
}

/// Correlated noise over `parties` uses with one correlation degree per pair of
/// uses. A term in which the pairs S are correlated carries
/// prod_{S} mu * prod_{not S} (1 - mu), ties use l to use j for every (j,l) in
/// S, and keeps the single-use factor only for uses that are not tied to an
/// earlier use. Patterns in which this expansion does not normalize (a use tied
/// to two otherwise independent uses with nonzero weight) are rejected.
inline PauliTable multiparty_correlated_probs(const PauliTable& q, std::span<const double> mu,
                                              std::size_t parties) {
  if (q.uses != 1) throw DimensionError("multiparty_correlated_probs expects a single-use table");
  if (parties < 2) throw ParameterError("parties", "must be at least 2");
  const auto pairs = correlation_pairs(parties);
  if (mu.size() != pairs.size()) {
    throw ParameterError("mu", "expected " + std::to_string(pairs.size()) +
                                   " correlation degrees for " + std::to_string(parties) +
                                   " parties");
  }
  for (double m : mu) check_unit_interval(m, "mu");
  const std::size_t d2 = q.d * q.d;
  double tuples = 1.0;
  for (std::size_t i = 0; i < parties; ++i) tuples *= static_cast<double>(d2);
  if (tuples > static_cast<double>(kMaxDimension * kMaxDimension)) {
    throw DimensionError("multiparty table too large");
  }
  if (pairs.size() > 20) throw DimensionError("too many correlation degrees");

  const auto qd = q.dense();
  struct Pattern {
    double weight;
    std::vector<std::pair<std::size_t, std::size_t>> tied;
    std::vector<bool> keep_factor;
  };
  std::vector<Pattern> patterns;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
    Pattern pat{1.0, {}, std::vector<bool>(parties, true)};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (mask & (std::size_t{1} << i)) {
        pat.weight *= mu[i];
        pat.tied.push_back(pairs[i]);
        pat.keep_factor[pairs[i].second] = false;
      } else {
        pat.weight *= 1.0 - mu[i];
      }
    }
    if (pat.weight != 0.0) patterns.push_back(std::move(pat));
  }

  PauliTable t{q.d, parties, {}};
  std::vector<std::size_t> key(parties, 0);
  const auto count = static_cast<std::size_t>(tuples);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t rest = flat;
    for (std::size_t i = parties; i-- > 0;) {
      key[i] = rest % d2;
      rest /= d2;
    }
    double v = 0.0;
    for (const auto& pat : patterns) {
      bool consistent = true;
      for (const auto& [j, l] : pat.tied) {
        if (key[j] != key[l]) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;
      double term = pat.weight;
      for (std::size_t i = 0; i < parties && term != 0.0; ++i) {
        if (pat.keep_factor[i]) term *= qd[key[i]];
      }
      v += term;
    }
    if (v != 0.0) t.probs[key] = v;
  }
  if (std::abs(t.total() - 1.0) > kProbabilityTolerance) {
    throw UnsupportedCorrelation(
        "unsupported correlation pattern: the correlated table sums to " +
        std::to_string(t.total()));
  }
  return t;
}

/// Same degree mu for every pair of uses.
inline PauliTable multiparty_correlated_probs(const PauliTable& q, double mu,
                                              std::size_t parties) {
  const std::vector<double> all(parties * (parties - 1) / 2, mu);
  return multiparty_correlated_probs(q, all, parties);
}

namespace detail {

// Generalized permutation matrix: (K x)_i = phase[i] * x[source[i]].
struct MonomialOp {
  std::vector<std::size_t> source;
  std::vector<Complex> phase;

  // K a K^dagger
  ComplexMatrix conjugate(const ComplexMatrix& a) const {
    const auto n = static_cast<Eigen::Index>(source.size());
    ComplexMatrix out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto sj = static_cast<Eigen::Index>(source[static_cast<std::size_t>(j)]);
      const Complex pj = std::conj(phase[static_cast<std::size_t>(j)]);
      for (Eigen::Index i = 0; i < n; ++i) {
        out(i, j) = phase[static_cast<std::size_t>(i)] * pj *
                    a(static_cast<Eigen::Index>(source[static_cast<std::size_t>(i)]), sj);
      }
    }
    return out;
  }

  void accumulate_conjugate(const ComplexMatrix& a, double weight, ComplexMatrix& out) const {
    const auto n = static_cast<Eigen::Index>(source.size());
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto sj = static_cast<Eigen::Index>(source[static_cast<std::size_t>(j)]);
      const Complex pj = weight * std::conj(phase[static_cast<std::size_t>(j)]);
      for (Eigen::Index i = 0; i < n; ++i) {
        out(i, j) += phase[static_cast<std::size_t>(i)] * pj *
                     a(static_cast<Eigen::Index>(source[static_cast<std::size_t>(i)]), sj);
      }
    }
  }

  ComplexMatrix dense() const {
    const auto n = static_cast<Eigen::Index>(source.size());
    ComplexMatrix k = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      k(i, static_cast<Eigen::Index>(source[static_cast<std::size_t>(i)])) =
          phase[static_cast<std::size_t>(i)];
    }
    return k;
  }
};

// Tensor product of Weyl operators on `subsystems` (identity elsewhere).
inline MonomialOp weyl_product(const Dims& dims, const std::vector<std::size_t>& subsystems,
                               const std::vector<std::size_t>& flat_indices) {
  const auto stride = strides(dims);
  const std::size_t n = product(dims);
  MonomialOp op{std::vector<std::size_t>(n), std::vector<Complex>(n)};
  for (std::size_t row = 0; row < n; ++row) {
    std::size_t src = row;
    Complex ph{1.0};
    for (std::size_t u = 0; u < subsystems.size(); ++u) {
      const std::size_t s = subsystems[u];
      const std::size_t d = dims[s];
      const auto w = WeylIndex::from_flat(flat_indices[u], d);
      const std::size_t digit = (row / stride[s]) % d;
      const std::size_t shifted = (digit + w.m) % d;
      src = src - digit * stride[s] + shifted * stride[s];
      ph *= root_of_unity(digit * w.n, d);
    }
    op.source[row] = src;
    op.phase[row] = ph;
  }
  return op;
}

}  // namespace detail

struct PauliBlock {
  std::vector<std::size_t> subsystems;  // table use i acts on subsystems[i]
  PauliTable table;
};

/// Random-unitary channel built from Weyl operators; unital and covariant under
/// local Weyl conjugations.
class PauliChannel {
 public:
  PauliChannel(Dims dims, std::vector<PauliBlock> blocks, std::size_t sender_count)
      : dims_(std::move(dims)), blocks_(std::move(blocks)), sender_count_(sender_count) {
    if (dims_.empty() || product(dims_) > kMaxDimension) {
      throw DimensionError("channel dimension exceeds " + std::to_string(kMaxDimension));
    }
    if (sender_count_ == 0 || sender_count_ >= dims_.size()) {
      throw DimensionError("sender_count must leave at least one receiver subsystem");
    }
    std::vector<bool> used(dims_.size(), false);
    for (const auto& b : blocks_) {
      b.table.validate();
      if (b.subsystems.size() != b.table.uses) {
        throw DimensionError("Pauli block: table uses do not match subsystem count");
      }
      for (auto s : b.subsystems) {
        if (s >= dims_.size()) throw DimensionError("Pauli block: subsystem out of range");
        if (used[s]) throw DimensionError("Pauli blocks overlap");
        if (dims_[s] != b.table.d) throw DimensionError("Pauli block: dimension mismatch");
        used[s] = true;
      }
    }
    for (const auto& b : blocks_) {
      std::vector<Term> terms;
      for (const auto& [key, p] : b.table.probs) {
        if (p > 0.0) terms.push_back({p, detail::weyl_product(dims_, b.subsystems, key)});
      }
      terms_.push_back(std::move(terms));
    }
  }

  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return product(dims_); }
  std::size_t sender_count() const noexcept { return sender_count_; }
  const std::vector<PauliBlock>& blocks() const noexcept { return blocks_; }

  std::vector<bool> noisy_mask() const {
    std::vector<bool> mask(dims_.size(), false);
    for (const auto& b : blocks_) {
      for (auto s : b.subsystems) mask[s] = true;
    }
    return mask;
  }

  /// Joint table over the noisy subsystems in ascending subsystem order.
  PauliTable joint_table() const {
    std::vector<std::size_t> order;
    for (std::size_t s = 0; s < dims_.size(); ++s) {
      if (noisy_mask()[s]) order.push_back(s);
    }
    if (order.empty()) return identity_table(dims_[0], 0);
    std::size_t d = dims_[order[0]];
    PauliTable joint{d, 0, {{std::vector<std::size_t>{}, 1.0}}};
    std::vector<std::size_t> joint_subsystems;
    for (const auto& b : blocks_) {
      if (b.table.d != d) throw DimensionError("joint_table needs a uniform dimension");
      joint = product_table(joint, b.table);
      joint_subsystems.insert(joint_subsystems.end(), b.subsystems.begin(), b.subsystems.end());
    }
    // Reorder keys to ascending subsystem order.
    std::vector<std::size_t> pos(joint_subsystems.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      pos[i] = static_cast<std::size_t>(
          std::find(joint_subsystems.begin(), joint_subsystems.end(), order[i]) -
          joint_subsystems.begin());
    }
    PauliTable out{d, order.size(), {}};
    for (const auto& [k, p] : joint.probs) {
      std::vector<std::size_t> key(order.size());
      for (std::size_t i = 0; i < order.size(); ++i) key[i] = k[pos[i]];
      out.probs[key] += p;
    }
    return out;
  }

  ComplexMatrix apply(const ComplexMatrix& rho) const {
    if (static_cast<std::size_t>(rho.rows()) != dim()) {
      throw DimensionError("Pauli channel: state dimension mismatch");
    }
    ComplexMatrix cur = rho;
    for (const auto& terms : terms_) {
      ComplexMatrix next = ComplexMatrix::Zero(cur.rows(), cur.cols());
      for (const auto& t : terms) t.op.accumulate_conjugate(cur, t.weight, next);
      cur = std::move(next);
    }
    return cur;
  }

  /// Dense Kraus list sqrt(q) V..., one per nonzero entry of the joint table.
  std::vector<ComplexMatrix> kraus_ops() const {
    std::vector<ComplexMatrix> ops{identity(dim())};
    for (const auto& terms : terms_) {
      std::vector<ComplexMatrix> next;
      for (const auto& k : ops) {
        for (const auto& t : terms) next.push_back(std::sqrt(t.weight) * t.op.dense() * k);
      }
      ops = std::move(next);
    }
    return ops;
  }

 private:
  struct Term {
    double weight;
    detail::MonomialOp op;
  };

  Dims dims_;
  std::vector<PauliBlock> blocks_;
  std::size_t sender_count_;
  std::vector<std::vector<Term>> terms_;
};

/// General CPTP map given by square Kraus operators on `dims`.
class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> ops, Dims dims)
      : ops_(std::move(ops)), dims_(std::move(dims)) {
    if (ops_.empty()) throw InvalidMatrix("Kraus channel needs at least one operator");
    const auto n = static_cast<Eigen::Index>(product(dims_));
    for (const auto& k : ops_) {
      if (k.rows() != n || k.cols() != n) throw DimensionError("Kraus operator has wrong shape");
    }
    if (const double r = completeness_residual(); r > 1e-9) {
      throw InvalidMatrix("Kraus operators are not complete (residual " + std::to_string(r) +
                          ")");
    }
  }

  static KrausChannel identity_map(Dims dims) {
    const auto n = product(dims);
    return {{identity(n)}, std::move(dims)};
  }

  static KrausChannel unitary(ComplexMatrix u, Dims dims) {
    return {{std::move(u)}, std::move(dims)};
  }

  const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return product(dims_); }

  double completeness_residual() const {
    ComplexMatrix sum = ComplexMatrix::Zero(ops_[0].cols(), ops_[0].cols());
    for (const auto& k : ops_) sum += k.adjoint() * k;
    return max_abs(sum - identity(static_cast<std::size_t>(sum.rows())));
  }

  /// Choi matrix sum_ij |i><j| (x) Gamma(|i><j|).
  ComplexMatrix choi_matrix() const {
    const auto n = static_cast<Eigen::Index>(dim());
    ComplexMatrix choi = ComplexMatrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        e(i, j) = 1.0;
        choi.block(i * n, j * n, n, n) = apply(e);
      }
    }
    return choi;
  }

  /// U after this map: Kraus operators U K.
  KrausChannel followed_by(const ComplexMatrix& u) const {
    std::vector<ComplexMatrix> ops;
    ops.reserve(ops_.size());
    for (const auto& k : ops_) ops.push_back(u * k);
    return {std::move(ops), dims_};
  }

  ComplexMatrix apply(const ComplexMatrix& rho) const {
    if (rho.rows() != ops_[0].cols()) throw DimensionError("Kraus channel: dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& k : ops_) out.noalias() += k * rho * k.adjoint();
    return out;
  }

  /// Acts on the leading subsystems of `rho` whose dimensions equal dims().
  DensityMatrix apply_on_leading(const DensityMatrix& rho) const {
    const auto& rd = rho.dims();
    if (rd.size() < dims_.size() || !std::equal(dims_.begin(), dims_.end(), rd.begin())) {
      throw DimensionError("encoding dimensions do not match the leading subsystems");
    }
    const std::size_t rest = rho.dim() / dim();
    const auto n = static_cast<Eigen::Index>(dim());
    const auto r = static_cast<Eigen::Index>(rest);
    // (K (x) I) rho (K (x) I)^dagger, block-wise over the leading index.
    ComplexMatrix out = ComplexMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (const auto& k : ops_) {
      ComplexMatrix left = ComplexMatrix::Zero(n * r, n * r);  // (K (x) I) rho
      for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
          if (k(a, b) == Complex{0.0}) continue;
          left.middleRows(a * r, r) += k(a, b) * rho.matrix().middleRows(b * r, r);
        }
      }
      for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
          if (k(a, b) == Complex{0.0}) continue;
          out.middleCols(a * r, r) += std::conj(k(a, b)) * left.middleCols(b * r, r);
        }
      }
    }
    return DensityMatrix::unchecked(std::move(out), rd);
  }

 private:
  std::vector<ComplexMatrix> ops_;
  Dims dims_;
};

using Channel = std::variant<PauliChannel, KrausChannel>;

inline const Dims& channel_dims(const Channel& ch) {
  return std::visit([](const auto& c) -> const Dims& { return c.dims(); }, ch);
}

inline std::size_t channel_sender_count(const Channel& ch) {
  if (const auto* p = std::get_if<PauliChannel>(&ch)) return p->sender_count();
  return channel_dims(ch).size() - 1;
}

inline DensityMatrix apply_channel(const Channel& ch, const DensityMatrix& rho) {
  if (channel_dims(ch) != rho.dims()) throw DimensionError("channel and state dims differ");
  auto out = std::visit([&](const auto& c) { return c.apply(rho.matrix()); }, ch);
  return DensityMatrix::unchecked(std::move(out), rho.dims());
}

template <class C>
  requires std::same_as<C, PauliChannel> || std::same_as<C, KrausChannel>
inline DensityMatrix apply_channel(const C& ch, const DensityMatrix& rho) {
  if (ch.dims() != rho.dims()) throw DimensionError("channel and state dims differ");
  return DensityMatrix::unchecked(ch.apply(rho.matrix()), rho.dims());
}

// ---- constructors for the channel families ----

/// Single block over the subsystems flagged in `noisy_mask`.
inline PauliChannel pauli_channel(Dims dims, PauliTable table, const std::vector<bool>& noisy_mask,
                                  std::optional<std::size_t> sender_count = std::nullopt) {
  if (noisy_mask.size() != dims.size()) throw DimensionError("noisy_mask length mismatch");
  std::vector<std::size_t> subsystems;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (noisy_mask[s]) subsystems.push_back(s);
  }
  const std::size_t senders = sender_count.value_or(dims.size() - 1);
  std::vector<PauliBlock> blocks;
  if (!subsystems.empty()) blocks.push_back({std::move(subsystems), std::move(table)});
  return {std::move(dims), std::move(blocks), senders};
}

enum class Side { sender, receiver };

/// Noise on one half of a d x d bipartite system.
inline PauliChannel one_sided(const PauliTable& q, std::size_t d, Side side) {
  if (q.uses != 1 || q.d != d) throw DimensionError("one_sided expects a single-use d table");
  const std::size_t s = side == Side::sender ? 0 : 1;
  return {{d, d}, {PauliBlock{{s}, q}}, 1};
}

/// Independent noise on both halves.
inline PauliChannel two_sided_uncorrelated(const PauliTable& qa, const PauliTable& qb,
                                           std::size_t d) {
  return {{d, d}, {PauliBlock{{0}, qa}, PauliBlock{{1}, qb}}, 1};
}

inline PauliChannel two_sided_depolarising(std::size_t d, double p) {
  const auto q = depolarising_probs(d, p);
  return two_sided_uncorrelated(q, q, d);
}

/// Two-use correlated channel on a d x d system from a two-use table.
inline PauliChannel two_sided_correlated(const PauliTable& q2) {
  if (q2.uses != 2) throw DimensionError("two_sided_correlated expects a two-use table");
  return {{q2.d, q2.d}, {PauliBlock{{0, 1}, q2}}, 1};
}

/// Qubit quasi-classical channel on both halves with correlation degree mu.
inline PauliChannel quasiclassical_correlated(double p, double mu) {
  return two_sided_correlated(correlate_pairwise(quasiclassical_probs(2, p), mu));
}

/// Same Weyl error on every subsystem of `dims` (uniform dimension).
inline PauliChannel fully_correlated(const PauliTable& q, const Dims& dims,
                                     std::optional<std::size_t> sender_count = std::nullopt) {
  std::vector<bool> mask(dims.size(), true);
  return pauli_channel(dims, fully_correlated_table(q, dims.size()), mask, sender_count);
}

/// Independent depolarising noise on every subsystem.
inline PauliChannel uncorrelated_depolarising(const Dims& dims, double p,
                                              std::size_t sender_count) {
  std::vector<PauliBlock> blocks;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    blocks.push_back({{s}, depolarising_probs(dims[s], p)});
  }
  return {dims, std::move(blocks), sender_count};
}

/// Layout [a_1..a_k, b_1..b_k] with a k-use table acting on the senders only.
inline PauliChannel senders_only(const PauliTable& table, std::size_t d, std::size_t k) {
  if (table.uses != k || table.d != d) throw DimensionError("senders_only: table shape mismatch");
  std::vector<bool> mask(2 * k, false);
  for (std::size_t i = 0; i < k; ++i) mask[i] = true;
  return pauli_channel(Dims(2 * k, d), table, mask, k);
}

// ---- structural checks ----

/// (1/d^2) sum_mn V_mn xi V_mn^dagger.
inline ComplexMatrix twirl(const ComplexMatrix& xi, std::size_t d) {
  if (static_cast<std::size_t>(xi.rows()) != d || xi.rows() != xi.cols()) {
    throw DimensionError("twirl: operator must be d x d");
  }
  ComplexMatrix out = ComplexMatrix::Zero(xi.rows(), xi.cols());
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t n = 0; n < d; ++n) {
      const auto v = weyl_op({m, n, d});
      out += v * xi * v.adjoint();
    }
  }
  return out / static_cast<double>(d * d);
}

/// Every tensor product of Weyl operators on the first `senders` subsystems,
/// identity on the rest.
inline std::vector<detail::MonomialOp> sender_weyl_ops(const Dims& dims, std::size_t senders) {
  std::vector<std::size_t> subsystems(senders);
  std::iota(subsystems.begin(), subsystems.end(), std::size_t{0});
  std::size_t count = 1;
  for (std::size_t s = 0; s < senders; ++s) count *= dims[s] * dims[s];
  std::vector<detail::MonomialOp> ops;
  ops.reserve(count);
  std::vector<std::size_t> key(senders, 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t rest = flat;
    for (std::size_t s = senders; s-- > 0;) {
      key[s] = rest % (dims[s] * dims[s]);
      rest /= dims[s] * dims[s];
    }
    ops.push_back(detail::weyl_product(dims, subsystems, key));
  }
  return ops;
}

/// max |L(V rho V^dagger) - V L(rho) V^dagger| over random states and all
/// sender-side Weyl products V.
inline double verify_covariance(const Channel& ch, std::uint64_t seed, std::size_t samples = 4,
                                std::optional<std::size_t> senders = std::nullopt) {
  const auto& dims = channel_dims(ch);
  const auto ops = sender_weyl_ops(dims, senders.value_or(channel_sender_count(ch)));
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = derived_rng(seed, s);
    const auto rho = random_density_matrix(dims, rng);
    const auto out = apply_channel(ch, rho).matrix();
    for (const auto& v : ops) {
      const auto shifted = DensityMatrix::unchecked(v.conjugate(rho.matrix()), dims);
      const auto lhs = apply_channel(ch, shifted).matrix();
      worst = std::max(worst, max_abs(lhs - v.conjugate(out)));
    }
  }
  return worst;
}

}  // namespace sdc
