#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lucorr/correlation.hpp"
#include "lucorr/error.hpp"
#include "lucorr/graph.hpp"
#include "lucorr/party_set.hpp"
#include "lucorr/state.hpp"

namespace lucorr {

inline void check_ghz_size(std::size_t n) {
  if (n < 2 || n > 62) fail(ErrorKind::out_of_range, "GHZ family needs 2 <= n <= 62, got " + std::to_string(n));
}

/// (|0...0> + |1...1>) / sqrt(2)
inline Eigen::VectorXcd ghz_vector(std::size_t n) {
  check_ghz_size(n);
  if (n > graph_dense_ceiling) fail(ErrorKind::resource_cap, "dense GHZ state beyond 12 qubits");
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  v(0) = v(d - 1) = 1.0 / std::sqrt(2.0);
  return v;
}

inline DensityMatrix ghz_state(std::size_t n) { return pure_state(ghz_vector(n), Dims(n, 2)); }

/// L_P = 2^{n-1} + [n even]; L_S = [|S| even] for S a proper subset.
inline double ghz_strength(std::size_t n, PartySet s) {
  check_ghz_size(n);
  check_parties(s, n);
  if (s == PartySet::full(n)) return std::ldexp(1.0, static_cast<int>(n - 1)) + (n % 2 == 0 ? 1.0 : 0.0);
  return s.size() % 2 == 0 ? 1.0 : 0.0;
}

/// Weights over the GHZ (star-graph) basis. Label mu: the most significant bit
/// is the phase, the remaining n-1 bits flip qubits 2..n. mu and
/// mu + 2^{n-1} differ only in the relative phase.
struct GhzDiagonalWeights {
  std::size_t n = 0;
  std::vector<double> p;

  void check() const {
    check_ghz_size(n);
    check_graph_weights(p, n);
  }
  std::size_t half() const { return std::size_t{1} << (n - 1); }
};

inline GhzDiagonalWeights ghz_point_weights(std::size_t n, std::uint64_t mu = 0) {
  check_ghz_size(n);
  GhzDiagonalWeights w{n, std::vector<double>(std::size_t{1} << n, 0.0)};
  w.p.at(mu) = 1.0;
  return w;
}

/// Dense GHZ-diagonal state sum_mu p_mu |GHZ_mu><GHZ_mu|. Built from the
/// star-graph basis (vertex 1 is the centre) and Hadamards on qubits 2..n,
/// which map Z^mu |star> to the GHZ vector with those flips and phase.
inline DensityMatrix ghz_diagonal_state(const GhzDiagonalWeights& w) {
  w.check();
  if (w.n > 10) fail(ErrorKind::resource_cap, "dense GHZ-diagonal state beyond 10 qubits");
  const auto star = graph_diagonal_state(Graph::star(w.n), w.p);
  Eigen::MatrixXcd h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  std::vector<Eigen::MatrixXcd> factors(w.n, h);
  factors[0] = Eigen::MatrixXcd::Identity(2, 2);
  return apply_local(star, factors);
}

/// Full-set closed form:
/// L_P = 2^{n-1} sum_{mu < 2^{n-1}} (p_mu - p_{mu+2^{n-1}})^2
///       + [n even] (sum_{mu < 2^{n-1}} (-1)^{|mu|} (p_mu + p_{mu+2^{n-1}}))^2.
/// Proper subsets go through the star-graph transform and never exceed 1.
inline double ghz_diagonal_strength(const GhzDiagonalWeights& w, PartySet s) {
  w.check();
  check_parties(s, w.n);
  if (s != PartySet::full(w.n)) {
    const double value = graph_diagonal_strength(Graph::star(w.n), w.p, s);
    if (value > 1.0 + 1e-9)
      fail(ErrorKind::numerical_consistency, "reduced GHZ-diagonal strength above 1 on " + s.label());
    return value;
  }
  const std::size_t half = w.half();
  double diff = 0.0;
  double alternating = 0.0;
  for (std::size_t mu = 0; mu < half; ++mu) {
    const double dp = w.p[mu] - w.p[mu + half];
    diff += dp * dp;
    const double sum = w.p[mu] + w.p[mu + half];
    alternating += (std::popcount(mu) % 2 == 0) ? sum : -sum;
  }
  double out = static_cast<double>(half) * diff;
  if (w.n % 2 == 0) out += alternating * alternating;
  return out;
}

/// GHZ-diagonal states with p_i = p_{i+2^{n-1}} for i >= 1, parameterized by
/// Delta = p_0 - p_{2^{n-1}} and the 2^{n-1} values lower[i] = p_{i+2^{n-1}}.
struct WernerClassState {
  std::size_t n = 0;
  double delta = 0.0;
  std::vector<double> lower;

  void check(double tol = 1e-10) const {
    check_ghz_size(n);
    if (lower.size() != (std::size_t{1} << (n - 1)))
      fail(ErrorKind::shape, "Werner class needs 2^(n-1) weights, got " + std::to_string(lower.size()));
    if (delta < -tol) fail(ErrorKind::validation, "Delta must be non-negative");
    double total = delta;
    for (double q : lower) {
      if (q < -tol) fail(ErrorKind::validation, "negative weight in Werner class");
      total += 2.0 * q;
    }
    if (std::abs(total - 1.0) > tol) fail(ErrorKind::validation, "Werner weights sum to " + std::to_string(total));
  }

  /// Uniform lower weights (1 - Delta) / 2^n.
  static WernerClassState uniform(std::size_t n, double delta) {
    check_ghz_size(n);
    const std::size_t half = std::size_t{1} << (n - 1);
    return WernerClassState{n, delta, std::vector<double>(half, (1.0 - delta) / static_cast<double>(2 * half))};
  }
};

inline GhzDiagonalWeights werner_class(const WernerClassState& w) {
  w.check();
  const std::size_t half = std::size_t{1} << (w.n - 1);
  GhzDiagonalWeights out{w.n, std::vector<double>(2 * half)};
  for (std::size_t i = 0; i < half; ++i) out.p[i] = out.p[i + half] = w.lower[i];
  out.p[0] += w.delta;
  return out;
}

/// L_P = 2^{n-1} Delta^2 + [n even] (2 sum_i (-1)^{|i|} lower[i] + Delta)^2.
inline double werner_strength(const WernerClassState& w) {
  w.check();
  double out = std::ldexp(w.delta * w.delta, static_cast<int>(w.n - 1));
  if (w.n % 2 == 0) {
    double alternating = 0.0;
    for (std::size_t i = 0; i < w.lower.size(); ++i)
      alternating += (std::popcount(i) % 2 == 0) ? w.lower[i] : -w.lower[i];
    const double t = 2.0 * alternating + w.delta;
    out += t * t;
  }
  return out;
}

/// rho^{T_A} >= 0  iff  Delta <= 2 p_mu, where mu marks the qubits 2..n on the
/// other side of the cut from qubit 1 (A is replaced by its complement when it
/// contains qubit 1; both give the same spectrum).
inline bool werner_ppt(const WernerClassState& w, PartySet a) {
  w.check();
  check_parties(a, w.n);
  if (a.empty() || a == PartySet::full(w.n)) fail(ErrorKind::invalid_cut, "cut must be proper and nonempty");
  if (a.contains(0)) a = a.complement(w.n);
  const std::uint64_t mu = mask_to_label(a.mask(), w.n);
  return w.delta <= 2.0 * w.lower.at(mu);
}

/// p |GHZ><GHZ| + (1 - p) 1/d
inline DensityMatrix noisy_ghz(std::size_t n, double p) {
  if (p < 0.0 || p > 1.0) fail(ErrorKind::out_of_range, "mixing parameter p must lie in [0, 1]");
  const auto pure = ghz_state(n);
  const auto d = static_cast<Eigen::Index>(pure.dimension());
  return DensityMatrix(p * pure.matrix() + (1.0 - p) * Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d),
                       pure.dims());
}

/// Same state in the GHZ-diagonal parameterization.
inline GhzDiagonalWeights noisy_ghz_weights(std::size_t n, double p) {
  if (p < 0.0 || p > 1.0) fail(ErrorKind::out_of_range, "mixing parameter p must lie in [0, 1]");
  check_ghz_size(n);
  GhzDiagonalWeights w{n, std::vector<double>(std::size_t{1} << n, (1.0 - p) / std::ldexp(1.0, static_cast<int>(n)))};
  w.p[0] += p;
  return w;
}

struct NoisyGhzThresholds {
  double criterion;  // L_P > 1 iff p > criterion
  double nppt;       // some cut is NPPT iff p > nppt
};

inline NoisyGhzThresholds noisy_ghz_thresholds(std::size_t n) {
  check_ghz_size(n);
  const double half = std::ldexp(1.0, static_cast<int>(n - 1));
  return {1.0 / std::sqrt(half + (n % 2 == 0 ? 1.0 : 0.0)), 1.0 / (half + 1.0)};
}

/// Upper bound 2^{n-2k+1} on L_P for k-separable GHZ-diagonal states.
inline double k_separability_bound(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) fail(ErrorKind::out_of_range, "k must lie in 1..n");
  return std::ldexp(1.0, static_cast<int>(n) - 2 * static_cast<int>(k) + 1);
}

inline bool compatible_with_k_separability(double full_strength, std::size_t n, std::size_t k,
                                           double tol = default_exceed_tolerance) {
  return full_strength <= k_separability_bound(n, k) + tol;
}

/// Delta_c = 1 / (m + 1): a state with at least m positive partial
/// transposes has L_P < L_P(Delta_c).
inline double m_ppt_bound(std::size_t m) {
  if (m < 1) fail(ErrorKind::out_of_range, "m must be >= 1");
  return 1.0 / static_cast<double>(m + 1);
}

}  // namespace lucorr
