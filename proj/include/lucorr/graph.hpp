#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lucorr/correlation.hpp"
#include "lucorr/error.hpp"
#include "lucorr/party_set.hpp"
#include "lucorr/pauli.hpp"
#include "lucorr/state.hpp"
#include "lucorr/walsh_hadamard.hpp"

namespace lucorr {

/// Dense state vectors and matrices for graph states are limited to this many
/// qubits; the stabilizer routines go further.
inline constexpr std::size_t graph_dense_ceiling = 12;
/// Enumerating all 2^n stabilizer elements is limited to this many qubits.
inline constexpr std::size_t graph_enumeration_ceiling = 26;

/// Simple undirected graph on vertices 0..n-1, adjacency stored as one bitmask
/// row per vertex.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : rows_(n, 0) {
    if (n < 1 || n > max_parties) fail(ErrorKind::out_of_range, "graph must have 1..64 vertices");
  }

  static Graph star(std::size_t n) {
    Graph g(n);
    for (std::size_t b = 1; b < n; ++b) g.add_edge(0, b);
    return g;
  }
  static Graph path(std::size_t n) {
    Graph g(n);
    for (std::size_t a = 0; a + 1 < n; ++a) g.add_edge(a, a + 1);
    return g;
  }
  static Graph ring(std::size_t n) {
    Graph g = path(n);
    if (n > 2) g.add_edge(n - 1, 0);
    return g;
  }
  static Graph complete(std::size_t n) {
    Graph g(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) g.add_edge(a, b);
    return g;
  }
  /// Erdos-Renyi G(n, p).
  template <class Engine>
  static Graph random(std::size_t n, double p, Engine& rng) {
    Graph g(n);
    std::bernoulli_distribution coin(p);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (coin(rng)) g.add_edge(a, b);
    return g;
  }

  void add_edge(std::size_t a, std::size_t b) {
    if (a >= size() || b >= size()) fail(ErrorKind::out_of_range, "edge endpoint outside the graph");
    if (a == b) fail(ErrorKind::out_of_range, "self loops are not allowed");
    rows_[a] |= std::uint64_t{1} << b;
    rows_[b] |= std::uint64_t{1} << a;
  }

  std::size_t size() const { return rows_.size(); }
  bool adjacent(std::size_t a, std::size_t b) const { return (rows_.at(a) >> b) & 1U; }
  std::uint64_t neighbors(std::size_t a) const { return rows_.at(a); }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (auto r : rows_) e += static_cast<std::size_t>(std::popcount(r));
    return e / 2;
  }

 private:
  std::vector<std::uint64_t> rows_;
};

/// Generators K_a = X_a prod_{b in N_a} Z_b.
inline std::vector<PauliProduct> stabilizer_generators(const Graph& g) {
  std::vector<PauliProduct> out;
  for (std::size_t a = 0; a < g.size(); ++a) out.emplace_back(g.size(), std::uint64_t{1} << a, g.neighbors(a));
  return out;
}

/// sigma_nu = prod_{a in nu} K_a with its exact sign.
inline PauliProduct stabilizer_element(const Graph& g, std::uint64_t nu) {
  PauliProduct p = PauliProduct::identity(g.size());
  for (std::size_t a = 0; a < g.size(); ++a)
    if ((nu >> a) & 1U) p = p * PauliProduct(g.size(), std::uint64_t{1} << a, g.neighbors(a));
  return p;
}

/// Support of sigma_nu: nu | (xor of the neighbourhoods of nu).
inline std::uint64_t stabilizer_support(const Graph& g, std::uint64_t nu) {
  std::uint64_t z = 0;
  for (std::uint64_t m = nu; m != 0; m &= m - 1) z ^= g.neighbors(static_cast<std::size_t>(std::countr_zero(m)));
  return nu | z;
}

/// Converts between party masks (bit a = party a) and the integer labels
/// used for graph-basis weights, where party 0 is the most significant bit.
inline std::uint64_t mask_to_label(std::uint64_t mask, std::size_t n) {
  std::uint64_t out = 0;
  for (std::size_t a = 0; a < n; ++a)
    if ((mask >> a) & 1U) out |= std::uint64_t{1} << (n - 1 - a);
  return out;
}
inline std::uint64_t label_to_mask(std::uint64_t label, std::size_t n) { return mask_to_label(label, n); }

/// |G> = prod_{(a,b) in E} CZ_ab |+>^n.
inline Eigen::VectorXcd graph_state_vector(const Graph& g) {
  const std::size_t n = g.size();
  if (n > graph_dense_ceiling) fail(ErrorKind::resource_cap, "dense graph state beyond 12 qubits");
  const std::size_t d = std::size_t{1} << n;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d));
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    const std::uint64_t ones = label_to_mask(j, n);
    std::size_t edges = 0;
    for (std::uint64_t m = ones; m != 0; m &= m - 1)
      edges += static_cast<std::size_t>(std::popcount(g.neighbors(static_cast<std::size_t>(std::countr_zero(m))) & ones));
    v(static_cast<Eigen::Index>(j)) = (edges / 2) % 2 == 0 ? amp : -amp;
  }
  return v;
}

/// Graph basis vector |psi_mu> = Z^mu |G>; mu is a label (party 0 = MSB).
inline Eigen::VectorXcd graph_basis_vector(const Graph& g, std::uint64_t mu) {
  Eigen::VectorXcd v = graph_state_vector(g);
  for (Eigen::Index j = 0; j < v.size(); ++j)
    if (std::popcount(static_cast<std::uint64_t>(j) & mu) % 2) v(j) = -v(j);
  return v;
}

inline DensityMatrix graph_state(const Graph& g) {
  return pure_state(graph_state_vector(g), Dims(g.size(), 2));
}

/// (1/2^n) sum_nu sign(nu) sigma_nu, the stabilizer-sum form of |G><G|.
inline DensityMatrix graph_state_from_stabilizers(const Graph& g) {
  const std::size_t n = g.size();
  if (n > 10) fail(ErrorKind::resource_cap, "stabilizer sum beyond 10 qubits");
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (std::uint64_t nu = 0; nu < (std::uint64_t{1} << n); ++nu) m += stabilizer_element(g, nu).dense();
  return DensityMatrix(m / static_cast<double>(d), Dims(n, 2));
}

/// Histogram over supports: entry S counts the stabilizer elements whose
/// support is exactly S, i.e. L_S(|G><G|) = |S_G intersect B_S|.
/// Gray-code walk over nu, O(2^n).
inline std::vector<std::uint32_t> graph_strengths(const Graph& g) {
  const std::size_t n = g.size();
  if (n > graph_enumeration_ceiling) fail(ErrorKind::resource_cap, "stabilizer enumeration beyond 26 qubits");
  std::vector<std::uint32_t> counts(std::size_t{1} << n, 0);
  std::uint64_t nu = 0;
  std::uint64_t z = 0;
  counts[0] = 1;
  for (std::uint64_t k = 1; k < counts.size(); ++k) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(k));
    nu ^= std::uint64_t{1} << bit;
    z ^= g.neighbors(bit);
    ++counts[nu | z];
  }
  return counts;
}

/// |S_G intersect B_S| for one subset.
inline std::uint64_t graph_strength(const Graph& g, PartySet s) {
  check_parties(s, g.size());
  const std::size_t n = g.size();
  if (n > graph_enumeration_ceiling) fail(ErrorKind::resource_cap, "stabilizer enumeration beyond 26 qubits");
  // supp(sigma_nu) contains nu, so only nu subset of S can qualify
  std::uint64_t count = 0;
  const std::uint64_t smask = s.mask();
  for (std::uint64_t nu = smask;; nu = (nu - 1) & smask) {
    if (stabilizer_support(g, nu) == smask) ++count;
    if (nu == 0) break;
  }
  return count;
}

/// Rank over GF(2) of a set of bit rows.
inline std::size_t gf2_rank(std::vector<std::uint64_t> rows) {
  std::size_t rank = 0;
  for (std::size_t bit = 0; bit < 64 && rank < rows.size(); ++bit) {
    const std::uint64_t b = std::uint64_t{1} << bit;
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot] & b)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && (rows[r] & b)) rows[r] ^= rows[rank];
    ++rank;
  }
  return rank;
}

/// Schmidt measure E^{S'}(G) = log2 of the Schmidt rank across (S', complement),
/// equal to the GF(2) rank of the adjacency block between S' and its complement.
inline std::size_t schmidt_measure(const Graph& g, PartySet part) {
  check_parties(part, g.size());
  const std::uint64_t other = part.complement(g.size()).mask();
  std::vector<std::uint64_t> rows;
  for (auto a : part.members()) rows.push_back(g.neighbors(a) & other);
  return gf2_rank(std::move(rows));
}

/// L_S(|G><G|) = sum_{S' subset of S} (-1)^{|S|-|S'|} 2^{|S'| - E^{S'}(G)}.
inline std::int64_t graph_strength_schmidt(const Graph& g, PartySet s) {
  check_parties(s, g.size());
  std::int64_t acc = 0;
  const std::uint64_t smask = s.mask();
  for (std::uint64_t sub = smask;; sub = (sub - 1) & smask) {
    const PartySet part(sub);
    const std::int64_t term = std::int64_t{1} << (part.size() - schmidt_measure(g, part));
    acc += ((s.size() - part.size()) % 2 == 0) ? term : -term;
    if (sub == 0) break;
  }
  return acc;
}

/// graph_strength_schmidt for every subset at once (Moebius transform).
inline std::vector<std::int64_t> graph_strengths_schmidt(const Graph& g) {
  const std::size_t n = g.size();
  if (n > graph_enumeration_ceiling) fail(ErrorKind::resource_cap, "subset sweep beyond 26 qubits");
  std::vector<std::int64_t> f(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < f.size(); ++mask) {
    const PartySet part(mask);
    f[mask] = std::int64_t{1} << (part.size() - schmidt_measure(g, part));
  }
  for (std::size_t bit = 1; bit < f.size(); bit <<= 1)
    for (std::size_t mask = 0; mask < f.size(); ++mask)
      if (mask & bit) f[mask] -= f[mask ^ bit];
  return f;
}

/// Weights p_mu over the graph basis, indexed by label mu (party 0 = MSB).
inline void check_graph_weights(std::span<const double> p, std::size_t n, double tol = 1e-10) {
  if (p.size() != (std::size_t{1} << n))
    fail(ErrorKind::shape, "expected 2^" + std::to_string(n) + " weights, got " + std::to_string(p.size()));
  double total = 0.0;
  for (double w : p) {
    if (w < -tol) fail(ErrorKind::validation, "negative weight " + std::to_string(w));
    total += w;
  }
  if (std::abs(total - 1.0) > tol) fail(ErrorKind::validation, "weights sum to " + std::to_string(total));
}

/// rho_G = sum_mu p_mu |psi_mu><psi_mu|, dense.
inline DensityMatrix graph_diagonal_state(const Graph& g, std::span<const double> p) {
  const std::size_t n = g.size();
  check_graph_weights(p, n);
  if (n > 10) fail(ErrorKind::resource_cap, "dense graph-diagonal state beyond 10 qubits");
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (std::uint64_t mu = 0; mu < p.size(); ++mu) {
    if (p[mu] == 0.0) continue;
    const auto v = graph_basis_vector(g, mu);
    m += p[mu] * v * v.adjoint();
  }
  return DensityMatrix(std::move(m), Dims(n, 2));
}

/// Expectation values <sigma_nu> = sum_mu (-1)^{nu.mu} p_mu for every nu,
/// indexed by label. One Walsh-Hadamard transform, O(n 2^n).
inline std::vector<double> graph_diagonal_expectations(std::span<const double> p) {
  std::vector<double> h(p.begin(), p.end());
  walsh_hadamard(std::span<double>(h));
  return h;
}

/// L_S(rho_G) = sum_{sigma_nu in S_G intersect B_S} <sigma_nu>^2 for every S.
inline std::vector<double> graph_diagonal_strengths(const Graph& g, std::span<const double> p) {
  const std::size_t n = g.size();
  if (n > graph_enumeration_ceiling) fail(ErrorKind::resource_cap, "stabilizer enumeration beyond 26 qubits");
  check_graph_weights(p, n);
  const auto h = graph_diagonal_expectations(p);
  std::vector<double> out(std::size_t{1} << n, 0.0);
  std::uint64_t nu = 0;
  std::uint64_t label = 0;
  std::uint64_t z = 0;
  out[0] = h[0] * h[0];
  for (std::uint64_t k = 1; k < out.size(); ++k) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(k));
    nu ^= std::uint64_t{1} << bit;
    label ^= std::uint64_t{1} << (n - 1 - bit);
    z ^= g.neighbors(bit);
    out[nu | z] += h[label] * h[label];
  }
  return out;
}

inline double graph_diagonal_strength(const Graph& g, std::span<const double> p, PartySet s) {
  const std::size_t n = g.size();
  check_parties(s, n);
  check_graph_weights(p, n);
  const auto h = graph_diagonal_expectations(p);
  double acc = 0.0;
  const std::uint64_t smask = s.mask();
  for (std::uint64_t nu = smask;; nu = (nu - 1) & smask) {
    if (stabilizer_support(g, nu) == smask) {
      const double e = h[mask_to_label(nu, n)];
      acc += e * e;
    }
    if (nu == 0) break;
  }
  return acc;
}

/// Applies D_i(rho) = (rho + K_i rho K_i) / 2 for i = 1..n in turn; the
/// result is diagonal in the graph basis of G with the same diagonal.
inline DensityMatrix graph_depolarize(const DensityMatrix& rho, const Graph& g) {
  if (rho.dims() != Dims(g.size(), 2)) fail(ErrorKind::shape, "state must be on as many qubits as the graph");
  Eigen::MatrixXcd m = rho.matrix();
  for (const auto& k : stabilizer_generators(g)) m = 0.5 * (m + conjugate_by(k, m));
  return DensityMatrix(std::move(m), rho.dims());
}

/// Columns are |psi_mu> in label order.
inline Eigen::MatrixXcd graph_basis(const Graph& g) {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << g.size());
  Eigen::MatrixXcd u(d, d);
  for (Eigen::Index mu = 0; mu < d; ++mu) u.col(mu) = graph_basis_vector(g, static_cast<std::uint64_t>(mu));
  return u;
}

/// Graph file: first token n, then one "a b" pair per edge, 1-indexed.
/// '#' starts a comment.
inline Graph parse_graph(std::istream& in) {
  std::string content;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    content += line + '\n';
  }
  std::istringstream tokens(content);
  long long n = 0;
  if (!(tokens >> n) || n < 1 || n > static_cast<long long>(max_parties))
    fail(ErrorKind::parse, "graph file must start with a vertex count in 1..64");
  Graph g(static_cast<std::size_t>(n));
  long long a = 0;
  long long b = 0;
  while (tokens >> a) {
    if (!(tokens >> b)) fail(ErrorKind::parse, "edge with a single endpoint");
    if (a < 1 || b < 1 || a > n || b > n) fail(ErrorKind::parse, "edge endpoint out of range 1.." + std::to_string(n));
    if (a == b) fail(ErrorKind::parse, "self loop on vertex " + std::to_string(a));
    g.add_edge(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
  }
  if (!tokens.eof()) fail(ErrorKind::parse, "unexpected token in graph file");
  return g;
}

/// Weights file: whitespace-separated reals in label order; '#' starts a comment.
inline std::vector<double> parse_weights(std::istream& in) {
  std::vector<double> out;
  std::string content;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    content += line + '\n';
  }
  std::istringstream tokens(content);
  std::string token;
  while (tokens >> token) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      fail(ErrorKind::parse, "bad weight '" + token + "'");
    }
  }
  if (out.empty() || !std::has_single_bit(out.size())) fail(ErrorKind::parse, "weight count must be a power of two");
  return out;
}

}  // namespace lucorr
