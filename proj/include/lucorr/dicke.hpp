#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Dense>

#include "lucorr/error.hpp"
#include "lucorr/party_set.hpp"
#include "lucorr/state.hpp"

namespace lucorr {

inline constexpr std::size_t dicke_dense_ceiling = 10;

/// Symmetric n-qubit state with m qubits in |1>: the equal superposition of
/// all C(n, m) basis states of Hamming weight m.
struct DickeState {
  std::size_t n = 0;
  std::size_t m = 0;

  DickeState(std::size_t qubits, std::size_t excitations) : n(qubits), m(excitations) {
    if (n < 1) fail(ErrorKind::out_of_range, "Dicke state needs n >= 1");
    if (m > n) fail(ErrorKind::out_of_range, "excitation number m must lie in 0..n");
  }

  /// Amplitude of computational basis state j (party 0 = MSB).
  double amplitude(std::uint64_t j) const {
    if (static_cast<std::size_t>(std::popcount(j)) != m) return 0.0;
    return 1.0 / std::sqrt(binomial(n, m));
  }

  /// Reduced state of any k qubits is sum_j w_j |k, j><k, j| with
  /// hypergeometric weights w_j = C(k, j) C(n-k, m-j) / C(n, m).
  std::vector<double> sector_weights(std::size_t k) const {
    std::vector<double> w(k + 1, 0.0);
    for (std::size_t j = 0; j <= k; ++j) w[j] = binomial(k, j) * binomial(n - k, m - j) / binomial(n, m);
    return w;
  }

  static double binomial(std::size_t a, std::size_t b) {
    if (b > a) return 0.0;
    return std::round(std::exp(std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0)));
  }
};

inline Eigen::VectorXcd dicke_vector(std::size_t n, std::size_t m) {
  const DickeState state(n, m);
  if (n > dicke_dense_ceiling) fail(ErrorKind::resource_cap, "dense Dicke state beyond 10 qubits");
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::VectorXcd v(d);
  for (Eigen::Index j = 0; j < d; ++j) v(j) = state.amplitude(static_cast<std::uint64_t>(j));
  return v;
}

inline DensityMatrix dicke_state(std::size_t n, std::size_t m) { return pure_state(dicke_vector(n, m), Dims(n, 2)); }

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_binomial(std::size_t a, std::size_t b) {
  if (b > a) return 0;
  BigInt out = 1;
  for (std::size_t i = 1; i <= b; ++i) {
    out *= a - b + i;
    out /= i;
  }
  return out;
}

/// Numerator N with L_s = N / C(n, m)^2, exact:
/// N = sum_k (-1)^{s-k} C(s, k) 2^k sum_j (C(k, j) C(n-k, m-j))^2.
inline BigInt dicke_strength_numerator(std::size_t n, std::size_t m, std::size_t s) {
  BigInt total = 0;
  for (std::size_t k = 0; k <= s; ++k) {
    BigInt purity_num = 0;
    for (std::size_t j = 0; j <= std::min(k, m); ++j) {
      const BigInt t = big_binomial(k, j) * big_binomial(n - k, m - j);
      purity_num += t * t;
    }
    BigInt term = big_binomial(s, k) * (BigInt(1) << k) * purity_num;
    if ((s - k) % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

}  // namespace detail

/// L_S of |n, m> for any S with |S| = s, from the reduced purities in the
/// excitation basis. Exact integer arithmetic, so it stays accurate for large n.
inline double dicke_strength(std::size_t n, std::size_t m, std::size_t s) {
  const DickeState state(n, m);
  if (s > n) fail(ErrorKind::out_of_range, "subset size must lie in 0..n");
  using boost::multiprecision::cpp_rational;
  const auto c = detail::big_binomial(n, m);
  const cpp_rational value(detail::dicke_strength_numerator(n, m, s), c * c);
  return value.convert_to<double>();
}

/// Smallest |S| whose W-state strength exceeds the separable bound 1.
/// Compared exactly, so |S| = (n+1)/2 with L_S = 1 does not count.
inline std::size_t w_detection_threshold(std::size_t n) {
  if (n < 2) fail(ErrorKind::out_of_range, "W states need n >= 2");
  const auto c = detail::big_binomial(n, 1);
  for (std::size_t s = 1; s <= n; ++s)
    if (detail::dicke_strength_numerator(n, 1, s) > c * c) return s;
  fail(ErrorKind::numerical_consistency, "W state strength never exceeds 1");
}

}  // namespace lucorr
