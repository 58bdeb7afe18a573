#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "lucorr/error.hpp"
#include "lucorr/operator_basis.hpp"
#include "lucorr/party_set.hpp"

namespace lucorr {

/// n-qubit Pauli operator i^phase * P_1 (x) ... (x) P_n in binary-symplectic
/// form: on qubit a (bit a of the masks) the factor is
/// I (x=0,z=0), X (1,0), Z (0,1) or Y (1,1).
/// Stabilizer elements are hermitian, so their phase is 0 or 2 (sign +1/-1).
class PauliProduct {
 public:
  PauliProduct() = default;
  PauliProduct(std::size_t qubits, std::uint64_t x, std::uint64_t z, unsigned phase = 0)
      : qubits_(qubits), x_(x), z_(z), phase_(phase % 4) {
    if (qubits > max_parties) fail(ErrorKind::out_of_range, "too many qubits");
    const std::uint64_t valid = PartySet::full(qubits).mask();
    if ((x & ~valid) || (z & ~valid)) fail(ErrorKind::out_of_range, "Pauli bits outside the register");
  }

  static PauliProduct identity(std::size_t qubits) { return PauliProduct(qubits, 0, 0); }

  std::size_t qubits() const { return qubits_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }
  unsigned phase() const { return phase_; }
  bool hermitian() const { return phase_ % 2 == 0; }
  /// +1 or -1; throws for the anti-hermitian phases +-i.
  int sign() const {
    if (!hermitian()) fail(ErrorKind::numerical_consistency, "Pauli product has an imaginary phase");
    return phase_ == 0 ? 1 : -1;
  }
  PartySet support() const { return PartySet(x_ | z_); }

  /// Per-qubit factor as a basis index: 0 = I, 1 = X, 2 = Y, 3 = Z.
  std::size_t factor(std::size_t a) const {
    const bool xa = (x_ >> a) & 1U;
    const bool za = (z_ >> a) & 1U;
    if (xa && za) return 2;
    if (xa) return 1;
    if (za) return 3;
    return 0;
  }

  bool commutes_with(const PauliProduct& o) const {
    return (std::popcount((x_ & o.z_) ^ (z_ & o.x_)) % 2) == 0;
  }

  /// Matrix product this * other, tracking the phase exactly.
  friend PauliProduct operator*(const PauliProduct& a, const PauliProduct& b) {
    if (a.qubits_ != b.qubits_) fail(ErrorKind::shape, "Pauli products on different registers");
    // With Y = i X Z every factor is i^{#Y} X^x Z^z; moving Z^{z_a} past X^{x_b}
    // costs (-1)^{|z_a & x_b|}.
    const unsigned ya = static_cast<unsigned>(std::popcount(a.x_ & a.z_));
    const unsigned yb = static_cast<unsigned>(std::popcount(b.x_ & b.z_));
    const std::uint64_t x = a.x_ ^ b.x_;
    const std::uint64_t z = a.z_ ^ b.z_;
    const unsigned y = static_cast<unsigned>(std::popcount(x & z));
    const unsigned swaps = static_cast<unsigned>(std::popcount(a.z_ & b.x_));
    const unsigned phase = (a.phase_ + b.phase_ + ya + yb + 2 * swaps + 4 * 64 - y) % 4;
    return PauliProduct(a.qubits_, x, z, phase);
  }

  /// P|j> = amplitude(j) |j xor flips()> for computational basis index j
  /// (qubit 0 is the most significant bit of j).
  std::size_t flips() const { return reverse_mask(x_); }
  cplx amplitude(std::size_t j) const {
    static const cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    unsigned p = phase_;
    for (std::size_t a = 0; a < qubits_; ++a) {
      const bool bit = (j >> (qubits_ - 1 - a)) & 1U;
      const bool xa = (x_ >> a) & 1U;
      const bool za = (z_ >> a) & 1U;
      if (za && bit) p += 2;    // Z|1> = -|1>, Y|1> = -i|0>
      if (xa && za) p += 1;     // Y|b> = i (-1)^b |1-b>
    }
    return powers[p % 4];
  }

  Eigen::MatrixXcd dense() const {
    if (qubits_ > 14) fail(ErrorKind::resource_cap, "dense Pauli matrix beyond 14 qubits");
    const std::size_t d = std::size_t{1} << qubits_;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const std::size_t f = flips();
    for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(j ^ f), static_cast<Eigen::Index>(j)) = amplitude(j);
    return m;
  }

  /// "+XZI" style label, qubit 0 first.
  std::string label() const {
    static const char names[4] = {'I', 'X', 'Y', 'Z'};
    static const char* prefixes[4] = {"+", "+i", "-", "-i"};
    std::string out = prefixes[phase_];
    for (std::size_t a = 0; a < qubits_; ++a) out += names[factor(a)];
    return out;
  }

  friend bool operator==(const PauliProduct&, const PauliProduct&) = default;

 private:
  std::size_t reverse_mask(std::uint64_t m) const {
    std::size_t out = 0;
    for (std::size_t a = 0; a < qubits_; ++a)
      if ((m >> a) & 1U) out |= std::size_t{1} << (qubits_ - 1 - a);
    return out;
  }

  std::size_t qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  unsigned phase_ = 0;
};

/// P rho P^dagger for a dense 2^n x 2^n matrix, without forming P.
inline Eigen::MatrixXcd conjugate_by(const PauliProduct& p, const Eigen::MatrixXcd& m) {
  const std::size_t d = static_cast<std::size_t>(m.rows());
  if (d != (std::size_t{1} << p.qubits())) fail(ErrorKind::shape, "matrix size does not match the Pauli register");
  const std::size_t f = p.flips();
  std::vector<cplx> amp(d);
  for (std::size_t j = 0; j < d; ++j) amp[j] = p.amplitude(j);
  Eigen::MatrixXcd out(m.rows(), m.cols());
  // (P m P^dag)[r, c] = amp(r^f) m[r^f, c^f] conj(amp(c^f))
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t r = 0; r < d; ++r)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          amp[r ^ f] * m(static_cast<Eigen::Index>(r ^ f), static_cast<Eigen::Index>(c ^ f)) * std::conj(amp[c ^ f]);
  return out;
}

}  // namespace lucorr
