#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lucorr/state.hpp"

namespace lucorr {

/// All randomized helpers draw from this engine so that a fixed seed gives
/// bit-identical results.
using Rng = std::mt19937_64;

inline Eigen::MatrixXcd ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < g.cols(); ++c)
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = cplx(re, im);
    }
  return g;
}

/// rho = G G^dagger / tr(G G^dagger) with G a D x rank complex Gaussian matrix.
inline DensityMatrix random_state(const Dims& dims, std::size_t rank, Rng& rng) {
  if (rank < 1) fail(ErrorKind::out_of_range, "rank must be >= 1");
  const auto g = ginibre(dimension_of(dims), rank, rng);
  Eigen::MatrixXcd m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(std::move(m), dims);
}

inline DensityMatrix random_state(const Dims& dims, std::size_t rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_state(dims, rank, rng);
}

inline Eigen::VectorXcd random_ket(std::size_t d, Rng& rng) {
  Eigen::VectorXcd v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal absorbed into Q.
inline Eigen::MatrixXcd random_unitary(std::size_t d, Rng& rng) {
  const auto g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const cplx diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(k) *= diag / mag;
  }
  return q;
}

inline std::vector<Eigen::MatrixXcd> random_local_unitary(const Dims& dims, Rng& rng) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(dims.size());
  for (auto d : dims) out.push_back(random_unitary(d, rng));
  return out;
}

inline std::vector<Eigen::MatrixXcd> random_local_unitary(const Dims& dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_local_unitary(dims, rng);
}

/// |psi_1> (x) ... (x) |psi_n> with each factor Haar-random.
inline Eigen::VectorXcd random_product_ket(const Dims& dims, Rng& rng) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Ones(1);
  for (auto d : dims) {
    const Eigen::VectorXcd f = random_ket(d, rng);
    Eigen::VectorXcd next(out.size() * f.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * f.size(), f.size()) = out(i) * f;
    out = std::move(next);
  }
  return out;
}

/// Convex mixture of `terms` random pure product states with random weights.
inline DensityMatrix random_separable_state(const Dims& dims, std::size_t terms, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(dimension_of(dims));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  double total = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    const double w = uniform(rng) + 1e-3;
    const auto ket = random_product_ket(dims, rng);
    m += w * ket * ket.adjoint();
    total += w;
  }
  return DensityMatrix(m / total, dims);
}

}  // namespace lucorr
