#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lucorr/error.hpp"
#include "lucorr/operator_basis.hpp"
#include "lucorr/party_set.hpp"

namespace lucorr {

/// Tolerances used when deciding whether a matrix is a density matrix.
struct StateTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double min_eigenvalue = -1e-10;
  double imaginary_residue = 1e-10;
};

/// A complex D x D matrix together with its tensor-product structure.
/// Construction checks only the shape; call validate() for the physical
/// constraints (hermitian, unit trace, PSD).
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(Eigen::MatrixXcd data, Dims dims) : data_(std::move(data)), dims_(std::move(dims)) {
    if (dims_.empty()) fail(ErrorKind::shape, "at least one party is required");
    if (dims_.size() > max_parties) fail(ErrorKind::shape, "too many parties");
    for (auto d : dims_)
      if (d < 2) fail(ErrorKind::invalid_dimension, "party dimension must be >= 2");
    if (data_.rows() != data_.cols()) fail(ErrorKind::shape, "matrix is not square");
    if (static_cast<std::size_t>(data_.rows()) != dimension_of(dims_))
      fail(ErrorKind::shape, "matrix size " + std::to_string(data_.rows()) + " does not match product of dims " +
                                 std::to_string(dimension_of(dims_)));
  }

  const Eigen::MatrixXcd& matrix() const { return data_; }
  const Dims& dims() const { return dims_; }
  std::size_t parties() const { return dims_.size(); }
  std::size_t dimension() const { return static_cast<std::size_t>(data_.rows()); }

 private:
  Eigen::MatrixXcd data_;
  Dims dims_;
};

/// |psi><psi| / <psi|psi>
inline DensityMatrix pure_state(const Eigen::VectorXcd& ket, Dims dims) {
  const double norm2 = ket.squaredNorm();
  if (norm2 <= 0.0) fail(ErrorKind::numerical_consistency, "zero state vector");
  return DensityMatrix(ket * ket.adjoint() / norm2, std::move(dims));
}

inline DensityMatrix maximally_mixed(Dims dims) {
  const auto d = static_cast<Eigen::Index>(dimension_of(dims));
  return DensityMatrix(Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d), std::move(dims));
}

inline double min_eigenvalue(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

struct ValidationReport {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
  StateTolerances tolerances{};

  bool hermitian() const { return hermiticity_defect <= tolerances.hermiticity; }
  bool unit_trace() const { return trace_defect <= tolerances.trace; }
  bool positive() const { return min_eigenvalue >= tolerances.min_eigenvalue; }
  bool passed() const { return hermitian() && unit_trace() && positive(); }

  /// Names every violated invariant, empty when passed().
  std::string failure_message() const {
    std::ostringstream os;
    if (!hermitian()) os << "hermiticity defect " << hermiticity_defect << "; ";
    if (!unit_trace()) os << "trace defect " << trace_defect << "; ";
    if (!positive()) os << "negative eigenvalue " << min_eigenvalue << "; ";
    auto s = os.str();
    if (s.size() >= 2) s.resize(s.size() - 2);
    return s;
  }
};

inline ValidationReport validate(const DensityMatrix& rho, const StateTolerances& tol = {}) {
  const auto& m = rho.matrix();
  ValidationReport report;
  report.tolerances = tol;
  report.hermiticity_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  report.trace_defect = std::abs(m.trace() - cplx(1.0, 0.0));
  // eigenvalues of the hermitian part; a non-hermitian input already fails above
  report.min_eigenvalue = min_eigenvalue(0.5 * (m + m.adjoint()));
  return report;
}

inline void require_valid(const DensityMatrix& rho, const StateTolerances& tol = {}) {
  const auto report = validate(rho, tol);
  if (!report.passed()) fail(ErrorKind::validation, "not a density matrix: " + report.failure_message());
}

/// Real coefficients c_{i_1...i_n} of a state in the product basis, stored
/// densely in lexicographic multi-index order.
class CorrelationTensor {
 public:
  CorrelationTensor() = default;
  explicit CorrelationTensor(Dims dims) : dims_(std::move(dims)) {
    std::size_t count = 1;
    for (auto d : dims_) count *= d * d;
    values_.assign(count, 0.0);
  }

  const Dims& dims() const { return dims_; }
  std::size_t parties() const { return dims_.size(); }
  std::size_t size() const { return values_.size(); }

  double at(const MultiIndex& idx) const { return values_[idx.linear()]; }
  void set(const MultiIndex& idx, double value) { values_[idx.linear()] = value; }
  double at_linear(std::size_t linear) const { return values_.at(linear); }
  void set_linear(std::size_t linear, double value) { values_.at(linear) = value; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  Dims dims_;
  std::vector<double> values_;
};

/// c = tr(rho sigma_idx). Throws when the imaginary residue exceeds the
/// tolerance, which signals a non-hermitian input.
inline double coefficient(const DensityMatrix& rho, const MultiIndex& idx, const StateTolerances& tol = {}) {
  if (idx.dims() != rho.dims()) fail(ErrorKind::shape, "multi-index dims do not match the state");
  const auto& m = rho.matrix();
  cplx acc(0.0, 0.0);
  for_each_basis_nonzero(idx, [&](std::size_t row, std::size_t col, cplx value) {
    acc += value * m(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(row));
  });
  if (std::abs(acc.imag()) > tol.imaginary_residue)
    fail(ErrorKind::numerical_consistency,
         "coefficient has imaginary part " + std::to_string(acc.imag()) + " (input not hermitian?)");
  return acc.real();
}

/// Full tomographic expansion; coefficients are filled in lexicographic order.
inline CorrelationTensor expand(const DensityMatrix& rho, const StateTolerances& tol = {}) {
  CorrelationTensor t(rho.dims());
  for (std::size_t k = 0; k < t.size(); ++k)
    t.set_linear(k, coefficient(rho, MultiIndex::from_linear(k, rho.dims()), tol));
  return t;
}

/// rho = (1/d) sum_idx c_idx sigma_idx. The result is not validated; a tensor
/// that is not a state yields a matrix whose validate() fails.
inline DensityMatrix reconstruct(const CorrelationTensor& t) {
  const auto d = dimension_of(t.dims());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double c = t.at_linear(k);
    if (c == 0.0) continue;
    for_each_basis_nonzero(MultiIndex::from_linear(k, t.dims()), [&](std::size_t row, std::size_t col, cplx value) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += c * value;
    });
  }
  return DensityMatrix(m / static_cast<double>(d), t.dims());
}

namespace detail {

/// Place values of each party in a basis index (party 0 most significant).
inline std::vector<std::size_t> strides(const Dims& dims) {
  std::vector<std::size_t> s(dims.size());
  std::size_t acc = 1;
  for (std::size_t a = dims.size(); a-- > 0;) {
    s[a] = acc;
    acc *= dims[a];
  }
  return s;
}

/// For every basis index, the contribution of the digits of parties in S.
inline std::vector<std::size_t> subset_offsets(const Dims& dims, PartySet s) {
  const auto st = strides(dims);
  const std::size_t d = dimension_of(dims);
  std::vector<std::size_t> out(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t off = 0;
    for (auto a : s.members()) off += ((i / st[a]) % dims[a]) * st[a];
    out[i] = off;
  }
  return out;
}

/// Compressed index of the digits of parties in S, in party order.
inline std::vector<std::size_t> subset_labels(const Dims& dims, PartySet s) {
  const auto st = strides(dims);
  const std::size_t d = dimension_of(dims);
  std::vector<std::size_t> out(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t label = 0;
    for (auto a : s.members()) label = label * dims[a] + (i / st[a]) % dims[a];
    out[i] = label;
  }
  return out;
}

}  // namespace detail

/// rho_S = tr_{complement of S} rho, with dims restricted to S.
inline DensityMatrix partial_trace(const DensityMatrix& rho, PartySet keep) {
  check_parties(keep, rho.parties());
  if (keep.empty()) fail(ErrorKind::degenerate_request, "partial trace over all parties leaves a scalar");
  if (keep == PartySet::full(rho.parties())) return rho;
  const auto& dims = rho.dims();
  const PartySet env = keep.complement(rho.parties());
  const auto kept = detail::subset_labels(dims, keep);
  const auto envl = detail::subset_labels(dims, env);
  const std::size_t d_keep = dimension_of(dims, keep);
  const std::size_t d_env = dimension_of(dims, env);

  std::vector<std::vector<std::size_t>> groups(d_env);
  for (std::size_t i = 0; i < rho.dimension(); ++i) groups[envl[i]].push_back(i);

  const auto& m = rho.matrix();
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d_keep), static_cast<Eigen::Index>(d_keep));
  for (const auto& g : groups)
    for (auto i : g)
      for (auto j : g)
        out(static_cast<Eigen::Index>(kept[i]), static_cast<Eigen::Index>(kept[j])) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return DensityMatrix(std::move(out), restrict_dims(dims, keep));
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::move(dims));
}

/// tr(rho^2)
inline double purity(const DensityMatrix& rho) {
  // tr(A A) = sum_ij A_ij A_ji; for hermitian A this is sum |A_ij|^2
  const auto& m = rho.matrix();
  return (m.cwiseProduct(m.transpose())).sum().real();
}

/// rho^{T_A}: transposes the digits of the parties in A. Not necessarily PSD.
inline Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, PartySet a) {
  check_parties(a, rho.parties());
  if (a.empty() || a == PartySet::full(rho.parties()))
    fail(ErrorKind::invalid_cut, "partial transpose needs a proper nonempty subset, got " + a.label());
  const auto part = detail::subset_offsets(rho.dims(), a);
  const auto d = rho.dimension();
  const auto& m = rho.matrix();
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t ii = i - part[i] + part[j];
      const std::size_t jj = j - part[j] + part[i];
      out(static_cast<Eigen::Index>(ii), static_cast<Eigen::Index>(jj)) =
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

/// U_1 (x) ... (x) U_n
inline Eigen::MatrixXcd local_operator(const std::vector<Eigen::MatrixXcd>& factors) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

/// (U_1 (x) ... (x) U_n) rho (U_1 (x) ... (x) U_n)^dagger
inline DensityMatrix apply_local(const DensityMatrix& rho, const std::vector<Eigen::MatrixXcd>& unitaries) {
  if (unitaries.size() != rho.parties()) fail(ErrorKind::shape, "one unitary per party is required");
  for (std::size_t a = 0; a < unitaries.size(); ++a)
    if (static_cast<std::size_t>(unitaries[a].rows()) != rho.dims()[a] || unitaries[a].rows() != unitaries[a].cols())
      fail(ErrorKind::shape, "unitary for party " + std::to_string(a + 1) + " has the wrong size");
  const auto u = local_operator(unitaries);
  return DensityMatrix(u * rho.matrix() * u.adjoint(), rho.dims());
}

}  // namespace lucorr
