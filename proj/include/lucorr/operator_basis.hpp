#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lucorr/error.hpp"
#include "lucorr/party_set.hpp"

namespace lucorr {

using cplx = std::complex<double>;

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Hermitian operator basis {sigma_0 = 1, sigma_1, ..., sigma_{d^2-1}} of one
/// d-level party, normalized so that tr(sigma_i sigma_j) = d delta_ij.
///
/// Generators are generalized Gell-Mann matrices rescaled by sqrt(d/2), in
/// the order: symmetric E_jk + E_kj for j < k (lexicographic), then
/// antisymmetric -i E_jk + i E_kj (same order), then diagonal
/// diag(1, ..., 1, -l, 0, ...) for l = 1..d-1. For d = 2 this is exactly
/// (1, sigma_x, sigma_y, sigma_z).
class LocalBasis {
 public:
  explicit LocalBasis(std::size_t d) : dim_(d) {
    if (d < 2) fail(ErrorKind::invalid_dimension, "local dimension must be >= 2, got " + std::to_string(d));
    const double scale = std::sqrt(static_cast<double>(d) / 2.0);
    const cplx i_unit(0.0, 1.0);

    std::vector<SparseEntry> identity;
    for (std::size_t j = 0; j < d; ++j) identity.push_back({j, j, 1.0});
    add(std::move(identity));
    // lexicographic (j, k), j < k
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = j + 1; k < d; ++k) pairs.emplace_back(j, k);
    for (auto [j, k] : pairs) add({{j, k, scale}, {k, j, scale}});
    for (auto [j, k] : pairs) add({{j, k, -i_unit * scale}, {k, j, i_unit * scale}});
    for (std::size_t l = 1; l < d; ++l) {
      const double norm = scale * std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
      std::vector<SparseEntry> entries;
      for (std::size_t j = 0; j < l; ++j) entries.push_back({j, j, norm});
      entries.push_back({l, l, -static_cast<double>(l) * norm});
      add(std::move(entries));
    }
  }

  std::size_t dim() const { return dim_; }
  /// Number of basis operators, d^2.
  std::size_t size() const { return dense_.size(); }

  const Eigen::MatrixXcd& generator(std::size_t i) const {
    if (i >= size()) fail(ErrorKind::invalid_index, "generator " + std::to_string(i) + " of " + std::to_string(size()));
    return dense_[i];
  }
  std::span<const SparseEntry> nonzeros(std::size_t i) const { return sparse_.at(i); }

 private:
  void add(std::vector<SparseEntry> entries) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (const auto& e : entries) m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    dense_.push_back(std::move(m));
    sparse_.push_back(std::move(entries));
  }

  std::size_t dim_;
  std::vector<Eigen::MatrixXcd> dense_;
  std::vector<std::vector<SparseEntry>> sparse_;
};

inline LocalBasis local_basis(std::size_t d) { return LocalBasis(d); }

/// Process-wide immutable cache, one basis per local dimension.
inline const LocalBasis& shared_local_basis(std::size_t d) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<LocalBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[d];
  if (!slot) slot = std::make_unique<LocalBasis>(d);
  return *slot;
}

/// Multi-index (i_1, ..., i_n) into the product basis, 0 <= i_a < d_a^2.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::vector<std::size_t> indices, Dims dims) : indices_(std::move(indices)), dims_(std::move(dims)) {
    if (indices_.size() != dims_.size())
      fail(ErrorKind::invalid_index, "multi-index has " + std::to_string(indices_.size()) + " entries for " +
                                         std::to_string(dims_.size()) + " parties");
    for (std::size_t a = 0; a < indices_.size(); ++a) {
      if (dims_[a] < 2) fail(ErrorKind::invalid_dimension, "party dimension must be >= 2");
      if (indices_[a] >= dims_[a] * dims_[a])
        fail(ErrorKind::invalid_index, "index " + std::to_string(indices_[a]) + " out of range at party " +
                                           std::to_string(a + 1));
    }
  }

  /// Inverse of linear(): mixed radix with base d_a^2, party 0 most significant.
  static MultiIndex from_linear(std::size_t linear, const Dims& dims) {
    std::vector<std::size_t> idx(dims.size());
    for (std::size_t a = dims.size(); a-- > 0;) {
      const std::size_t base = dims[a] * dims[a];
      idx[a] = linear % base;
      linear /= base;
    }
    return MultiIndex(std::move(idx), dims);
  }

  std::size_t linear() const {
    std::size_t out = 0;
    for (std::size_t a = 0; a < indices_.size(); ++a) out = out * dims_[a] * dims_[a] + indices_[a];
    return out;
  }

  std::size_t size() const { return indices_.size(); }
  std::size_t operator[](std::size_t a) const { return indices_[a]; }
  const std::vector<std::size_t>& indices() const { return indices_; }
  const Dims& dims() const { return dims_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<std::size_t> indices_;
  Dims dims_;
};

/// {a : i_a != 0}
inline PartySet support(const MultiIndex& idx) {
  PartySet s;
  for (std::size_t a = 0; a < idx.size(); ++a)
    if (idx[a] != 0) s = s.with(a);
  return s;
}

/// sigma_{i_1} (x) ... (x) sigma_{i_n}, built densely.
inline Eigen::MatrixXcd basis_element(const MultiIndex& idx) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const auto& g = shared_local_basis(idx.dims()[a]).generator(idx[a]);
    Eigen::MatrixXcd next(out.rows() * g.rows(), out.cols() * g.cols());
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        next.block(r * g.rows(), c * g.cols(), g.rows(), g.cols()) = out(r, c) * g;
    out = std::move(next);
  }
  return out;
}

/// Visits the nonzero entries (row, col, value) of basis_element(idx) without
/// forming the dense matrix.
template <class Visitor>
void for_each_basis_nonzero(const MultiIndex& idx, Visitor&& visit) {
  const std::size_t n = idx.size();
  std::vector<std::span<const SparseEntry>> local(n);
  for (std::size_t a = 0; a < n; ++a) local[a] = shared_local_basis(idx.dims()[a]).nonzeros(idx[a]);
  std::function<void(std::size_t, std::size_t, std::size_t, cplx)> rec = [&](std::size_t a, std::size_t row,
                                                                             std::size_t col, cplx value) {
    if (a == n) {
      visit(row, col, value);
      return;
    }
    const std::size_t d = idx.dims()[a];
    for (const auto& e : local[a]) rec(a + 1, row * d + e.row, col * d + e.col, value * e.value);
  };
  rec(0, 0, 0, cplx(1.0, 0.0));
}

/// Visits every multi-index whose support is exactly S (the set B_S), in
/// lexicographic order. Count is prod_{a in S} (d_a^2 - 1).
template <class Visitor>
void for_each_index_with_support(PartySet s, const Dims& dims, Visitor&& visit) {
  check_parties(s, dims.size());
  const std::size_t n = dims.size();
  std::vector<std::size_t> idx(n, 0);
  const auto members = s.members();
  for (auto a : members) idx[a] = 1;
  while (true) {
    visit(MultiIndex(idx, dims));
    // odometer over the members, last party fastest
    std::size_t k = members.size();
    while (k > 0) {
      const std::size_t a = members[k - 1];
      if (++idx[a] < dims[a] * dims[a]) break;
      idx[a] = 1;
      --k;
    }
    if (k == 0) return;
  }
}

inline std::vector<MultiIndex> indices_with_support(PartySet s, const Dims& dims) {
  std::vector<MultiIndex> out;
  for_each_index_with_support(s, dims, [&](const MultiIndex& m) { out.push_back(m); });
  return out;
}

}  // namespace lucorr
