#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lucorr/error.hpp"
#include "lucorr/operator_basis.hpp"
#include "lucorr/party_set.hpp"
#include "lucorr/random.hpp"
#include "lucorr/state.hpp"

namespace lucorr {

/// A complete contraction of correlation tensors: a product of factors
/// c_{s_1 ... s_n}, where each slot is the literal 0 or a summation variable.
/// Every variable occurs exactly twice, both times at the same party
/// position, and runs over 1..d_a^2-1. Such contractions are local-unitary
/// invariants.
class ContractionPattern {
 public:
  /// nullopt = literal 0, otherwise the variable id.
  using Slot = std::optional<std::size_t>;

  ContractionPattern(std::vector<std::vector<Slot>> factors, std::vector<std::string> names)
      : factors_(std::move(factors)), names_(std::move(names)) {
    if (factors_.empty()) fail(ErrorKind::pattern, "pattern has no factors");
    const std::size_t n = factors_.front().size();
    if (n == 0) fail(ErrorKind::pattern, "factor with no slots");
    std::vector<std::vector<std::size_t>> positions(names_.size());
    for (const auto& f : factors_) {
      if (f.size() != n) fail(ErrorKind::pattern, "factors have different lengths");
      for (std::size_t pos = 0; pos < n; ++pos) {
        if (!f[pos]) continue;
        if (*f[pos] >= names_.size()) fail(ErrorKind::pattern, "unknown variable id");
        positions[*f[pos]].push_back(pos);
      }
    }
    party_of_.resize(names_.size());
    for (std::size_t v = 0; v < names_.size(); ++v) {
      if (positions[v].size() != 2)
        fail(ErrorKind::pattern, "variable '" + names_[v] + "' occurs " + std::to_string(positions[v].size()) +
                                     " times; every variable must occur exactly twice");
      if (positions[v][0] != positions[v][1])
        fail(ErrorKind::pattern, "variable '" + names_[v] + "' appears at different party positions");
      party_of_[v] = positions[v][0];
    }
  }

  /// Text form: factors separated by ';', slots by ',', each slot "0" or an
  /// identifier, e.g. "0,j,k; i,j,0; i,0,k".
  static ContractionPattern parse(std::string_view text) {
    std::vector<std::vector<Slot>> factors;
    std::vector<std::string> names;
    std::map<std::string, std::size_t> ids;
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    auto split = [](std::string_view s, char sep) {
      std::vector<std::string_view> out;
      std::size_t start = 0;
      while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
      }
    };
    for (auto factor_text : split(text, ';')) {
      std::vector<Slot> factor;
      for (auto raw : split(trim(factor_text), ',')) {
        const auto slot = trim(raw);
        if (slot == "0") {
          factor.emplace_back(std::nullopt);
          continue;
        }
        const bool ident = !slot.empty() && (std::isalpha(static_cast<unsigned char>(slot.front())) || slot.front() == '_');
        for (char ch : slot)
          if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\''))
            fail(ErrorKind::pattern, "bad slot '" + std::string(slot) + "'");
        if (!ident) fail(ErrorKind::pattern, "bad slot '" + std::string(slot) + "'");
        auto [it, inserted] = ids.emplace(std::string(slot), names.size());
        if (inserted) names.emplace_back(slot);
        factor.emplace_back(it->second);
      }
      factors.push_back(std::move(factor));
    }
    return ContractionPattern(std::move(factors), std::move(names));
  }

  /// All-zero single factor: evaluates to c_{0...0}.
  static ContractionPattern trivial(std::size_t parties) {
    return ContractionPattern({std::vector<Slot>(parties)}, {});
  }

  /// sum_{sigma in B_S} c_sigma^2 as a pattern.
  static ContractionPattern strength(PartySet s, std::size_t parties) {
    check_parties(s, parties);
    std::vector<Slot> factor(parties);
    std::vector<std::string> names;
    for (auto a : s.members()) {
      factor[a] = names.size();
      names.push_back("i" + std::to_string(a + 1));
    }
    return ContractionPattern({factor, factor}, std::move(names));
  }

  const std::vector<std::vector<Slot>>& factors() const { return factors_; }
  std::size_t parties() const { return factors_.front().size(); }
  std::size_t degree() const { return factors_.size(); }
  std::size_t variable_count() const { return names_.size(); }
  std::size_t variable_party(std::size_t v) const { return party_of_.at(v); }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
      if (f) os << "; ";
      for (std::size_t pos = 0; pos < factors_[f].size(); ++pos) {
        if (pos) os << ',';
        if (factors_[f][pos])
          os << names_[*factors_[f][pos]];
        else
          os << '0';
      }
    }
    return os.str();
  }

 private:
  std::vector<std::vector<Slot>> factors_;
  std::vector<std::string> names_;
  std::vector<std::size_t> party_of_;
};

/// Full sum over all variable assignments of the product of tensor entries.
inline double contract(const CorrelationTensor& t, const ContractionPattern& pattern) {
  const auto& dims = t.dims();
  const std::size_t n = dims.size();
  if (pattern.parties() != n)
    fail(ErrorKind::pattern, "pattern has " + std::to_string(pattern.parties()) + " slots per factor, tensor has " +
                                 std::to_string(n) + " parties");
  std::vector<std::size_t> stride(n);
  std::size_t acc = 1;
  for (std::size_t a = n; a-- > 0;) {
    stride[a] = acc;
    acc *= dims[a] * dims[a];
  }
  const std::size_t vars = pattern.variable_count();
  std::vector<std::size_t> limit(vars);
  for (std::size_t v = 0; v < vars; ++v) limit[v] = dims[pattern.variable_party(v)] * dims[pattern.variable_party(v)];

  // per factor: list of (variable, stride)
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> terms;
  for (const auto& f : pattern.factors()) {
    std::vector<std::pair<std::size_t, std::size_t>> term;
    for (std::size_t pos = 0; pos < n; ++pos)
      if (f[pos]) term.emplace_back(*f[pos], stride[pos]);
    terms.push_back(std::move(term));
  }

  std::vector<std::size_t> value(vars, 1);
  double total = 0.0;
  while (true) {
    double product = 1.0;
    for (const auto& term : terms) {
      std::size_t linear = 0;
      for (auto [v, s] : term) linear += value[v] * s;
      product *= t.at_linear(linear);
      if (product == 0.0) break;
    }
    total += product;
    std::size_t k = vars;
    while (k > 0) {
      if (++value[k - 1] < limit[k - 1]) break;
      value[k - 1] = 1;
      --k;
    }
    if (k == 0) break;
  }
  return total;
}

/// sum_{i,j,k>0} c_{i00} c_{0j0} c_{00k} c_{ijk}: the overlap of the
/// tripartite correlations with the product of the single-party marginals.
inline double x_abc(const CorrelationTensor& t) {
  if (t.parties() != 3) fail(ErrorKind::shape, "x_abc needs a 3-party tensor");
  const auto& d = t.dims();
  const std::size_t n1 = d[0] * d[0];
  const std::size_t n2 = d[1] * d[1];
  const std::size_t n3 = d[2] * d[2];
  auto c = [&](std::size_t i, std::size_t j, std::size_t k) { return t.at_linear((i * n2 + j) * n3 + k); };
  double total = 0.0;
  for (std::size_t i = 1; i < n1; ++i)
    for (std::size_t j = 1; j < n2; ++j)
      for (std::size_t k = 1; k < n3; ++k) total += c(i, 0, 0) * c(0, j, 0) * c(0, 0, k) * c(i, j, k);
  return total;
}

/// Hard limit on the dimension of the k-copy space, D^k <= 2^12.
inline constexpr std::size_t k_copy_dimension_cap = 4096;

/// Observable on k copies of the full Hilbert space of `dims`.
struct KCopyObservable {
  std::size_t copies = 1;
  Dims dims;
  Eigen::MatrixXcd matrix;

  std::size_t single_dimension() const { return dimension_of(dims); }

  void check(double tol = 1e-10) const {
    if (copies < 1) fail(ErrorKind::shape, "at least one copy");
    std::size_t total = 1;
    for (std::size_t c = 0; c < copies; ++c) {
      total *= single_dimension();
      if (total > k_copy_dimension_cap) fail(ErrorKind::resource_cap, "k-copy space exceeds 4096 dimensions");
    }
    if (matrix.rows() != static_cast<Eigen::Index>(total) || matrix.cols() != matrix.rows())
      fail(ErrorKind::shape, "observable size does not match D^k");
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol) fail(ErrorKind::validation, "observable is not hermitian");
  }
};

/// tr(M rho^{(x)k}) without forming rho^{(x)k}.
inline double evaluate_k_copy(const KCopyObservable& m, const DensityMatrix& rho, double imaginary_tol = 1e-10) {
  m.check();
  if (m.dims != rho.dims()) fail(ErrorKind::shape, "observable and state have different dims");
  const std::size_t d = rho.dimension();
  const std::size_t total = static_cast<std::size_t>(m.matrix.rows());
  std::vector<std::vector<std::size_t>> digits(total, std::vector<std::size_t>(m.copies));
  for (std::size_t a = 0; a < total; ++a) {
    std::size_t rest = a;
    for (std::size_t c = m.copies; c-- > 0;) {
      digits[a][c] = rest % d;
      rest /= d;
    }
  }
  const auto& r = rho.matrix();
  cplx acc(0.0, 0.0);
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = 0; b < total; ++b) {
      const cplx mab = m.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (mab == cplx(0.0, 0.0)) continue;
      cplx prod = mab;
      for (std::size_t c = 0; c < m.copies; ++c)
        prod *= r(static_cast<Eigen::Index>(digits[b][c]), static_cast<Eigen::Index>(digits[a][c]));
      acc += prod;
    }
  }
  if (std::abs(acc.imag()) > imaginary_tol)
    fail(ErrorKind::numerical_consistency, "k-copy expectation has imaginary part " + std::to_string(acc.imag()));
  return acc.real();
}

/// M_S = sum_{sigma in B_S} sigma (x) sigma on two copies; tr(M_S rho (x) rho) = L_S.
inline KCopyObservable m_s_observable(PartySet s, const Dims& dims) {
  check_parties(s, dims.size());
  const std::size_t d = dimension_of(dims);
  if (d * d > k_copy_dimension_cap) fail(ErrorKind::resource_cap, "two-copy space exceeds 4096 dimensions");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
  for_each_index_with_support(s, dims, [&](const MultiIndex& idx) {
    std::vector<SparseEntry> entries;
    for_each_basis_nonzero(idx, [&](std::size_t r, std::size_t c, cplx v) { entries.push_back({r, c, v}); });
    for (const auto& e1 : entries)
      for (const auto& e2 : entries)
        m(static_cast<Eigen::Index>(e1.row * d + e2.row), static_cast<Eigen::Index>(e1.col * d + e2.col)) +=
            e1.value * e2.value;
  });
  return KCopyObservable{2, dims, std::move(m)};
}

/// Sampling test that M commutes with (U_1 (x) ... (x) U_n)^{(x)k} for random
/// local unitaries. Passing is evidence, not proof.
inline bool commutant_check(const KCopyObservable& m, std::size_t trials, std::uint64_t seed, double tol = 1e-9) {
  m.check();
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const Eigen::MatrixXcd u = local_operator(random_local_unitary(m.dims, rng));
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t c = 0; c < m.copies; ++c) w = kron(w, u);
    if ((m.matrix * w - w * m.matrix).cwiseAbs().maxCoeff() >= tol) return false;
  }
  return true;
}

/// Hermitian parts of a possibly non-hermitian generator F:
/// ((F + F^dagger) / 2, (F - F^dagger) / 2i).
inline std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> symmetrize(const Eigen::MatrixXcd& f) {
  if (f.rows() != f.cols()) fail(ErrorKind::shape, "generator must be square");
  const cplx two_i(0.0, 2.0);
  return {(f + f.adjoint()) / 2.0, (f - f.adjoint()) / two_i};
}

}  // namespace lucorr
