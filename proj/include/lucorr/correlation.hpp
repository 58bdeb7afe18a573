#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lucorr/error.hpp"
#include "lucorr/operator_basis.hpp"
#include "lucorr/party_set.hpp"
#include "lucorr/state.hpp"

namespace lucorr {

/// Default slack for "L_S exceeds its separable bound". The comparison is
/// strict, so states sitting exactly on a bound are not flagged.
inline constexpr double default_exceed_tolerance = 1e-9;

/// xi_S = (1/d) sum_{sigma in B_S} <sigma> sigma, the component of rho in the
/// span of S-correlation operators.
inline Eigen::MatrixXcd xi_projection(const DensityMatrix& rho, PartySet s) {
  check_parties(s, rho.parties());
  const auto d = rho.dimension();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for_each_index_with_support(s, rho.dims(), [&](const MultiIndex& idx) {
    const double c = coefficient(rho, idx);
    if (c == 0.0) return;
    for_each_basis_nonzero(idx, [&](std::size_t row, std::size_t col, cplx value) {
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += c * value;
    });
  });
  return out / static_cast<double>(d);
}

/// L_S = sum_{sigma in B_S} c_sigma^2
inline double strength_from_coeffs(const CorrelationTensor& t, PartySet s) {
  double acc = 0.0;
  for_each_index_with_support(s, t.dims(), [&](const MultiIndex& idx) {
    const double c = t.at(idx);
    acc += c * c;
  });
  return acc;
}

/// L_S^pure = prod_{a in S} (d_a - 1); 1 for qubits.
inline double pure_product_bound(PartySet s, const Dims& dims) {
  check_parties(s, dims.size());
  double out = 1.0;
  for (auto a : s.members()) out *= static_cast<double>(dims[a] - 1);
  return out;
}

/// Purities tr(rho_S^2) for every S (index = mask); the empty set maps to 1.
inline std::vector<double> subset_purities(const DensityMatrix& rho) {
  const std::size_t n = rho.parties();
  if (n > 20) fail(ErrorKind::resource_cap, "dense subset sweep limited to 20 parties");
  std::vector<double> out(std::size_t{1} << n, 1.0);
  for (std::uint64_t mask = 1; mask < out.size(); ++mask) out[mask] = purity(partial_trace(rho, PartySet(mask)));
  return out;
}

/// In-place Moebius inversion over the subset lattice:
/// f[S] <- sum_{S' subset of S} (-1)^{|S|-|S'|} f[S'].
inline void subset_moebius(std::vector<double>& f) {
  for (std::size_t bit = 1; bit < f.size(); bit <<= 1)
    for (std::size_t mask = 0; mask < f.size(); ++mask)
      if (mask & bit) f[mask] -= f[mask ^ bit];
}

/// L_S for every S from the reduced purities:
/// L_S = sum_{S' subset of S} (-1)^{|S|-|S'|} d_{S'} tr(rho_{S'}^2).
/// Entry 0 (empty set) is 1.
inline std::vector<double> strengths_from_subset_purities(const Dims& dims, const std::vector<double>& purities) {
  std::vector<double> f(purities.size());
  for (std::size_t mask = 0; mask < f.size(); ++mask)
    f[mask] = static_cast<double>(dimension_of(dims, PartySet(mask))) * purities[mask];
  subset_moebius(f);
  return f;
}

/// L_S from the purities of the reductions of rho_S only.
inline double strength_from_purities(const DensityMatrix& rho, PartySet s) {
  check_parties(s, rho.parties());
  if (s.empty()) return 1.0;
  const DensityMatrix reduced = partial_trace(rho, s);
  const auto members = s.members();
  const std::size_t k = members.size();
  double acc = 0.0;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
    const PartySet local(sub);  // parties of the reduced state
    const double term = sub == 0 ? 1.0
                                 : static_cast<double>(dimension_of(reduced.dims(), local)) *
                                       purity(partial_trace(reduced, local));
    acc += ((k - local.size()) % 2 == 0) ? term : -term;
  }
  return acc;
}

struct SubsetRecord {
  PartySet subset;
  double strength = 0.0;
  double bound = 0.0;
  bool exceeded = false;
};

/// Outcome of the separability test: one record per examined nonempty
/// subset, plus the global purity and the sum-rule residual
/// |sum_{S != {}} L_S - (d tr rho^2 - 1)| when every subset was available.
struct InvariantReport {
  Dims dims;
  std::vector<SubsetRecord> records;
  double purity = 1.0;
  std::optional<double> sum_residual;

  bool entangled() const {
    for (const auto& r : records)
      if (r.exceeded) return true;
    return false;
  }

  const SubsetRecord* find(PartySet s) const {
    for (const auto& r : records)
      if (r.subset == s) return &r;
    return nullptr;
  }
};

struct SweepOptions {
  /// Report only subsets with |S| <= cap (the full set is always kept).
  std::optional<std::size_t> max_subset_size;
  double exceed_tolerance = default_exceed_tolerance;
};

/// Default cap: every subset up to 12 parties, otherwise |S| <= 4.
inline std::optional<std::size_t> default_subset_cap(std::size_t n) {
  if (n <= 12) return std::nullopt;
  return std::size_t{4};
}

/// Nonempty subsets to examine, in increasing mask order.
inline std::vector<PartySet> sweep_subsets(std::size_t n, const std::optional<std::size_t>& cap) {
  if (!cap && n > 26) fail(ErrorKind::resource_cap, "full subset sweep over more than 26 parties");
  std::vector<PartySet> out;
  const PartySet all = PartySet::full(n);
  if (!cap) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) out.emplace_back(mask);
    return out;
  }
  // enumerate by size to stay polynomial for large n
  std::vector<std::size_t> pick;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t left) {
    if (left == 0) {
      out.push_back(PartySet::of(pick));
      return;
    }
    for (std::size_t a = start; a + left <= n; ++a) {
      pick.push_back(a);
      rec(a + 1, left - 1);
      pick.pop_back();
    }
  };
  for (std::size_t size = 1; size <= std::min(*cap, n); ++size) rec(0, size);
  if (*cap < n) out.push_back(all);
  std::sort(out.begin(), out.end());
  return out;
}

inline SubsetRecord make_record(PartySet s, double strength, double bound, double tol) {
  return SubsetRecord{s, strength, bound, strength > bound + tol};
}

/// Applies the criterion: rho is entangled if some L_S exceeds L_S^pure.
/// Validates rho first.
inline InvariantReport entanglement_verdict(const DensityMatrix& rho, const SweepOptions& options = {},
                                            const StateTolerances& tol = {}) {
  require_valid(rho, tol);
  const std::size_t n = rho.parties();
  const auto purities = subset_purities(rho);
  const auto strengths = strengths_from_subset_purities(rho.dims(), purities);

  InvariantReport report;
  report.dims = rho.dims();
  report.purity = purities.back();
  double total = 0.0;
  for (std::size_t mask = 1; mask < strengths.size(); ++mask) total += strengths[mask];
  report.sum_residual = std::abs(total - (static_cast<double>(rho.dimension()) * report.purity - 1.0));
  for (auto s : sweep_subsets(n, options.max_subset_size))
    report.records.push_back(
        make_record(s, strengths[s.mask()], pure_product_bound(s, rho.dims()), options.exceed_tolerance));
  return report;
}

/// Strengths and separable bounds for every subset of a (possibly coarse)
/// partition. Index = mask over the current parties; entry 0 is the empty set
/// with strength 1 and bound 1.
struct StrengthMap {
  Dims dims;
  std::vector<double> strength;
  std::vector<double> bound;

  std::size_t parties() const { return dims.size(); }
};

inline StrengthMap strength_map(const Dims& dims, std::vector<double> strengths) {
  if (strengths.size() != (std::size_t{1} << dims.size()))
    fail(ErrorKind::shape, "strength map must cover all subsets");
  StrengthMap out{dims, std::move(strengths), {}};
  out.strength[0] = 1.0;
  out.bound.resize(out.strength.size());
  for (std::size_t mask = 0; mask < out.bound.size(); ++mask) out.bound[mask] = pure_product_bound(PartySet(mask), dims);
  return out;
}

inline StrengthMap strength_map(const DensityMatrix& rho) {
  return strength_map(rho.dims(), strengths_from_subset_purities(rho.dims(), subset_purities(rho)));
}

/// Merges parties a1 and a2 into one super-party b of dimension d_a1 d_a2,
/// using only the fine-grained values:
/// L_{{b} u S'} = L_{{a1} u S'} + L_{{a2} u S'} + L_{{a1,a2} u S'}.
/// The bounds are combined the same way. b takes the position of min(a1, a2);
/// the other party is removed and later parties shift down by one.
inline StrengthMap coarsen_strengths(const StrengthMap& fine, std::size_t a1, std::size_t a2) {
  const std::size_t n = fine.parties();
  if (a1 >= n || a2 >= n || a1 == a2)
    fail(ErrorKind::invalid_index, "cannot merge parties " + std::to_string(a1 + 1) + " and " + std::to_string(a2 + 1));
  if (fine.strength.size() != (std::size_t{1} << n) || fine.bound.size() != fine.strength.size())
    fail(ErrorKind::shape, "strength map must cover all subsets");
  const std::size_t keep = std::min(a1, a2);
  const std::size_t drop = std::max(a1, a2);

  StrengthMap coarse;
  coarse.dims = fine.dims;
  coarse.dims[keep] = fine.dims[a1] * fine.dims[a2];
  coarse.dims.erase(coarse.dims.begin() + static_cast<std::ptrdiff_t>(drop));
  const std::size_t m = n - 1;
  coarse.strength.assign(std::size_t{1} << m, 0.0);
  coarse.bound.assign(coarse.strength.size(), 0.0);

  // coarse party c -> fine party
  auto fine_party = [&](std::size_t c) { return c < drop ? c : c + 1; };
  for (std::uint64_t mask = 0; mask < coarse.strength.size(); ++mask) {
    std::uint64_t rest = 0;  // S' as fine mask, without b
    for (std::size_t c = 0; c < m; ++c)
      if (c != keep && ((mask >> c) & 1U)) rest |= std::uint64_t{1} << fine_party(c);
    if (!((mask >> keep) & 1U)) {
      coarse.strength[mask] = fine.strength[rest];
      coarse.bound[mask] = fine.bound[rest];
      continue;
    }
    const std::uint64_t b1 = std::uint64_t{1} << a1;
    const std::uint64_t b2 = std::uint64_t{1} << a2;
    coarse.strength[mask] = fine.strength[rest | b1] + fine.strength[rest | b2] + fine.strength[rest | b1 | b2];
    coarse.bound[mask] = fine.bound[rest | b1] + fine.bound[rest | b2] + fine.bound[rest | b1 | b2];
  }
  return coarse;
}

/// Running lower bound on L_S while coefficients arrive one at a time, as in
/// a tomography run. Only coefficients with support exactly S contribute.
class StreamingLowerBound {
 public:
  StreamingLowerBound(PartySet s, Dims dims, double exceed_tolerance = default_exceed_tolerance)
      : subset_(s), dims_(std::move(dims)), bound_(pure_product_bound(s, dims_)), tolerance_(exceed_tolerance) {}

  /// Feeds one measured coefficient; returns the updated running value.
  double push(const MultiIndex& idx, double value) {
    if (idx.dims() != dims_) fail(ErrorKind::shape, "multi-index dims do not match the stream");
    if (!seen_.insert(idx.linear()).second)
      fail(ErrorKind::duplicate_measurement, "coefficient delivered twice");
    ++steps_;
    if (support(idx) == subset_) running_ += value * value;
    if (!detection_step_ && running_ > bound_ + tolerance_) detection_step_ = steps_;
    return running_;
  }

  double value() const { return running_; }
  double bound() const { return bound_; }
  std::size_t steps() const { return steps_; }
  /// 1-based step at which the running value first exceeded the bound.
  std::optional<std::size_t> detection_step() const { return detection_step_; }
  PartySet subset() const { return subset_; }

 private:
  PartySet subset_;
  Dims dims_;
  double bound_;
  double tolerance_;
  double running_ = 0.0;
  std::size_t steps_ = 0;
  std::optional<std::size_t> detection_step_;
  std::unordered_set<std::size_t> seen_;
};

struct StreamTrace {
  std::vector<double> running;                 // value after each delivered coefficient
  std::optional<std::size_t> detection_step;  // 1-based
};

/// Feeds a sequence of (MultiIndex, value) pairs through a StreamingLowerBound.
template <class Range>
StreamTrace streaming_lower_bound(const Range& coefficients, PartySet s, const Dims& dims,
                                  double exceed_tolerance = default_exceed_tolerance) {
  StreamingLowerBound stream(s, dims, exceed_tolerance);
  StreamTrace trace;
  for (const auto& [idx, value] : coefficients) trace.running.push_back(stream.push(idx, value));
  trace.detection_step = stream.detection_step();
  return trace;
}

}  // namespace lucorr
