#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "lucorr/error.hpp"

namespace lucorr {

/// Per-party local dimensions (d_1, ..., d_n). Party a is the a-th tensor
/// factor, counted from the left (most significant digit of a basis index).
using Dims = std::vector<std::size_t>;

inline constexpr std::size_t max_parties = 64;

/// Subset of parties stored as a bitmask. Parties are 0-based in the API
/// (bit a <-> party a); text output uses 1-based labels.
class PartySet {
 public:
  constexpr PartySet() = default;
  constexpr explicit PartySet(std::uint64_t mask) : mask_(mask) {}

  static PartySet of(std::initializer_list<std::size_t> members) {
    PartySet s;
    for (auto a : members) s = s.with(a);
    return s;
  }
  static PartySet of(const std::vector<std::size_t>& members) {
    PartySet s;
    for (auto a : members) s = s.with(a);
    return s;
  }
  /// {0, ..., n-1}
  static PartySet full(std::size_t n) {
    if (n > max_parties) fail(ErrorKind::out_of_range, "more than 64 parties");
    return PartySet(n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  constexpr bool contains(std::size_t a) const { return a < 64 && ((mask_ >> a) & 1U); }
  constexpr bool subset_of(PartySet other) const { return (mask_ & ~other.mask_) == 0; }

  PartySet with(std::size_t a) const {
    if (a >= max_parties) fail(ErrorKind::out_of_range, "party index " + std::to_string(a));
    return PartySet(mask_ | (std::uint64_t{1} << a));
  }
  constexpr PartySet without(std::size_t a) const { return PartySet(mask_ & ~(std::uint64_t{1} << a)); }
  constexpr PartySet complement(std::size_t n) const {
    return PartySet(~mask_ & (n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1));
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
  }

  /// 1-based, e.g. "{1,3}".
  std::string label() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (auto a : members()) {
      if (!first) os << ',';
      os << a + 1;
      first = false;
    }
    os << '}';
    return os.str();
  }

  friend constexpr bool operator==(PartySet, PartySet) = default;
  friend constexpr auto operator<=>(PartySet, PartySet) = default;
  friend constexpr PartySet operator|(PartySet a, PartySet b) { return PartySet(a.mask_ | b.mask_); }
  friend constexpr PartySet operator&(PartySet a, PartySet b) { return PartySet(a.mask_ & b.mask_); }

 private:
  std::uint64_t mask_ = 0;
};

inline std::size_t dimension_of(const Dims& dims) {
  std::size_t d = 1;
  for (auto da : dims) d *= da;
  return d;
}

/// d_S = prod_{a in S} d_a
inline std::size_t dimension_of(const Dims& dims, PartySet s) {
  std::size_t d = 1;
  for (auto a : s.members()) d *= dims.at(a);
  return d;
}

inline Dims restrict_dims(const Dims& dims, PartySet s) {
  Dims out;
  for (auto a : s.members()) out.push_back(dims.at(a));
  return out;
}

inline void check_parties(PartySet s, std::size_t n) {
  if (!s.subset_of(PartySet::full(n)))
    fail(ErrorKind::invalid_index, "party set " + s.label() + " exceeds " + std::to_string(n) + " parties");
}

}  // namespace lucorr
