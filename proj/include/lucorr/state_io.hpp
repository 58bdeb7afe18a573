#pragma once

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "lucorr/error.hpp"
#include "lucorr/state.hpp"

namespace lucorr {

/// State file: a JSON object
///   {"dims": [d_1, ..., d_n], "matrix": [[re, im], ...]}
/// where "matrix" lists the D^2 entries row-major as [real, imaginary] pairs.
/// Only the shape is checked here; physical validity is left to validate().
inline DensityMatrix parse_state(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("state file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("matrix"))
    fail(ErrorKind::parse, "state file needs 'dims' and 'matrix' fields");
  const auto& jd = doc["dims"];
  if (!jd.is_array() || jd.empty()) fail(ErrorKind::parse, "'dims' must be a nonempty integer list");
  Dims dims;
  for (const auto& v : jd) {
    if (!v.is_number_integer() || v.get<long long>() < 2) fail(ErrorKind::parse, "every entry of 'dims' must be an integer >= 2");
    dims.push_back(v.get<std::size_t>());
  }
  if (dims.size() > 16) fail(ErrorKind::shape, "state files are limited to 16 parties");
  const auto& jm = doc["matrix"];
  if (!jm.is_array()) fail(ErrorKind::parse, "'matrix' must be a list of [real, imaginary] pairs");
  const std::size_t count = jm.size();
  std::size_t side = 0;
  while ((side + 1) * (side + 1) <= count) ++side;
  if (side * side != count) fail(ErrorKind::shape, "matrix has " + std::to_string(count) + " entries, not a square");
  if (side != dimension_of(dims))
    fail(ErrorKind::shape, "matrix is " + std::to_string(side) + "x" + std::to_string(side) +
                               " but dims give dimension " + std::to_string(dimension_of(dims)));
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  for (std::size_t k = 0; k < count; ++k) {
    const auto& e = jm[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      fail(ErrorKind::parse, "matrix entry " + std::to_string(k) + " is not a [real, imaginary] pair");
    m(static_cast<Eigen::Index>(k / side), static_cast<Eigen::Index>(k % side)) = cplx(e[0].get<double>(), e[1].get<double>());
  }
  return DensityMatrix(std::move(m), std::move(dims));
}

inline nlohmann::json state_to_json(const DensityMatrix& rho) {
  nlohmann::json doc;
  doc["dims"] = rho.dims();
  auto entries = nlohmann::json::array();
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  doc["matrix"] = std::move(entries);
  return doc;
}

inline void write_state(std::ostream& out, const DensityMatrix& rho) { out << state_to_json(rho).dump() << '\n'; }

}  // namespace lucorr
