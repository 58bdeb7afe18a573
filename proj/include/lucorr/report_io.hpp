#pragma once

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lucorr/correlation.hpp"
#include "lucorr/error.hpp"

namespace lucorr {

enum class ReportFormat { table, json_lines, csv };

inline ReportFormat parse_report_format(const std::string& name) {
  if (name == "table") return ReportFormat::table;
  if (name == "json-lines") return ReportFormat::json_lines;
  if (name == "csv") return ReportFormat::csv;
  fail(ErrorKind::parse, "unknown format '" + name + "' (table, json-lines, csv)");
}

namespace detail {

inline std::vector<std::size_t> one_based(PartySet s) {
  auto m = s.members();
  for (auto& a : m) ++a;
  return m;
}

inline std::string space_separated(PartySet s) {
  std::string out;
  for (auto a : one_based(s)) {
    if (!out.empty()) out += ' ';
    out += std::to_string(a);
  }
  return out;
}

}  // namespace detail

/// json-lines schema, one object per line:
///   {"record":"subset","subset":[1,2],"L":3.0,"bound":1.0,"exceeded":true}
///   {"record":"summary","dims":[2,2],"purity":1.0,"sum_residual":0.0,"entangled":true}
/// Parties are 1-based. "sum_residual" is null when not every subset was
/// available.
inline nlohmann::json record_to_json(const SubsetRecord& r) {
  return {{"record", "subset"},
          {"subset", detail::one_based(r.subset)},
          {"L", r.strength},
          {"bound", r.bound},
          {"exceeded", r.exceeded}};
}

inline nlohmann::json summary_to_json(const InvariantReport& report) {
  nlohmann::json j{{"record", "summary"},
                   {"dims", report.dims},
                   {"purity", report.purity},
                   {"entangled", report.entangled()}};
  j["sum_residual"] = report.sum_residual ? nlohmann::json(*report.sum_residual) : nlohmann::json(nullptr);
  return j;
}

inline void write_report(std::ostream& out, const InvariantReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json_lines:
      for (const auto& r : report.records) out << record_to_json(r).dump() << '\n';
      out << summary_to_json(report).dump() << '\n';
      return;
    case ReportFormat::csv: {
      out << "record,subset,L,bound,exceeded,purity,sum_residual\n";
      out << std::setprecision(17);
      for (const auto& r : report.records)
        out << "subset," << detail::space_separated(r.subset) << ',' << r.strength << ',' << r.bound << ','
            << (r.exceeded ? "true" : "false") << ",,\n";
      out << "summary,,,," << (report.entangled() ? "true" : "false") << ',' << report.purity << ',';
      if (report.sum_residual) out << *report.sum_residual;
      out << '\n';
      return;
    }
    case ReportFormat::table: {
      std::ostringstream os;
      os << std::left << std::setw(22) << "subset" << std::right << std::setw(16) << "L_S" << std::setw(12) << "bound"
         << "  verdict\n";
      for (const auto& r : report.records)
        os << std::left << std::setw(22) << r.subset.label() << std::right << std::setw(16) << std::setprecision(10)
           << r.strength << std::setw(12) << r.bound << "  " << (r.exceeded ? "EXCEEDED" : "ok") << '\n';
      os << "purity tr(rho^2) = " << std::setprecision(12) << report.purity << '\n';
      if (report.sum_residual) os << "sum rule residual = " << std::setprecision(3) << *report.sum_residual << '\n';
      os << (report.entangled() ? "verdict: entangled (some L_S exceeds its product-state bound)"
                                : "verdict: separability not excluded")
         << '\n';
      out << os.str();
      return;
    }
  }
}

/// Reads the json-lines form back. Records with other "record" types are
/// skipped, so extra lines (e.g. thresholds) do not break parsing.
inline InvariantReport parse_report_json_lines(std::istream& in) {
  InvariantReport report;
  bool have_summary = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      const auto kind = j.at("record").get<std::string>();
      if (kind == "subset") {
        std::vector<std::size_t> members;
        for (auto a : j.at("subset").get<std::vector<std::size_t>>()) {
          if (a < 1) fail(ErrorKind::parse, "parties are 1-based");
          members.push_back(a - 1);
        }
        report.records.push_back(SubsetRecord{PartySet::of(members), j.at("L").get<double>(), j.at("bound").get<double>(),
                                              j.at("exceeded").get<bool>()});
      } else if (kind == "summary") {
        report.dims = j.at("dims").get<Dims>();
        report.purity = j.at("purity").get<double>();
        if (!j.at("sum_residual").is_null()) report.sum_residual = j.at("sum_residual").get<double>();
        have_summary = true;
      }
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::parse, std::string("bad report line: ") + e.what());
    }
  }
  if (!have_summary) fail(ErrorKind::parse, "report has no summary record");
  return report;
}

}  // namespace lucorr
