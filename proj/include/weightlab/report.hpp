#pragma once

// Report rows and their CSV / JSON serialisation. Numbers are printed with
// std::to_chars (shortest round-trip form), so output bytes depend only on
// the values.

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "weightlab/errors.hpp"
#include "weightlab/interval.hpp"

namespace weightlab {

struct ReportRow {
  std::string analysis;
  std::string weight;
  std::optional<double> scale;
  std::string id;  ///< interval, box or parameter identifier
  std::optional<double> value;
  std::optional<double> value2;
  std::optional<double> witness_lo;
  std::optional<double> witness_hi;
  std::optional<int> depth;
  std::optional<int> panels;
  std::optional<double> floor;
  std::string verdict;

  void set_witness(const std::optional<Interval>& I) {
    if (I) {
      witness_lo = I->lo();
      witness_hi = I->hi();
    }
  }
};

enum class ReportFormat { csv, json };

inline constexpr const char* csv_header =
    "analysis,weight,scale,id,value,value2,witness_lo,witness_hi,depth,panels,floor,verdict";

/// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : ""; }
inline std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

inline nlohmann::json jopt(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}
inline nlohmann::json jopt(const std::optional<int>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace detail

inline std::string to_csv(const std::vector<ReportRow>& rows) {
  std::string out = csv_header;
  out += '\n';
  for (const auto& r : rows) {
    using detail::csv_field;
    using detail::opt;
    out += csv_field(r.analysis) + ',' + csv_field(r.weight) + ',' + opt(r.scale) + ',' +
           csv_field(r.id) + ',' + opt(r.value) + ',' + opt(r.value2) + ',' + opt(r.witness_lo) +
           ',' + opt(r.witness_hi) + ',' + opt(r.depth) + ',' + opt(r.panels) + ',' +
           opt(r.floor) + ',' + csv_field(r.verdict) + '\n';
  }
  return out;
}

/// Non-finite numbers become null; an infinite value is still visible
/// through the verdict ("diverged").
inline std::string to_json(const std::vector<ReportRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["analysis"] = r.analysis;
    o["weight"] = r.weight;
    o["scale"] = detail::jopt(r.scale);
    o["id"] = r.id;
    o["value"] = detail::jopt(r.value);
    o["value2"] = detail::jopt(r.value2);
    o["witness_lo"] = detail::jopt(r.witness_lo);
    o["witness_hi"] = detail::jopt(r.witness_hi);
    o["depth"] = detail::jopt(r.depth);
    o["panels"] = detail::jopt(r.panels);
    o["floor"] = detail::jopt(r.floor);
    o["verdict"] = r.verdict;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + '\n';
}

inline std::string render(const std::vector<ReportRow>& rows, ReportFormat f) {
  return f == ReportFormat::csv ? to_csv(rows) : to_json(rows);
}

/// Writes the rendered rows to `path` ("-" for stdout is handled by callers).
inline void emit(const std::vector<ReportRow>& rows, ReportFormat f, const std::string& path) {
  if (rows.empty()) throw argument_error("emit: no rows");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << render(rows, f);
  out.flush();
  if (!out) throw io_error("write to '" + path + "' failed");
}

}  // namespace weightlab
