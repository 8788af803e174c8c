#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "lzms/sweep.hpp"
#include "lzms/version.hpp"

namespace lzms {

/// 12 significant digits, locale independent.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParameterError("not a number: '" + std::string(s) + "'");
  return v;
}

/// name:min:max:n[:linear|log10]; Gamma axes default to log10.
inline Axis parse_axis(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') parts.push_back(std::move(cur)), cur.clear();
    else cur += ch;
  }
  parts.push_back(cur);
  if (parts.size() < 4 || parts.size() > 5)
    throw ParameterError("axis must be name:min:max:n[:scale], got '" + std::string(text) + "'");
  Axis a;
  a.name = parts[0];
  a.min = parse_number(parts[1]);
  a.max = parse_number(parts[2]);
  const double n = parse_number(parts[3]);
  if (!(n >= 1.0) || n != std::floor(n)) throw ParameterError("axis sample count must be a positive integer");
  a.n = static_cast<std::size_t>(n);
  a.scale = is_gamma_axis(a.name) ? AxisScale::Log10 : AxisScale::Linear;
  if (parts.size() == 5) {
    if (parts[4] == "linear") a.scale = AxisScale::Linear;
    else if (parts[4] == "log10") a.scale = AxisScale::Log10;
    else throw ParameterError("axis scale must be linear or log10, got '" + parts[4] + "'");
  }
  return a;
}

inline std::string format_axis(const Axis& a) {
  return a.name + ":" + format_number(a.min) + ":" + format_number(a.max) + ":" + std::to_string(a.n) +
         ":" + to_string(a.scale);
}

/// Key/value pairs echoed into the CSV comment block.
inline std::vector<std::pair<std::string, std::string>> sweep_metadata(const SweepSpec& s) {
  std::vector<std::pair<std::string, std::string>> m = {
      {"tool", std::string("lzms ") + std::string(kVersion)},
      {"label", s.label.empty() ? "custom" : s.label},
      {"axis1", format_axis(s.axis1)},
  };
  if (s.axis2) m.emplace_back("axis2", format_axis(*s.axis2));
  const std::pair<const char*, double> numbers[] = {
      {"kappa", s.base.kappa},   {"Omega", s.base.Omega},   {"omega", s.base.omega},
      {"phi", s.base.phi},       {"varphi", s.base.varphi}, {"t0", s.base.t0},
      {"gamma1", s.decay.gamma1}, {"gamma2", s.decay.gamma2}, {"gamma3", s.decay.gamma3},
      {"delta", s.decay.delta},  {"omega_g", s.decay.omega_g},
  };
  for (const auto& [k, v] : numbers) m.emplace_back(k, format_number(v));
  m.emplace_back("gamma_channel", std::to_string(s.gamma_channel));
  m.emplace_back("from", std::to_string(s.from));
  m.emplace_back("to", std::to_string(s.to));
  m.emplace_back("rel_tol", format_number(s.cfg.rel_tol));
  m.emplace_back("abs_tol", format_number(s.cfg.abs_tol));
  m.emplace_back("max_step", format_number(s.cfg.max_step));
  m.emplace_back("init_step", format_number(s.cfg.init_step));
  m.emplace_back("scheme", to_string(s.cfg.scheme));
  m.emplace_back("adaptive", s.cfg.adaptive ? "true" : "false");
  return m;
}

inline void emit_csv(const SweepResult& r, std::ostream& os) {
  for (const auto& [k, v] : sweep_metadata(r.spec)) os << "# " << k << " = " << v << '\n';
  os << "# failures = " << r.failures() << '\n';
  for (std::size_t i = 0; i < r.spec.rows(); ++i)
    for (std::size_t j = 0; j < r.spec.cols(); ++j)
      if (const auto& rec = r.at(i, j); rec.failed)
        os << "# failed " << i << ',' << j << ": " << rec.error << '\n';

  const bool two_d = r.spec.axis2.has_value();
  os << (two_d ? "axis1,axis2,P1,P2,P3,leak\n" : "axis1,P1,P2,P3,leak\n");
  for (const auto& rec : r.records) {
    os << format_number(rec.axis1) << ',';
    if (two_d) os << format_number(rec.axis2) << ',';
    os << format_number(rec.P1) << ',' << format_number(rec.P2) << ',' << format_number(rec.P3) << ','
       << format_number(rec.leak) << '\n';
  }
}

inline void emit_csv(const SweepResult& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_csv(r, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  bool two_d = false;
  std::vector<SweepRecord> records;

  std::string meta(std::string_view key) const {
    for (const auto& [k, v] : metadata)
      if (k == key) return v;
    return {};
  }
};

/// Reads back the format written by emit_csv.
inline CsvTable parse_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find(" = ");
      if (eq != std::string::npos) table.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
      continue;
    }
    if (!header_seen) {
      if (line == "axis1,axis2,P1,P2,P3,leak") table.two_d = true;
      else if (line != "axis1,P1,P2,P3,leak") throw ParameterError("unexpected CSV header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(parse_number(cell));
    const std::size_t want = table.two_d ? 6 : 5;
    if (v.size() != want) throw ParameterError("malformed CSV row '" + line + "'");
    SweepRecord rec;
    std::size_t k = 0;
    rec.axis1 = v[k++];
    if (table.two_d) rec.axis2 = v[k++];
    rec.P1 = v[k++];
    rec.P2 = v[k++];
    rec.P3 = v[k++];
    rec.leak = v[k++];
    rec.failed = std::isnan(rec.P3);
    table.records.push_back(rec);
  }
  if (!header_seen) throw ParameterError("CSV has no header line");
  return table;
}

}  // namespace lzms
