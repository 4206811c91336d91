#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "prequant/errors.hpp"
#include "prequant/spectrum.hpp"

namespace prequant {

using Json = nlohmann::ordered_json;

/// One named measurement judged against its tolerance.
struct CheckRecord {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

/// The conventions every report embeds, so that the signs behind each
/// number are auditable without reading the source.
struct Conventions {
  std::string orientation =
      "integral of dz^dtheta over the full sphere cylinder is +4*pi; "
      "box regions are oriented by coordinate order";
  std::string moser_sign =
      "the Moser field X solves interior_product(X, w_t) = -alpha, and its "
      "time-1 flow pulls w1 back to w0";
  std::string holonomy =
      "holonomy = exp(i * loop integral of alpha); the connection form is "
      "-i*alpha; switching frames A -> B multiplies transported fiber "
      "elements by exp(i*(Lambda_B - Lambda_A))";
  std::string gauge_shift =
      "apply_gauge adds Re(-i * d phi) to hermitian potentials (the full "
      "-i * d phi otherwise); connection_difference(a, b) = "
      "-i*(alpha_a - alpha_b) and equals d phi exactly when b = "
      "apply_gauge(a, phi)";
};

/// Scenario outcome: checks, spectra, and the convention block, with a
/// lossless JSON round trip.  Plot files are emitted separately; the report
/// itself stays a key-value tree.
struct Report {
  std::string scenario;
  std::uint64_t seed = 1;
  Conventions conventions;
  std::map<std::string, double> params;
  std::vector<CheckRecord> checks;
  std::vector<BSSpectrum> spectra;
  std::vector<std::string> notes;
  double duration_ms = 0.0;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckRecord& c) { return c.pass; });
  }

  /// Record a measurement; passes when it does not exceed the tolerance.
  CheckRecord& add_check(const std::string& name, double measured, double tolerance,
                         const std::string& note = "") {
    checks.push_back(CheckRecord{name, measured, tolerance, measured <= tolerance, note});
    return checks.back();
  }

  /// Record a yes/no outcome (measured 0 = as expected).
  CheckRecord& add_flag(const std::string& name, bool ok, const std::string& note = "") {
    checks.push_back(CheckRecord{name, ok ? 0.0 : 1.0, 0.5, ok, note});
    return checks.back();
  }

  Json to_json() const {
    Json j;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["conventions"] = {{"orientation", conventions.orientation},
                        {"moser_sign", conventions.moser_sign},
                        {"holonomy", conventions.holonomy},
                        {"gauge_shift", conventions.gauge_shift}};
    j["params"] = Json::object();
    for (const auto& [k, v] : params) j["params"][k] = v;
    j["checks"] = Json::array();
    for (const auto& c : checks)
      j["checks"].push_back({{"name", c.name},
                             {"measured", c.measured},
                             {"tolerance", c.tolerance},
                             {"pass", c.pass},
                             {"note", c.note}});
    j["spectra"] = Json::array();
    for (const auto& s : spectra) {
      Json js;
      js["connection"] = s.connection_id;
      js["continuum"] = s.continuum;
      js["regular"] = Json::array();
      for (const auto& lv : s.regular)
        js["regular"].push_back(
            {lv.value, lv.holonomy.real(), lv.holonomy.imag(), lv.residual});
      js["singular"] = Json::array();
      for (const auto& lv : s.singular) js["singular"].push_back(lv.value);
      j["spectra"].push_back(std::move(js));
    }
    j["notes"] = notes;
    j["pass"] = pass();
    j["duration_ms"] = duration_ms;
    return j;
  }

  static Report from_json(const Json& j) {
    Report r;
    r.scenario = j.at("scenario").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.conventions.orientation = j.at("conventions").at("orientation").get<std::string>();
    r.conventions.moser_sign = j.at("conventions").at("moser_sign").get<std::string>();
    r.conventions.holonomy = j.at("conventions").at("holonomy").get<std::string>();
    r.conventions.gauge_shift = j.at("conventions").at("gauge_shift").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) r.params[k] = v.get<double>();
    for (const auto& c : j.at("checks"))
      r.checks.push_back(CheckRecord{c.at("name").get<std::string>(),
                                     c.at("measured").get<double>(),
                                     c.at("tolerance").get<double>(),
                                     c.at("pass").get<bool>(),
                                     c.at("note").get<std::string>()});
    for (const auto& js : j.at("spectra")) {
      BSSpectrum s;
      s.connection_id = js.at("connection").get<std::string>();
      s.continuum = js.at("continuum").get<bool>();
      for (const auto& row : js.at("regular"))
        s.regular.push_back(Level{row.at(0).get<double>(),
                                  Complex(row.at(1).get<double>(), row.at(2).get<double>()),
                                  row.at(3).get<double>()});
      for (const auto& v : js.at("singular")) s.singular.push_back(Level{v.get<double>()});
      r.spectra.push_back(std::move(s));
    }
    for (const auto& n : j.at("notes")) r.notes.push_back(n.get<std::string>());
    r.duration_ms = j.at("duration_ms").get<double>();
    return r;
  }
};

/// Reports are compared with the wall-clock field removed: everything else
/// must be byte-identical for the same (config, seed).
inline bool equals_modulo_duration(const Report& a, const Report& b) {
  Json ja = a.to_json(), jb = b.to_json();
  ja.erase("duration_ms");
  jb.erase("duration_ms");
  return ja.dump() == jb.dump();
}

namespace detail {

inline std::string sanitize_filename(const std::string& s) {
  std::string out;
  for (char ch : s)
    out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_') ? ch : '-';
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Write the report tree and one CSV per spectrum into `dir`.  The CSV
/// header is part of the external contract, byte for byte; singular levels
/// appear as rows with nan holonomy.
inline std::vector<std::string> emit_report(const Report& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "'");
  std::vector<std::string> written;

  const fs::path report_path = fs::path(dir) / (report.scenario + ".report.json");
  detail::write_text_file(report_path, report.to_json().dump(2) + "\n");
  written.push_back(report_path.string());

  for (const auto& s : report.spectra) {
    std::string csv = "level,holonomy_re,holonomy_im,residual\n";
    for (const auto& lv : s.regular)
      csv += detail::csv_number(lv.value) + "," + detail::csv_number(lv.holonomy.real()) + "," +
             detail::csv_number(lv.holonomy.imag()) + "," + detail::csv_number(lv.residual) +
             "\n";
    for (const auto& lv : s.singular)
      csv += detail::csv_number(lv.value) + ",nan,nan,nan\n";
    const fs::path csv_path =
        fs::path(dir) /
        (report.scenario + "." + detail::sanitize_filename(s.connection_id) + ".spectrum.csv");
    detail::write_text_file(csv_path, csv);
    written.push_back(csv_path.string());
  }
  return written;
}

/// Two-column whitespace-separated plot data (e.g. base value vs phase),
/// ready for gnuplot and friends.
inline std::string write_plot(const std::string& dir, const std::string& name,
                              const std::vector<std::pair<double, double>>& rows) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "'");
  std::string text;
  for (const auto& [x, y] : rows)
    text += detail::csv_number(x) + " " + detail::csv_number(y) + "\n";
  const fs::path path = fs::path(dir) / (detail::sanitize_filename(name) + ".dat");
  detail::write_text_file(path, text);
  return path.string();
}

}  // namespace prequant
