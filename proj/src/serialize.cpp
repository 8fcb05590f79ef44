#include "cvdiscord/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>

namespace cvdiscord {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

double round_significant(double value) {
  if (!std::isfinite(value) || value == 0.0) return value == 0.0 ? 0.0 : value;
  return std::strtod(format_number(value).c_str(), nullptr);
}

double parse_double(std::string_view text, std::string_view field) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorKind::ParseError,
                "field '" + std::string(field) + "': not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

double r9(double v) { return round_significant(v); }

}  // namespace

nlohmann::json covariance_to_json(const TwoModeCovariance& cov, UnitConvention units) {
  const TwoModeCovariance out = convert_units(cov, UnitConvention::Half, units);
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) entries.push_back(r9(out.entries(i, j)));
  }
  return {{"entries", entries}, {"units", std::string(to_string(units))}};
}

TwoModeCovariance covariance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("entries") || !j.contains("units")) {
    throw Error(ErrorKind::ParseError, "covariance JSON needs 'entries' and 'units'");
  }
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != 16) {
    throw Error(ErrorKind::ParseError, "field 'entries': expected 16 row-major numbers");
  }
  if (!j.at("units").is_string()) {
    throw Error(ErrorKind::ParseError, "field 'units': expected \"snl\" or \"half\"");
  }
  TwoModeCovariance cov;
  for (int k = 0; k < 16; ++k) {
    if (!entries[static_cast<std::size_t>(k)].is_number()) {
      throw Error(ErrorKind::ParseError, "field 'entries': element " + std::to_string(k) + " is not a number");
    }
    cov.entries(k / 4, k % 4) = entries[static_cast<std::size_t>(k)].get<double>();
  }
  return convert_units(cov, parse_units(j.at("units").get<std::string>()), UnitConvention::Half);
}

nlohmann::json state_to_json(const StandardForm& sf, UnitConvention units) {
  const StandardForm out = convert_units(sf, UnitConvention::Half, units);
  return {{"n", r9(out.n)}, {"m", r9(out.m)}, {"c1", r9(out.c1)}, {"c2", r9(out.c2)}, {"units", std::string(to_string(units))}};
}

nlohmann::json report_to_json(const CorrelationReport& r, UnitConvention units) {
  const SymplecticData& sd = r.symplectic;
  nlohmann::json j;
  j["state"] = state_to_json(r.state, units);
  j["mutual_information"] = r9(r.mutual_information);
  j["classical_correlations"] = r9(r.classical_correlations);
  j["discord_ab"] = r9(r.discord_ab);
  j["discord_ba"] = r9(r.discord_ba);
  j["e_min"] = r9(r.e_min);
  j["e_min_branch"] = std::string(to_string(r.e_min_branch));
  j["inseparability"] = r9(r.inseparability);
  j["squeezing_snl"] = r9(r.squeezing_snl);
  j["symplectic"] = {{"i1", r9(sd.i1)},         {"i2", r9(sd.i2)},
                     {"i3", r9(sd.i3)},         {"i4", r9(sd.i4)},
                     {"delta", r9(sd.delta)},   {"d_plus", r9(sd.d_plus)},
                     {"d_minus", r9(sd.d_minus)}, {"physical", sd.physical}};
  j["flags"] = {{"entangled_sufficient", r.flags.entangled_sufficient},
                {"classical", r.flags.classical},
                {"inseparable", r.flags.inseparable}};
  j["units"] = {{"information", "bits"},
                {"inseparability", "snl"},
                {"squeezing", "snl"},
                {"e_min", "half"},
                {"symplectic", "half"}};
  return j;
}

nlohmann::json record_to_json(const VarianceRecord& rec) {
  return {{"rf_hz", r9(rec.rf_frequency)},   {"var_xa", r9(rec.var_xa)},
          {"var_ya", r9(rec.var_ya)},         {"var_xb", r9(rec.var_xb)},
          {"var_yb", r9(rec.var_yb)},         {"var_xminus", r9(rec.var_xminus)},
          {"var_yplus", r9(rec.var_yplus)},   {"snl_ref", r9(rec.snl_reference)},
          {"n_samples", rec.n_samples}};
}

std::string sweep_csv_row(double key, const CorrelationReport& r) {
  return format_number(key) + ',' + format_number(r.discord_ab) + ',' + format_number(r.discord_ba) +
         ',' + format_number(r.mutual_information) + ',' + format_number(r.classical_correlations) +
         ',' + format_number(r.inseparability) + ',' + format_number(r.squeezing_snl) + ',' +
         (r.symplectic.physical ? "true" : "false");
}

void write_sweep_csv(std::ostream& out, const AttenuationSweep& sweep) {
  out << kSweepCsvHeader << '\n';
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    out << sweep_csv_row(sweep.transmissions[i], sweep.reports[i]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SpectrumSweep& sweep) {
  out << kSweepCsvHeader << '\n';
  for (const auto& row : sweep.rows) {
    CorrelationReport r = row.report;
    r.squeezing_snl = row.squeezing_snl;
    out << sweep_csv_row(row.rf_frequency, r) << '\n';
  }
}

nlohmann::json sweep_to_json(const AttenuationSweep& sweep, UnitConvention units) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    nlohmann::json row = report_to_json(sweep.reports[i], units);
    row["eta"] = r9(sweep.transmissions[i]);
    rows.push_back(std::move(row));
  }
  return {{"base_state", state_to_json(sweep.base_state, units)}, {"rows", rows}};
}

nlohmann::json sweep_to_json(const SpectrumSweep& sweep, UnitConvention units) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : sweep.rows) {
    nlohmann::json row = report_to_json(r.report, units);
    row["rf_hz"] = r9(r.rf_frequency);
    row["squeezing_snl"] = r9(r.squeezing_snl);
    row["warnings"] = r.warnings;
    rows.push_back(std::move(row));
  }
  return {{"rows", rows}, {"skipped", sweep.skipped}};
}

nlohmann::json verdict_to_json(const AdditivityVerdict& v) {
  return {{"pair_a", v.pair_a.label()},
          {"pair_b", v.pair_b.label()},
          {"discord_a", r9(v.discord_a)},
          {"discord_b", r9(v.discord_b)},
          {"sub_sum", r9(v.sub_sum)},
          {"total_discord", r9(v.total_discord)},
          {"classification", std::string(to_string(v.classification))}};
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace cvdiscord
