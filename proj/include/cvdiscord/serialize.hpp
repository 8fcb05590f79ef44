#pragma once

// JSON and CSV encodings of the library's value types. Numbers are written
// with nine significant digits so repeated runs are byte-identical.

#include <json.hpp>

#include <iosfwd>
#include <string>

#include "cvdiscord/channels.hpp"
#include "cvdiscord/discord.hpp"
#include "cvdiscord/format.hpp"
#include "cvdiscord/homodyne.hpp"
#include "cvdiscord/symplectic.hpp"

namespace cvdiscord {

/// {"entries": [16 row-major values], "units": "snl" | "half"}.
/// `units` selects the output convention; `cov` is always Half.
nlohmann::json covariance_to_json(const TwoModeCovariance& cov, UnitConvention units);
/// Returns the covariance in Half units whatever the file's convention.
TwoModeCovariance covariance_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const StandardForm& sf, UnitConvention units);
nlohmann::json report_to_json(const CorrelationReport& report, UnitConvention units);
nlohmann::json record_to_json(const VarianceRecord& record);

inline constexpr const char* kSweepCsvHeader =
    "eta_or_rf,discord_ab,discord_ba,mutual_info,classical_J,inseparability,squeezing_snl,physical";

std::string sweep_csv_row(double key, const CorrelationReport& report);

void write_sweep_csv(std::ostream& out, const AttenuationSweep& sweep);
void write_sweep_csv(std::ostream& out, const SpectrumSweep& sweep);
nlohmann::json sweep_to_json(const AttenuationSweep& sweep, UnitConvention units);
nlohmann::json sweep_to_json(const SpectrumSweep& sweep, UnitConvention units);

nlohmann::json verdict_to_json(const AdditivityVerdict& verdict);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace cvdiscord
