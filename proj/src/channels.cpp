#include "cvdiscord/channels.hpp"

#include <algorithm>
#include <map>

#include "cvdiscord/format.hpp"

namespace cvdiscord {

StandardForm attenuate_symmetric(const StandardForm& sf, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw Error(ErrorKind::EtaOutOfRange, "transmission must lie in [0, 1], got " + format_number(eta));
  }
  const double loss = 0.5 * (1.0 - eta);
  return {eta * sf.n + loss, eta * sf.m + loss, eta * sf.c1, eta * sf.c2};
}

AttenuationSweep run_attenuation_sweep(const StandardForm& sf, const std::vector<double>& transmissions) {
  for (std::size_t i = 0; i < transmissions.size(); ++i) {
    const double eta = transmissions[i];
    if (!(eta >= 0.0 && eta <= 1.0)) {
      throw Error(ErrorKind::EtaOutOfRange, "transmission must lie in [0, 1], got " + format_number(eta));
    }
    if (i > 0 && !(eta > transmissions[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "transmissions must be strictly increasing");
    }
  }
  if (!symplectic_data(sf).physical) {
    throw Error(ErrorKind::UnphysicalState, "unphysical: d_minus < 1/2");
  }
  AttenuationSweep sweep;
  sweep.base_state = sf;
  sweep.transmissions = transmissions;
  sweep.reports.reserve(transmissions.size());
  for (double eta : transmissions) {
    sweep.reports.push_back(correlation_report(attenuate_symmetric(sf, eta)));
  }
  return sweep;
}

std::vector<double> transmission_grid(int points) {
  if (points < 2) throw Error(ErrorKind::InvalidArgument, "transmission grid needs >= 2 points");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
  return out;
}

SpectrumSweep run_spectrum_sweep(const std::vector<VarianceRecord>& records) {
  SpectrumSweep sweep;
  std::map<double, SpectrumRow> by_frequency;
  for (const auto& record : records) {
    const std::string where = "rf " + format_number(record.rf_frequency) + " Hz: ";
    try {
      if (by_frequency.contains(record.rf_frequency)) {
        throw Error(ErrorKind::InvalidArgument, "duplicate frequency");
      }
      const VarianceRecord normalized = record.normalized();
      Reconstruction rec = extract_standard_form(normalized);
      SpectrumRow row;
      row.rf_frequency = record.rf_frequency;
      row.report = correlation_report(rec.state);
      row.squeezing_snl = std::min(normalized.var_xminus, normalized.var_yplus);
      row.warnings = std::move(rec.warnings);
      by_frequency.emplace(record.rf_frequency, std::move(row));
    } catch (const Error& e) {
      sweep.skipped.push_back(where + e.what());
    }
  }
  for (auto& [rf, row] : by_frequency) sweep.rows.push_back(std::move(row));
  return sweep;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Region region) {
  switch (region) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
    case Region::IV: return "IV";
  }
  return "?";
}

Region parse_region(std::string_view text) {
  if (text == "I") return Region::I;
  if (text == "II") return Region::II;
  if (text == "III") return Region::III;
  if (text == "IV") return Region::IV;
  throw Error(ErrorKind::UnknownPair, "unknown region '" + std::string(text) + "'");
}

bool SubchannelPair::matched() const {
  return (probe == Region::I && conjugate == Region::IV) ||
         (probe == Region::II && conjugate == Region::III);
}

std::string SubchannelPair::label() const {
  return std::string(to_string(probe)) + ";" + std::string(to_string(conjugate));
}

SubchannelPair parse_pair(std::string_view text) {
  const auto sep = text.find_first_of(";,+");
  if (sep == std::string_view::npos) {
    throw Error(ErrorKind::UnknownPair, "pair must look like 'II;III', got '" + std::string(text) + "'");
  }
  SubchannelPair pair{parse_region(text.substr(0, sep)), parse_region(text.substr(sep + 1))};
  const bool probe_ok = pair.probe == Region::I || pair.probe == Region::II;
  const bool conj_ok = pair.conjugate == Region::III || pair.conjugate == Region::IV;
  if (!probe_ok || !conj_ok) {
    throw Error(ErrorKind::UnknownPair, "pair must join a probe half (I, II) with a conjugate half (III, IV)");
  }
  return pair;
}

const StandardForm& SubchannelSet::state(const SubchannelPair& pair) const {
  for (const auto& [p, sf] : states) {
    if (p == pair) return sf;
  }
  throw Error(ErrorKind::UnknownPair, "pair " + pair.label() + " not in subchannel set");
}

SubchannelSet build_subchannels(const StandardForm& correlated, double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw Error(ErrorKind::OverlapOutOfRange, "overlap must lie in [0, 1], got " + format_number(overlap));
  }
  if (!symplectic_data(correlated).physical) {
    throw Error(ErrorKind::UnphysicalState, "unphysical: d_minus < 1/2");
  }
  SubchannelSet set;
  set.overlap = overlap;
  set.total_state = correlated;
  for (Region probe : {Region::I, Region::II}) {
    for (Region conjugate : {Region::III, Region::IV}) {
      const SubchannelPair pair{probe, conjugate};
      const double eta = pair.matched() ? overlap : 1.0 - overlap;
      set.states.emplace_back(pair, attenuate_symmetric(correlated, eta));
    }
  }
  return set;
}

std::string_view to_string(Additivity a) {
  switch (a) {
    case Additivity::Subadditive: return "SUBADDITIVE";
    case Additivity::Superadditive: return "SUPERADDITIVE";
    case Additivity::Additive: return "ADDITIVE";
  }
  return "?";
}

AdditivityVerdict classify_additivity(const SubchannelSet& set, const SubchannelPair& pair_a,
                                      const SubchannelPair& pair_b) {
  if (pair_a == pair_b) {
    throw Error(ErrorKind::InvalidArgument, "additivity needs two distinct pairs");
  }
  AdditivityVerdict v;
  v.pair_a = pair_a;
  v.pair_b = pair_b;
  v.discord_a = discord(symplectic_data(set.state(pair_a)));
  v.discord_b = discord(symplectic_data(set.state(pair_b)));
  v.total_discord = discord(symplectic_data(set.total_state));
  v.sub_sum = v.discord_a + v.discord_b;
  if (v.total_discord < v.sub_sum - kAdditivityTolerance) {
    v.classification = Additivity::Subadditive;
  } else if (v.total_discord > v.sub_sum + kAdditivityTolerance) {
    v.classification = Additivity::Superadditive;
  } else {
    v.classification = Additivity::Additive;
  }
  return v;
}

}  // namespace cvdiscord
