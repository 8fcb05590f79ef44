#pragma once

// Symmetric loss, frequency-spectrum sweeps and the two-pair spatial
// subchannel model with its additivity classification.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvdiscord/discord.hpp"
#include "cvdiscord/homodyne.hpp"

namespace cvdiscord {

/// Beam-splitter loss with transmission eta on both arms (Half units):
/// n' = eta n + (1 - eta)/2, c' = eta c.
StandardForm attenuate_symmetric(const StandardForm& sf, double eta);

struct AttenuationSweep {
  StandardForm base_state;
  std::vector<double> transmissions;
  std::vector<CorrelationReport> reports;
};

/// transmissions must lie in [0, 1] and be strictly increasing.
AttenuationSweep run_attenuation_sweep(const StandardForm& sf, const std::vector<double>& transmissions);

/// 0, step, 2 step, ..., 1.
std::vector<double> transmission_grid(int points);

struct SpectrumRow {
  double rf_frequency = 0.0;
  CorrelationReport report;
  double squeezing_snl = 1.0;  // min(var_xminus, var_yplus) after normalization
  std::vector<std::string> warnings;
};

struct SpectrumSweep {
  std::vector<SpectrumRow> rows;
  std::vector<std::string> skipped;  // one message per rejected record
};

/// Extracts and evaluates every record; failures are collected in `skipped`.
/// Rows come out ordered by frequency; a repeated frequency is skipped.
SpectrumSweep run_spectrum_sweep(const std::vector<VarianceRecord>& records);

// ---------------------------------------------------------------------------
// Spatial subchannels. Probe halves are I and II, conjugate halves III and IV;
// centro-symmetric partners are (I, IV) and (II, III).

enum class Region { I, II, III, IV };

std::string_view to_string(Region region);
Region parse_region(std::string_view text);

struct SubchannelPair {
  Region probe = Region::I;
  Region conjugate = Region::III;

  bool operator==(const SubchannelPair&) const = default;
  bool matched() const;
  std::string label() const;  // e.g. "II;III"
};

SubchannelPair parse_pair(std::string_view text);

struct SubchannelSet {
  double overlap = 1.0;
  StandardForm total_state;
  std::vector<std::pair<SubchannelPair, StandardForm>> states;

  const StandardForm& state(const SubchannelPair& pair) const;  // UnknownPair if absent
};

/// Matched pairs see `correlated` attenuated with eta = overlap, mismatched
/// pairs with eta = 1 - overlap.
SubchannelSet build_subchannels(const StandardForm& correlated, double overlap);

enum class Additivity { Subadditive, Superadditive, Additive };

std::string_view to_string(Additivity a);

inline constexpr double kAdditivityTolerance = 1e-6;

struct AdditivityVerdict {
  SubchannelPair pair_a;
  SubchannelPair pair_b;
  double discord_a = 0.0;
  double discord_b = 0.0;
  double total_discord = 0.0;
  double sub_sum = 0.0;
  Additivity classification = Additivity::Additive;
};

/// Compares D_total with D(pair_a) + D(pair_b) (A_given_B discord).
AdditivityVerdict classify_additivity(const SubchannelSet& set, const SubchannelPair& pair_a,
                                      const SubchannelPair& pair_b);

}  // namespace cvdiscord
