#pragma once

// Gaussian quantum discord, mutual information, classical correlations and
// the two-quadrature inseparability for two-mode states in standard form.

#include <cstdint>
#include <random>
#include <string_view>

#include "cvdiscord/symplectic.hpp"

namespace cvdiscord {

/// Which mode is conditioned on a Gaussian measurement of the other.
/// A_given_B: measure B, condition A (the usual D_{A;B}).
enum class Direction { A_given_B, B_given_A };

/// Which piece of the piecewise E_min expression applied.
enum class EminBranch { First, Second };

std::string_view to_string(EminBranch branch);

/// Below this many bits a state is reported as classical.
inline constexpr double kClassicalDiscordTolerance = 1e-6;

struct EminResult {
  double value = 0.25;
  EminBranch branch = EminBranch::Second;
};

struct CorrelationFlags {
  bool entangled_sufficient = false;  // discord > 1: entanglement certified
  bool classical = false;
  bool inseparable = false;  // inseparability < 2 (SNL)
};

struct CorrelationReport {
  StandardForm state;  // Half units
  SymplecticData symplectic;
  double mutual_information = 0.0;
  double classical_correlations = 0.0;  // J for the A_given_B direction
  double discord_ab = 0.0;
  double discord_ba = 0.0;
  double e_min = 0.25;  // A_given_B, Half units (determinant)
  EminBranch e_min_branch = EminBranch::Second;
  double inseparability = 2.0;  // SNL units
  double squeezing_snl = 1.0;   // smaller joint-quadrature variance, SNL units
  CorrelationFlags flags;
};

double mutual_information(const SymplecticData& sd);

/// Minimal conditional determinant of A after a Gaussian measurement on B.
/// Uses a factorised (cancellation-free) form of the standard piecewise
/// expression; the branch test is the same inequality, rearranged.
EminResult e_min(const SymplecticData& sd);

/// The piecewise expression evaluated exactly as written in terms of the
/// invariants I1..I4. Algebraically equal to e_min(); kept for comparison.
EminResult e_min_invariant_form(const SymplecticData& sd);

double discord(const SymplecticData& sd, Direction direction = Direction::A_given_B);
double classical_correlations(const SymplecticData& sd,
                              Direction direction = Direction::A_given_B);

/// Delta^2 X_- + Delta^2 Y_+ in SNL units for a Half-unit standard form.
double inseparability(const StandardForm& sf);

/// min(Delta^2 X_-, Delta^2 Y_+) in SNL units for a Half-unit standard form.
double joint_squeezing(const StandardForm& sf);

/// Throws UnphysicalState if sf is not a physical state.
CorrelationReport correlation_report(const StandardForm& sf);

// ---------------------------------------------------------------------------
// Brute-force oracle

/// Pure single-mode Gaussian measurement: R(angle) diag(s/2, 1/(2s)) R^T with
/// s = exp(2 squeeze). squeeze = +infinity is the homodyne limit.
struct GaussianMeasurement {
  double squeeze = 0.0;
  double angle = 0.0;
};

struct OracleGrid {
  double squeeze_max = 8.0;
  int n_squeeze = 64;
  int n_angle = 64;
};

struct OracleResult {
  double e_min = 0.25;
  GaussianMeasurement best;
  bool homodyne_limit = false;
};

/// det of A's covariance after measuring B with the given measurement;
/// noise_scale >= 1 inflates the measurement covariance (mixed POVM seed).
double conditional_determinant(const StandardForm& sf, const GaussianMeasurement& measurement,
                               double noise_scale = 1.0);

/// Grid search over (squeeze, angle) plus the homodyne limit, refined by
/// alternating golden-section line searches. Independent of the closed form.
OracleResult brute_force_e_min_detailed(const StandardForm& sf, const OracleGrid& grid = {});

inline double brute_force_e_min(const StandardForm& sf, const OracleGrid& grid = {}) {
  return brute_force_e_min_detailed(sf, grid).e_min;
}

/// Draws a physical standard form with n, m in [0.5, n_max] and correlations
/// up to the positivity bound, rejecting unphysical draws.
StandardForm random_physical_state(std::mt19937_64& rng, double n_max = 3.0);

}  // namespace cvdiscord
