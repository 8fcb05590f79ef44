#pragma once

// Covariance reconstruction from single- and joint-homodyne variances, and a
// sampling simulator of the phase-scanned dual-homodyne measurement.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvdiscord/symplectic.hpp"

namespace cvdiscord {

/// One set of measured variances at one RF frequency. Variances are raw
/// powers in the same units as snl_reference; normalized() divides them out.
struct VarianceRecord {
  double rf_frequency = 0.0;  // Hz
  double var_xa = 1.0;
  double var_ya = 1.0;
  double var_xb = 1.0;
  double var_yb = 1.0;
  double var_xminus = 1.0;  // (X_A - X_B)/sqrt(2) at the scan minimum
  double var_yplus = 1.0;   // (Y_A + Y_B)/sqrt(2) at the scan minimum
  double snl_reference = 1.0;
  std::int64_t n_samples = 0;

  /// Variances in SNL units, snl_reference = 1. Throws DomainError on
  /// non-positive entries.
  VarianceRecord normalized() const;
};

enum class TraceKind { Sum, Difference };

struct ScanTrace {
  std::vector<double> phase;     // local-oscillator phase, rad
  std::vector<double> variance;  // SNL units
  TraceKind which = TraceKind::Difference;
};

/// Single-mode noise asymmetry above this (SNL) rejects a record.
inline constexpr double kMaxSingleModeAsymmetry = 0.2;

struct Reconstruction {
  StandardForm state;  // Half units
  std::vector<std::string> warnings;
  bool projected = false;  // pulled onto the physical boundary
};

/// n = var_xa/2, m = var_xb/2, c1 = (var_xa - var_xminus)/2,
/// c2 = (var_yb - var_yplus)/2 after SNL normalization.
///
/// The correlation formulas hold for symmetric states (n = m); otherwise c1
/// and c2 come out shifted by +-(n - m)/2 and a warning is attached.
/// Negative correlations clamp to zero with a warning. A reconstruction whose
/// d_minus falls below 1/2 by at most five statistical standard deviations is
/// projected onto d_minus = 1/2 by shrinking the correlations; larger
/// violations throw UnphysicalReconstruction.
Reconstruction extract_standard_form(const VarianceRecord& record);

/// Standard error of a sample variance, relative to the variance itself.
double relative_variance_error(std::int64_t n_samples);

struct ScanFit {
  double minimum = 0.0;
  double offset = 0.0;
  double amplitude = 0.0;
  int harmonic = 1;  // fitted cos(harmonic * phase + phi0)
  bool fallback = false;  // raw minimum used; fit residual too large
};

/// Fits offset + amplitude cos(k phase + phi0) for k = 1 and k = 2, keeps the
/// better fit and returns offset - |amplitude|.
ScanFit fit_scan(const ScanTrace& trace);

inline double scan_minimum(const ScanTrace& trace) { return fit_scan(trace).minimum; }

struct DualHomodyneRun {
  ScanTrace sum;
  ScanTrace difference;
  VarianceRecord record;
};

/// Draws n_samples quadrature vectors per phase point from the Gaussian with
/// covariance embed(sf). The LO phase rotates mode B's measured quadratures.
/// Each phase point has its own seeded substream, so results do not depend on
/// thread scheduling. Single-mode variances pool every phase point.
DualHomodyneRun simulate_dual_homodyne(const StandardForm& sf, std::int64_t n_samples,
                                       const std::vector<double>& phases, std::uint64_t seed,
                                       double rf_frequency = 0.0);

/// n equally spaced phases over [0, 2 pi).
std::vector<double> uniform_phases(int n);

// CSV: rf_hz,var_xa,var_ya,var_xb,var_yb,var_xminus,var_yplus,snl_ref,n_samples
inline constexpr const char* kVarianceCsvHeader =
    "rf_hz,var_xa,var_ya,var_xb,var_yb,var_xminus,var_yplus,snl_ref,n_samples";

VarianceRecord parse_variance_row(const std::string& line);
std::string format_variance_row(const VarianceRecord& record);

struct VarianceTable {
  std::vector<VarianceRecord> records;
  std::vector<std::string> errors;  // rows that failed to parse, with line numbers
};

/// Throws ParseError for an empty stream or a missing/incorrect header.
VarianceTable read_variance_csv(std::istream& in);
void write_variance_csv(std::ostream& out, const std::vector<VarianceRecord>& records);

void write_trace_csv(std::ostream& out, const ScanTrace& trace);

}  // namespace cvdiscord
