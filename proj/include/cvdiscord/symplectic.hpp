#pragma once

// Two-mode Gaussian covariance matrices, standard-form reduction, symplectic
// invariants and the thermal entropy kernel.
//
// All math in this library uses the convention in which the vacuum has
// quadrature variance 1/2 (UnitConvention::Half). File and CLI I/O use
// shot-noise-limit units (vacuum variance 1), converted at the boundary.

#include <Eigen/Core>

#include <string_view>

#include "cvdiscord/error.hpp"

namespace cvdiscord {

/// Values this far below an analytic bound (x = 1/2, d_minus = 1/2) are
/// clamped onto it; anything further is an error.
inline constexpr double kClampTolerance = 1e-9;

enum class UnitConvention { Half, Snl };

std::string_view to_string(UnitConvention units);
UnitConvention parse_units(std::string_view text);

/// 4x4 quadrature covariance in the order (X_A, Y_A, X_B, Y_B), Half units.
struct TwoModeCovariance {
  Eigen::Matrix4d entries = Eigen::Matrix4d::Identity() * 0.5;

  /// Throws NonSymmetric / NonPositiveDiagonal.
  void validate() const;
};

/// Standard-form parameters (n, m, c1, c2). The matrix carries -c2 in the
/// phase cross-correlation slot; both stored fields are non-negative.
struct StandardForm {
  double n = 0.5;
  double m = 0.5;
  double c1 = 0.0;
  double c2 = 0.0;

  static StandardForm vacuum() { return {}; }

  /// Roles of A and B exchanged.
  StandardForm swapped() const { return {m, n, c1, c2}; }

  bool operator==(const StandardForm&) const = default;
};

struct SymplecticData {
  StandardForm form;
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;  // det of the cross block, -c1*c2
  double i4 = 0.0;
  double delta = 0.0;
  double d_plus = 0.0;
  double d_minus = 0.0;
  bool physical = false;
};

/// Embeds the standard form into the full covariance matrix.
TwoModeCovariance embed(const StandardForm& sf);

/// Reduces a covariance by local rotations. Inputs already in standard form
/// are returned unchanged; otherwise the canonical ordering c1 >= c2 is used
/// (the two orderings are related by a local quarter-turn on each mode).
StandardForm standard_form(const TwoModeCovariance& cov);

/// Invariants, symplectic eigenvalues and the physicality flag.
///
/// The eigenvalue discriminant and d_minus are evaluated in forms that do not
/// cancel catastrophically at pure states, where d_plus = d_minus = 1/2.
SymplecticData symplectic_data(const StandardForm& sf);

struct Invariants {
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;
  double i4 = 0.0;
};

/// I1..I4 straight from the 4x4 matrix as determinants of its blocks.
/// Works for any covariance, reduced or not.
Invariants invariants(const TwoModeCovariance& cov);

/// h(x) = (x + 1/2) log2(x + 1/2) - (x - 1/2) log2(x - 1/2), h(1/2) = 0.
double entropy_h(double x);

TwoModeCovariance convert_units(const TwoModeCovariance& cov, UnitConvention from,
                                UnitConvention to);
StandardForm convert_units(const StandardForm& sf, UnitConvention from, UnitConvention to);

/// Applies R(theta_a) (+) R(theta_b) to the covariance.
TwoModeCovariance rotate_locally(const TwoModeCovariance& cov, double theta_a, double theta_b);

}  // namespace cvdiscord
