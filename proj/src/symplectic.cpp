#include "cvdiscord/symplectic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace cvdiscord {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::NonPositiveDiagonal: return "NonPositiveDiagonal";
    case ErrorKind::NotLocallyReducible: return "NotLocallyReducible";
    case ErrorKind::ComplexEigenvalue: return "ComplexEigenvalue";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::UnphysicalState: return "UnphysicalState";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::AsymmetricSingleModeNoise: return "AsymmetricSingleModeNoise";
    case ErrorKind::UnphysicalReconstruction: return "UnphysicalReconstruction";
    case ErrorKind::InsufficientScanRange: return "InsufficientScanRange";
    case ErrorKind::EtaOutOfRange: return "EtaOutOfRange";
    case ErrorKind::OverlapOutOfRange: return "OverlapOutOfRange";
    case ErrorKind::UnknownPair: return "UnknownPair";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view to_string(UnitConvention units) {
  return units == UnitConvention::Half ? "half" : "snl";
}

UnitConvention parse_units(std::string_view text) {
  if (text == "half") return UnitConvention::Half;
  if (text == "snl") return UnitConvention::Snl;
  throw Error(ErrorKind::ParseError, "units must be 'snl' or 'half', got '" + std::string(text) + "'");
}

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kReductionTolerance = 1e-10;

double scale_of(const Eigen::Matrix4d& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

double det2(const Eigen::Matrix2d& b) { return b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0); }

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace

void TwoModeCovariance::validate() const {
  const double tol = kSymmetryTolerance * scale_of(entries);
  if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorKind::NonSymmetric, "covariance matrix is not symmetric");
  }
  for (int i = 0; i < 4; ++i) {
    if (!(entries(i, i) > 0.0)) {
      throw Error(ErrorKind::NonPositiveDiagonal,
                  "diagonal entry " + std::to_string(i) + " is not positive");
    }
  }
}

TwoModeCovariance embed(const StandardForm& sf) {
  TwoModeCovariance cov;
  auto& g = cov.entries;
  g.setZero();
  g(0, 0) = g(1, 1) = sf.n;
  g(2, 2) = g(3, 3) = sf.m;
  g(0, 2) = g(2, 0) = sf.c1;
  g(1, 3) = g(3, 1) = -sf.c2;
  return cov;
}

StandardForm standard_form(const TwoModeCovariance& cov) {
  cov.validate();
  const auto& g = cov.entries;
  const double tol = kReductionTolerance * scale_of(g);

  const Eigen::Matrix2d alpha = g.block<2, 2>(0, 0);
  const Eigen::Matrix2d beta = g.block<2, 2>(2, 2);
  const Eigen::Matrix2d cross = g.block<2, 2>(0, 2);

  // Rotations leave a multiple of the identity unchanged, so the local blocks
  // must already be isotropic.
  const auto isotropic = [tol](const Eigen::Matrix2d& b) {
    return std::abs(b(0, 0) - b(1, 1)) <= tol && std::abs(b(0, 1)) <= tol;
  };
  if (!isotropic(alpha) || !isotropic(beta)) {
    throw Error(ErrorKind::NotLocallyReducible,
                "local blocks are not proportional to the identity; reduction would need local squeezing");
  }

  StandardForm sf;
  sf.n = 0.5 * (alpha(0, 0) + alpha(1, 1));
  sf.m = 0.5 * (beta(0, 0) + beta(1, 1));

  // Already in the (c1, -c2) pattern: pass through so the embedding round-trips.
  if (std::abs(cross(0, 1)) <= tol && std::abs(cross(1, 0)) <= tol && cross(0, 0) >= -tol &&
      cross(1, 1) <= tol) {
    sf.c1 = std::max(0.0, cross(0, 0));
    sf.c2 = std::max(0.0, -cross(1, 1));
    return sf;
  }

  Eigen::JacobiSVD<Eigen::Matrix2d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector2d s = svd.singularValues();
  // cross = U diag(s) V^T; turning U and V into proper rotations flips the
  // sign of the smaller singular value once per reflection.
  const double sign = svd.matrixU().determinant() * svd.matrixV().determinant();
  if (sign > 0.0 && s(1) > tol) {
    throw Error(ErrorKind::NotLocallyReducible,
                "cross-correlation block has positive determinant; no local rotation gives the (c1, -c2) pattern");
  }
  sf.c1 = s(0);
  sf.c2 = s(1) > tol ? s(1) : 0.0;
  return sf;
}

SymplecticData symplectic_data(const StandardForm& sf) {
  if (!(sf.n > 0.0) || !(sf.m > 0.0) || sf.c1 < 0.0 || sf.c2 < 0.0) {
    throw Error(ErrorKind::DomainError, "standard form needs n, m > 0 and c1, c2 >= 0");
  }
  const double n = sf.n, m = sf.m, c1 = sf.c1, c2 = sf.c2;

  SymplecticData sd;
  sd.form = sf;
  sd.i1 = n * n;
  sd.i2 = m * m;
  // The matrix stores -c2, so det of the cross block is -c1 c2. With this
  // sign a pure two-mode squeezed state has d_plus = d_minus = 1/2.
  sd.i3 = -c1 * c2;
  const double gap1 = n * m - c1 * c1;
  const double gap2 = n * m - c2 * c2;
  sd.i4 = gap1 * gap2;
  sd.delta = sd.i1 + sd.i2 + 2.0 * sd.i3;

  // delta^2 - 4 I4 expanded and regrouped; zero exactly for symmetric states.
  const double diff = n * n - m * m;
  double disc = diff * diff + 4.0 * (n * c1 - m * c2) * (m * c1 - n * c2);
  if (disc < -1e-12 * std::max(1.0, sd.delta * sd.delta)) {
    throw Error(ErrorKind::ComplexEigenvalue, "delta^2 < 4 I4: symplectic eigenvalues are complex");
  }
  disc = std::max(0.0, disc);

  const double dp2 = 0.5 * (sd.delta + std::sqrt(disc));
  if (!(dp2 > 0.0)) {
    throw Error(ErrorKind::ComplexEigenvalue, "non-positive symplectic spectrum");
  }
  // d_plus^2 d_minus^2 = I4; avoids subtracting two nearly equal numbers.
  const double dm2 = sd.i4 / dp2;
  sd.d_plus = std::sqrt(dp2);
  sd.d_minus = dm2 > 0.0 ? std::sqrt(dm2) : 0.0;

  const bool positive_definite = gap1 > 0.0 && gap2 > 0.0;
  sd.physical = positive_definite && sd.d_minus >= 0.5 - kClampTolerance;
  return sd;
}

Invariants invariants(const TwoModeCovariance& cov) {
  const auto& g = cov.entries;
  return {det2(g.block<2, 2>(0, 0)), det2(g.block<2, 2>(2, 2)), det2(g.block<2, 2>(0, 2)),
          g.determinant()};
}

double entropy_h(double x) {
  if (!(x >= 0.5 - kClampTolerance)) {
    throw Error(ErrorKind::DomainError, "entropy_h needs x >= 1/2, got " + std::to_string(x));
  }
  if (x <= 0.5) return 0.0;
  const double lo = x - 0.5;
  return (x + 0.5) * std::log2(x + 0.5) - lo * std::log2(lo);
}

TwoModeCovariance convert_units(const TwoModeCovariance& cov, UnitConvention from,
                                UnitConvention to) {
  if (from == to) return cov;
  TwoModeCovariance out = cov;
  out.entries *= (to == UnitConvention::Snl) ? 2.0 : 0.5;
  return out;
}

StandardForm convert_units(const StandardForm& sf, UnitConvention from, UnitConvention to) {
  if (from == to) return sf;
  const double k = (to == UnitConvention::Snl) ? 2.0 : 0.5;
  return {sf.n * k, sf.m * k, sf.c1 * k, sf.c2 * k};
}

TwoModeCovariance rotate_locally(const TwoModeCovariance& cov, double theta_a, double theta_b) {
  Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
  r.block<2, 2>(0, 0) = rotation(theta_a);
  r.block<2, 2>(2, 2) = rotation(theta_b);
  TwoModeCovariance out;
  out.entries = r * cov.entries * r.transpose();
  return out;
}

}  // namespace cvdiscord
