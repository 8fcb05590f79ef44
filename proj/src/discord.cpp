#include "cvdiscord/discord.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cvdiscord {

std::string_view to_string(EminBranch branch) {
  return branch == EminBranch::First ? "first" : "second";
}

namespace {

constexpr double kZeroI3 = 1e-12;

void require_physical(const SymplecticData& sd) {
  if (!sd.physical) {
    throw Error(ErrorKind::UnphysicalState,
                "unphysical: d_minus < 1/2 (d_minus = " + std::to_string(sd.d_minus) + ")");
  }
}

double h_of_sqrt(double e) { return entropy_h(std::sqrt(std::max(e, 0.0))); }

const SymplecticData& oriented(const SymplecticData& sd, Direction direction,
                               SymplecticData& storage) {
  if (direction == Direction::A_given_B) return sd;
  storage = symplectic_data(sd.form.swapped());
  return storage;
}

}  // namespace

double mutual_information(const SymplecticData& sd) {
  require_physical(sd);
  return entropy_h(sd.form.n) + entropy_h(sd.form.m) - entropy_h(sd.d_plus) -
         entropy_h(sd.d_minus);
}

EminResult e_min(const SymplecticData& sd) {
  require_physical(sd);
  const double n = sd.form.n, m = sd.form.m;
  const double c1s = sd.form.c1 * sd.form.c1, c2s = sd.form.c2 * sd.form.c2;
  const double i1 = sd.i1, i2 = sd.i2, i3 = sd.i3, i4 = sd.i4;

  EminResult out;
  if (std::abs(i3) > kZeroI3) {
    // (I1 + 4 I4)(I2 + 1/4) I3^2 - (I1 I2 - I4)^2, factorised; the first
    // branch applies where this is non-negative.
    const double f1 = 4.0 * c1s * c2s * m + c1s * n - 4.0 * c2s * m * m * n;
    const double f2 = 4.0 * c1s * c2s * m - 4.0 * c1s * m * m * n + c2s * n;
    if (f1 * f2 >= 0.0) {
      const double q = i2 - 0.25;
      // I3^2 - (I1 - 4 I4)(I2 - 1/4), factorised.
      const double g1 = 4.0 * c1s * m - 4.0 * m * m * n + n;
      const double g2 = 4.0 * c2s * m - 4.0 * m * m * n + n;
      const double root = std::sqrt(std::max(0.0, 0.25 * g1 * g2));
      out.value = (2.0 * i3 * i3 - (i1 - 4.0 * i4) * q + 2.0 * std::abs(i3) * root) / (4.0 * q * q);
      out.branch = EminBranch::First;
      return out;
    }
  }
  // I3^4 + (I1 I2 - I4)^2 - 2 I3^2 (I1 I2 + I4) = (n m (c1^2 - c2^2))^2.
  const double root = n * m * std::abs(c1s - c2s);
  out.value = (i1 * i2 - i3 * i3 + i4 - root) / (2.0 * i2);
  out.branch = EminBranch::Second;
  return out;
}

EminResult e_min_invariant_form(const SymplecticData& sd) {
  require_physical(sd);
  const double i1 = sd.i1, i2 = sd.i2, i3 = sd.i3, i4 = sd.i4;
  EminResult out;
  if (std::abs(i3) > kZeroI3) {
    const double ratio = std::pow(i1 * i2 - i4, 2) / ((i1 + 4.0 * i4) * (i2 + 0.25) * i3 * i3);
    if (ratio <= 1.0) {
      const double q = i2 - 0.25;
      const double inner = i3 * i3 - (i1 - 4.0 * i4) * q;
      out.value = (2.0 * i3 * i3 - (i1 - 4.0 * i4) * q + 2.0 * std::abs(i3) * std::sqrt(std::max(0.0, inner))) /
                  (4.0 * q * q);
      out.branch = EminBranch::First;
      return out;
    }
  }
  const double inner =
      std::pow(i3, 4) + std::pow(i1 * i2 - i4, 2) - 2.0 * i3 * i3 * (i1 * i2 + i4);
  out.value = (i1 * i2 - i3 * i3 + i4 - std::sqrt(std::max(0.0, inner))) / (2.0 * i2);
  out.branch = EminBranch::Second;
  return out;
}

double discord(const SymplecticData& sd, Direction direction) {
  SymplecticData storage;
  const SymplecticData& s = oriented(sd, direction, storage);
  require_physical(s);
  const double value = entropy_h(s.form.m) - entropy_h(s.d_minus) - entropy_h(s.d_plus) +
                       h_of_sqrt(e_min(s).value);
  // Rounding leaves ~1e-15 negatives on classical states.
  return (value < 0.0 && value > -kClampTolerance) ? 0.0 : value;
}

double classical_correlations(const SymplecticData& sd, Direction direction) {
  SymplecticData storage;
  const SymplecticData& s = oriented(sd, direction, storage);
  require_physical(s);
  const double value = entropy_h(s.form.n) - h_of_sqrt(e_min(s).value);
  return (value < 0.0 && value > -kClampTolerance) ? 0.0 : value;
}

double inseparability(const StandardForm& sf) {
  return (sf.n + sf.m - 2.0 * sf.c1) + (sf.n + sf.m - 2.0 * sf.c2);
}

double joint_squeezing(const StandardForm& sf) {
  return std::min(sf.n + sf.m - 2.0 * sf.c1, sf.n + sf.m - 2.0 * sf.c2);
}

CorrelationReport correlation_report(const StandardForm& sf) {
  CorrelationReport r;
  r.state = sf;
  r.symplectic = symplectic_data(sf);
  require_physical(r.symplectic);

  const EminResult em = e_min(r.symplectic);
  r.e_min = em.value;
  r.e_min_branch = em.branch;
  r.mutual_information = mutual_information(r.symplectic);
  r.classical_correlations = classical_correlations(r.symplectic);
  r.discord_ab = discord(r.symplectic, Direction::A_given_B);
  r.discord_ba = discord(r.symplectic, Direction::B_given_A);
  r.inseparability = inseparability(sf);
  r.squeezing_snl = joint_squeezing(sf);
  r.flags.entangled_sufficient = r.discord_ab > 1.0;
  r.flags.classical = r.discord_ab < kClassicalDiscordTolerance;
  r.flags.inseparable = r.inseparability < 2.0;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kInvPhi = 0.6180339887498949;

Eigen::Matrix2d cross_block(const StandardForm& sf) {
  Eigen::Matrix2d c;
  c << sf.c1, 0.0, 0.0, -sf.c2;
  return c;
}

double homodyne_determinant(const StandardForm& sf, double angle) {
  // Infinite squeezing along the second axis of R(angle): B's quadrature
  // along u is measured perfectly, the orthogonal one not at all.
  const Eigen::Vector2d u(-std::sin(angle), std::cos(angle));
  const Eigen::Matrix2d c = cross_block(sf);
  const Eigen::Vector2d v = c * u;
  const Eigen::Matrix2d cond = sf.n * Eigen::Matrix2d::Identity() - v * v.transpose() / sf.m;
  return cond.determinant();
}

template <typename F>
double golden_section(F&& f, double lo, double hi, int iterations, double& best_x) {
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations && (b - a) > 1e-13; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  best_x = f1 < f2 ? x1 : x2;
  return std::min(f1, f2);
}

}  // namespace

double conditional_determinant(const StandardForm& sf, const GaussianMeasurement& measurement,
                               double noise_scale) {
  if (std::isinf(measurement.squeeze)) return homodyne_determinant(sf, measurement.angle);
  const double s = std::exp(2.0 * measurement.squeeze);
  const double ca = std::cos(measurement.angle), sa = std::sin(measurement.angle);
  Eigen::Matrix2d rot;
  rot << ca, -sa, sa, ca;
  const Eigen::Matrix2d seed =
      noise_scale * rot * Eigen::Vector2d(0.5 * s, 0.5 / s).asDiagonal() * rot.transpose();
  const Eigen::Matrix2d c = cross_block(sf);
  const Eigen::Matrix2d gamma_b = sf.m * Eigen::Matrix2d::Identity() + seed;
  const Eigen::Matrix2d cond =
      sf.n * Eigen::Matrix2d::Identity() - c * gamma_b.inverse() * c.transpose();
  return cond.determinant();
}

OracleResult brute_force_e_min_detailed(const StandardForm& sf, const OracleGrid& grid) {
  if (grid.n_squeeze < 64 || grid.n_angle < 64 || !(grid.squeeze_max > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "oracle grid needs >= 64 points per axis and squeeze_max > 0");
  }
  require_physical(symplectic_data(sf));

  const double pi = std::numbers::pi;
  const double d_squeeze = grid.squeeze_max / (grid.n_squeeze - 1);
  const double d_angle = pi / grid.n_angle;

  double best = std::numeric_limits<double>::infinity();
  int best_i = 0, best_j = 0;
  for (int i = 0; i < grid.n_squeeze; ++i) {
    for (int j = 0; j < grid.n_angle; ++j) {
      const double v = conditional_determinant(sf, {i * d_squeeze, j * d_angle});
      if (v < best) {
        best = v;
        best_i = i;
        best_j = j;
      }
    }
  }
  double homodyne_best = std::numeric_limits<double>::infinity();
  int homodyne_j = 0;
  for (int j = 0; j < grid.n_angle; ++j) {
    const double v = homodyne_determinant(sf, j * d_angle);
    if (v < homodyne_best) {
      homodyne_best = v;
      homodyne_j = j;
    }
  }

  // Refine the finite-squeeze candidate with alternating line searches in
  // the chart (u, v) = squeeze (cos 2 angle, sin 2 angle), which is smooth
  // through squeeze = 0 where the angle is degenerate.
  const auto at = [&](double u, double v) {
    const double r = std::min(std::hypot(u, v), grid.squeeze_max);
    return conditional_determinant(sf, {r, 0.5 * std::atan2(v, u)});
  };
  double u = best_i * d_squeeze * std::cos(2.0 * best_j * d_angle);
  double v = best_i * d_squeeze * std::sin(2.0 * best_j * d_angle);
  double finite = best;
  double step = d_squeeze;
  for (int round = 0; round < 40; ++round) {
    double x = u;
    double f = golden_section([&](double t) { return at(t, v); }, u - step, u + step, 60, x);
    if (f < finite) {
      finite = f;
      u = x;
    }
    x = v;
    f = golden_section([&](double t) { return at(u, t); }, v - step, v + step, 60, x);
    if (f < finite) {
      finite = f;
      v = x;
    }
    if (round % 10 == 9) step *= 0.5;
  }
  const double squeeze = std::min(std::hypot(u, v), grid.squeeze_max);
  const double angle = 0.5 * std::atan2(v, u);

  double homodyne_angle = homodyne_j * d_angle;
  {
    double x = homodyne_angle;
    const double v = golden_section([&](double t) { return homodyne_determinant(sf, t); },
                                    homodyne_angle - d_angle, homodyne_angle + d_angle, 120, x);
    if (v < homodyne_best) {
      homodyne_best = v;
      homodyne_angle = x;
    }
  }

  // A finite-grid optimum on the outer squeeze edge that still beats the
  // homodyne limit means the true minimiser lies beyond squeeze_max.
  if (best_i == grid.n_squeeze - 1 && finite < homodyne_best - 1e-9 * std::max(1.0, homodyne_best)) {
    throw Error(ErrorKind::GridTooCoarse, "minimum attained at squeeze_max; enlarge the squeeze grid");
  }

  OracleResult out;
  if (homodyne_best < finite) {
    out.e_min = homodyne_best;
    out.best = {std::numeric_limits<double>::infinity(), std::fmod(homodyne_angle + pi, pi)};
    out.homodyne_limit = true;
  } else {
    out.e_min = finite;
    out.best = {squeeze, std::fmod(std::fmod(angle, pi) + pi, pi)};
  }
  return out;
}

StandardForm random_physical_state(std::mt19937_64& rng, double n_max) {
  std::uniform_real_distribution<double> local(0.5, n_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    StandardForm sf;
    sf.n = local(rng);
    sf.m = local(rng);
    const double bound = std::sqrt(sf.n * sf.m);
    sf.c1 = bound * unit(rng);
    sf.c2 = bound * unit(rng);
    if (symplectic_data(sf).physical) return sf;
  }
}

}  // namespace cvdiscord
