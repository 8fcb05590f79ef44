#include "cvdiscord/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cvdiscord/discord.hpp"

using namespace cvdiscord;

namespace {

const double kRoot3Half = std::sqrt(3.0) / 2.0;

// Symplectic eigenvalues from the spectrum of Omega * gamma (eigenvalues
// +-i d). Independent of the invariant formula.
std::pair<double, double> williamson_spectrum(const TwoModeCovariance& cov) {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(omega * cov.entries);
  std::vector<double> d;
  for (int i = 0; i < 4; ++i) d.push_back(std::abs(solver.eigenvalues()(i).imag()));
  std::sort(d.begin(), d.end());
  return {d[3], d[0]};
}

}  // namespace

TEST(standard_form, vacuum) {
  const StandardForm sf = standard_form(embed(StandardForm::vacuum()));
  EXPECT_EQ(sf, StandardForm::vacuum());
}

TEST(standard_form, pure_tmsv_from_analytic_covariance) {
  // cosh(2r) = 2: local variance cosh(2r)/2, correlation sinh(2r)/2.
  const double r = std::acosh(2.0) / 2.0;
  TwoModeCovariance cov;
  cov.entries.setZero();
  cov.entries.diagonal().setConstant(std::cosh(2 * r) / 2);
  cov.entries(0, 2) = cov.entries(2, 0) = std::sinh(2 * r) / 2;
  cov.entries(1, 3) = cov.entries(3, 1) = -std::sinh(2 * r) / 2;
  const StandardForm sf = standard_form(cov);
  EXPECT_NEAR(sf.n, 1.0, 1e-12);
  EXPECT_NEAR(sf.m, 1.0, 1e-12);
  EXPECT_NEAR(sf.c1, 0.8660254, 1e-7);
  EXPECT_NEAR(sf.c2, 0.8660254, 1e-7);
}

TEST(standard_form, quarter_turn_on_a_reduces_to_same_form) {
  const StandardForm sf{1.3, 0.9, 0.7, 0.4};
  const StandardForm back = standard_form(rotate_locally(embed(sf), std::numbers::pi / 2, 0.0));
  EXPECT_NEAR(back.n, sf.n, 1e-12);
  EXPECT_NEAR(back.m, sf.m, 1e-12);
  EXPECT_NEAR(back.c1, sf.c1, 1e-12);
  EXPECT_NEAR(back.c2, sf.c2, 1e-12);
}

TEST(standard_form, random_rotations_preserve_invariants) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  for (int k = 0; k < 200; ++k) {
    const StandardForm sf = random_physical_state(rng);
    const TwoModeCovariance rotated = rotate_locally(embed(sf), angle(rng), angle(rng));
    const Invariants want = invariants(embed(sf));
    const Invariants got_rotated = invariants(rotated);
    const Invariants got_reduced = invariants(embed(standard_form(rotated)));
    for (const Invariants& got : {got_rotated, got_reduced}) {
      EXPECT_NEAR(got.i1, want.i1, 1e-10);
      EXPECT_NEAR(got.i2, want.i2, 1e-10);
      EXPECT_NEAR(got.i3, want.i3, 1e-10);
      EXPECT_NEAR(got.i4, want.i4, 1e-10);
    }
  }
}

TEST(standard_form, embed_round_trip) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const StandardForm sf = random_physical_state(rng);
    const StandardForm back = standard_form(embed(sf));
    EXPECT_NEAR(back.n, sf.n, 1e-12);
    EXPECT_NEAR(back.m, sf.m, 1e-12);
    EXPECT_NEAR(back.c1, sf.c1, 1e-12);
    EXPECT_NEAR(back.c2, sf.c2, 1e-12);
  }
}

TEST(standard_form, errors) {
  TwoModeCovariance cov = embed({1.0, 1.0, 0.5, 0.5});
  cov.entries(0, 1) = 0.1;
  try {
    standard_form(cov);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonSymmetric);
  }

  cov = embed({1.0, 1.0, 0.5, 0.5});
  cov.entries(3, 3) = -1.0;
  try {
    standard_form(cov);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveDiagonal);
  }

  // Locally squeezed A block.
  cov = embed({1.0, 1.0, 0.5, 0.5});
  cov.entries(0, 0) = 2.0;
  cov.entries(1, 1) = 0.5;
  try {
    standard_form(cov);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotLocallyReducible);
  }

  // Cross block diag(c, c): positive determinant.
  cov = embed({1.0, 1.0, 0.3, 0.0});
  cov.entries(1, 3) = cov.entries(3, 1) = 0.3;
  try {
    standard_form(cov);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotLocallyReducible);
  }
}

TEST(symplectic_data, vacuum) {
  const SymplecticData sd = symplectic_data(StandardForm::vacuum());
  EXPECT_DOUBLE_EQ(sd.i1, 0.25);
  EXPECT_DOUBLE_EQ(sd.i2, 0.25);
  EXPECT_DOUBLE_EQ(sd.i3, 0.0);
  EXPECT_DOUBLE_EQ(sd.i4, 0.0625);
  EXPECT_DOUBLE_EQ(sd.d_plus, 0.5);
  EXPECT_DOUBLE_EQ(sd.d_minus, 0.5);
  EXPECT_TRUE(sd.physical);
}

TEST(symplectic_data, pure_tmsv_has_both_eigenvalues_one_half) {
  const SymplecticData sd = symplectic_data({1.0, 1.0, kRoot3Half, kRoot3Half});
  const auto [dp, dm] = williamson_spectrum(embed(sd.form));
  EXPECT_NEAR(dp, 0.5, 1e-7);  // eigen-solver route is itself ill-conditioned here
  EXPECT_NEAR(dm, 0.5, 1e-7);
  EXPECT_NEAR(sd.d_plus, 0.5, 1e-14);
  EXPECT_NEAR(sd.d_minus, 0.5, 1e-14);
  EXPECT_TRUE(sd.physical);
}

TEST(symplectic_data, beyond_pure_bound_is_unphysical) {
  const SymplecticData sd = symplectic_data({1.0, 1.0, 0.9, 0.9});
  // Omega-gamma spectrum: d_minus = sqrt(1 - 0.81) = 0.43589
  const auto [dp, dm] = williamson_spectrum(embed(sd.form));
  EXPECT_NEAR(dm, std::sqrt(0.19), 1e-9);
  EXPECT_NEAR(sd.d_minus, dm, 1e-9);
  EXPECT_NEAR(sd.d_plus, dp, 1e-9);
  EXPECT_LT(sd.d_minus, 0.5);
  EXPECT_FALSE(sd.physical);
}

TEST(symplectic_data, matches_williamson_spectrum) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const StandardForm sf = random_physical_state(rng);
    const SymplecticData sd = symplectic_data(sf);
    const auto [dp, dm] = williamson_spectrum(embed(sf));
    EXPECT_NEAR(sd.d_plus, dp, 1e-8);
    EXPECT_NEAR(sd.d_minus, dm, 1e-8);
  }
}

TEST(symplectic_data, eigenvalue_identities) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 500; ++k) {
    const SymplecticData sd = symplectic_data(random_physical_state(rng));
    EXPECT_NEAR(sd.d_plus * sd.d_minus, std::sqrt(sd.i4), 1e-10);
    EXPECT_NEAR(sd.d_plus * sd.d_plus + sd.d_minus * sd.d_minus, sd.delta, 1e-10);
    EXPECT_GE(sd.d_plus, sd.d_minus);
    EXPECT_GE(sd.d_minus, 0.5 - 1e-9);
    EXPECT_GE(sd.delta * sd.delta - 4 * sd.i4, -1e-12);
  }
}

TEST(symplectic_data, positive_definiteness_required) {
  // n m - c^2 < 0 in both blocks, yet the invariant formula gives d_minus = 4.
  const SymplecticData sd = symplectic_data({10.0, 1.0, std::sqrt(30.0), std::sqrt(30.0)});
  EXPECT_NEAR(sd.d_minus, 4.0, 1e-12);
  EXPECT_NEAR(sd.d_plus, 5.0, 1e-12);
  EXPECT_FALSE(sd.physical);

  try {
    symplectic_data({1.0, 1.0, 1.5, 1.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ComplexEigenvalue);
  }
}

TEST(symplectic_data, rejects_invalid_fields) {
  EXPECT_THROW(symplectic_data({0.0, 1.0, 0.0, 0.0}), Error);
  EXPECT_THROW(symplectic_data({1.0, 1.0, -0.1, 0.0}), Error);
}

TEST(entropy_h, reference_values) {
  EXPECT_EQ(entropy_h(0.5), 0.0);
  EXPECT_NEAR(entropy_h(1.0), 1.5 * std::log2(1.5) + 0.5, 1e-15);
  EXPECT_NEAR(entropy_h(1.0), 1.3774438, 1e-7);
  EXPECT_DOUBLE_EQ(entropy_h(1.5), 2.0);
}

TEST(entropy_h, clamps_and_rejects) {
  EXPECT_EQ(entropy_h(0.5 - 1e-12), 0.0);
  EXPECT_EQ(entropy_h(0.5 - 5e-10), 0.0);
  try {
    entropy_h(0.49);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
  }
}

TEST(entropy_h, strictly_increasing) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> x(0.5, 100.0);
  for (int k = 0; k < 2000; ++k) {
    double a = x(rng), b = x(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    EXPECT_LT(entropy_h(a), entropy_h(b)) << a << " " << b;
  }
}

TEST(convert_units, scaling) {
  TwoModeCovariance snl;
  snl.entries = Eigen::Matrix4d::Identity();
  const TwoModeCovariance half = convert_units(snl, UnitConvention::Snl, UnitConvention::Half);
  EXPECT_EQ(half.entries, Eigen::Matrix4d::Identity() * 0.5);
  EXPECT_EQ(convert_units(half, UnitConvention::Half, UnitConvention::Snl).entries, snl.entries);
  EXPECT_EQ(convert_units(snl, UnitConvention::Snl, UnitConvention::Snl).entries, snl.entries);

  const StandardForm sf = convert_units(StandardForm{1.0, 0.5, 0.0, 0.0}, UnitConvention::Half,
                                        UnitConvention::Snl);
  EXPECT_EQ(sf.n, 2.0);
  EXPECT_EQ(sf.m, 1.0);
}

TEST(convert_units, parse) {
  EXPECT_EQ(parse_units("snl"), UnitConvention::Snl);
  EXPECT_EQ(parse_units("half"), UnitConvention::Half);
  EXPECT_THROW(parse_units("SNL "), Error);
}
