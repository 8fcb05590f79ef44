#include "cvdiscord/discord.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cvdiscord;

namespace {

const double kRoot3Half = std::sqrt(3.0) / 2.0;
const StandardForm kTmsv{1.0, 1.0, kRoot3Half, kRoot3Half};
const StandardForm kThermal{1.0, 1.0, 0.0, 0.0};
// 1.5 log2(1.5) - 0.5 log2(0.5)
const double kH1 = 1.5 * std::log2(1.5) + 0.5;

// Pure two-mode squeezed vacuum with local variance n.
StandardForm tmsv(double n) {
  const double c = std::sqrt(n * n - 0.25);
  return {n, n, c, c};
}

}  // namespace

TEST(mutual_information, reference_states) {
  EXPECT_NEAR(mutual_information(symplectic_data(StandardForm::vacuum())), 0.0, 1e-15);
  EXPECT_NEAR(mutual_information(symplectic_data(kThermal)), 0.0, 1e-14);
  EXPECT_NEAR(mutual_information(symplectic_data(kTmsv)), 2 * kH1, 1e-12);
  EXPECT_NEAR(mutual_information(symplectic_data(kTmsv)), 2.7548875, 1e-7);
}

TEST(mutual_information, rejects_unphysical) {
  try {
    mutual_information(symplectic_data({1.0, 1.0, 0.9, 0.9}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnphysicalState);
  }
}

TEST(e_min, product_thermal_is_local_determinant) {
  // I3 = 0, I4 = I1 I2: second branch gives (2 I1 I2 - 0) / (2 I2) = I1.
  const EminResult r = e_min(symplectic_data(kThermal));
  EXPECT_EQ(r.branch, EminBranch::Second);
  EXPECT_NEAR(r.value, 1.0, 1e-15);

  const EminResult r2 = e_min(symplectic_data({1.7, 0.8, 0.0, 0.0}));
  EXPECT_NEAR(r2.value, 1.7 * 1.7, 1e-12);
}

TEST(e_min, pure_tmsv_is_vacuum_determinant) {
  EXPECT_NEAR(e_min(symplectic_data(kTmsv)).value, 0.25, 1e-15);
  EXPECT_NEAR(brute_force_e_min(kTmsv), 0.25, 1e-4);
  for (double n : {0.6, 1.0, 2.5, 7.0}) {
    EXPECT_NEAR(e_min(symplectic_data(tmsv(n))).value, 0.25, 1e-12) << n;
  }
}

TEST(e_min, invariant_form_agrees) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 500; ++k) {
    const SymplecticData sd = symplectic_data(random_physical_state(rng));
    const EminResult a = e_min(sd);
    const EminResult b = e_min_invariant_form(sd);
    EXPECT_NEAR(a.value, b.value, 1e-7 * std::max(1.0, a.value));
  }
}

TEST(e_min, agrees_with_brute_force_on_both_branches) {
  std::mt19937_64 rng(2024);
  int first = 0, second = 0;
  double worst = 0.0;
  for (int k = 0; k < 150; ++k) {
    const StandardForm sf = random_physical_state(rng);
    const EminResult closed = e_min(symplectic_data(sf));
    const double oracle = brute_force_e_min(sf);
    worst = std::max(worst, std::abs(closed.value - oracle));
    EXPECT_NEAR(closed.value, oracle, 1e-4) << sf.n << " " << sf.m << " " << sf.c1 << " " << sf.c2;
    (closed.branch == EminBranch::First ? first : second) += 1;
  }
  EXPECT_GE(first, 10);
  EXPECT_GE(second, 10);
  RecordProperty("worst", std::to_string(worst));
}

TEST(e_min, lower_bound) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 500; ++k) {
    EXPECT_GE(e_min(symplectic_data(random_physical_state(rng))).value, 0.25 - 1e-9);
  }
}

TEST(e_min, zero_i3_routes_to_second_branch) {
  EXPECT_EQ(e_min(symplectic_data({1.2, 0.9, 0.4, 0.0})).branch, EminBranch::Second);
  EXPECT_EQ(e_min_invariant_form(symplectic_data({1.2, 0.9, 0.4, 0.0})).branch, EminBranch::Second);
}

TEST(discord, reference_states) {
  EXPECT_EQ(discord(symplectic_data(StandardForm::vacuum())), 0.0);
  EXPECT_NEAR(discord(symplectic_data(kThermal)), 0.0, 1e-12);
  EXPECT_NEAR(discord(symplectic_data(kTmsv)), kH1, 1e-12);
  EXPECT_NEAR(discord(symplectic_data(kTmsv), Direction::B_given_A), kH1, 1e-12);
}

TEST(discord, matches_oracle_based_evaluation) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 40; ++k) {
    const StandardForm sf = random_physical_state(rng);
    const SymplecticData sd = symplectic_data(sf);
    const double via_oracle = entropy_h(sf.m) - entropy_h(sd.d_minus) - entropy_h(sd.d_plus) +
                              entropy_h(std::sqrt(brute_force_e_min(sf)));
    EXPECT_NEAR(discord(sd), via_oracle, 1e-4);
  }
}

TEST(classical_correlations, reference_states) {
  EXPECT_EQ(classical_correlations(symplectic_data(StandardForm::vacuum())), 0.0);
  EXPECT_NEAR(classical_correlations(symplectic_data(kTmsv)), kH1, 1e-12);
  EXPECT_NEAR(classical_correlations(symplectic_data(kThermal)), 0.0, 1e-12);
}

TEST(discord, information_identities) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 1000; ++k) {
    const SymplecticData sd = symplectic_data(random_physical_state(rng));
    const double im = mutual_information(sd);
    const double j = classical_correlations(sd);
    const double d = discord(sd);
    EXPECT_NEAR(d, im - j, 1e-10);
    EXPECT_GE(j, -1e-9);
    EXPECT_LE(j, im + 1e-9);
    EXPECT_GE(d, -1e-9);
    EXPECT_GE(discord(sd, Direction::B_given_A), -1e-9);
    EXPECT_NEAR(discord(sd, Direction::B_given_A),
                im - classical_correlations(sd, Direction::B_given_A), 1e-10);
  }
}

TEST(discord, symmetric_states_are_direction_independent) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double n = 0.5 + 3.0 * u(rng);
    const double c = std::sqrt(n * n - 0.25) * u(rng);
    const SymplecticData sd = symplectic_data({n, n, c, c});
    EXPECT_NEAR(discord(sd, Direction::A_given_B), discord(sd, Direction::B_given_A), 1e-10);
  }
}

TEST(discord, asymmetric_states_differ_by_direction) {
  const SymplecticData sd = symplectic_data({2.0, 0.7, 0.5, 0.3});
  EXPECT_GT(std::abs(discord(sd, Direction::A_given_B) - discord(sd, Direction::B_given_A)), 1e-3);
}

TEST(discord, pure_states_split_information_evenly) {
  for (double n : {0.5, 0.55, 1.0, 1.7, 3.0, 10.0}) {
    const SymplecticData sd = symplectic_data(tmsv(n));
    const double im = mutual_information(sd);
    EXPECT_NEAR(discord(sd), im / 2, 1e-8) << n;
    EXPECT_NEAR(classical_correlations(sd), im / 2, 1e-8) << n;
  }
}

TEST(discord, product_states_have_zero_discord) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> local(0.5, 5.0);
  for (int k = 0; k < 200; ++k) {
    const SymplecticData sd = symplectic_data({local(rng), local(rng), 0.0, 0.0});
    EXPECT_NEAR(discord(sd), 0.0, 1e-9);
    EXPECT_NEAR(discord(sd, Direction::B_given_A), 0.0, 1e-9);
  }
}

TEST(discord, nonzero_without_squeezing) {
  // Joint variances n + m - 2c = 1 SNL exactly: no squeezing, but correlated.
  const StandardForm sf{1.0, 1.0, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(joint_squeezing(sf), 1.0);
  EXPECT_GT(discord(symplectic_data(sf)), 0.01);
}

TEST(inseparability, reference_states) {
  EXPECT_DOUBLE_EQ(inseparability(StandardForm::vacuum()), 2.0);
  EXPECT_NEAR(inseparability(kTmsv), 2 * (2 - std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(inseparability(kTmsv), 0.5358984, 1e-7);
  EXPECT_DOUBLE_EQ(inseparability(kThermal), 4.0);
}

TEST(correlation_report, flags) {
  const CorrelationReport tm = correlation_report(kTmsv);
  EXPECT_TRUE(tm.flags.entangled_sufficient);
  EXPECT_TRUE(tm.flags.inseparable);
  EXPECT_FALSE(tm.flags.classical);
  EXPECT_EQ(tm.e_min_branch, EminBranch::First);

  const CorrelationReport vac = correlation_report(StandardForm::vacuum());
  EXPECT_TRUE(vac.flags.classical);
  EXPECT_FALSE(vac.flags.inseparable);
  EXPECT_FALSE(vac.flags.entangled_sufficient);

  // Weakly entangled: inseparable, discord below 1, flag must stay false.
  const CorrelationReport weak = correlation_report({0.75, 0.75, 0.45, 0.45});
  EXPECT_TRUE(weak.flags.inseparable);
  EXPECT_LT(weak.discord_ab, 1.0);
  EXPECT_FALSE(weak.flags.entangled_sufficient);
}

TEST(correlation_report, rejects_unphysical) {
  try {
    correlation_report({1.0, 1.0, 0.9, 0.9});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnphysicalState);
    EXPECT_NE(std::string(e.what()).find("unphysical: d_minus < 1/2"), std::string::npos);
  }
}

TEST(brute_force_e_min, product_state_is_unaffected_by_measurement) {
  EXPECT_NEAR(brute_force_e_min(kThermal), 1.0, 1e-12);
  const OracleResult r = brute_force_e_min_detailed(kThermal);
  EXPECT_NEAR(conditional_determinant(kThermal, {2.0, 0.3}), 1.0, 1e-12);
  EXPECT_NEAR(r.e_min, 1.0, 1e-12);
}

TEST(brute_force_e_min, rejects_small_grid_and_unphysical_state) {
  EXPECT_THROW(brute_force_e_min(kTmsv, {8.0, 32, 64}), Error);
  try {
    brute_force_e_min({1.0, 1.0, 0.9, 0.9});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnphysicalState);
  }
}

TEST(brute_force_e_min, second_branch_minimum_sits_at_homodyne_limit) {
  // Classically correlated in X only: measuring X_B is optimal.
  const StandardForm sf{1.0, 1.0, 0.7, 0.0};
  const OracleResult r = brute_force_e_min_detailed(sf);
  EXPECT_TRUE(r.homodyne_limit);
  EXPECT_EQ(e_min(symplectic_data(sf)).branch, EminBranch::Second);
  EXPECT_NEAR(r.e_min, e_min(symplectic_data(sf)).value, 1e-10);
}

TEST(brute_force_e_min, grid_too_coarse_when_optimum_lies_beyond_squeeze_max) {
  // Find a state whose optimal measurement has finite, non-zero squeezing,
  // then cap the grid below it.
  std::mt19937_64 rng(77);
  bool found = false;
  for (int k = 0; k < 500 && !found; ++k) {
    const StandardForm sf = random_physical_state(rng);
    const OracleResult r = brute_force_e_min_detailed(sf);
    if (r.homodyne_limit || r.best.squeeze < 0.5 || r.best.squeeze > 4.0) continue;
    const double cap = 0.2;
    const double at_cap = std::min(conditional_determinant(sf, {cap, r.best.angle}),
                                   conditional_determinant(sf, {cap, r.best.angle + 1e-3}));
    double homodyne = 1e300;
    for (int j = 0; j < 720; ++j) {
      homodyne = std::min(homodyne, conditional_determinant(
                                        sf, {std::numeric_limits<double>::infinity(), j * M_PI / 720}));
    }
    if (at_cap >= homodyne - 1e-6) continue;
    found = true;
    try {
      brute_force_e_min(sf, {cap, 64, 64});
      ADD_FAILURE() << "expected GridTooCoarse";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::GridTooCoarse);
    }
  }
  EXPECT_TRUE(found);
}

TEST(brute_force_e_min, noisy_measurements_never_beat_pure_ones) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> squeeze(0.0, 4.0), angle(0.0, M_PI);
  for (int k = 0; k < 10; ++k) {
    const StandardForm sf = random_physical_state(rng);
    const double pure = brute_force_e_min(sf);
    for (int t = 0; t < 400; ++t) {
      for (double noise : {1.2, 2.0, 5.0}) {
        EXPECT_GE(conditional_determinant(sf, {squeeze(rng), angle(rng)}, noise), pure - 1e-12);
      }
    }
  }
}
