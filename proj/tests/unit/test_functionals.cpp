#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vortexflow/errors.hpp"
#include "vortexflow/functionals.hpp"
#include "vortexflow/meanfield.hpp"
#include "vortexflow/poisson.hpp"
#include "vortexflow/reference.hpp"

using namespace vortexflow;
using oracle::kPi;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// Mixture of 1-4 Gaussians with random centers, widths and weights.
ScalarField random_mixture(const Grid& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> pos(-1.5, 1.5), var(0.2, 1.5), weight(0.2, 1.0);
  const int k = count(rng);
  std::vector<double> cx(k), cy(k), s2(k), wt(k);
  for (int m = 0; m < k; ++m) {
    cx[m] = pos(rng);
    cy[m] = pos(rng);
    s2[m] = var(rng);
    wt[m] = weight(rng);
  }
  double total = 0.0;
  for (double v : wt) total += v;
  for (double& v : wt) v /= total;
  return sample_normalized(g, [&](double x, double y) {
    double v = 0.0;
    for (int m = 0; m < k; ++m)
      v += wt[m] * std::exp(-((x - cx[m]) * (x - cx[m]) + (y - cy[m]) * (y - cy[m])) / (2 * s2[m])) / (2 * kPi * s2[m]);
    return v;
  });
}

}  // namespace

TEST(Moments, CenteredGaussian) {
  for (double s2 : {0.5, 1.0, 2.0}) {
    const Moments m = moments(gaussian_field(make_grid(256, 10.0), s2));
    EXPECT_NEAR(m.mass, 1.0, 1e-14);
    EXPECT_NEAR(m.center.x, 0.0, 1e-14);
    EXPECT_NEAR(m.center.y, 0.0, 1e-14);
    // midpoint rule on a Gaussian is spectrally accurate
    EXPECT_NEAR(m.inertia, s2, 1e-9);
  }
}

TEST(Moments, ShiftedGaussian) {
  const Moments m = moments(gaussian_field(make_grid(256, 8.0), 1.0, {1.0, 0.0}));
  EXPECT_NEAR(m.center.x, 1.0, 1e-10);
  EXPECT_NEAR(m.center.y, 0.0, 1e-12);
  EXPECT_NEAR(m.inertia, 1.0, 1e-9);  // recentered
}

TEST(Moments, PatchInertia) {
  const Moments m = moments(patch_field(make_grid(256, 2.0), 1.0, 0.02));
  EXPECT_NEAR(m.inertia, 0.25, 0.01 * 0.25);
}

TEST(Moments, ZeroMassIsAnError) {
  EXPECT_EQ(code_of([] { moments(ScalarField(make_grid(16, 1.0))); }), ErrorCode::kZeroMass);
}

TEST(Energy, GaussianMatchesRadialOracle) {
  const ScalarField w = gaussian_field(make_grid(256, 8.0), 1.0);
  const double e = energy(w, solve_streamfunction(w));
  const double oracle_e = oracle::radial_energy([](double r) { return oracle::gaussian(1.0, r); }, 12.0);
  EXPECT_NEAR(oracle_e, oracle::gaussian_energy(1.0), 1e-9);  // oracle against its own closed form
  EXPECT_NEAR(e, oracle_e, 1e-4);
}

TEST(Energy, LowerBoundByInertia) {
  std::mt19937_64 rng(7);
  const Grid g = make_grid(128, 8.0);
  for (int k = 0; k < 6; ++k) {
    const ScalarField w = random_mixture(g, rng);
    EXPECT_GE(energy(w, solve_streamfunction(w)), -std::log(4.0 * moments(w).inertia) / (8.0 * kPi) - 1e-6);
  }
}

TEST(Entropy, GaussianClosedForm) {
  for (double s2 : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(entropy(gaussian_field(make_grid(256, 10.0), s2)), oracle::gaussian_entropy(s2), 1e-9);
  }
}

TEST(Entropy, UniformPatch) {
  // the smoothed edge shifts S by O(eps)
  const Grid g = make_grid(512, 2.0);
  const double coarse = std::abs(entropy(patch_field(g, 1.0, 0.04)) + std::log(kPi));
  const double fine = std::abs(entropy(patch_field(g, 1.0, 0.02)) + std::log(kPi));
  EXPECT_LT(fine, coarse);
  EXPECT_LT(fine, 0.02);
}

TEST(Entropy, ZeroCellsContributeNothing) {
  const Grid g = make_grid(16, 1.0);
  ScalarField w(g);
  w(3, 4) = 2.0 / g.cell_area();
  const double s = entropy(w);
  EXPECT_TRUE(std::isfinite(s));
  EXPECT_NEAR(s, 2.0 * std::log(2.0 / g.cell_area()), 1e-12);
}

TEST(InteractionMoments, VirialIsUniversal) {
  const Grid g = make_grid(256, 8.0);
  std::vector<ScalarField> fields = {gaussian_field(g, 1.0), gaussian_field(g, 0.5, {0.7, -0.3}),
                                     patch_field(make_grid(256, 2.0), 1.0, 0.1), oseen_field(g, 1.0, 0.1)};
  for (const ScalarField& w : fields) {
    EXPECT_NEAR(interaction_moments(w, solve_streamfunction(w)).virial, -1.0 / (4.0 * kPi), 1e-3);
  }
}

TEST(InteractionMoments, VirialScalesWithMassSquared) {
  const Grid g = make_grid(128, 8.0);
  ScalarField w = gaussian_field(g, 1.0);
  for (double& v : w.values()) v *= 2.5;
  EXPECT_NEAR(interaction_moments(w, solve_streamfunction(w)).virial, -2.5 * 2.5 / (4.0 * kPi), 2.5 * 2.5 * 1e-3);
}

TEST(InteractionMoments, GaussianEnstrophy) {
  for (double s2 : {0.5, 1.0}) {
    const ScalarField w = gaussian_field(make_grid(256, 8.0), s2);
    EXPECT_NEAR(interaction_moments(w, solve_streamfunction(w)).enstrophy, 1.0 / (4.0 * kPi * s2), 1e-10);
  }
}

TEST(Multipliers, GaussianIsTheZeroTemperatureBranch) {
  for (double s2 : {0.5, 1.0, 2.0}) {
    const ScalarField w = gaussian_field(make_grid(256, 10.0), s2);
    const ScalarField psi = solve_streamfunction(w);
    const Multipliers m = multipliers(w, psi);
    EXPECT_NEAR(m.b, 0.0, 0.02);
    EXPECT_NEAR(m.a, -1.0 / s2, 0.01 / s2);
    // numerator of b: 2 I int w^2 = 1/(2 pi) = -2 V
    const InteractionMoments im = interaction_moments(w, psi);
    EXPECT_NEAR(2.0 * moments(w).inertia * im.enstrophy, 1.0 / (2.0 * kPi), 1e-9);
    EXPECT_NEAR(-2.0 * im.virial, 1.0 / (2.0 * kPi), 2e-3 / (2.0 * kPi));
  }
}

TEST(Multipliers, PatchIsDegenerate) {
  const Grid g = make_grid(256, 2.0);
  double prev = 1.0;
  for (double eps : {0.2, 0.1, 0.05}) {
    const ScalarField w = patch_field(g, 1.0, eps);
    const ScalarField psi = solve_streamfunction(w);
    const double d = evaluate_functionals(w, psi).denominator;
    EXPECT_LT(d, prev);
    prev = d;
  }
  const ScalarField sharp = patch_field(g, 1.0, 0.05);
  EXPECT_EQ(code_of([&] { multipliers(sharp); }), ErrorCode::kDegenerateDenominator);
  const Functionals f = evaluate_functionals(sharp);
  EXPECT_TRUE(std::isnan(f.a));
  EXPECT_TRUE(std::isnan(f.b));
}

TEST(Multipliers, RecoversMeanFieldParameters) {
  for (auto [a, b] : {std::pair{-1.0, 4.0 * kPi}, std::pair{-0.5, 2.0 * kPi}}) {
    const double half_width = 4.0 * std::sqrt(1.0 / std::abs(a)) + 2.0;
    const ScalarField w = sample_on_grid(canonical_solution(a, b), make_grid(256, half_width));
    const Multipliers m = multipliers(w);
    EXPECT_NEAR(m.a, a, 0.01 * std::abs(a));
    EXPECT_NEAR(m.b, b, 0.01 * b);
  }
}

TEST(Multipliers, SolveTheLinearSystem) {
  std::mt19937_64 rng(11);
  const Grid g = make_grid(128, 8.0);
  for (int k = 0; k < 5; ++k) {
    const ScalarField w = random_mixture(g, rng);
    const ScalarField psi = solve_streamfunction(w);
    const InteractionMoments im = interaction_moments(w, psi);
    const double I = moments(w).inertia;
    EXPECT_GE(2.0 * I * im.gradpsi_moment - im.virial * im.virial, -1e-9);  // Cauchy-Schwarz
    Multipliers m;
    try {
      m = multipliers(w, psi);
    } catch (const Error&) {
      continue;
    }
    EXPECT_NEAR(m.b * im.gradpsi_moment + m.a * im.virial, im.enstrophy, 1e-10 * im.enstrophy);
    EXPECT_NEAR(m.b * im.virial + 2.0 * m.a * I, -2.0, 1e-10);
  }
}

TEST(RelativeEntropy, SelfIsZero) {
  const ScalarField w = gaussian_field(make_grid(64, 6.0), 1.0);
  EXPECT_EQ(relative_entropy(w, w), 0.0);
}

TEST(RelativeEntropy, TwoGaussians) {
  const Grid g = make_grid(256, 10.0);
  EXPECT_NEAR(relative_entropy(gaussian_field(g, 0.6), gaussian_field(g, 1.4)), oracle::gaussian_rel_entropy(0.6, 1.4), 1e-9);
}

TEST(RelativeEntropy, SupportMismatch) {
  const Grid g = make_grid(32, 2.0);
  ScalarField rho = patch_field(g, 0.5, 0.01);
  for (double& v : rho.values()) v = v < 1e-3 ? 0.0 : v;
  EXPECT_EQ(code_of([&] { relative_entropy(gaussian_field(g, 0.3), rho); }), ErrorCode::kSupportMismatch);
}

TEST(RelativeEntropy, CsiszarKullback) {
  std::mt19937_64 rng(3);
  const Grid g = make_grid(128, 8.0);
  for (int k = 0; k < 10; ++k) {
    const ScalarField w = random_mixture(g, rng);
    const ScalarField r = random_mixture(g, rng);
    const double l1 = l1_distance(w, r);
    EXPECT_GE(relative_entropy(w, r), 0.5 * l1 * l1 - 1e-10);
  }
}

TEST(Gaps, GaussianIsStrictlyInside) {
  const InequalityGaps gaps = inequality_gaps(gaussian_field(make_grid(256, 8.0), 1.0));
  EXPECT_GT(gaps.loghls, 0.0);
  EXPECT_GT(gaps.energy_lower, 0.0);
}

TEST(Gaps, RandomMixtures) {
  std::mt19937_64 rng(2024);
  const Grid g = make_grid(128, 8.0);
  for (int k = 0; k < 20; ++k) {
    const InequalityGaps gaps = inequality_gaps(random_mixture(g, rng));
    EXPECT_GE(gaps.loghls, -1e-6);
    EXPECT_GE(gaps.energy_lower, -1e-6);
  }
}

TEST(Gaps, ConcentratingSequenceStaysAboveBound) {
  const Grid g = make_grid(256, 4.0);
  for (double s2 : {1.0, 0.3, 0.1, 0.03, 0.01}) {
    EXPECT_GE(inequality_gaps(gaussian_field(g, s2)).loghls, -1e-6) << "s2 = " << s2;
  }
}

TEST(Dissipation, VanishesOnGaussianEquilibrium) {
  const ScalarField w = gaussian_field(make_grid(256, 8.0), 1.0);
  const ScalarField psi = solve_streamfunction(w);
  EXPECT_NEAR(dissipation_rate(w, psi, -1.0, 0.0), 0.0, 1e-10);
}

TEST(Dissipation, VanishesOnMeanFieldState) {
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const ScalarField w = sample_on_grid(canonical_solution(-1.0, 4.0 * kPi), make_grid(n, 6.0));
    const double d = dissipation_rate(w, solve_streamfunction(w), -1.0, 4.0 * kPi);
    EXPECT_LT(d, 0.05);
    if (prev > 0.0) EXPECT_LT(d, 0.5 * prev);
    prev = d;
  }
}

TEST(Dissipation, GaussianOffEquilibriumMatchesRadialQuadrature) {
  const double a = -2.0;
  const double expect = oracle::radial_dissipation_b0([](double r) { return oracle::gaussian(1.0, r); },
                                                      [](double r) { return -r; }, a, 12.0);
  EXPECT_NEAR(expect, 2.0, 1e-10);
  const ScalarField w = gaussian_field(make_grid(256, 8.0), 1.0);
  EXPECT_NEAR(dissipation_rate(w, solve_streamfunction(w), a, 0.0), expect, 1e-3 * expect);
}
