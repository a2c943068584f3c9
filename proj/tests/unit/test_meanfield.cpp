#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "vortexflow/errors.hpp"
#include "vortexflow/functionals.hpp"
#include "vortexflow/meanfield.hpp"

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

}  // namespace

TEST(Shoot, MassMatchesIndependentIntegration) {
  for (double chi : {-3.0, -1.0, 0.0, 2.0}) {
    const double z = shooting_mass(-1.0, 4.0 * kPi, chi);
    EXPECT_NEAR(z, oracle::shooting_mass_rk4(-1.0, 4.0 * kPi, chi), 1e-7 * z) << "chi = " << chi;
  }
  EXPECT_NEAR(shooting_mass(-0.3, 20.0, 1.0), oracle::shooting_mass_rk4(-0.3, 20.0, 1.0), 1e-6);
}

TEST(Shoot, MassLimits) {
  EXPECT_LT(shooting_mass(-1.0, 4.0 * kPi, -20.0), 0.05);
  EXPECT_NEAR(shooting_mass(-1.0, 4.0 * kPi, 20.0), 2.0, 0.05 * 2.0);
}

TEST(Shoot, MassIsNondecreasingInChi) {
  double prev = -1.0;
  for (int k = 0; k < 60; ++k) {
    const double chi = -20.0 + 40.0 * k / 59.0;
    const double z = shooting_mass(-1.0, 4.0 * kPi, chi);
    EXPECT_GE(z, prev - 1e-8) << "chi = " << chi;
    prev = z;
  }
}

TEST(Shoot, AuxiliaryEnergyDecreasesAndBoundsTheProfile) {
  const double a = -1.0, b = 6.0 * kPi;
  const ShootingProfile p = shoot(a, b, normalize(a, b));
  for (std::size_t k = 1; k < p.t.size(); ++k) {
    EXPECT_LE(p.auxiliary_energy(k), p.auxiliary_energy(k - 1) + 1e-9);
    const double G = p.H[k] + a * std::exp(2.0 * p.t[k]) / 2.0;
    EXPECT_LE(b * std::exp(G), 2.0 + 1e-8);
  }
}

TEST(Normalize, HitsUnitMass) {
  const double chi = normalize(-1.0, 4.0 * kPi);
  EXPECT_NEAR(shooting_mass(-1.0, 4.0 * kPi, chi), 1.0, 1e-10);
}

TEST(Normalize, SameRootFromEitherSide) {
  NormalizeOptions lo, hi;
  lo.initial_guess = -10.0;
  hi.initial_guess = 10.0;
  EXPECT_NEAR(normalize(-1.0, 4.0 * kPi, lo), normalize(-1.0, 4.0 * kPi, hi), 1e-8);
}

TEST(Normalize, SupercriticalIsOutOfRange) {
  EXPECT_EQ(code_of([] { normalize(-1.0, 8.0 * kPi); }), ErrorCode::kOutOfRange);
  EXPECT_EQ(code_of([] { canonical_solution(-1.0, 26.0); }), ErrorCode::kOutOfRange);
}

TEST(Canonical, SmallBApproachesGaussian) {
  const MeanFieldSolution g = canonical_solution(-1.0, 0.0);
  const MeanFieldSolution s = canonical_solution(-1.0, 1e-3);
  EXPECT_NEAR(s.inertia, g.inertia, 1e-4);
  EXPECT_NEAR(s.entropy, g.entropy, 1e-4);
  EXPECT_NEAR(s.energy, g.energy, 1e-4);
  EXPECT_NEAR(s.density(0.7), g.density(0.7), 1e-4);
}

TEST(Canonical, GaussianBranch) {
  const MeanFieldSolution s = canonical_solution(-0.5, 0.0);
  EXPECT_NEAR(s.inertia, 2.0, 1e-12);
  EXPECT_NEAR(s.density(1.3), oracle::gaussian(2.0, 1.3), 1e-14);
  EXPECT_NEAR(s.entropy, oracle::gaussian_entropy(2.0), 1e-12);
}

TEST(Canonical, PohozaevIdentity) {
  for (double b : {1.0, 2.0 * kPi, 4.0 * kPi, 7.0 * kPi}) {
    for (double a : {-0.3, -1.0, -4.0}) {
      EXPECT_LT(std::abs(canonical_solution(a, b).pohozaev_residual()), 1e-6) << a << ", " << b;
    }
  }
}

TEST(Canonical, ConcentratesAsBGrows) {
  EXPECT_GT(canonical_solution(-1.0, 6.0 * kPi).inertia, canonical_solution(-1.0, 7.0 * kPi).inertia);
}

TEST(Canonical, DensityAndStreamfunctionAreConsistent) {
  // omega = exp(b psi + a r^2 / 2) / Z with psi in the decaying gauge: log omega - b psi - a r^2/2 is constant
  const double a = -1.0, b = 4.0 * kPi;
  const MeanFieldSolution s = canonical_solution(a, b);
  const double c0 = std::log(s.density(0.1)) - b * s.streamfunction(0.1) - a * 0.01 / 2.0;
  for (double r : {0.3, 0.9, 1.7, 2.5}) {
    EXPECT_NEAR(std::log(s.density(r)) - b * s.streamfunction(r) - a * r * r / 2.0, c0, 1e-7) << r;
  }
  // far field of the decaying gauge
  EXPECT_NEAR(s.streamfunction(20.0), -std::log(20.0) / (2.0 * kPi), 1e-8);
}

TEST(Microcanonical, GaussianTarget) {
  const double e_g = oracle::radial_energy([](double r) { return oracle::gaussian(2.0, r); }, 16.0);
  const MicrocanonicalResult r = microcanonical_solve(e_g, 2.0);
  EXPECT_NEAR(r.a, -0.5, 1e-6);
  EXPECT_NEAR(r.b, 0.0, 1e-6);
}

TEST(Microcanonical, InertiaIncreasesWithA) {
  double prev = 0.0;
  for (double a : {-4.0, -2.0, -1.0, -0.5, -0.25}) {
    const double I = canonical_solution(a, 3.0 * kPi).inertia;
    EXPECT_GT(I, prev);
    prev = I;
  }
}

TEST(Microcanonical, RoundTrip) {
  const MeanFieldSolution s = canonical_solution(-1.0, 4.0 * kPi);
  const MicrocanonicalResult r = microcanonical_solve(s.energy, s.inertia);
  EXPECT_NEAR(r.a, -1.0, 1e-4);
  EXPECT_NEAR(r.b, 4.0 * kPi, 1e-4 * 4.0 * kPi);
}

TEST(Microcanonical, EntropySlopeAtFixedEnergyIsA) {
  // dS = a dI + b dE, so along E = const, S falls strictly as I grows, with slope a.
  const MeanFieldSolution base = canonical_solution(-1.0, 4.0 * kPi);
  const double E = base.energy;
  std::vector<double> I = {base.inertia * 0.998, base.inertia, base.inertia * 1.002};
  std::vector<MicrocanonicalResult> r;
  for (double i : I) r.push_back(microcanonical_solve(E, i));
  EXPECT_GT(r[0].solution.entropy, r[1].solution.entropy);
  EXPECT_GT(r[1].solution.entropy, r[2].solution.entropy);
  const double slope = (r[2].solution.entropy - r[0].solution.entropy) / (I[2] - I[0]);
  EXPECT_NEAR(slope, r[1].a, 0.01 * std::abs(r[1].a));
}

TEST(Microcanonical, EnergyOutsideTheBoxIsReported) {
  EXPECT_EQ(code_of([] { microcanonical_solve(5.0, 1.0); }), ErrorCode::kNoSolutionInRange);
}

TEST(SampleOnGrid, UnitMassAndMultipliers) {
  const ScalarField w = sample_on_grid(canonical_solution(-1.0, 4.0 * kPi), make_grid(256, 6.0));
  EXPECT_NEAR(moments(w).mass, 1.0, 1e-13);
  const Multipliers m = multipliers(w);
  EXPECT_NEAR(m.a, -1.0, 0.01);
  EXPECT_NEAR(m.b, 4.0 * kPi, 0.01 * 4.0 * kPi);
}

TEST(SampleOnGrid, TooSmallBoxLosesMass) {
  EXPECT_EQ(code_of([] { sample_on_grid(canonical_solution(-0.1, 1.0), make_grid(64, 2.0)); }), ErrorCode::kMassLoss);
}
