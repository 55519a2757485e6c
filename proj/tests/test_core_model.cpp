#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "harmonium/core_model.hpp"

using namespace harmonium;

namespace {

CoherentLabel random_label(std::mt19937_64& rng, double scale = 2.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {cplx(n(rng), n(rng)), cplx(n(rng), n(rng))};
}

// Trapezoid on a wide uniform grid; spectrally accurate for Gaussians.
cplx quadrature_overlap_1d(cplx a, cplx b) {
  const double centre = std::numbers::sqrt2 * 0.5 * (a.real() + b.real());
  const double h = 0.01;
  cplx sum = 0.0;
  for (double x = centre - 20.0; x <= centre + 20.0; x += h) {
    sum += std::conj(coherent_wavefunction(b, x)) * coherent_wavefunction(a, x);
  }
  return sum * h;
}

}  // namespace

TEST(Nondimensionalize, MatchesHighPrecisionValues) {
  PhysicalConfig c;
  c.mass = 1e-14;
  c.trap_frequency = 1e5;
  c.newton_G = 6.674e-11;
  c.separation = 1e-4;
  const DimensionlessParams p = nondimensionalize(c);
  EXPECT_NEAR(p.g0 / 1378.0245770414418722890313, 1.0, 1e-13);
  EXPECT_NEAR(p.alpha / 307937032.00942578519788271507, 1.0, 1e-13);
  EXPECT_NEAR((p.g0 / p.alpha) / 4.4750206496737985e-6, 1.0, 1e-13);
}

TEST(Nondimensionalize, SecondTuple) {
  PhysicalConfig c;
  c.mass = 2.5e-15;
  c.trap_frequency = 3e4;
  c.newton_G = 6.674e-11;
  c.separation = 5e-6;
  const DimensionlessParams p = nondimensionalize(c);
  EXPECT_NEAR(p.g0 / 78.622411004386808030127656, 1.0, 1e-13);
  EXPECT_NEAR(p.alpha / 4216601.4680688223204998298, 1.0, 1e-13);
}

TEST(Nondimensionalize, TypicalRatioIsOfOrderOneInAMillion) {
  const DimensionlessParams p = nondimensionalize({});
  const double ratio = p.g0 / p.alpha;
  EXPECT_GT(ratio, 1e-7);
  EXPECT_LT(ratio, 1e-5);
}

TEST(Nondimensionalize, GravityOffGivesZeroCoupling) {
  PhysicalConfig c;
  c.newton_G = 0.0;
  EXPECT_EQ(nondimensionalize(c).g0, 0.0);
}

TEST(Nondimensionalize, RejectsNonPositiveInputs) {
  for (int which = 0; which < 4; ++which) {
    PhysicalConfig c;
    if (which == 0) c.mass = 0.0;
    if (which == 1) c.trap_frequency = -1.0;
    if (which == 2) c.separation = 0.0;
    if (which == 3) c.newton_G = -1.0;
    EXPECT_THROW(nondimensionalize(c), DomainError) << which;
  }
}

TEST(Nondimensionalize, CouplingIncreasesWithMass) {
  PhysicalConfig c;
  double prev = 0.0;
  for (double m = 1e-16; m < 1e-12; m *= 1.7) {
    c.mass = m;
    const double g0 = nondimensionalize(c).g0;
    EXPECT_GT(g0, prev);
    prev = g0;
  }
}

TEST(Scom, RelativeLabelOfTheConstantSeparationPair) {
  const double a = 3.0;
  const auto [centre, rel] = scom_transform({cplx(a, 0), 0.0}, {0.0, cplx(0, a)});
  EXPECT_NEAR(std::abs(rel.x - cplx(a / std::sqrt(2.0), 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rel.y - cplx(0, -a / std::sqrt(2.0))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(centre.y - cplx(0, a / std::sqrt(2.0))), 0.0, 1e-15);
}

TEST(Scom, EqualLabelsHaveZeroRelativePart) {
  const CoherentLabel l{cplx(1.2, -0.3), cplx(0.4, 2.0)};
  EXPECT_EQ(scom_transform(l, l).second.norm2(), 0.0);
}

TEST(Scom, RoundTripAndNormPreservation) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const CoherentLabel a = random_label(rng);
    const CoherentLabel b = random_label(rng);
    const auto [c, r] = scom_transform(a, b);
    const auto [a2, b2] = inverse_scom_transform(c, r);
    EXPECT_LT(distance(a, a2), 1e-13);
    EXPECT_LT(distance(b, b2), 1e-13);
    EXPECT_NEAR(c.norm2() + r.norm2(), a.norm2() + b.norm2(), 1e-12 * (1.0 + a.norm2() + b.norm2()));
  }
}

TEST(CoherentOverlap, SelfOverlapIsOne) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const CoherentLabel a = random_label(rng);
    EXPECT_NEAR(std::abs(coherent_overlap(a, a) - 1.0), 0.0, 1e-14);
  }
}

TEST(CoherentOverlap, ParticleTwoLabelsOfTheInitialState) {
  const double a = 1.7;
  const auto l = initial_labels(a);
  const cplx got = coherent_overlap(l.p2a, l.p2b);
  const cplx want = std::exp(a * a * (1.0 / std::sqrt(2.0) - 1.0)) * std::polar(1.0, a * a / std::sqrt(2.0));
  EXPECT_NEAR(std::abs(got - want), 0.0, 1e-14);
}

TEST(CoherentOverlap, MatchesPositionSpaceQuadrature) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const CoherentLabel a = random_label(rng, 1.0);
    const CoherentLabel b = random_label(rng, 1.0);
    const cplx q = quadrature_overlap_1d(a.x, b.x) * quadrature_overlap_1d(a.y, b.y);
    EXPECT_NEAR(std::abs(coherent_overlap(a, b) - q), 0.0, 1e-10);
  }
}

TEST(CoherentOverlap, BoundedByOneWithEqualityOnlyForEqualLabels) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const CoherentLabel a = random_label(rng);
    CoherentLabel b = random_label(rng);
    EXPECT_LE(std::abs(coherent_overlap(a, b)), 1.0 + 1e-15);
    b = a;
    b.x += 1e-3;
    EXPECT_LT(std::abs(coherent_overlap(a, b)), 1.0);
  }
}

TEST(InitialState, LabelsAndPhases) {
  const double a = 5.0;
  const SuperpositionState s = build_initial_state(a);
  EXPECT_EQ(s[Branch::aa].particle1, (CoherentLabel{cplx(a, 0), 0.0}));
  EXPECT_NEAR(std::abs(s[Branch::aa].particle2.y - std::polar(a, std::numbers::pi / 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[Branch::ba].particle1.x - std::polar(a, -std::numbers::pi / 4)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[Branch::bb].particle2.y - std::polar(a, std::numbers::pi / 4)), 0.0, 1e-15);
  for (const auto& c : s.components) EXPECT_EQ(c.phase, 0.0);
  EXPECT_NEAR(total_norm2(s), 1.0, 1e-12);
}

TEST(InitialState, LargeAlphaNormalizationIsOneHalf) {
  const SuperpositionState s = build_initial_state(30.0);
  EXPECT_NEAR(std::abs(s.normalization), 0.5, 1e-12);
}

TEST(InitialState, NormalizationMatchesGramMatrix) {
  const SuperpositionState s = build_initial_state(1.0);
  Eigen::Matrix4cd gram;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      gram(i, j) = coherent_overlap(s.components[j].particle1, s.components[i].particle1) *
                   coherent_overlap(s.components[j].particle2, s.components[i].particle2);
  const Eigen::Vector4cd ones = Eigen::Vector4cd::Ones();
  const double n2 = (ones.adjoint() * gram * ones)(0).real();
  EXPECT_NEAR(std::abs(s.normalization), 1.0 / std::sqrt(n2), 1e-13);
}

TEST(InitialState, NormStaysOneAfterRandomRelabelling) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ph(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    SuperpositionState s = build_initial_state(1.5);
    for (auto& c : s.components) {
      c.particle1 = random_label(rng, 1.0);
      c.particle2 = random_label(rng, 1.0);
      c.phase = ph(rng);
    }
    renormalize(s);
    EXPECT_NEAR(total_norm2(s), 1.0, 1e-12);
  }
}

TEST(InitialState, RejectsNonPositiveAlpha) { EXPECT_THROW(build_initial_state(0.0), DomainError); }
