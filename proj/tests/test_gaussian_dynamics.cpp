#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "harmonium/gaussian_dynamics.hpp"

using namespace harmonium;
using std::numbers::pi;

namespace {

GaussianWavepacket constant_separation_packet(double alpha) {
  const double h = alpha / std::numbers::sqrt2;
  return GaussianWavepacket::from_label({cplx(h, 0.0), cplx(0.0, -h)});
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// nu from the Hermitian matrix i S^{1/2} J S^{1/2}: same spectrum, different factorization.
std::vector<double> williamson_oracle(const Eigen::MatrixXd& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  const Eigen::MatrixXd root = es.operatorSqrt();
  const Eigen::MatrixXd k = root * symplectic_form(sigma.rows() / 2) * root;
  const Eigen::MatrixXcd h = cplx(0, 1) * k.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h);
  std::vector<double> nu;
  for (Eigen::Index i = 0; i < hs.eigenvalues().size(); ++i)
    if (hs.eigenvalues()(i) > 0) nu.push_back(2.0 * hs.eigenvalues()(i));
  std::sort(nu.begin(), nu.end());
  return nu;
}

Mat4c scom_frame_omega(const Mat2c& omega_rel) {
  Mat4c w = Mat4c::Zero();
  w.topLeftCorner<2, 2>() = cplx(0, 0.5) * Mat2c::Identity();
  w.bottomRightCorner<2, 2>() = omega_rel;
  return w;
}

}  // namespace

TEST(HellerRhs, FreeCoherentStateKeepsItsWidth) {
  GaussianWavepacket wp = GaussianWavepacket::from_label({cplx(1.0, 0.3), cplx(-0.2, 0.8)});
  const HellerDerivative d = heller_rhs(Potential::newtonian(0.0), wp);
  EXPECT_LT(max_abs(d.omega), 1e-15);
}

TEST(HellerRhs, ConstantSeparationWidthSource) {
  const double alpha = 10.0;
  const double g0 = 1.0;
  for (double theta : {0.0, 0.4, 1.3, 2.9}) {
    GaussianWavepacket wp;
    wp.mean_position = {alpha * std::cos(theta), alpha * std::sin(theta)};
    const HellerDerivative d = heller_rhs(Potential::newtonian(g0), wp);
    const double k = g0 / (2 * alpha * alpha * alpha);
    const double c = std::cos(theta), s = std::sin(theta);
    Mat2c want;
    want << k * (3 * c * c - 1), k * 3 * s * c, k * 3 * s * c, k * (3 * s * s - 1);
    EXPECT_LT(max_abs(d.omega - want), 1e-15);
  }
}

TEST(HellerRhs, SingularAtTheOrigin) {
  EXPECT_THROW(heller_rhs(Potential::newtonian(1.0), GaussianWavepacket{}), SingularityError);
}

TEST(HellerRhs, MatchesFiniteDifferencesOfAnIntegratedTrajectory) {
  const Potential pot = Potential::newtonian(0.5);
  const GaussianWavepacket wp0 = GaussianWavepacket::from_label({cplx(2.0, 0.4), cplx(0.3, -1.5)});
  const double t = 3.0;
  const double h = 1e-3;
  const auto path = integrate_heller(pot, wp0, {t - h, t, t + h}, 1e-13, 1e-14);
  const HellerDerivative d = heller_rhs(pot, path[1]);
  const Mat2c fd_omega = (path[2].omega - path[0].omega) / (2 * h);
  const cplx fd_gamma = (path[2].gamma - path[0].gamma) / (2 * h);
  EXPECT_LT(max_abs(fd_omega - d.omega), 1e-4 * std::max(1e-3, max_abs(d.omega)));
  EXPECT_LT(std::abs(fd_gamma - d.gamma), 1e-4 * std::abs(d.gamma));
}

TEST(AnalyticOmega, InitialAndGravityFreeValues) {
  const Mat2c vac = cplx(0, 0.5) * Mat2c::Identity();
  EXPECT_LT(max_abs(evolve_analytic_omega({1.0, 10.0}, 0.0) - vac), 1e-16);
  for (double t : {0.3, 5.0, 400.0}) EXPECT_LT(max_abs(evolve_analytic_omega({0.0, 10.0}, t) - vac), 1e-16);
}

TEST(AnalyticOmega, AgreesWithHellerIntegrationOverFivePeriods) {
  const double alpha = 10.0;
  const double g0 = 1.0;
  std::vector<double> times;
  for (int i = 1; i <= 100; ++i) times.push_back(10.0 * pi * i / 100);
  const auto path = integrate_heller(Potential::newtonian(g0), constant_separation_packet(alpha), times);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    worst = std::max(worst, max_abs(path[i].omega - evolve_analytic_omega({g0, alpha}, times[i])));
  EXPECT_LT(worst, 1e-3);
}

TEST(HellerIntegration, NormIsConservedOverTenPeriods) {
  const auto wp0 = constant_separation_packet(5.0);
  std::vector<double> times;
  for (int i = 1; i <= 50; ++i) times.push_back(20.0 * pi * i / 50);
  const auto path = integrate_heller(Potential::newtonian(0.8), wp0, times);
  for (const auto& wp : path) {
    EXPECT_NEAR(wp.norm(), wp0.norm(), 1e-6);
    EXPECT_LT(max_abs(wp.omega - wp.omega.transpose()), 1e-12);
  }
  EXPECT_NEAR(wp0.norm(), 1.0, 1e-14);
}

TEST(Covariance, VacuumWidthGivesHalfIdentity) {
  const CovarianceMatrix c = omega_to_covariance(cplx(0, 0.5) * Mat2c::Identity());
  EXPECT_LT((c.sigma - 0.5 * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Covariance, NonNormalizableWidthRejected) {
  Mat2c w;
  w << cplx(0, -0.5), 0.0, 0.0, cplx(0, 0.5);
  EXPECT_THROW(omega_to_covariance(w), DomainError);
}

TEST(Covariance, UncertaintyBoundAtEntangledTimes) {
  for (double t : {10.0, 120.0, 400.0}) {
    const CovarianceMatrix c = omega_to_covariance(particle_frame_omega(evolve_analytic_omega({1.0, 10.0}, t)));
    const Eigen::MatrixXcd m = c.sigma.cast<cplx>() + cplx(0, 0.5) * symplectic_form(4).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
  }
}

TEST(Covariance, FullStateStaysPure) {
  for (double t : {0.0, 1.0, 50.0, 150.0, 250.0}) {
    const CovarianceMatrix c = omega_to_covariance(particle_frame_omega(evolve_analytic_omega({2.0, 10.0}, t)));
    for (double nu : symplectic_spectrum(c)) EXPECT_NEAR(nu, 1.0, 1e-6);
  }
}

TEST(ParticleFrame, InitialWidthIsVacuum) {
  const Mat4c w = particle_frame_omega(evolve_analytic_omega({1.0, 10.0}, 0.0));
  EXPECT_LT(max_abs(w - cplx(0, 0.5) * Mat4c::Identity()), 1e-15);
}

TEST(ParticleFrame, CrossBlocksCarryTheThreeSixteenthsPattern) {
  const DimensionlessParams p{1.0, 10.0};
  const double t = 123.4;
  const double eps = p.g0 / std::pow(p.alpha, 3);
  const cplx bracket = 3.0 / 16.0 * (std::polar(1.0, -(2 + eps) * t) - std::polar(1.0, -2 * t));
  Mat2c pattern;
  pattern << cplx(0, 1), 1.0, 1.0, cplx(0, -1);
  Mat4c want = cplx(0, 0.5) * Mat4c::Identity();
  want.topLeftCorner<2, 2>() += bracket * pattern;
  want.bottomRightCorner<2, 2>() += bracket * pattern;
  want.topRightCorner<2, 2>() -= bracket * pattern;
  want.bottomLeftCorner<2, 2>() -= bracket * pattern;
  EXPECT_LT(max_abs(particle_frame_omega(evolve_analytic_omega(p, t)) - want), 1e-15);
}

TEST(ParticleFrame, CovarianceIsTheSymplecticImageOfTheScomCovariance) {
  const double s = std::numbers::sqrt2 / 2;
  Eigen::Matrix4d m;
  m << s, 0, s, 0, 0, s, 0, s, s, 0, -s, 0, 0, s, 0, -s;
  // positions x = M^T X maps covariances by blockdiag(M^T, M^T)
  Eigen::Matrix<double, 8, 8> big = Eigen::Matrix<double, 8, 8>::Zero();
  big.topLeftCorner<4, 4>() = m.transpose();
  big.bottomRightCorner<4, 4>() = m.transpose();
  for (double t : {3.0, 77.0, 160.0}) {
    const Mat2c rel = evolve_analytic_omega({1.5, 8.0}, t);
    const CovarianceMatrix scom = omega_to_covariance(scom_frame_omega(rel));
    const CovarianceMatrix particle = omega_to_covariance(particle_frame_omega(rel));
    const Eigen::MatrixXd mapped = big * scom.sigma * big.transpose();
    EXPECT_LT((mapped - particle.sigma).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(SymplecticSpectrum, VacuumAndThermalStates) {
  CovarianceMatrix c;
  c.sigma = 0.5 * Eigen::MatrixXd::Identity(4, 4);
  for (double nu : symplectic_spectrum(c)) EXPECT_NEAR(nu, 1.0, 1e-14);
  for (int n : {1, 2, 5}) {
    c.sigma = (n + 0.5) * Eigen::MatrixXd::Identity(4, 4);
    const auto nu = symplectic_spectrum(c);
    ASSERT_EQ(nu.size(), 2u);
    for (double v : nu) EXPECT_NEAR(v, 2 * n + 1, 1e-12);
  }
}

TEST(SymplecticSpectrum, AgreesWithWilliamsonFactorization) {
  for (double t : {50.0, 200.0, 450.0}) {
    const CovarianceMatrix full = omega_to_covariance(particle_frame_omega(evolve_analytic_omega({1.0, 10.0}, t)));
    const CovarianceMatrix sub = full.subsystem({0, 1});
    const auto nu = symplectic_spectrum(sub);
    const auto oracle = williamson_oracle(sub.sigma);
    ASSERT_EQ(nu.size(), oracle.size());
    for (std::size_t i = 0; i < nu.size(); ++i) EXPECT_NEAR(nu[i], oracle[i], 1e-10);
  }
}

TEST(SymplecticSpectrum, BelowTheUncertaintyBoundIsAnError) {
  CovarianceMatrix c;
  c.sigma = 0.3 * Eigen::MatrixXd::Identity(2, 2);
  EXPECT_THROW(symplectic_spectrum(c), NumericalError);
}

TEST(GaussianEntropy, PureModesContributeNothing) { EXPECT_EQ(gaussian_entropy({1.0, 1.0}), 0.0); }

TEST(GaussianEntropy, MatchesHighPrecisionValues) {
  EXPECT_NEAR(gaussian_entropy({3.0, 1.0}), 1.3862943611198906188, 1e-15);
  EXPECT_NEAR(gaussian_entropy({2.5, 1.2}), 1.5301888903099873110, 1e-14);
}

TEST(GaussianEntropy, MonotoneInEachEigenvalue) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(1.0, 20.0);
  std::uniform_real_distribution<double> du(1e-6, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    EXPECT_LT(gaussian_entropy({a, b}), gaussian_entropy({a + du(rng), b}));
  }
}

TEST(CovarianceEntropy, MatchesTheSmallTimeClosedForm) {
  const DimensionlessParams p{1.0, 10.0};
  const double t = 1e-3 * std::pow(p.alpha, 3) / p.g0;
  const double exact = covariance_entropy(p, t);
  const double closed = covariance_entropy_closed_form(p, t);
  EXPECT_NEAR(exact / closed, 1.0, 0.02);
}

TEST(CovarianceEntropy, GrowsAsAlphaToTheMinusSix) {
  // non-log prefactor: the mixed mode's (nu - 1)/2
  const double g0 = 1.0;
  const double t = 50.0;
  std::vector<double> la, ld;
  for (double alpha : {10.0, 20.0, 40.0}) {
    const auto full = omega_to_covariance(particle_frame_omega(evolve_analytic_omega({g0, alpha}, t)));
    const auto nu = symplectic_spectrum(full.subsystem({0, 1}));
    la.push_back(std::log(alpha));
    ld.push_back(std::log(0.5 * (nu.back() - 1.0)));
  }
  const double slope = (ld.back() - ld.front()) / (la.back() - la.front());
  EXPECT_NEAR(slope, -6.0, 0.1);
}
