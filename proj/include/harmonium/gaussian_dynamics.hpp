#pragma once

// Gaussian wavepacket (Heller) dynamics of one product component in the
// relative coordinate, the closed-form width matrix of the constant-separation
// orbit, Wigner covariances and the covariance-route entanglement entropy.
//
// Wavepacket:  psi(r) = exp i[(r - <r>)^T W (r - <r>) + <p>.(r - <r>) + gamma],
// W complex symmetric with Im W > 0.  Covariances use the standard
// convention (vacuum = Id/2) with phase-space ordering (x..., p...).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "harmonium/core_model.hpp"
#include "harmonium/errors.hpp"
#include "harmonium/potential.hpp"

namespace harmonium {

using Vec2 = Eigen::Vector2d;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;

struct GaussianWavepacket {
  Vec2 mean_position = Vec2::Zero();
  Vec2 mean_momentum = Vec2::Zero();
  Mat2c omega = cplx(0.0, 0.5) * Mat2c::Identity();
  cplx gamma{0.0, 0.5 * std::log(std::numbers::pi)};  // normalized vacuum width

  static GaussianWavepacket from_label(const CoherentLabel& a) {
    GaussianWavepacket wp;
    wp.mean_position = {std::numbers::sqrt2 * a.x.real(), std::numbers::sqrt2 * a.y.real()};
    wp.mean_momentum = {std::numbers::sqrt2 * a.x.imag(), std::numbers::sqrt2 * a.y.imag()};
    return wp;
  }

  /// integral of |psi|^2
  double norm() const {
    const Eigen::Matrix2d b = omega.imag();
    return std::exp(-2.0 * gamma.imag()) * std::numbers::pi / std::sqrt((2.0 * b).determinant());
  }
};

/// Time derivatives of every wavepacket field.
struct HellerDerivative {
  Vec2 position = Vec2::Zero();
  Vec2 momentum = Vec2::Zero();
  Mat2c omega = Mat2c::Zero();
  cplx gamma{};
};

/// Hessian of V(r) = r^2/2 + K(|r|).
inline Eigen::Matrix2d potential_hessian(const Potential& pot, const Vec2& r) {
  const double rr = r.norm();
  if (!(rr > 0)) throw SingularityError("heller: wavepacket centre at r = 0");
  const Vec2 u = r / rr;
  const Eigen::Matrix2d uu = u * u.transpose();
  const double k1 = pot.derivative(rr);
  const double k2 = pot.second_derivative(rr);
  return Eigen::Matrix2d::Identity() + k2 * uu + (k1 / rr) * (Eigen::Matrix2d::Identity() - uu);
}

inline HellerDerivative heller_rhs(const Potential& pot, const GaussianWavepacket& wp) {
  const Vec2& r = wp.mean_position;
  const Vec2& p = wp.mean_momentum;
  const double rr = r.norm();
  if (!(rr > 0)) throw SingularityError("heller: wavepacket centre at r = 0");

  HellerDerivative d;
  d.position = p;
  d.momentum = -r - pot.derivative(rr) * (r / rr);
  const Eigen::Matrix2d hess = potential_hessian(pot, r);
  d.omega = -2.0 * wp.omega * wp.omega - 0.5 * hess.cast<cplx>();
  d.omega = 0.5 * (d.omega + d.omega.transpose()).eval();
  const double lagrangian = 0.5 * p.squaredNorm() - 0.5 * r.squaredNorm() - pot.value(rr);
  d.gamma = cplx(0.0, 1.0) * wp.omega.trace() + lagrangian;
  return d;
}

namespace detail {

using HellerVector = std::array<double, 14>;

inline HellerVector pack(const GaussianWavepacket& wp) {
  HellerVector v{};
  v[0] = wp.mean_position.x();
  v[1] = wp.mean_position.y();
  v[2] = wp.mean_momentum.x();
  v[3] = wp.mean_momentum.y();
  for (int k = 0; k < 4; ++k) {
    v[4 + k] = wp.omega(k / 2, k % 2).real();
    v[8 + k] = wp.omega(k / 2, k % 2).imag();
  }
  v[12] = wp.gamma.real();
  v[13] = wp.gamma.imag();
  return v;
}

inline GaussianWavepacket unpack(const HellerVector& v) {
  GaussianWavepacket wp;
  wp.mean_position = {v[0], v[1]};
  wp.mean_momentum = {v[2], v[3]};
  for (int k = 0; k < 4; ++k) wp.omega(k / 2, k % 2) = cplx(v[4 + k], v[8 + k]);
  wp.gamma = cplx(v[12], v[13]);
  return wp;
}

}  // namespace detail

/// Integrates the Heller equations with an adaptive Dormand-Prince 5(4)
/// stepper and returns the packet at each requested time (ascending, >= 0).
inline std::vector<GaussianWavepacket> integrate_heller(const Potential& pot,
                                                        const GaussianWavepacket& initial,
                                                        const std::vector<double>& times,
                                                        double rel_tol = 1e-9,
                                                        double abs_tol = 1e-12) {
  namespace odeint = boost::numeric::odeint;
  using detail::HellerVector;
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0)) {
    throw DomainError("integrate_heller: times must be ascending and non-negative");
  }
  std::vector<GaussianWavepacket> out;
  out.reserve(times.size());
  if (times.empty()) return out;

  auto system = [&](const HellerVector& x, HellerVector& dxdt, double) {
    const HellerDerivative d = heller_rhs(pot, detail::unpack(x));
    GaussianWavepacket as_packet;
    as_packet.mean_position = d.position;
    as_packet.mean_momentum = d.momentum;
    as_packet.omega = d.omega;
    as_packet.gamma = d.gamma;
    dxdt = detail::pack(as_packet);
  };

  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  if (times.front() > 0) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());

  HellerVector state = detail::pack(initial);
  auto stepper = odeint::make_dense_output(abs_tol, rel_tol, odeint::runge_kutta_dopri5<HellerVector>());
  std::vector<GaussianWavepacket> all;
  odeint::integrate_times(stepper, system, state, grid.begin(), grid.end(), 1e-3,
                          [&](const HellerVector& x, double) { all.push_back(detail::unpack(x)); });
  const std::size_t skip = times.front() > 0 ? 1 : 0;
  for (std::size_t i = skip; i < all.size(); ++i) {
    GaussianWavepacket wp = all[i];
    wp.omega = 0.5 * (wp.omega + wp.omega.transpose()).eval();
    out.push_back(wp);
  }
  return out;
}

/// Closed-form width matrix of the constant-separation (aa) orbit.
inline Mat2c evolve_analytic_omega(const DimensionlessParams& params, double t) {
  const double eps = params.g0 / (params.alpha * params.alpha * params.alpha);
  const cplx bracket = 0.375 * (std::polar(1.0, -(2.0 + eps) * t) - std::polar(1.0, -2.0 * t));
  Mat2c pattern;
  pattern << cplx(0, 1), 1.0, 1.0, cplx(0, -1);
  return cplx(0.0, 0.5) * Mat2c::Identity() + bracket * pattern;
}

/// Width matrix in particle coordinates (x1x, x1y, x2x, x2y) from the
/// relative-coordinate width matrix, with the centre-of-mass mode in its vacuum.
inline Mat4c particle_frame_omega(const Mat2c& omega_rel) {
  Mat4c scom = Mat4c::Zero();
  scom.topLeftCorner<2, 2>() = cplx(0.0, 0.5) * Mat2c::Identity();
  scom.bottomRightCorner<2, 2>() = omega_rel;
  // rows: R = (x1 + x2)/sqrt2, r = (x1 - x2)/sqrt2
  const double s = std::numbers::sqrt2 / 2.0;
  Eigen::Matrix4d m;
  m << s, 0, s, 0,
       0, s, 0, s,
       s, 0, -s, 0,
       0, s, 0, -s;
  const Eigen::Matrix4cd mc = m.cast<cplx>();
  return mc.transpose() * scom * mc;
}

/// Real symmetric 2N x 2N covariance in (x..., p...) ordering.
struct CovarianceMatrix {
  Eigen::MatrixXd sigma;

  Eigen::Index modes() const { return sigma.rows() / 2; }

  /// Block belonging to the listed position modes (and their momenta).
  CovarianceMatrix subsystem(const std::vector<int>& modes_kept) const {
    const auto n = modes();
    std::vector<Eigen::Index> idx;
    for (int m : modes_kept) idx.push_back(m);
    for (int m : modes_kept) idx.push_back(n + m);
    CovarianceMatrix out;
    out.sigma.resize(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j)
        out.sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sigma(idx[i], idx[j]);
    return out;
  }
};

inline Eigen::MatrixXd symplectic_form(Eigen::Index modes) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  j.topRightCorner(modes, modes) = Eigen::MatrixXd::Identity(modes, modes);
  j.bottomLeftCorner(modes, modes) = -Eigen::MatrixXd::Identity(modes, modes);
  return j;
}

inline CovarianceMatrix omega_to_covariance(const Eigen::MatrixXcd& omega) {
  const Eigen::MatrixXd a = omega.real();
  const Eigen::MatrixXd b = omega.imag();
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  if (llt.info() != Eigen::Success) {
    throw DomainError("omega_to_covariance: Im(omega) is not positive definite (non-normalizable)");
  }
  const auto n = omega.rows();
  const Eigen::MatrixXd b_inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd xp = b_inv * a;
  CovarianceMatrix c;
  c.sigma.resize(2 * n, 2 * n);
  c.sigma.topLeftCorner(n, n) = 0.25 * b_inv;
  c.sigma.topRightCorner(n, n) = 0.5 * xp;
  c.sigma.bottomLeftCorner(n, n) = 0.5 * xp.transpose();
  c.sigma.bottomRightCorner(n, n) = b + a * b_inv * a;
  c.sigma = 0.5 * (c.sigma + c.sigma.transpose()).eval();
  return c;
}

inline constexpr double kSymplecticTol = 1e-9;

/// Symplectic eigenvalues nu_i (ascending), normalized so a pure mode has nu = 1.
inline std::vector<double> symplectic_spectrum(const CovarianceMatrix& cov) {
  const auto n = cov.modes();
  const Eigen::MatrixXd js = symplectic_form(n) * cov.sigma;
  Eigen::EigenSolver<Eigen::MatrixXd> es(js, false);
  if (es.info() != Eigen::Success) throw NumericalError("symplectic_spectrum: eigensolver failed");
  std::vector<double> mags;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mags.push_back(2.0 * std::abs(es.eigenvalues()(i)));
  std::sort(mags.begin(), mags.end());
  std::vector<double> nu;
  for (std::size_t i = 0; i + 1 < mags.size(); i += 2) {
    if (std::abs(mags[i] - mags[i + 1]) > kSymplecticTol * std::max(1.0, mags[i])) {
      throw NumericalError(fmt::format("symplectic_spectrum: unpaired eigenvalues {} and {}", mags[i],
                                       mags[i + 1]),
                           std::abs(mags[i] - mags[i + 1]));
    }
    const double v = 0.5 * (mags[i] + mags[i + 1]);
    if (v < 1.0 - kSymplecticTol) {
      throw NumericalError(fmt::format("symplectic_spectrum: nu = {} violates the uncertainty bound", v), v);
    }
    nu.push_back(v);
  }
  return nu;
}

/// Von Neumann entropy (nats) of a Gaussian state from its symplectic eigenvalues.
inline double gaussian_entropy(const std::vector<double>& nu) {
  double s = 0.0;
  for (double v : nu) {
    if (v - 1.0 < 1e-14) continue;
    const double plus = 0.5 * (v + 1.0);
    const double minus = 0.5 * (v - 1.0);
    s += plus * std::log(plus) - minus * std::log(minus);
  }
  return s;
}

/// Particle-1 entropy of the constant-separation component at time t, via
/// closed-form omega -> particle frame -> covariance -> symplectic spectrum.
inline double covariance_entropy(const DimensionlessParams& params, double t) {
  const Mat4c w = particle_frame_omega(evolve_analytic_omega(params, t));
  const CovarianceMatrix full = omega_to_covariance(w);
  return gaussian_entropy(symplectic_spectrum(full.subsystem({0, 1})));
}

/// Small-time approximation 9 g0^2 t^2/(64 a^6) [1 - log(9 g0^2 t^2 / (128 a^6))].
inline double covariance_entropy_closed_form(const DimensionlessParams& params, double t) {
  const double x = params.g0 * t / std::pow(params.alpha, 3);
  if (x == 0.0) return 0.0;
  const double x2 = x * x;
  return 9.0 * x2 / 64.0 * (1.0 - std::log(9.0 * x2 / 128.0));
}

}  // namespace harmonium
