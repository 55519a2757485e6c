#pragma once

// Phase-decorated evolution of the four-branch superposition and what can be
// read off it: particle-1 reduced state, its entropy, the detection
// probability along x, fringe visibility and the visibility / which-path /
// concurrence triple.  Every closed form is paired with an exact evaluation.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "harmonium/core_model.hpp"
#include "harmonium/errors.hpp"
#include "harmonium/perturbation.hpp"
#include "harmonium/potential.hpp"

namespace harmonium {

/// Evolution of the standard four-branch state under the first-order model:
/// centre-of-mass labels rotate at frequency 1, relative labels follow the
/// averaged secular drift of their branch's action-angle variables, and each
/// branch picks up e^{i delta S}.
class PhaseEvolution {
 public:
  PhaseEvolution(SuperpositionState initial, Potential pot, DimensionlessParams params,
                 PerturbationOptions opts = {})
      : initial_(std::move(initial)), pot_(pot), params_(params), opts_(opts) {
    for (Branch b : kBranches) {
      const auto& c = initial_[b];
      const CoherentLabel rel = scom_transform(c.particle1, c.particle2).second;
      orbit_[static_cast<int>(b)] = ActionAngleState::from_label(rel);
      drift_[static_cast<int>(b)] = averaged_drifts(pot_, orbit_[static_cast<int>(b)]);
    }
  }

  const Potential& potential() const { return pot_; }
  const DimensionlessParams& params() const { return params_; }
  const SuperpositionState& initial() const { return initial_; }

  /// Averaged drifts of a branch's relative orbit.
  const AveragedDrifts& drift(Branch b) const { return drift_[static_cast<int>(b)]; }

  double delta_S(Branch b, double t) const { return harmonium::delta_S(pot_, b, params_, t, opts_); }

  /// Particle labels of one branch at time t.
  std::pair<CoherentLabel, CoherentLabel> labels_at(Branch b, double t) const {
    const auto& c = initial_[b];
    auto [centre, rel] = scom_transform(c.particle1, c.particle2);
    const cplx harmonic = std::polar(1.0, -t);
    const ActionAngleState& o = orbit_[static_cast<int>(b)];
    const AveragedDrifts& d = drift(b);
    // a = i sqrt(eta) e^{-i(t + phi)} with eta and phi drifting linearly
    auto label = [t](double eta, double eta_dot, double phi, double phi_dot) {
      const double e = eta + eta_dot * t;
      if (e < 0) {
        throw NumericalError(fmt::format("evolve_phases: action drift exhausts the orbit at t = {}", t), e);
      }
      return cplx(0.0, 1.0) * std::polar(std::sqrt(e), -(t + phi + phi_dot * t));
    };
    centre = harmonic * centre;
    rel.x = label(o.eta_x, d.eta_dot_x, o.phi_x, d.phi_dot_x);
    rel.y = label(o.eta_y, d.eta_dot_y, o.phi_y, d.phi_dot_y);
    return inverse_scom_transform(centre, rel);
  }

  SuperpositionState state_at(double t) const {
    if (!(t >= 0)) throw DomainError(fmt::format("evolve_phases: t must be >= 0, got {}", t));
    SuperpositionState s = initial_;
    for (Branch b : kBranches) {
      auto& c = s[b];
      std::tie(c.particle1, c.particle2) = labels_at(b, t);
      c.phase = initial_[b].phase + delta_S(b, t);
    }
    s.time = t;
    renormalize(s);
    return s;
  }

  /// Mean particle-1 x position of the "a" and "b" wavepackets (branch-averaged).
  std::pair<double, double> particle1_means(double t) const {
    double a = 0.0;
    double b = 0.0;
    for (Branch br : kBranches) {
      const double x = std::numbers::sqrt2 * labels_at(br, t).first.x.real();
      (particle1_index(br) == 0 ? a : b) += 0.5 * x;
    }
    return {a, b};
  }

  /// Time closest to t_guess at which the two particle-1 packets are centred
  /// on the same x (the fringe condition).
  double crossing_time(double t_guess, double tol = 1e-8) const {
    using std::numbers::pi;
    auto gap = [&](double t) {
      const auto [a, b] = particle1_means(t);
      return a - b;
    };
    // harmonic crossings of the standard state sit at 7pi/8 + k pi
    const double k = std::max(0.0, std::round((t_guess - 7.0 * pi / 8.0) / pi));
    const double centre = 7.0 * pi / 8.0 + k * pi;
    const double lo = std::max(0.0, centre - pi / 4.0);
    const double hi = centre + pi / 4.0;
    if (gap(lo) * gap(hi) > 0) {
      throw NumericalError(fmt::format("crossing_time: no sign change of the packet gap in [{}, {}]", lo, hi));
    }
    boost::uintmax_t iters = 100;
    auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    const auto [a, b] = boost::math::tools::toms748_solve(gap, lo, hi, stop, iters);
    return 0.5 * (a + b);
  }

 private:
  SuperpositionState initial_;
  Potential pot_;
  DimensionlessParams params_;
  PerturbationOptions opts_;
  std::array<ActionAngleState, 4> orbit_{};
  std::array<AveragedDrifts, 4> drift_{};
};

inline SuperpositionState evolve_phases(const SuperpositionState& state, const Potential& pot,
                                        const DimensionlessParams& params, double t,
                                        PerturbationOptions opts = {}) {
  return PhaseEvolution(state, pot, params, opts).state_at(t);
}

// ---------------------------------------------------------------------------
// Reduced state of particle 1

/// rho_1 = sum_kl matrix(k,l) |label_k><label_l| over the distinct particle-1
/// labels; gram(k,l) = <label_k|label_l>.
struct ReducedState {
  std::vector<CoherentLabel> labels;
  Eigen::MatrixXcd matrix;
  Eigen::MatrixXcd gram;

  cplx trace() const { return (matrix * gram).trace(); }
};

inline constexpr double kSameLabelTol = 1e-12;

inline ReducedState reduced_density(const SuperpositionState& s) {
  ReducedState r;
  std::array<int, 4> slot{};
  for (int i = 0; i < 4; ++i) {
    const auto& lab = s.components[i].particle1;
    auto it = std::find_if(r.labels.begin(), r.labels.end(),
                           [&](const CoherentLabel& l) { return distance(l, lab) <= kSameLabelTol; });
    if (it == r.labels.end()) {
      slot[i] = static_cast<int>(r.labels.size());
      r.labels.push_back(lab);
    } else {
      slot[i] = static_cast<int>(it - r.labels.begin());
    }
  }
  const auto n = static_cast<Eigen::Index>(r.labels.size());
  r.matrix = Eigen::MatrixXcd::Zero(n, n);
  r.gram.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l) r.gram(k, l) = coherent_overlap(r.labels[l], r.labels[k]);

  const double n2 = std::norm(s.normalization);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const auto& ci = s.components[i];
      const auto& cj = s.components[j];
      // Tr_2 |phi_i chi_i><phi_j chi_j| = <chi_j|chi_i> |phi_i><phi_j|
      r.matrix(slot[i], slot[j]) += n2 * ci.amplitude() * std::conj(cj.amplitude()) *
                                    coherent_overlap(ci.particle2, cj.particle2);
    }
  }
  return r;
}

/// Eigenvalues of rho_1 (ascending) from the Hermitian form G^{1/2} M G^{1/2}.
inline std::vector<double> eigenvalues(const ReducedState& r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gs(r.gram);
  const Eigen::VectorXd g = gs.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd root = gs.eigenvectors() * g.asDiagonal() * gs.eigenvectors().adjoint();
  // nonzero spectrum of rho equals that of M G, i.e. of G^{1/2} M G^{1/2}
  Eigen::MatrixXcd h = root * r.matrix * root;
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

inline double von_neumann_entropy(const std::vector<double>& spectrum) {
  double s = 0.0;
  for (double p : spectrum)
    if (p > 1e-300) s -= p * std::log(p);
  return s;
}

/// Exact particle-1 entanglement entropy (nats).
inline double phase_entropy(const SuperpositionState& s) {
  return std::max(0.0, von_neumann_entropy(eigenvalues(reduced_density(s))));
}

/// S ~ x^2 (1 - log x^2) with x = c g0 t / alpha (or C t for other potentials).
inline double phase_entropy_closed_form(double scaled_time) {
  const double x2 = scaled_time * scaled_time;
  if (x2 == 0.0) return 0.0;
  return x2 * (1.0 - std::log(x2));
}

/// c g0 t / alpha generalized as C t.
inline double entanglement_scale(const Potential& pot, const DimensionlessParams& params, double t) {
  return scaling_constant_C(pot, params) * t;
}

// ---------------------------------------------------------------------------
// Detection probability of particle 1 along x

inline double detection_probability(const SuperpositionState& s, double x1) {
  std::array<cplx, 4> psi{};
  for (int i = 0; i < 4; ++i) psi[i] = coherent_wavefunction(s.components[i].particle1.x, x1);
  cplx total = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const auto& ci = s.components[i];
      const auto& cj = s.components[j];
      // integrate out particle 2 and particle-1 y
      const cplx rest = coherent_overlap(ci.particle2, cj.particle2) *
                        coherent_overlap({0.0, ci.particle1.y}, {0.0, cj.particle1.y});
      total += ci.amplitude() * std::conj(cj.amplitude()) * rest * psi[i] * std::conj(psi[j]);
    }
  }
  return std::max(0.0, std::norm(s.normalization) * total.real());
}

struct FringeProfile {
  std::vector<double> grid;
  std::vector<double> probability;
  double envelope_center = 0.0;
  double phase_slope = 0.0;
};

inline constexpr int kFringeGridPoints = 4001;
inline constexpr double kFringeHalfWidth = 6.0 / std::numbers::sqrt2;  // six zero-point widths

/// Mean particle-1 labels of the a and b packets (branch-averaged).
inline std::pair<cplx, cplx> particle1_packets(const SuperpositionState& s) {
  cplx a = 0.0;
  cplx b = 0.0;
  for (const auto& c : s.components) (particle1_index(c.branch) == 0 ? a : b) += 0.5 * c.particle1.x;
  return {a, b};
}

inline FringeProfile detection_profile(const SuperpositionState& s, int points = kFringeGridPoints,
                                       double half_width = kFringeHalfWidth) {
  if (points < 2) throw DomainError("detection_profile: need at least two grid points");
  const auto [a, b] = particle1_packets(s);
  FringeProfile f;
  f.envelope_center = 0.5 * std::numbers::sqrt2 * (a.real() + b.real());
  f.phase_slope = std::numbers::sqrt2 * (a.imag() - b.imag());
  f.grid.resize(points);
  f.probability.resize(points);
  for (int i = 0; i < points; ++i) {
    const double x = f.envelope_center - half_width + 2.0 * half_width * i / (points - 1);
    f.grid[i] = x;
    f.probability[i] = detection_probability(s, x);
  }
  return f;
}

struct Visibility {
  double exact = 1.0;
  double closed_form = 1.0;
};

inline double visibility_closed_form(double scaled_time) { return 1.0 - scaled_time * scaled_time / 8.0; }

/// Visibility from the extrema of the detection probability divided by the
/// common Gaussian envelope; evaluated at the nearest extrema to the envelope
/// centre.  The state should sit at a crossing time.
inline double fringe_visibility_exact(const SuperpositionState& s) {
  const FringeProfile f = detection_profile(s);
  const auto n = static_cast<int>(f.grid.size());
  std::vector<double> ratio(n);
  for (int i = 0; i < n; ++i) {
    const double d = f.grid[i] - f.envelope_center;
    ratio[i] = f.probability[i] * std::exp(d * d);
  }
  const int mid = n / 2;
  auto nearest_extremum = [&](bool want_max) {
    int best = -1;
    for (int off = 0; off < n / 2 - 1 && best < 0; ++off) {
      for (int i : {mid - off, mid + off}) {
        if (i < 1 || i > n - 2) continue;
        const bool is_max = ratio[i] >= ratio[i - 1] && ratio[i] >= ratio[i + 1];
        const bool is_min = ratio[i] <= ratio[i - 1] && ratio[i] <= ratio[i + 1];
        if ((want_max && is_max) || (!want_max && is_min)) {
          best = i;
          break;
        }
      }
    }
    if (best < 0) throw NumericalError("fringe_visibility: no extremum on the scan grid");
    // grid bracket, then successive parabolic interpolation on the continuous profile
    const double sign = want_max ? -1.0 : 1.0;
    // offsets from the grid point keep Brent's relative tolerance meaningful far from x = 0
    const double x0 = f.grid[best];
    auto objective = [&](double u) {
      const double d = x0 + u - f.envelope_center;
      return sign * detection_probability(s, x0 + u) * std::exp(d * d);
    };
    const auto [u_best, value] =
        boost::math::tools::brent_find_minima(objective, f.grid[best - 1] - x0, f.grid[best + 1] - x0, 52);
    return sign * value;
  };
  const double hi = nearest_extremum(true);
  const double lo = std::max(0.0, nearest_extremum(false));
  if (!(hi + lo > 0)) return 0.0;
  return std::clamp((hi - lo) / (hi + lo), 0.0, 1.0);
}

inline Visibility fringe_visibility(const SuperpositionState& s, const Potential& pot,
                                    const DimensionlessParams& params) {
  return {fringe_visibility_exact(s), visibility_closed_form(entanglement_scale(pot, params, s.time))};
}

// ---------------------------------------------------------------------------
// Visibility / which-path / concurrence in the orthogonal-branch limit

struct Complementarity {
  double V2 = 1.0;
  double P2 = 0.0;
  double C2 = 0.0;

  double sum() const { return V2 + P2 + C2; }
};

/// Treats |1a>,|1b> and |2a>,|2b> as orthonormal qubits (alpha >> 1).
inline Complementarity complementarity(const SuperpositionState& s) {
  std::array<std::array<cplx, 2>, 2> psi{};
  std::array<std::array<double, 2>, 2> weight2{};
  double total = 0.0;
  for (const auto& c : s.components) total += c.weight * c.weight;
  const double norm = 1.0 / std::sqrt(total);
  for (const auto& c : s.components) {
    const int i = particle1_index(c.branch);
    const int j = particle2_index(c.branch);
    psi[i][j] = norm * c.amplitude();
    weight2[i][j] = norm * norm * c.weight * c.weight;
  }
  Complementarity out;
  const cplx coherence = psi[0][0] * std::conj(psi[1][0]) + psi[0][1] * std::conj(psi[1][1]);
  out.V2 = 4.0 * std::norm(coherence);
  const double p = (weight2[0][0] + weight2[0][1]) - (weight2[1][0] + weight2[1][1]);
  out.P2 = p * p;
  out.C2 = 4.0 * std::norm(psi[0][0] * psi[1][1] - psi[0][1] * psi[1][0]);
  return out;
}

/// V^2 ~ 1 - x^2/4, P = 0, C^2 ~ x^2/4 with x = c g0 t / alpha.
inline Complementarity complementarity_closed_form(double scaled_time) {
  const double x2 = scaled_time * scaled_time;
  return {1.0 - 0.25 * x2, 0.0, 0.25 * x2};
}

}  // namespace harmonium
