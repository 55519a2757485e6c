#pragma once

// Dimensionless scaling, coherent-state algebra and the initial four-branch
// superposition of two trapped particles.
//
// Units: positions in zero-point lengths sqrt(hbar/(m w)), times in 1/w,
// energies in hbar w.  A coherent label a = (<x> + i<p>)/sqrt(2), so the
// mean position is sqrt(2) Re a.  The z axis is dropped everywhere.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "harmonium/errors.hpp"

namespace harmonium {

using cplx = std::complex<double>;

inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kNewtonG = 6.67430e-11;         // m^3 / (kg s^2)

struct PhysicalConfig {
  double mass = 1e-14;            // kg
  double trap_frequency = 1e5;    // rad/s
  double newton_G = kNewtonG;     // m^3/(kg s^2)
  double separation = 1e-4;       // m
};

struct DimensionlessParams {
  double g0 = 0.0;
  double alpha = 1.0;

  /// The perturbative phase formulas assume alpha >> 1.
  bool large_alpha() const { return alpha >= 10.0; }
};

/// Coherent-state label of one particle (x and y components).
struct CoherentLabel {
  cplx x{};
  cplx y{};

  double norm2() const { return std::norm(x) + std::norm(y); }

  friend CoherentLabel operator+(const CoherentLabel& a, const CoherentLabel& b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend CoherentLabel operator-(const CoherentLabel& a, const CoherentLabel& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend CoherentLabel operator*(cplx s, const CoherentLabel& a) { return {s * a.x, s * a.y}; }
  friend CoherentLabel operator*(const CoherentLabel& a, cplx s) { return s * a; }
  friend bool operator==(const CoherentLabel&, const CoherentLabel&) = default;

  bool finite() const {
    return std::isfinite(x.real()) && std::isfinite(x.imag()) && std::isfinite(y.real()) &&
           std::isfinite(y.imag());
  }
};

inline double distance(const CoherentLabel& a, const CoherentLabel& b) {
  return std::sqrt((a - b).norm2());
}

enum class Branch { aa = 0, ab = 1, ba = 2, bb = 3 };

inline constexpr std::array<Branch, 4> kBranches{Branch::aa, Branch::ab, Branch::ba, Branch::bb};

inline std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::aa: return "aa";
    case Branch::ab: return "ab";
    case Branch::ba: return "ba";
    case Branch::bb: return "bb";
  }
  return "?";
}

/// Index (0 = a, 1 = b) of particle 1 / particle 2 within a branch.
inline int particle1_index(Branch b) { return static_cast<int>(b) / 2; }
inline int particle2_index(Branch b) { return static_cast<int>(b) % 2; }

/// One product term weight * e^{i phase} |particle1>|particle2>.
struct Component {
  Branch branch = Branch::aa;
  CoherentLabel particle1;
  CoherentLabel particle2;
  double weight = 1.0;
  double phase = 0.0;  // accumulated delta S

  cplx amplitude() const { return std::polar(weight, phase); }
};

struct SuperpositionState {
  std::array<Component, 4> components;
  cplx normalization{1.0, 0.0};
  double time = 0.0;

  const Component& operator[](Branch b) const { return components[static_cast<int>(b)]; }
  Component& operator[](Branch b) { return components[static_cast<int>(b)]; }
};

// ---------------------------------------------------------------------------

inline DimensionlessParams nondimensionalize(const PhysicalConfig& c) {
  if (!(c.mass > 0) || !(c.trap_frequency > 0) || !(c.separation > 0) || !(c.newton_G >= 0)) {
    throw DomainError(fmt::format(
        "nondimensionalize: mass, trap frequency and separation must be positive and G "
        "non-negative (m={}, w={}, sep={}, G={})",
        c.mass, c.trap_frequency, c.separation, c.newton_G));
  }
  const double m = c.mass;
  const double w = c.trap_frequency;
  DimensionlessParams p;
  // sqrt(m^5 / (2 hbar^3 w)) evaluated as a product of square roots to stay in range.
  p.g0 = c.newton_G * m * m * std::sqrt(m / (2.0 * w)) / (kHbar * std::sqrt(kHbar));
  p.alpha = c.separation / std::sqrt(kHbar / (m * w));
  return p;
}

/// Symmetric centre-of-mass / relative labels: (a1 + a2)/sqrt2, (a1 - a2)/sqrt2.
inline std::pair<CoherentLabel, CoherentLabel> scom_transform(const CoherentLabel& a1,
                                                               const CoherentLabel& a2) {
  const double s = std::numbers::sqrt2 / 2.0;
  return {s * (a1 + a2), s * (a1 - a2)};
}

inline std::pair<CoherentLabel, CoherentLabel> inverse_scom_transform(const CoherentLabel& centre,
                                                                       const CoherentLabel& rel) {
  return scom_transform(centre, rel);
}

/// <b|a> for two-component coherent states.
inline cplx coherent_overlap(const CoherentLabel& a, const CoherentLabel& b) {
  const cplx e = -0.5 * a.norm2() - 0.5 * b.norm2() + std::conj(b.x) * a.x + std::conj(b.y) * a.y;
  return std::exp(e);
}

/// <x|a> for a single Cartesian component, phase convention consistent with coherent_overlap.
inline cplx coherent_wavefunction(cplx a, double x) {
  static const double inv_pi_quarter = std::pow(std::numbers::pi, -0.25);
  const double re = a.real();
  const double im = a.imag();
  const double d = x - std::numbers::sqrt2 * re;
  return inv_pi_quarter * std::exp(cplx(-0.5 * d * d, std::numbers::sqrt2 * im * x - re * im));
}

/// <psi|psi> / |N|^2 for the four product terms, including all cross overlaps.
inline double unnormalized_norm2(const SuperpositionState& s) {
  cplx total = 0.0;
  for (const auto& ci : s.components) {
    for (const auto& cj : s.components) {
      total += std::conj(ci.amplitude()) * cj.amplitude() *
               coherent_overlap(cj.particle1, ci.particle1) *
               coherent_overlap(cj.particle2, ci.particle2);
    }
  }
  return total.real();
}

inline void renormalize(SuperpositionState& s) {
  const double n2 = unnormalized_norm2(s);
  if (!(n2 > 0)) throw NumericalError("superposition has zero norm", n2);
  s.normalization = 1.0 / std::sqrt(n2);
}

inline double total_norm2(const SuperpositionState& s) {
  return std::norm(s.normalization) * unnormalized_norm2(s);
}

/// Particle-1 and particle-2 "a"/"b" labels of the standard initial state.
struct InitialLabels {
  CoherentLabel p1a, p1b, p2a, p2b;
};

inline InitialLabels initial_labels(double alpha) {
  using std::numbers::pi;
  InitialLabels l;
  l.p1a = {cplx(alpha, 0.0), 0.0};
  l.p1b = {std::polar(alpha, -pi / 4), 0.0};
  l.p2a = {0.0, std::polar(alpha, pi / 2)};
  l.p2b = {0.0, std::polar(alpha, pi / 4)};
  return l;
}

inline SuperpositionState build_initial_state(double alpha) {
  if (!(alpha > 0)) throw DomainError(fmt::format("build_initial_state: alpha must be > 0, got {}", alpha));
  const auto l = initial_labels(alpha);
  const std::array<CoherentLabel, 2> p1{l.p1a, l.p1b};
  const std::array<CoherentLabel, 2> p2{l.p2a, l.p2b};
  SuperpositionState s;
  for (Branch b : kBranches) {
    auto& c = s[b];
    c.branch = b;
    c.particle1 = p1[particle1_index(b)];
    c.particle2 = p2[particle2_index(b)];
  }
  renormalize(s);
  return s;
}

}  // namespace harmonium
