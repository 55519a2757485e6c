#pragma once

// First-order canonical perturbation theory of the relative-coordinate
// oscillator: Kameltonian in action-angle variables, one-period averaged
// drifts, the quadrature constants and the action phases delta S of the four
// branches.
//
// Action-angle convention:  r_x = sqrt(2 eta_x) sin(t + phi_x),
//                           p_x = sqrt(2 eta_x) cos(t + phi_x).
// First-order quantities are linear in g0 (the bookkeeping parameter is set
// to one throughout).

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <fmt/format.h>

#include "harmonium/core_model.hpp"
#include "harmonium/errors.hpp"
#include "harmonium/numerics.hpp"
#include "harmonium/potential.hpp"

namespace harmonium {

struct ActionAngleState {
  double eta_x = 0.0;
  double eta_y = 0.0;
  double phi_x = 0.0;
  double phi_y = 0.0;

  /// From a relative-coordinate coherent label at t = 0.
  static ActionAngleState from_label(const CoherentLabel& rel) {
    ActionAngleState s;
    s.eta_x = std::norm(rel.x);
    s.eta_y = std::norm(rel.y);
    s.phi_x = std::atan2(rel.x.real(), rel.x.imag());
    s.phi_y = std::atan2(rel.y.real(), rel.y.imag());
    return s;
  }

  double separation(double t) const {
    const double sx = std::sin(t + phi_x);
    const double sy = std::sin(t + phi_y);
    return std::sqrt(2.0 * eta_x * sx * sx + 2.0 * eta_y * sy * sy);
  }

  /// Closest approach of the zeroth-order orbit over one period.
  double min_separation() const {
    const cplx z = eta_x * std::polar(1.0, 2.0 * phi_x) + eta_y * std::polar(1.0, 2.0 * phi_y);
    return std::sqrt(std::max(0.0, eta_x + eta_y - std::abs(z)));
  }

  /// Orbit size scale (alpha for the constant-separation orbit).
  double scale() const { return std::sqrt(eta_x + eta_y); }
};

struct AveragedDrifts {
  double eta_dot_x = 0.0;
  double phi_dot_x = 0.0;
  double eta_dot_y = 0.0;
  double phi_dot_y = 0.0;
};

/// C_phi, C_lambda, C_gab, C_gba in units of g0/alpha, plus the aa rate
/// (3/2 for the Newtonian law) and the entropy constant
/// c = (2 C_phi + C_gab + C_gba - 2 C_aa) / 4.
struct PerturbationConstants {
  double C_phi = 0.0;
  double C_lambda = 0.0;
  double C_gab = 0.0;
  double C_gba = 0.0;
  double C_aa = 1.5;
  double c = 0.0;
};

struct PerturbationOptions {
  /// Use the alpha-dependent C_gab/C_gba integrals instead of the one-period averages.
  bool exact_gab = false;
};

/// The delta S rates (radians per unit time) of the four branches.
struct PhaseRates {
  double phi = 0.0;     // alpha^2 * averaged phi drift of the ab orbit
  double lambda = 0.0;  // amplitude of the oscillating ab/ba correction
  double gab = 0.0;     // -<K> along the ab orbit
  double gba = 0.0;     // -<K> along the ba orbit
  double aa = 0.0;      // (alpha K'/2 - K) at r = alpha
  double alpha = 1.0;
};

inline constexpr double kCollisionFraction = 1e-6;

// ---------------------------------------------------------------------------

inline double kameltonian(const Potential& pot, const ActionAngleState& s, double t) {
  const double r = s.separation(t);
  if (!(r > 0)) {
    throw SingularityError(fmt::format("kameltonian: relative separation vanishes at t = {}", t));
  }
  return pot.value(r);
}

inline void check_collision(const ActionAngleState& s) {
  const double scale = s.scale();
  if (!(scale > 0) || s.min_separation() < kCollisionFraction * scale) {
    throw SingularityError(fmt::format(
        "zeroth-order orbit passes within {:.3e} of r = 0 (scale {:.3e}); refusing to average "
        "through the collision",
        s.min_separation(), scale));
  }
}

/// One-period averages of -dK/dphi and dK/deta along the unperturbed orbit.
inline AveragedDrifts averaged_drifts(const Potential& pot, const ActionAngleState& s0) {
  check_collision(s0);
  if (pot.strength() == 0.0) return {};
  auto dk_over_r = [&](double t) {
    const double r = s0.separation(t);
    return pot.derivative(r) / r;
  };
  AveragedDrifts d;
  d.eta_dot_x = numerics::period_average([&](double t) {
    return -dk_over_r(t) * 2.0 * s0.eta_x * std::sin(t + s0.phi_x) * std::cos(t + s0.phi_x);
  });
  d.eta_dot_y = numerics::period_average([&](double t) {
    return -dk_over_r(t) * 2.0 * s0.eta_y * std::sin(t + s0.phi_y) * std::cos(t + s0.phi_y);
  });
  d.phi_dot_x = numerics::period_average([&](double t) {
    const double s = std::sin(t + s0.phi_x);
    return dk_over_r(t) * s * s;
  });
  d.phi_dot_y = numerics::period_average([&](double t) {
    const double s = std::sin(t + s0.phi_y);
    return dk_over_r(t) * s * s;
  });
  return d;
}

/// Relative-coordinate label of a branch of the standard initial state.
inline CoherentLabel branch_relative_label(Branch b, double alpha) {
  const auto l = initial_labels(alpha);
  const CoherentLabel p1 = particle1_index(b) == 0 ? l.p1a : l.p1b;
  const CoherentLabel p2 = particle2_index(b) == 0 ? l.p2a : l.p2b;
  return scom_transform(p1, p2).second;
}

namespace detail {

// Orbit shapes r / alpha of the ab and ba branches, in the time origin used by
// the printed constants.
inline double ab_shape(double t) {
  const double s = std::sin(t + std::numbers::pi / 4);
  const double c = std::cos(t);
  return std::sqrt(s * s + c * c);
}
inline double ba_shape(double t) {
  const double s = std::sin(t);
  const double c = std::cos(t + std::numbers::pi / 4);
  return std::sqrt(s * s + c * c);
}

inline PhaseRates compute_phase_rates(const Potential& pot, double alpha, PerturbationOptions opts) {
  using std::numbers::pi;
  if (!(alpha > 0)) throw DomainError(fmt::format("alpha must be > 0, got {}", alpha));
  PhaseRates r;
  r.alpha = alpha;
  const double a2 = alpha * alpha;
  // K'(r)/r along r = alpha * ba_shape(t)
  auto dk_over_r = [&](double t) {
    const double rr = alpha * ba_shape(t);
    return pot.derivative(rr) / rr;
  };
  r.phi = a2 * numerics::period_average([&](double t) {
    const double c = std::cos(t + pi / 4);
    return dk_over_r(t) * c * c;
  });
  r.lambda = a2 * numerics::period_average(
                      [&](double t) { return dk_over_r(t) * std::sin(t) * std::cos(t); });
  if (opts.exact_gab) {
    const double stretch = 1.0 + r.phi / a2;
    const double upper = pi / stretch;
    r.gab = -stretch / pi *
            numerics::integrate([&](double t) { return pot.value(alpha * ab_shape(t)); }, 0.0, upper);
    r.gba = -stretch / pi *
            numerics::integrate([&](double t) { return pot.value(alpha * ba_shape(t)); }, 0.0, upper);
  } else {
    r.gab = -numerics::period_average([&](double t) { return pot.value(alpha * ab_shape(t)); });
    r.gba = -numerics::period_average([&](double t) { return pot.value(alpha * ba_shape(t)); });
  }
  r.aa = 0.5 * alpha * pot.derivative(alpha) - pot.value(alpha);
  return r;
}

class ConstantsCache {
 public:
  using Key = std::tuple<int, double, double, int, double, bool>;

  PhaseRates get(const Potential& pot, double alpha, PerturbationOptions opts) {
    const Key key{static_cast<int>(pot.kind()), pot.strength(), pot.mu(), pot.dimension(), alpha,
                  opts.exact_gab};
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    PhaseRates r = compute_phase_rates(pot, alpha, opts);
    std::lock_guard lock(mutex_);
    cache_.emplace(key, r);
    return r;
  }

  static ConstantsCache& instance() {
    static ConstantsCache c;
    return c;
  }

 private:
  std::mutex mutex_;
  std::map<Key, PhaseRates> cache_;
};

}  // namespace detail

/// delta S rates for the given potential and orbit size; memoized.
inline PhaseRates phase_rates(const Potential& pot, double alpha, PerturbationOptions opts = {}) {
  return detail::ConstantsCache::instance().get(pot, alpha, opts);
}

/// Rates expressed in units of g0 / alpha.  For the Newtonian law with the
/// default options these are pure numbers independent of g0 and alpha.
inline PerturbationConstants perturbation_constants(const Potential& pot, double alpha = 1.0,
                                                    PerturbationOptions opts = {}) {
  // The exact C_gab form depends on g0 / alpha^3, so only then is the real strength needed.
  const bool scale_free = !opts.exact_gab || pot.strength() == 0.0;
  const Potential unit = scale_free ? pot.with_strength(1.0) : pot;
  const double a = (pot.is_newtonian() && !opts.exact_gab) ? 1.0 : alpha;
  const PhaseRates r = phase_rates(unit, a, opts);
  const double unit_rate = unit.strength() / a;
  PerturbationConstants c;
  c.C_phi = r.phi / unit_rate;
  c.C_lambda = r.lambda / unit_rate;
  c.C_gab = r.gab / unit_rate;
  c.C_gba = r.gba / unit_rate;
  c.C_aa = r.aa / unit_rate;
  c.c = 0.25 * (2.0 * c.C_phi + c.C_gab + c.C_gba - 2.0 * c.C_aa);
  return c;
}

/// Action phase of a branch of the standard initial state at time t.
inline double delta_S(const Potential& pot, Branch branch, const DimensionlessParams& params,
                      double t, PerturbationOptions opts = {}) {
  if (!(t >= 0)) throw DomainError(fmt::format("delta_S: t must be >= 0, got {}", t));
  if (pot.strength() == 0.0 || t == 0.0) return 0.0;
  const PhaseRates r = phase_rates(pot, params.alpha, opts);
  if (branch == Branch::aa || branch == Branch::bb) return r.aa * t;

  const double a2 = params.alpha * params.alpha;
  const double w = 2.0 * (1.0 + r.phi / a2) * t;
  const double oscillating =
      0.25 * a2 * (std::cos(w) - std::sin(w) - std::cos(2.0 * t) + std::sin(2.0 * t));
  const double wobble = 0.5 * r.lambda * (std::cos(w) + std::sin(w));
  if (branch == Branch::ab) return oscillating + t * (r.phi + wobble + r.gab);
  return -oscillating + t * (r.phi - wobble + r.gba);
}

/// Rate of growth of delta S_ab + delta S_ba - delta S_aa - delta S_bb, divided
/// by four, obtained from the orbit-averaged drift of the ab branch and the
/// mean interaction along it.  Reduces to c g0 / alpha for the Newtonian law.
inline double scaling_constant_C(const Potential& pot, const DimensionlessParams& params) {
  if (pot.strength() == 0.0) return 0.0;
  const double alpha = params.alpha;
  const ActionAngleState ab = ActionAngleState::from_label(branch_relative_label(Branch::ab, alpha));
  const AveragedDrifts d = averaged_drifts(pot, ab);
  const double k_mean = numerics::period_average([&](double t) { return kameltonian(pot, ab, t); });
  const double cross = 2.0 * (2.0 * ab.eta_x * d.phi_dot_x - k_mean);
  const double diag = 2.0 * pot.value(alpha) - alpha * pot.derivative(alpha);
  return 0.25 * (cross + diag);
}

}  // namespace harmonium
