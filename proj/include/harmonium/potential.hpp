#pragma once

#include <cmath>
#include <compare>
#include <string>

#include <fmt/format.h>

#include "harmonium/errors.hpp"

namespace harmonium {

/// Interaction term K(r) added to the relative-coordinate oscillator
/// H_r = (p^2 + r^2)/2 + K(r).
///
///   newtonian      K = -g0 / r
///   yukawa(mu)     K = -g0 exp(-mu r) / r     (reduces to newtonian at mu = 0)
///   coulomb(d > 2) K = -g0 r^(2-d)
///   coulomb(2)     K =  g0 log r
class Potential {
 public:
  enum class Kind { newtonian, yukawa, coulomb };

  static Potential newtonian(double g0) { return Potential(Kind::newtonian, g0, 0.0, 3); }

  static Potential yukawa(double g0, double mu) {
    if (!(mu >= 0)) throw DomainError(fmt::format("yukawa mass must be >= 0, got {}", mu));
    return Potential(Kind::yukawa, g0, mu, 3);
  }

  static Potential coulomb(double g0, int dimension) {
    if (dimension < 2) throw DomainError(fmt::format("coulomb dimension must be >= 2, got {}", dimension));
    return Potential(Kind::coulomb, g0, 0.0, dimension);
  }

  Kind kind() const { return kind_; }
  double strength() const { return g0_; }
  double mu() const { return mu_; }
  int dimension() const { return d_; }

  Potential with_strength(double g0) const {
    Potential p = *this;
    p.g0_ = g0;
    return p;
  }

  /// The -g0/r law, whichever way it was spelled.
  bool is_newtonian() const {
    return kind_ == Kind::newtonian || (kind_ == Kind::coulomb && d_ == 3) ||
           (kind_ == Kind::yukawa && mu_ == 0.0);
  }

  double value(double r) const {
    check(r);
    switch (kind_) {
      case Kind::newtonian: return -g0_ / r;
      case Kind::yukawa: return -g0_ * std::exp(-mu_ * r) / r;
      case Kind::coulomb: return d_ == 2 ? g0_ * std::log(r) : -g0_ * std::pow(r, 2 - d_);
    }
    return 0.0;
  }

  /// dK/dr
  double derivative(double r) const {
    check(r);
    switch (kind_) {
      case Kind::newtonian: return g0_ / (r * r);
      case Kind::yukawa: return g0_ * std::exp(-mu_ * r) * (1.0 + mu_ * r) / (r * r);
      case Kind::coulomb:
        return d_ == 2 ? g0_ / r : (d_ - 2) * g0_ * std::pow(r, 1 - d_);
    }
    return 0.0;
  }

  /// d^2K/dr^2
  double second_derivative(double r) const {
    check(r);
    switch (kind_) {
      case Kind::newtonian: return -2.0 * g0_ / (r * r * r);
      case Kind::yukawa: {
        const double mr = mu_ * r;
        return -g0_ * std::exp(-mr) * (2.0 + 2.0 * mr + mr * mr) / (r * r * r);
      }
      case Kind::coulomb:
        return d_ == 2 ? -g0_ / (r * r) : -(d_ - 2) * (d_ - 1) * g0_ * std::pow(r, -d_);
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::newtonian: return "newton";
      case Kind::yukawa: return fmt::format("yukawa:{}", mu_);
      case Kind::coulomb: return fmt::format("coulomb:{}", d_);
    }
    return "?";
  }

  auto operator<=>(const Potential&) const = default;

 private:
  Potential(Kind k, double g0, double mu, int d) : kind_(k), g0_(g0), mu_(mu), d_(d) {}

  static void check(double r) {
    if (!(r > 0)) throw SingularityError(fmt::format("interaction evaluated at r = {}", r));
  }

  Kind kind_;
  double g0_;
  double mu_;
  int d_;
};

/// Parses "newton", "yukawa:<mu>" or "coulomb:<d>".
inline Potential parse_potential(const std::string& text, double g0) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (head == "newton" || head == "newtonian") {
      if (!arg.empty()) throw ConfigError("newton takes no argument");
      return Potential::newtonian(g0);
    }
    if (head == "yukawa") {
      std::size_t used = 0;
      const double mu = std::stod(arg, &used);
      if (used != arg.size()) throw ConfigError("trailing characters");
      return Potential::yukawa(g0, mu);
    }
    if (head == "coulomb") {
      std::size_t used = 0;
      const int d = std::stoi(arg, &used);
      if (used != arg.size()) throw ConfigError("trailing characters");
      return Potential::coulomb(g0, d);
    }
  } catch (const std::logic_error&) {
    // stod/stoi failures and DomainError fall through to the message below
  } catch (const ConfigError&) {
  }
  throw ConfigError(fmt::format(
      "potential: expected newton | yukawa:<mu >= 0> | coulomb:<d >= 2>, got '{}'", text));
}

}  // namespace harmonium
