#pragma once

#include <stdexcept>
#include <string>

namespace harmonium {

/// Invalid input outside an operation's domain (nonpositive mass, non-normalizable width, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The interaction is evaluated at (or integrated through) r = 0.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine did not reach its target accuracy or produced an invalid result.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_(achieved) {}

  /// Achieved error estimate (or the offending value) when available.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Bad scenario configuration (file or flags).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace harmonium
