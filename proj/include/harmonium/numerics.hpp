#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "harmonium/errors.hpp"

namespace harmonium::numerics {

/// Absolute tolerance for the one-period averages over the oscillator.
inline constexpr double kPeriodQuadratureTol = 1e-10;

/// Adaptive 31-point Gauss-Kronrod on [a, b].  Throws NumericalError if the
/// error estimate stays above abs_tol.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = kPeriodQuadratureTol,
                 unsigned max_depth = 18) {
  double err = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, max_depth, 1e-14, &err, &l1);
  if (!std::isfinite(value) || err > abs_tol) {
    throw NumericalError(
        fmt::format("quadrature on [{}, {}] did not converge: error estimate {:.3e} > {:.1e}", a, b,
                    err, abs_tol),
        err);
  }
  return value;
}

/// (1 / 2pi) * integral over one oscillator period.
template <class F>
double period_average(F&& f, double abs_tol = kPeriodQuadratureTol) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return integrate(std::forward<F>(f), 0.0, two_pi, abs_tol * two_pi) / two_pi;
}

// Runs fn(0..count-1) on a small pool; each index is handled exactly once.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, count > 0 ? count : 1);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace harmonium::numerics
