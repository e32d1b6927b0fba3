#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace planetspec {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Bad input or violated precondition. The CLI maps this to exit status 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A geometric or spectral assumption does not hold for the given data.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A root finder or quadrature did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Worker count: hardware concurrency capped by PLANETSPEC_THREADS.
std::size_t worker_count();

// Runs body(i) for i in [0, n). Each index is handled exactly once, so
// results written to per-index slots are independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Adaptive Gauss-Kronrod on [a, b]. Throws ConvergenceError when the error
// estimate exceeds abs_tol, rel_tol |I| and the rounding floor 2e-13 |I|.
// Panels whose estimate stalls at the integrand's rounding noise stop being
// refined; their estimate is still reported in error_out.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double* error_out = nullptr, double rel_tol = 0.0);

// Root of f on [lo, hi] where f(lo) and f(hi) have opposite signs.
double bracket_root(const std::function<double(double)>& f, double lo, double hi,
                    double flo, double fhi, int bits = 52);

}  // namespace planetspec
