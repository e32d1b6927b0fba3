#include "planetspec/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <queue>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace planetspec {

namespace {
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}
}  // namespace

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PLANETSPEC_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double* error_out, double rel_tol) {
  if (a == b) {
    if (error_out) *error_out = 0.0;
    return 0.0;
  }
  // Global adaptive bisection on single GK31 panels: always split the panel
  // with the largest error estimate.
  struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto panel = [&](double lo, double hi) {
    double e = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &e);
    // Boost 1.74 reports the error of the panel mapped to [-1, 1].
    return Panel{lo, hi, v, e * 0.5 * (hi - lo)};
  };
  // Integrands here carry their structure at the lower limit (turning points,
  // the centre of the ball), so start from panels graded towards a.
  std::priority_queue<Panel> heap;
  double value = 0.0, err = 0.0;
  double hi = b;
  for (int j = 0; j < 12; ++j) {
    const double lo = j == 11 ? a : a + (hi - a) / 8.0;
    const Panel pn = panel(lo, hi);
    heap.push(pn);
    value += pn.value;
    err += pn.err;
    hi = lo;
  }
  const double min_width = 1e-15 * std::abs(b - a);
  // Panels whose estimate stops shrinking under bisection are limited by
  // rounding in the integrand (cancellation near a turning point). They are
  // set aside so that the live panels alone decide convergence.
  double settled_value = 0.0, settled_err = 0.0;
  auto target = [&] {
    return std::max({0.25 * abs_tol, 0.25 * rel_tol * std::abs(value + settled_value),
                     5e-14 * std::abs(value + settled_value)});
  };
  for (int it = 0; it < 4000 && !heap.empty(); ++it) {
    if (!std::isfinite(value)) break;
    if (err <= target()) break;
    Panel worst = heap.top();
    if (worst.b - worst.a <= min_width) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel l = panel(worst.a, mid), r = panel(mid, worst.b);
    value += l.value + r.value - worst.value;
    err += l.err + r.err - worst.err;
    if (l.err + r.err > 0.9 * worst.err && worst.err < 1e-12 * std::abs(value + settled_value)) {
      settled_value += l.value + r.value;
      settled_err += l.err + r.err;
      value -= l.value + r.value;
      err -= l.err + r.err;
      continue;
    }
    heap.push(l);
    heap.push(r);
  }
  // Re-sum to shed the drift of the running totals.
  value = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().err;
    heap.pop();
  }
  value += settled_value;
  if (error_out) *error_out = err + settled_err;
  // Requests below the rounding floor are met at that floor.
  const double limit = std::max({abs_tol, rel_tol * std::abs(value), 2e-13 * std::abs(value)});
  if (!std::isfinite(value) || err > limit || settled_err > 1e3 * limit) {
    throw ConvergenceError("quadrature tolerance not achieved (error estimate " +
                           format_double(err + settled_err) + ")");
  }
  return value;
}

double bracket_root(const std::function<double(double)>& f, double lo, double hi,
                    double flo, double fhi, int bits) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw ConvergenceError("root not bracketed");
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(bits), iters);
  if (iters >= 200) throw ConvergenceError("bracketed root did not converge");
  return 0.5 * (r.first + r.second);
}

}  // namespace planetspec
