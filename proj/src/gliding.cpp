#include <cmath>

#include "planetspec/common.hpp"
#include "planetspec/spectrum.hpp"

namespace planetspec {

namespace {

struct HeadWave {
  const LayeredProfile& P;
  std::size_t above, below;
  double r1, tol;

  // One up-leg: from the interface to the top of the upper layer and back.
  LegIntegrals up(double p) const {
    return leg_integrals(P, above, r1, P.layer_top(above), p, tol);
  }
  // Half of one chord below the interface.
  LegIntegrals chord_half(double p) const {
    return leg_integrals(P, below, ray_bottom(P, below, p), r1, p, tol);
  }
};

}  // namespace

GlidingSequence gliding_approximation(const LayeredProfile& P, std::size_t i, const GlidingSpec& spec,
                                      std::size_t n_max, double tol) {
  if (i >= P.num_interfaces()) throw InvalidArgument("interface index out of range");
  if (spec.k < 1 || spec.w < 1) throw InvalidArgument("gliding spec needs k >= 1 and w >= 1");
  GlidingSequence out;
  out.interface = i;
  out.spec = spec;
  const double r1 = P.interfaces()[i];
  HeadWave hw{P, i, i + 1, r1, tol};
  const double rho_above = P.layer_rho(i, r1);
  out.p0 = P.layer_rho(i + 1, r1);
  if (!(out.p0 < rho_above))
    throw DomainError("no head wave: rho does not jump up across the interface");
  if (auto rt = layer_turning_radius(P, i, out.p0); rt && *rt > r1)
    throw DomainError("critical ray turns before reaching the interface");
  out.theta0 = std::acos(out.p0 / rho_above);
  const auto up0 = hw.up(out.p0);
  out.Theta_H = 2.0 * kPi * spec.w - spec.k * 2.0 * up0.alpha;
  if (!(out.Theta_H > 0.0)) throw DomainError("winding too small: no room for a gliding leg");
  out.T_limit = spec.k * 2.0 * up0.time + out.Theta_H * r1 / P.layer_c(i + 1, r1);
  if (n_max == 0) return out;

  auto closure = [&](double p, int m) {
    return spec.k * 2.0 * hw.up(p).alpha + m * 2.0 * hw.chord_half(p).alpha - 2.0 * kPi * spec.w;
  };
  const double p_hi = out.p0 * (1.0 - 1e-15);
  for (int m = 1; out.rays.size() < n_max; ++m) {
    if (m > static_cast<int>(50 * n_max + 1000)) {
      out.warnings.push_back("search stopped before n_max approximants were found");
      break;
    }
    // Constant speed below gives p = p0 cos(kappa) with kappa ~ Theta_H / 2m.
    const double kappa_guess = out.Theta_H / (2.0 * m);
    double delta = std::min(0.5, 0.5 * kappa_guess * kappa_guess) * out.p0;
    const double f_hi = closure(p_hi, m);
    double f_lo = 0.0, p_lo = 0.0;
    bool bracketed = false;
    for (int it = 0; it < 80 && delta < out.p0; ++it) {
      p_lo = out.p0 - delta;
      try {
        f_lo = closure(p_lo, m);
      } catch (const DomainError&) {
        break;  // left the layer's turning branch
      }
      if ((f_lo > 0.0) != (f_hi > 0.0)) {
        bracketed = true;
        break;
      }
      delta *= 2.0;
    }
    if (!bracketed) {
      if (!out.rays.empty())
        out.warnings.push_back("no admissible approximant for m = " + std::to_string(m));
      continue;
    }
    // Shrink the bracket from above so the root is the one nearest p0.
    double a = p_lo, fa = f_lo, b = p_hi, fb = f_hi;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid - a < 1e-3 * (b - a) || b - a < 1e-14 * out.p0) break;
      const double fm = closure(mid, m);
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
        fb = fm;
        break;
      }
    }
    const double p = bracket_root([&](double q) { return closure(q, m); }, a, b, fa, fb);
    GlidingApproximant g;
    g.m = m;
    g.p = p;
    g.theta = std::acos(p / rho_above);
    const auto up = hw.up(p);
    const auto half = hw.chord_half(p);
    g.alpha_up = 2.0 * up.alpha;
    g.phi = 2.0 * half.alpha;
    g.kappa = half.alpha;
    g.T = spec.k * 2.0 * up.time + m * 2.0 * half.time;
    g.dalpha_dp = spec.k * 2.0 * leg_alpha_dp(P, i, r1, P.layer_top(i), p, tol) +
                  m * 2.0 * one_way_alpha_dp(P, i + 1, p, tol);
    const double rho_b = P.layer_rho(i + 1, r1);
    g.beta_below = std::sqrt(std::max((rho_b - p) * (rho_b + p), 0.0)) / r1;
    if (!out.rays.empty() && !(g.T > out.rays.back().T))
      out.warnings.push_back("periods not increasing at m = " + std::to_string(m));
    out.rays.push_back(g);
  }

  // Slope of log kappa against log(theta - theta0) over the last ten terms.
  const std::size_t n = out.rays.size(), first = n > 10 ? n - 10 : 0;
  if (n - first >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = first; j < n; ++j) {
      const double x = std::log(out.rays[j].theta - out.theta0), y = std::log(out.rays[j].kappa);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double cnt = static_cast<double>(n - first);
    out.kappa_exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  return out;
}

}  // namespace planetspec
