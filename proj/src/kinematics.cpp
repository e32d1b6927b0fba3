#include "planetspec/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "planetspec/common.hpp"

namespace planetspec {

namespace {

// beta^2 on layer k, written as (rho - p)(rho + p) / r^2 to keep precision
// near the turning point.
double beta2(const LayeredProfile& P, std::size_t k, double r, double p) {
  if (p == 0.0) {
    const double c = P.layer_c(k, r);
    return 1.0 / (c * c);
  }
  const double rho = P.layer_rho(k, r);
  return (rho - p) * (rho + p) / (r * r);
}

void check_leg(const LayeredProfile& P, std::size_t k, double& r_lo, double& r_hi, double p) {
  if (k >= P.num_layers()) throw InvalidArgument("layer index out of range");
  if (p < 0.0) throw InvalidArgument("ray parameter must be nonnegative");
  const double top = P.layer_top(k), bot = P.layer_bottom(k);
  const double slack = 1e-14;
  if (r_lo < bot - slack || r_hi > top + slack || r_lo > r_hi)
    throw InvalidArgument("leg limits outside the layer");
  r_lo = std::max(r_lo, bot);
  r_hi = std::min(r_hi, top);
}

bool is_turning_at(const LayeredProfile& P, std::size_t k, double r, double p) {
  if (p == 0.0) return r == 0.0;
  return std::abs(P.layer_rho(k, r) - p) <= 1e-12 * std::max(1.0, p);
}

// Taylor model of F = rho^2 - p^2 at the lower limit r_lo:
// F = F0 + f1 d + f2 d^2 / 2 with d = r - r_lo, and F0 = 0 at a turning point.
// Next to r_lo it beats the rounding in rho(r) - p.
struct LowerModel {
  double F0 = 0.0, f1 = 0.0, f2 = 0.0;
  double d_max = 0.0;
  double F(double d) const { return F0 + d * (f1 + 0.5 * f2 * d); }
};

LowerModel lower_model(const LayeredProfile& P, std::size_t k, double r_lo, double p, bool turning) {
  if (p == 0.0 || r_lo == 0.0) return {};
  const double rho = P.layer_rho(k, r_lo), d1 = P.layer_drho(k, r_lo);
  return {turning ? 0.0 : (rho - p) * (rho + p), 2.0 * rho * d1,
          2.0 * (d1 * d1 + rho * P.layer_d2rho(k, r_lo)), 1e-6 * r_lo};
}

// beta at r = r_lo + u^2.
struct SubstitutedBeta {
  const LayeredProfile& P;
  std::size_t k;
  double r_lo, p;
  LowerModel tm;
  double operator()(double u, double& r) const {
    const double d = u * u;
    r = r_lo + d;
    if (d < tm.d_max) return std::sqrt(std::max(tm.F(d), 0.0)) / r;
    return std::sqrt(std::max(beta2(P, k, r, p), 0.0));
  }
};


}  // namespace

Beta beta(const LayeredProfile& profile, double r, double p, Side side) {
  const std::size_t k = profile.layer_at(r, side);
  const double v = beta2(profile, k, r, p);
  return {std::sqrt(std::abs(v)), v < 0.0};
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Transmitting: return "Transmitting";
    case Regime::TotalInternalReflection: return "TotalInternalReflection";
    case Regime::GrazingTransmission: return "GrazingTransmission";
    case Regime::TurningAbove: return "TurningAbove";
    case Regime::TurningAtInterface: return "TurningAtInterface";
    case Regime::InnerBoundaryReflection: return "InnerBoundaryReflection";
    case Regime::Center: return "Center";
  }
  return "?";
}

std::optional<double> layer_turning_radius(const LayeredProfile& P, std::size_t k, double p) {
  const double top = P.layer_top(k), bot = P.layer_bottom(k);
  if (!(p < P.layer_rho(k, top))) throw InvalidArgument("ray parameter not below rho at layer top");
  if (auto r = P.model(k).rho_inverse(p, bot, top)) return *r;
  const double rho_bot = bot == 0.0 ? 0.0 : P.layer_rho(k, bot);
  auto f = [&](double r) { return (r == 0.0 ? 0.0 : P.layer_rho(k, r)) - p; };
  // Highest root below the top: scan downward for the first sign change.
  const int n = 64;
  double r_prev = top, f_prev = f(top);
  for (int j = 1; j <= n; ++j) {
    const double r = j == n ? bot : top - (top - bot) * j / n;
    const double fr = j == n ? rho_bot - p : f(r);
    if (fr <= 0.0) {
      if (fr == 0.0) return r;
      return bracket_root(f, r, r_prev, fr, f_prev);
    }
    r_prev = r;
    f_prev = fr;
  }
  return std::nullopt;
}

double ray_bottom(const LayeredProfile& P, std::size_t k, double p) {
  auto r = layer_turning_radius(P, k, p);
  return r ? *r : P.layer_bottom(k);
}

TurningPoint turning_radius(const LayeredProfile& P, double p, double graze_tol) {
  return classify_regimes(P, p, graze_tol).turning;
}

RegimeClassification classify_regimes(const LayeredProfile& P, double p, double graze_tol) {
  if (!(p >= 0.0) || !(p < P.layer_rho(0, 1.0)))
    throw InvalidArgument("ray parameter outside [0, rho(1))");
  RegimeClassification out;
  out.verdicts.assign(P.num_interfaces(), Regime::TurningAbove);
  for (std::size_t k = 0; k < P.num_layers(); ++k) {
    const double bot = P.layer_bottom(k);
    const bool last = k + 1 == P.num_layers();
    if (auto rt = layer_turning_radius(P, k, p); rt && !(last && bot == 0.0 && *rt == 0.0)) {
      TurningPoint t{*rt, k, Regime::TurningAbove, false, std::nullopt};
      if (!last && std::abs(p - P.layer_rho(k, bot)) <= graze_tol) {
        t.regime = Regime::TurningAtInterface;
        t.grazing = true;
        t.interface = k;
        out.verdicts[k] = Regime::TurningAtInterface;
      }
      out.turning = t;
      return out;
    }
    if (last) {
      if (bot == 0.0) {
        out.turning = {0.0, k, Regime::Center, false, std::nullopt};
      } else {
        const bool graze = std::abs(p - P.layer_rho(k, bot)) <= graze_tol;
        out.turning = {bot, k, Regime::InnerBoundaryReflection, graze, std::nullopt};
      }
      return out;
    }
    const double rho_below = P.layer_rho(k + 1, bot);
    if (std::abs(p - rho_below) <= graze_tol) {
      out.verdicts[k] = Regime::GrazingTransmission;
      out.turning = {bot, k, Regime::GrazingTransmission, true, k};
      return out;
    }
    if (p > rho_below) {
      out.verdicts[k] = Regime::TotalInternalReflection;
      out.turning = {bot, k, Regime::TotalInternalReflection, false, k};
      return out;
    }
    out.verdicts[k] = Regime::Transmitting;
  }
  return out;  // not reached: the last layer always ends the walk
}

LegIntegrals leg_integrals(const LayeredProfile& P, std::size_t k, double r_lo, double r_hi, double p,
                           double abs_tol) {
  check_leg(P, k, r_lo, r_hi, p);
  LegIntegrals out{0.0, 0.0, k, r_lo, r_hi, p};
  if (r_hi <= r_lo) return out;
  for (int j = 1; j <= 8; ++j) {
    const double r = r_lo + (r_hi - r_lo) * j / 8.0;
    if (beta2(P, k, r, p) < 0.0) throw DomainError("leg crosses an evanescent interval");
  }
  const bool turning = p > 0.0 && r_lo > 0.0 && is_turning_at(P, k, r_lo, p);
  if (!turning && r_lo > 0.0 && beta2(P, k, r_lo, p) < 0.0)
    throw DomainError("leg starts in an evanescent region");
  SubstitutedBeta sb{P, k, r_lo, p, lower_model(P, k, r_lo, p, turning)};
  const double U = std::sqrt(r_hi - r_lo);
  if (p > 0.0) {
    out.alpha = integrate(
        [&](double u) {
          double r;
          const double b = sb(u, r);
          return 2.0 * u * p / (r * r * b);
        },
        0.0, U, abs_tol);
  }
  out.time = integrate(
      [&](double u) {
        double r;
        const double b = sb(u, r);
        const double c = P.layer_c(k, r);
        return 2.0 * u / (c * c * b);
      },
      0.0, U, abs_tol);
  return out;
}

double leg_alpha_dp(const LayeredProfile& P, std::size_t k, double r_lo, double r_hi, double p,
                    double abs_tol) {
  check_leg(P, k, r_lo, r_hi, p);
  if (r_hi <= r_lo) return 0.0;
  const double U = std::sqrt(r_hi - r_lo);
  if (p > 0.0 && is_turning_at(P, k, r_lo, p)) {
    // Integrate by parts in s = rho(r) with h = 1 / (r rho'):
    //   X(p) = p [h_hi acosh(rho_hi / p) - int h'(r) acosh(rho / p) dr]
    // and differentiate; the remaining integrand has only a 1/sqrt endpoint
    // singularity, removed by the substitution.
    const double X = leg_integrals(P, k, r_lo, r_hi, p, abs_tol).alpha;
    const double rho_hi = P.layer_rho(k, r_hi);
    const double h_hi = 1.0 / (r_hi * P.layer_drho(k, r_hi));
    const LowerModel tm = lower_model(P, k, r_lo, p, true);
    const double I = integrate(
        [&](double u) {
          const double r = r_lo + u * u;
          const double rho = P.layer_rho(k, r);
          const double d1 = P.layer_drho(k, r), d2 = P.layer_d2rho(k, r);
          const double dh = -(d1 + r * d2) / ((r * d1) * (r * d1));
          const double v = u * u < tm.d_max ? tm.F(u * u) : (rho - p) * (rho + p);
          return 2.0 * u * dh * rho / std::sqrt(v);
        },
        0.0, U, abs_tol);
    return X / p - h_hi * rho_hi / std::sqrt((rho_hi - p) * (rho_hi + p)) + I;
  }
  if (r_lo > 0.0 && beta2(P, k, r_lo, p) <= 0.0)
    throw DomainError("fixed-endpoint derivative needs a propagating lower limit");
  SubstitutedBeta sb{P, k, r_lo, p, lower_model(P, k, r_lo, p, false)};
  // d/dp [p / (r^2 beta)] = c^-2 / (r^2 beta^3).
  return integrate(
      [&](double u) {
        double r;
        const double b = sb(u, r);
        const double c = P.layer_c(k, r);
        return 2.0 * u / (c * c * r * r * b * b * b);
      },
      // Grows without bound near grazing, so the tolerance is also relative.
      0.0, U, abs_tol, nullptr, 1e-11);
}

double radial_action(const LayeredProfile& P, std::size_t k, double r_lo, double r_hi, double p,
                     double abs_tol) {
  check_leg(P, k, r_lo, r_hi, p);
  if (r_hi <= r_lo) return 0.0;
  if (auto v = P.model(k).radial_action(r_lo, r_hi, p)) return *v;
  return integrate([&](double r) { return std::sqrt(std::abs(beta2(P, k, r, p))); }, r_lo, r_hi,
                   abs_tol);
}

BasicGeometry basic_ray_geometry(const LayeredProfile& P, std::size_t k, double p, int N,
                                 double abs_tol) {
  if (N < 1) throw InvalidArgument("leg count must be at least 1");
  const double top = P.layer_top(k);
  BasicGeometry g;
  auto rt = layer_turning_radius(P, k, p);
  g.r_star = rt ? *rt : P.layer_bottom(k);
  g.reflecting = !rt;
  const auto leg = leg_integrals(P, k, g.r_star, top, p, abs_tol);
  g.alpha = 2.0 * N * leg.alpha;
  g.T = 2.0 * N * leg.time;
  g.leg_time = leg.time;
  return g;
}

RayPath trace_path(const LayeredProfile& P, double r0, double theta0, double p,
                   const std::vector<Decision>& itinerary, std::size_t max_legs,
                   std::size_t samples_per_leg) {
  if (samples_per_leg < 2) throw InvalidArgument("need at least 2 samples per leg");
  RayPath path;
  std::size_t k = P.layer_at(r0, Side::Below);
  if (beta2(P, k, r0, p) < 0.0) throw InvalidArgument("start point is evanescent for this p");
  double r = r0, theta = theta0;
  bool down = true;

  // Integrals from the ray bottom rb of a layer up to a radius.
  auto partial = [&](std::size_t layer, double rb, double rr) {
    return leg_integrals(P, layer, rb, rr, p);
  };

  auto add_leg = [&](std::size_t layer, double r_start, double r_end, bool through_bottom,
                     double rb) {
    PathLeg leg;
    leg.layer = layer;
    const auto s0 = partial(layer, rb, r_start);
    const auto s1 = partial(layer, rb, r_end);
    const double n = static_cast<double>(samples_per_leg - 1);
    if (through_bottom) {
      const bool center = rb == 0.0 && p == 0.0;
      for (std::size_t j = 0; j < samples_per_leg; ++j) {
        const double s = r_start + (rb - r_start) * j / n;
        leg.samples.push_back({s, theta + (s0.alpha - partial(layer, rb, s).alpha)});
      }
      const double mid = theta + s0.alpha + (center ? kPi : 0.0);
      for (std::size_t j = 1; j < samples_per_leg; ++j) {
        const double s = rb + (r_end - rb) * j / n;
        leg.samples.push_back({s, mid + partial(layer, rb, s).alpha});
      }
      leg.alpha = s0.alpha + s1.alpha;
      leg.time = s0.time + s1.time;
      theta = mid + s1.alpha;
    } else {
      for (std::size_t j = 0; j < samples_per_leg; ++j) {
        const double s = r_start + (r_end - r_start) * j / n;
        leg.samples.push_back({s, theta + std::abs(s0.alpha - partial(layer, rb, s).alpha)});
      }
      leg.alpha = std::abs(s1.alpha - s0.alpha);
      leg.time = std::abs(s1.time - s0.time);
      theta += leg.alpha;
    }
    path.alpha_total += leg.alpha;
    path.time_total += leg.time;
    path.legs.push_back(std::move(leg));
  };

  std::size_t used = 0;
  while (path.legs.size() < max_legs) {
    const double top = P.layer_top(k), bot = P.layer_bottom(k);
    auto rt = layer_turning_radius(P, k, p);
    const double rb = rt ? *rt : bot;
    if (down && rt) {
      add_leg(k, r, top, true, rb);
      r = top;
      down = false;
    } else if (down) {
      add_leg(k, r, bot, false, rb);
      r = bot;
    } else {
      add_leg(k, r, top, false, rb);
      r = top;
    }
    if (path.legs.size() >= max_legs) break;
    if (down) {
      if (k + 1 == P.num_layers()) {
        down = false;  // inner boundary
        continue;
      }
      if (used == itinerary.size()) break;
      if (itinerary[used++] == Decision::Transmit) {
        if (!(p < P.layer_rho(k + 1, bot)))
          throw InvalidArgument("itinerary transmits under total internal reflection");
        ++k;
      } else {
        down = false;
      }
    } else {
      if (k == 0) {
        down = true;  // surface
        continue;
      }
      if (used == itinerary.size()) break;
      if (itinerary[used++] == Decision::Transmit) {
        --k;
      } else {
        down = true;
      }
    }
  }
  if (used < itinerary.size())
    throw ConvergenceError("leg budget exhausted before the itinerary was consumed");
  path.decisions_used = used;
  path.theta_end = theta;
  return path;
}

}  // namespace planetspec
