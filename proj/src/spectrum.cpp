#include "planetspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "planetspec/common.hpp"

namespace planetspec {

std::string to_string(RayKind k) {
  switch (k) {
    case RayKind::Turning: return "Turning";
    case RayKind::InterfaceReflecting: return "InterfaceReflecting";
    case RayKind::Radial: return "Radial";
  }
  return "?";
}

namespace {

bool is_ball_core(const LayeredProfile& P, std::size_t k) {
  return k + 1 == P.num_layers() && P.layer_bottom(k) == 0.0;
}

double rho_bottom(const LayeredProfile& P, std::size_t k) {
  const double bot = P.layer_bottom(k);
  return bot == 0.0 ? 0.0 : P.layer_rho(k, bot);
}

// Cosine-clustered interior samples of (lo, hi).
std::vector<double> clustered(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  for (std::size_t j = 1; j < n; ++j)
    out.push_back(lo + (hi - lo) * 0.5 * (1.0 - std::cos(kPi * static_cast<double>(j) / n)));
  return out;
}

// Splits (lo, hi) at the sign changes of dX/dp found on the sample grid.
std::vector<double> monotone_breaks(const LayeredProfile& P, std::size_t k, double lo, double hi,
                                    std::size_t n, double tol) {
  std::vector<double> breaks{lo};
  const auto ps = clustered(lo, hi, n);
  double prev_p = 0.0, prev_d = 0.0;
  bool have = false;
  for (double p : ps) {
    if (p <= 0.0) continue;
    const double d = one_way_alpha_dp(P, k, p, tol);
    if (have && ((prev_d < 0.0) != (d < 0.0))) {
      auto f = [&](double q) { return one_way_alpha_dp(P, k, q, tol); };
      breaks.push_back(bracket_root(f, prev_p, p, prev_d, d));
    }
    prev_p = p;
    prev_d = d;
    have = true;
  }
  breaks.push_back(hi);
  return breaks;
}

PeriodicBasicRay make_ray(const LayeredProfile& P, std::size_t k, double p, int N, int m,
                          bool turning, const SpectrumOptions& opt) {
  PeriodicBasicRay ray;
  ray.layer = k;
  ray.p = p;
  ray.N = N;
  ray.m = m;
  const auto g = basic_ray_geometry(P, k, p, N, opt.leg_tol);
  ray.kind = turning ? RayKind::Turning : RayKind::InterfaceReflecting;
  ray.alpha = g.alpha;
  ray.T = g.T;
  ray.leg_time = g.leg_time;
  ray.r_star = g.r_star;
  ray.dalpha_dp = 2.0 * N * one_way_alpha_dp(P, k, p, opt.leg_tol);
  ray.conjugacy_ok = check_periodic_conjugacy(ray, opt.pcc_tol);
  return ray;
}

PeriodicBasicRay radial_ray(const LayeredProfile& P, std::size_t k, const SpectrumOptions& opt) {
  PeriodicBasicRay ray;
  ray.layer = k;
  ray.kind = RayKind::Radial;
  ray.p = 0.0;
  ray.m = 0;
  // Through the center a back-and-forth diameter takes two chords; elsewhere
  // one down-and-up leg between the two boundaries closes the ray.
  ray.N = is_ball_core(P, k) ? 2 : 1;
  const auto leg = leg_integrals(P, k, P.layer_bottom(k), P.layer_top(k), 0.0, opt.leg_tol);
  ray.leg_time = leg.time;
  ray.T = 2.0 * ray.N * leg.time;
  ray.alpha = 0.0;
  ray.r_star = P.layer_bottom(k);
  ray.dalpha_dp = 2.0 * ray.N * one_way_alpha_dp(P, k, 0.0, opt.leg_tol);
  ray.conjugacy_ok = check_periodic_conjugacy(ray, opt.pcc_tol);
  return ray;
}

PeriodicBasicRay repeat(const PeriodicBasicRay& r, int l) {
  PeriodicBasicRay h = r;
  h.harmonic = l;
  h.N *= l;
  h.m *= l;
  h.T *= l;
  h.alpha *= l;
  h.dalpha_dp *= l;
  return h;
}

}  // namespace

double one_way_alpha(const LayeredProfile& P, std::size_t k, double p, double tol) {
  if (p == 0.0) return is_ball_core(P, k) ? kPi / 2.0 : 0.0;
  const double rb = ray_bottom(P, k, p);
  return leg_integrals(P, k, rb, P.layer_top(k), p, tol).alpha;
}

double one_way_alpha_dp(const LayeredProfile& P, std::size_t k, double p, double tol) {
  const double top = P.layer_top(k);
  if (p == 0.0) {
    if (!is_ball_core(P, k)) return leg_alpha_dp(P, k, P.layer_bottom(k), top, 0.0, tol);
    // X(-p) = pi - X(p) through the center, so X is smooth at 0; Richardson
    // on the central difference (2 X(h) - pi) / (2h).
    const double h = 1e-3 * P.layer_rho(k, top);
    auto D = [&](double s) { return (2.0 * one_way_alpha(P, k, s, 1e-13) - kPi) / (2.0 * s); };
    return (4.0 * D(h / 2.0) - D(h)) / 3.0;
  }
  if (auto rt = layer_turning_radius(P, k, p)) return leg_alpha_dp(P, k, *rt, top, p, tol);
  return leg_alpha_dp(P, k, P.layer_bottom(k), top, p, tol);
}

BasicEnumeration enumerate_basic(const LayeredProfile& P, std::size_t k, const SpectrumOptions& opt) {
  if (k >= P.num_layers()) throw InvalidArgument("layer index out of range");
  if (opt.max_legs < 2 || opt.max_winding < 1)
    throw InvalidArgument("need max_legs >= 2 and max_winding >= 1");
  BasicEnumeration out;
  const double tol = opt.leg_tol;
  const double rho_top = P.layer_rho(k, P.layer_top(k));
  const double p_b = rho_bottom(P, k);

  struct Piece {
    double lo, hi, X_lo, X_hi;
    bool turning;
  };
  std::vector<Piece> pieces;
  auto add_branch = [&](double lo, double hi, bool turning) {
    if (!(hi > lo)) return;
    const auto br = monotone_breaks(P, k, lo, hi, opt.scan_points, tol);
    for (std::size_t j = 0; j + 1 < br.size(); ++j) {
      const double a = br[j], b = br[j + 1];
      const double top_edge = rho_top * (1.0 - 1e-13);
      const double bb = std::min(b, top_edge);
      pieces.push_back({a, bb, one_way_alpha(P, k, a, tol), one_way_alpha(P, k, bb, tol), turning});
    }
  };
  add_branch(0.0, p_b, false);
  add_branch(p_b, rho_top, true);

  out.rays.push_back(radial_ray(P, k, opt));
  for (int N = 1; N <= opt.max_legs; ++N) {
    for (int m = 1; m <= opt.max_winding; ++m) {
      if (std::gcd(N, m) != 1) continue;
      const double target = kPi * m / N;
      for (const auto& pc : pieces) {
        const double lo = std::min(pc.X_lo, pc.X_hi), hi = std::max(pc.X_lo, pc.X_hi);
        if (!(target > lo && target < hi)) continue;
        try {
          auto f = [&](double p) { return one_way_alpha(P, k, p, tol) - target; };
          const double p = bracket_root(f, pc.lo, pc.hi, pc.X_lo - target, pc.X_hi - target);
          auto ray = make_ray(P, k, p, N, m, pc.turning, opt);
          if (std::abs(ray.alpha - 2.0 * kPi * m) > opt.closure_tol) {
            out.failures.push_back({k, N, m, "closure residual above tolerance"});
            continue;
          }
          out.rays.push_back(ray);
        } catch (const std::exception& e) {
          out.failures.push_back({k, N, m, e.what()});
        }
      }
    }
  }
  if (opt.harmonics) {
    const std::size_t n0 = out.rays.size();
    for (std::size_t i = 0; i < n0; ++i)
      for (int l = 2; l * out.rays[i].N <= opt.max_legs; ++l) out.rays.push_back(repeat(out.rays[i], l));
  }
  std::sort(out.rays.begin(), out.rays.end(), [](const auto& a, const auto& b) {
    return std::tie(a.T, a.N, a.m) < std::tie(b.T, b.N, b.m);
  });
  return out;
}

namespace {

std::vector<SpectrumEntry> group(std::vector<PeriodicBasicRay> rays, double rel) {
  std::sort(rays.begin(), rays.end(), [](const auto& a, const auto& b) {
    return std::tie(a.T, a.layer, a.N, a.m) < std::tie(b.T, b.layer, b.N, b.m);
  });
  std::vector<SpectrumEntry> out;
  for (auto& r : rays) {
    if (!out.empty() && std::abs(r.T - out.back().T) <= rel * r.T) {
      out.back().rays.push_back(r);
    } else {
      out.push_back({r.T, {r}, 0});
    }
    out.back().multiplicity = out.back().rays.size();
  }
  return out;
}

}  // namespace

Spectrum blsp(const LayeredProfile& P, double cutoff, const SpectrumOptions& opt) {
  if (!(cutoff > 0.0)) throw InvalidArgument("cutoff must be positive");
  std::vector<BasicEnumeration> per(P.num_layers());
  parallel_for(P.num_layers(), [&](std::size_t k) { per[k] = enumerate_basic(P, k, opt); });
  Spectrum s;
  s.cutoff = cutoff;
  s.options = opt;
  std::vector<PeriodicBasicRay> rays;
  for (auto& e : per) {
    for (auto& r : e.rays)
      if (r.T <= cutoff) rays.push_back(r);
    s.failures.insert(s.failures.end(), e.failures.begin(), e.failures.end());
  }
  s.entries = group(std::move(rays), opt.dedupe_rel);
  return s;
}

TwoSpeedSpectrum blsp_two_speeds(const LayeredProfile& P, const LayeredProfile& S, double cutoff,
                                 const SpectrumOptions& opt) {
  if (P.inner_radius() != S.inner_radius() || P.interfaces() != S.interfaces())
    throw InvalidArgument("the two profiles must share interface radii");
  const auto sp = blsp(P, cutoff, opt), ss = blsp(S, cutoff, opt);
  TwoSpeedSpectrum out;
  for (const auto& e : sp.entries) out.entries.push_back({"P", e});
  for (const auto& e : ss.entries) out.entries.push_back({"S", e});
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const auto& a, const auto& b) { return a.entry.T < b.entry.T; });
  for (const auto& a : sp.entries)
    for (const auto& b : ss.entries)
      if (std::abs(a.T - b.T) <= opt.dedupe_rel * std::max(a.T, b.T)) out.collisions.push_back({a.T, b.T});
  out.failures = sp.failures;
  out.failures.insert(out.failures.end(), ss.failures.begin(), ss.failures.end());
  return out;
}

bool check_periodic_conjugacy(const PeriodicBasicRay& ray, double pcc_tol) {
  const double scale = ray.p > 0.0 ? std::max(1.0, std::abs(ray.alpha) / ray.p) : 1.0;
  return std::isfinite(ray.dalpha_dp) && std::abs(ray.dalpha_dp) > pcc_tol * scale;
}

std::vector<ConjugacyZero> countable_conjugacy_scan(const LayeredProfile& P, std::size_t k,
                                                    std::size_t grid, double tol_in) {
  if (grid < 3) throw InvalidArgument("grid needs at least 3 points");
  // A C^1 spline has jumps in c'' at the knots; GK31 cannot reach 1e-12 there.
  const double tol = P.model(k).is_c11() ? tol_in : std::max(tol_in, 1e-9);
  // Uniform in p: a zero deep in a steep profile can sit at a turning radius
  // far below any reasonable grid in r.
  const double p_lo = rho_bottom(P, k), p_hi = P.layer_rho(k, P.layer_top(k));
  std::vector<ConjugacyZero> out;
  double prev_p = 0.0, prev_d = 0.0;
  bool have = false;
  for (std::size_t j = 1; j < grid; ++j) {
    const double p = p_lo + (p_hi - p_lo) * static_cast<double>(j) / grid;
    const double d = one_way_alpha_dp(P, k, p, tol);
    if (have && ((prev_d < 0.0) != (d < 0.0))) {
      auto f = [&](double q) { return one_way_alpha_dp(P, k, q, tol); };
      const double pz = bracket_root(f, prev_p, p, prev_d, d);
      out.push_back({ray_bottom(P, k, pz), pz});
    }
    prev_p = p;
    prev_d = d;
    have = true;
  }
  return out;
}

double abel_forward(const LayeredProfile& P, const std::function<double(double)>& f, double r,
                    double tol) {
  const double bot = P.layer_bottom(0);
  if (!(r > bot) || r > 1.0) throw InvalidArgument("radius must lie inside the outermost layer");
  if (r == 1.0) return 0.0;
  const double rho_r = P.layer_rho(0, r), d1 = P.layer_drho(0, r);
  // rho(s)^2 - rho(r)^2 = d (f1 + f2 d / 2) + O(d^3) with d = s - r.
  const double f1 = 2.0 * rho_r * d1;
  const double f2 = 2.0 * (d1 * d1 + rho_r * P.layer_d2rho(0, r));
  if (!(f1 > 0.0)) throw DomainError("kernel is singular: rho is not increasing at r");
  const double d_max = 1e-6 * r;
  auto integrand = [&](double u) {
    const double d = u * u, s = r + d;
    const double rho_s = P.layer_rho(0, s);
    if (d < d_max) return 2.0 * f(s) * rho_s / (P.layer_c(0, s) * std::sqrt(f1 + 0.5 * f2 * d));
    const double v = (rho_s - rho_r) * (rho_s + rho_r);
    if (!(v > 0.0)) throw DomainError("kernel is singular away from the endpoint");
    return 2.0 * u * f(s) * rho_s / (P.layer_c(0, s) * std::sqrt(v));
  };
  return integrate(integrand, 0.0, std::sqrt(1.0 - r), tol);
}

double radial_length(const LayeredProfile& P, std::size_t i, double tol) {
  if (i >= P.num_interfaces()) throw InvalidArgument("interface index out of range");
  double t = 0.0;
  for (std::size_t k = 0; k <= i; ++k)
    t += leg_integrals(P, k, P.layer_bottom(k), P.layer_top(k), 0.0, tol).time;
  return t;
}

double interface_motion_derivative(const LayeredProfile& P, std::size_t i, double dr_dtau) {
  if (i >= P.num_interfaces()) throw InvalidArgument("interface index out of range");
  return -dr_dtau / P.c(P.interfaces()[i], Side::Above);
}

}  // namespace planetspec
