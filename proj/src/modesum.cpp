#include "planetspec/modesum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/airy.hpp>

#include "planetspec/common.hpp"
#include "planetspec/kinematics.hpp"
#include "planetspec/scattering.hpp"
#include "trace_kernel.hpp"

namespace planetspec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double wavenumber(const LayeredProfile& P, int l, Wavenumber w) {
  // l = 0 has no centrifugal term, so Auto keeps k = 0 there.
  if (w == Wavenumber::Auto)
    w = P.inner_radius() == 0.0 && l > 0 ? Wavenumber::Langer : Wavenumber::Exact;
  const double L = static_cast<double>(l);
  return w == Wavenumber::Langer ? L + 0.5 : std::sqrt(L * (L + 1.0));
}

// Airy argument whose phase (2/3) s^1.5 equals the given action.
double airy_arg(double action) { return std::cbrt(1.5 * action * 1.5 * action); }

}  // namespace

double airy_neumann_phase(double x, double eps) {
  // a = (Ai', Bi') and b = (Ai, Bi) at -x. The eps term moves the point along
  // the straight segment a + t b, which never meets the origin (Wronskian
  // 1/pi), so its phase contribution is the signed angle from a, below pi.
  double a0, a1, b0, b1, base;
  if (x < -8.0) {
    // Scaled by Bi to avoid overflow; Ai / Bi ~ exp(-4/3 y^1.5) / 2.
    const double y = -x, sy = std::sqrt(y);
    const double r = 0.5 * std::exp(-4.0 / 3.0 * y * sy);
    a0 = -sy * r, a1 = sy, b0 = r, b1 = 1.0;
    base = -std::atan2(a1, a0);
  } else if (x >= 20.0) {
    // Amplitude-phase form; the eps shift reduces to atan(eps / sqrt(x)).
    const double z = 2.0 / 3.0 * x * std::sqrt(x);
    const double x3 = 1.0 / (x * x * x);
    return z - 0.75 * kPi + z * (7.0 / 32.0 * x3 - 1673.0 / 6144.0 * x3 * x3) + std::atan(eps / std::sqrt(x));
  } else {
    a0 = boost::math::airy_ai_prime(-x), a1 = boost::math::airy_bi_prime(-x);
    b0 = boost::math::airy_ai(-x), b1 = boost::math::airy_bi(-x);
    base = -std::atan2(a1, a0);
    // Monotone with minimum -2 pi / 3 at x = 0 and below 1.2 at x = 3, so the
    // principal value is already continuous up to there.
    if (x > 3.0) {
      const double z = 2.0 / 3.0 * x * std::sqrt(x);
      const double x3 = 1.0 / (x * x * x);
      const double ref = z - 0.75 * kPi + z * (7.0 / 32.0 * x3 - 1673.0 / 6144.0 * x3 * x3);
      base += 2.0 * kPi * std::round((ref - base) / (2.0 * kPi));
    }
  }
  if (eps == 0.0) return base;
  const double c0 = a0 + eps * b0, c1 = a1 + eps * b1;
  return base - std::atan2(a0 * c1 - a1 * c0, a0 * c0 + a1 * c1);
}

namespace {

// beta^2 = c^-2 - p^2 / r^2 and its r-derivative on layer 0.
struct Beta2 {
  double v, dv;
};

Beta2 beta2_at(const LayeredProfile& P, double r, double p) {
  const double c = P.layer_c(0, r), dc = P.model(0).dc(r);
  return {1.0 / (c * c) - p * p / (r * r), -2.0 * dc / (c * c * c) + 2.0 * p * p / (r * r * r)};
}

// Neumann condition on the uniform approximation V = zeta'^-1/2 W(omega^2/3 zeta)
// at an end point: W' + eps W = 0 with eps = zeta'' / (2 zeta'^2 omega^2/3).
// `action` is the integral of |beta| from the (possibly virtual) turning
// point; negative for the evanescent side.
double neumann_eps(Beta2 b, double action, double omega) {
  const double w23 = std::cbrt(omega * omega);
  const double mag = std::cbrt(1.5 * std::abs(action) * 1.5 * std::abs(action));
  if (mag * w23 < 0.05 || b.v == 0.0) return 0.0;  // linear regime: zeta'' ~ 0
  const double zeta = action >= 0.0 ? mag : -mag;
  const double ab = std::sqrt(std::abs(b.v));
  const double dab = (action >= 0.0 ? b.dv : -b.dv) / (2.0 * ab);
  const double sq = std::sqrt(mag);
  const double d1 = ab / sq;
  const double d2 = action >= 0.0 ? dab / sq - b.v / (2.0 * zeta * zeta) : dab / sq + std::abs(b.v) / (2.0 * zeta * zeta);
  return d2 / (2.0 * d1 * d1 * w23);
}

// Liouville-Green Neumann phase shift atan(beta' / (2 omega beta^2)).
double lg_shift(Beta2 b, double omega) { return std::atan(b.dv / (4.0 * omega * b.v * std::sqrt(b.v))); }

// Liouville phase integral of sqrt(omega^2 - q) dtau, with
// q = -beta^-3/2 (beta^-1/2)'' the potential left by the transform. This
// matches omega tau - (1 / 2 omega) int q dtau at high frequency and stays
// monotone in omega where q > omega^2. Requires beta^2 > 0 on [lo, hi].
double lg_action(const LayeredProfile& P, double lo, double hi, double p, double omega) {
  const SpeedModel& m = P.model(0);
  auto f = [&](double r) {
    const double c = m.c(r), dc = m.dc(r), d2c = m.d2c(r);
    const double ic = 1.0 / c, pr = p / r;
    const double v = ic * ic - pr * pr;
    const double dv = -2.0 * dc * ic * ic * ic + 2.0 * pr * pr / r;
    const double d2v = -2.0 * d2c * ic * ic * ic + 6.0 * dc * dc * ic * ic * ic * ic - 6.0 * pr * pr / (r * r);
    const double qb = 0.25 * d2v / (v * std::sqrt(v)) - 5.0 / 16.0 * dv * dv / (v * v * std::sqrt(v));
    return std::sqrt(std::max(omega * omega * v - qb * std::sqrt(v), 0.0));
  };
  return integrate(f, lo, hi, 1e-10 * omega);
}

}  // namespace

double quantization_phase(const LayeredProfile& P, int l, double omega, const ModeOptions& opt) {
  if (l < 0) throw InvalidArgument("angular order must be nonnegative");
  if (!(omega > 0.0)) throw InvalidArgument("frequency must be positive");
  const double k = wavenumber(P, l, opt.k);
  const double p = k / omega;
  const double top = P.layer_top(0);
  if (p >= P.layer_rho(0, top)) throw InvalidArgument("no oscillatory region at this frequency");
  const double R = P.inner_radius();
  const Beta2 bt = beta2_at(P, top, p);

  if (P.num_layers() == 1) {
    if (p == 0.0 && R == 0.0) {
      // Regular centre with k = 0: V vanishes there.
      return (lg_action(P, 0.0, top, 0.0, omega) + lg_shift(bt, omega)) / kPi - 0.5;
    }
    if (auto rt = layer_turning_radius(P, 0, p)) {
      const double tau = radial_action(P, 0, *rt, top, p);
      const double psi_t = airy_neumann_phase(airy_arg(omega * tau), neumann_eps(bt, tau, omega));
      double psi_b = -0.5 * kPi;
      if (R > 0.0 && *rt > R) {
        const double z = radial_action(P, 0, R, *rt, p);
        psi_b = airy_neumann_phase(-airy_arg(omega * z), neumann_eps(beta2_at(P, R, p), -z, omega));
      }
      return (psi_t - psi_b) / kPi;
    }
    // Oscillatory down to the inner wall.
    const double tau = radial_action(P, 0, R, top, p);
    const Beta2 bb = beta2_at(P, R, p);
    auto lg = [&] { return (lg_action(P, R, top, p, omega) + lg_shift(bt, omega) - lg_shift(bb, omega)) / kPi; };
    if (bb.dv <= 0.0) return lg();
    // Airy match at the virtual turning point of the linearized beta^2.
    const double zw = 2.0 / 3.0 * bb.v * std::sqrt(bb.v) / bb.dv;
    if (omega * zw > 1e8) return lg();
    return (airy_neumann_phase(airy_arg(omega * (zw + tau)), neumann_eps(bt, zw + tau, omega)) -
            airy_neumann_phase(airy_arg(omega * zw), neumann_eps(bb, zw, omega))) /
           kPi;
  }

  // Layered: only rays confined to the outer layer.
  const double r1 = P.interfaces()[0];
  if (auto rt = layer_turning_radius(P, 0, p)) {
    const double tau = radial_action(P, 0, *rt, top, p);
    return (airy_neumann_phase(airy_arg(omega * tau), neumann_eps(bt, tau, omega)) + 0.5 * kPi) / kPi;
  }
  if (p > P.layer_rho(1, r1) * (1.0 + 1e-12)) {
    const auto coef = interface_coefficients(P, 0, p);
    return (omega * radial_action(P, 0, r1, top, p) + 0.5 * std::arg(coef.R_pp)) / kPi;
  }
  return kNaN;
}

ModeTable wkb_eigenfrequencies(const LayeredProfile& P, int l_max, double omega_max,
                               const ModeOptions& opt) {
  if (!P.has_density()) throw InvalidArgument("mode computation needs a density model");
  if (l_max < 0) throw InvalidArgument("l_max must be nonnegative");
  if (!(omega_max > 0.0)) throw InvalidArgument("omega_max must be positive");
  const double rho_top = P.layer_rho(0, P.layer_top(0));

  struct PerOrder {
    std::vector<ModeEntry> modes;
    std::vector<ModeFailure> failures;
    bool skipped = false;
  };
  std::vector<PerOrder> out(static_cast<std::size_t>(l_max) + 1);

  parallel_for(out.size(), [&](std::size_t li) {
    const int l = static_cast<int>(li);
    auto& res = out[li];
    const double k = wavenumber(P, l, opt.k);
    const double w_lo = k > 0.0 ? k / rho_top * (1.0 + 1e-10) : 1e-9 * omega_max;
    if (w_lo >= omega_max) return;
    auto theta = [&](double w) { return quantization_phase(P, l, w, opt); };
    try {
      const double span = std::max(0.0, theta(omega_max)) + 1.0;
      const std::size_t M = 16 + static_cast<std::size_t>(4.0 * span);
      std::vector<double> w(M + 1), th(M + 1);
      for (std::size_t j = 0; j <= M; ++j) {
        w[j] = w_lo + (omega_max - w_lo) * static_cast<double>(j) / static_cast<double>(M);
        th[j] = theta(w[j]);
        if (std::isnan(th[j])) res.skipped = true;
      }
      for (std::size_t j = 0; j < M; ++j) {
        if (std::isnan(th[j]) || std::isnan(th[j + 1])) continue;
        const double a = std::min(th[j], th[j + 1]), b = std::max(th[j], th[j + 1]);
        for (double n = std::max(0.0, std::floor(a) + 1.0); n <= b; n += 1.0) {
          const int ni = static_cast<int>(n);
          try {
            double root = w[j + 1];
            if (th[j + 1] != n)
              root = bracket_root([&](double x) { return theta(x) - n; }, w[j], w[j + 1], th[j] - n,
                                  th[j + 1] - n);
            res.modes.push_back({ni, l, root});
          } catch (const std::exception& e) {
            res.failures.push_back({l, ni, e.what()});
          }
        }
      }
    } catch (const std::exception& e) {
      res.failures.push_back({l, -1, e.what()});
    }
    std::sort(res.modes.begin(), res.modes.end(),
              [](const ModeEntry& x, const ModeEntry& y) { return x.n < y.n; });
    for (std::size_t j = 1; j < res.modes.size(); ++j)
      if (!(res.modes[j].omega > res.modes[j - 1].omega))
        res.failures.push_back({l, res.modes[j].n, "frequencies not increasing in overtone"});
  });

  ModeTable table;
  table.profile_hash = P.hash();
  table.omega_max = omega_max;
  table.l_max = l_max;
  for (auto& r : out) {
    table.entries.insert(table.entries.end(), r.modes.begin(), r.modes.end());
    table.failures.insert(table.failures.end(), r.failures.begin(), r.failures.end());
    table.skipped += r.skipped ? 1 : 0;
  }
  return table;
}

SmoothedTrace trace_series(const ModeTable& modes, double t0, double t1, std::size_t points,
                           double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (modes.entries.empty()) throw InvalidArgument("mode table is empty");
  if (points < 2 || !(t1 > t0)) throw InvalidArgument("need at least two grid points on t0 < t1");
  std::vector<double> omega, weight;
  omega.reserve(modes.entries.size());
  weight.reserve(modes.entries.size());
  for (const auto& m : modes.entries) {
    const double s = sigma * m.omega;
    omega.push_back(m.omega);
    weight.push_back((2.0 * m.l + 1.0) * std::exp(-0.5 * s * s));
  }
  SmoothedTrace tr;
  tr.t0 = t0;
  tr.dt = (t1 - t0) / static_cast<double>(points - 1);
  tr.sigma = sigma;
  tr.values.assign(points, 0.0);
  // Fixed chunking keeps the output independent of the worker count.
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (points + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t j0 = c * kChunk, n = std::min(kChunk, points - j0);
    detail::trace_block(omega.data(), weight.data(), omega.size(), tr.t(j0), tr.dt, n,
                        tr.values.data() + j0);
  });
  return tr;
}

std::vector<Peak> find_peaks(const SmoothedTrace& tr, double separation) {
  const auto& v = tr.values;
  const std::size_t n = v.size();
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = std::abs(v[i]);
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(a[i] > a[i - 1] && a[i] >= a[i + 1])) continue;
    double left = a[i], right = a[i];
    for (std::size_t j = i; j-- > 0 && a[j] <= a[i];) left = std::min(left, a[j]);
    for (std::size_t j = i + 1; j < n && a[j] <= a[i]; ++j) right = std::min(right, a[j]);
    peaks.push_back({i, tr.t(i), a[i], a[i] - std::max(left, right)});
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& x, const Peak& y) { return x.prominence > y.prominence; });
  if (!(separation > 0.0)) return peaks;
  std::vector<Peak> kept;
  for (const auto& p : peaks) {
    const bool near = std::any_of(kept.begin(), kept.end(),
                                  [&](const Peak& k) { return std::abs(k.t - p.t) < separation; });
    if (!near) kept.push_back(p);
  }
  return kept;
}

std::vector<PeakMatch> detect_peaks(const SmoothedTrace& tr, const std::vector<double>& candidates,
                                    double window) {
  if (!(window > 0.0)) throw InvalidArgument("window must be positive");
  const auto peaks = find_peaks(tr);
  std::vector<PeakMatch> out;
  for (double T : candidates) {
    PeakMatch m;
    m.candidate = T;
    m.covered = T - window >= tr.t0 && T + window <= tr.t_end();
    if (m.covered) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : peaks) {
        const double d = p.t - T;
        if (std::abs(d) <= window && std::abs(d) < std::abs(best)) {
          best = d;
          m.prominence = p.prominence;
        }
      }
      m.matched = std::isfinite(best);
      if (m.matched) m.offset = best;
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace planetspec
