#include "planetspec/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "planetspec/common.hpp"

namespace planetspec {

namespace {

// Exact binomial coefficient; throws when it does not fit in 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    r = r * (n - k + j) / j;
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw DomainError("Debye count overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

// beta as a complex number: i |beta| when evanescent.
cplx complex_beta(double rho, double p, double r) {
  const double v = (rho - p) * (rho + p);
  return v >= 0.0 ? cplx(std::sqrt(v) / r, 0.0) : cplx(0.0, std::sqrt(-v) / r);
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int j = 0; j < n; ++j) r *= z;
  return r;
}

cplx i_pow(const Rational& k) {
  const double angle = 0.5 * kPi * boost::rational_cast<double>(k);
  return std::polar(1.0, angle);
}

}  // namespace

InterfaceCoefficients coefficients_from_impedances(cplx Zp, cplx Zm) {
  InterfaceCoefficients c;
  c.Z_plus = Zp;
  c.Z_minus = Zm;
  const cplx s = Zp + Zm;
  if (std::abs(s) == 0.0) throw DomainError("both impedances vanish");
  c.R_pp = (Zp - Zm) / s;
  c.T_pm = 2.0 * Zp / s;
  c.T_mp = 2.0 * Zm / s;
  c.R_mm = -c.R_pp;
  return c;
}

InterfaceCoefficients interface_coefficients(const LayeredProfile& P, std::size_t i, double p,
                                             double graze_tol) {
  if (i >= P.num_interfaces()) throw InvalidArgument("interface index out of range");
  if (p < 0.0) throw InvalidArgument("ray parameter must be nonnegative");
  const double r = P.interfaces()[i];
  const double rho_p = P.layer_rho(i, r), rho_m = P.layer_rho(i + 1, r);
  const cplx Zp = P.layer_mu(i, r) * complex_beta(rho_p, p, r);
  cplx Zm = P.layer_mu(i + 1, r) * complex_beta(rho_m, p, r);
  Regime regime = Regime::Transmitting;
  if (p >= rho_p) {
    regime = Regime::TurningAbove;
  } else if (std::abs(p - rho_m) <= graze_tol) {
    regime = Regime::GrazingTransmission;
    Zm = 0.0;
  } else if (p > rho_m) {
    regime = Regime::TotalInternalReflection;
  }
  auto c = coefficients_from_impedances(Zp, Zm);
  c.regime = regime;
  c.evanescent_below = p > rho_m;
  return c;
}

std::uint64_t debye_count(const DebyeIndex& M) {
  if (M.m0 < 0 || M.m1 < 0 || M.m2 < 0) throw InvalidArgument("Debye counts must be nonnegative");
  if (M.m1 == 0) {
    if (M.m2 > 0) throw InvalidArgument("reflections from below need a transmission into the layer");
    return 1;
  }
  const auto m0 = static_cast<std::uint64_t>(M.m0), m1 = static_cast<std::uint64_t>(M.m1),
             m2 = static_cast<std::uint64_t>(M.m2);
  const auto a = binomial(m0 + m1, m1), b = binomial(m1 + m2 - 1, m2);
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b)
    throw DomainError("Debye count overflows 64 bits");
  return a * b;
}

std::uint64_t itinerary_count(const ScatteringItinerary& it) {
  std::uint64_t n = 1;
  for (const auto& M : it.M) {
    const auto c = debye_count(M);
    if (c != 0 && n > std::numeric_limits<std::uint64_t>::max() / c)
      throw DomainError("Debye count overflows 64 bits");
    n *= c;
  }
  return n;
}

cplx q_product(const LayeredProfile& P, const ScatteringItinerary& it, double graze_tol) {
  if (it.M.size() > P.num_interfaces()) throw InvalidArgument("itinerary has more interfaces than the profile");
  cplx Q = 1.0;
  for (std::size_t j = 0; j < it.M.size(); ++j) {
    const auto& M = it.M[j];
    if (M.m0 == 0 && M.m1 == 0 && M.m2 == 0) continue;
    debye_count(M);  // admissibility
    const auto c = interface_coefficients(P, j, it.p, graze_tol);
    if (c.regime == Regime::TurningAbove)
      throw DomainError("itinerary meets interface " + std::to_string(j) + " which the ray never reaches");
    if ((M.m1 > 0 || M.m2 > 0) && c.evanescent_below)
      throw DomainError("itinerary transmits through interface " + std::to_string(j) +
                        " under total internal reflection");
    Q *= ipow(c.R_pp, M.m0) * ipow(c.T_pm * c.T_mp, M.m1) * ipow(c.R_mm, M.m2);
  }
  return Q;
}

Rational kmah_index(int turning_points, int grazing_points, const KmahRules& rules) {
  if (turning_points < 0 || grazing_points < 0) throw InvalidArgument("counts must be nonnegative");
  // Units of pi/2: a phase f pi is 2 f units.
  return Rational(turning_points) + Rational(grazing_points) * rules.grazing_fraction_of_pi * 2LL;
}

std::string class_key(const PeriodicBasicRay& ray) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "layer=%zu kind=%s N=%d m=%d l=%d", ray.layer,
                to_string(ray.kind).c_str(), ray.N, ray.m, ray.harmonic);
  return buf;
}

TraceSingularity trace_amplitude(const PeriodicBasicRay& ray, const LayeredProfile& P,
                                 const KmahRules& rules, double pcc_tol) {
  TraceSingularity s;
  s.T = ray.T;
  s.L = ray.leg_time;
  s.class_key = class_key(ray);
  const std::size_t k = ray.layer;
  const bool last = k + 1 == P.num_layers();

  // Bottom of the leg: an interface reflection from above unless the ray
  // turns or the bottom is the inner boundary (Neumann, coefficient 1).
  if (ray.kind != RayKind::Turning && !last) {
    const auto c = interface_coefficients(P, k, ray.p);
    s.Q *= ipow(c.R_pp, ray.N);
  }
  // Top of the leg: surface (coefficient 1) or reflection from below.
  if (k > 0) {
    const auto c = interface_coefficients(P, k - 1, ray.p);
    s.Q *= ipow(c.R_mm, ray.N);
  }

  int turning = 0, grazing = 0;
  if (ray.kind == RayKind::Turning) {
    const double bot = P.layer_bottom(k);
    const bool grazes = !last && std::abs(ray.p - P.layer_rho(k, bot)) <= kGrazeTol;
    (grazes ? grazing : turning) = ray.N;
  }
  s.kmah = kmah_index(turning, grazing, rules);
  s.n = 1;

  if (ray.p == 0.0) {
    // p^-2 dalpha/dp is unbounded, so the leading coefficient vanishes.
    s.degenerate = true;
    s.principal = 0.0;
    s.amplitude = 0.0;
    s.note = "zero ray parameter: spreading factor vanishes at leading order";
    return s;
  }
  if (!check_periodic_conjugacy(ray, pcc_tol))
    throw DomainError("periodic conjugacy fails for " + s.class_key + ": d alpha / dp vanishes");
  const double spread = 1.0 / std::sqrt(std::abs(ray.dalpha_dp) / (ray.p * ray.p));
  s.principal = static_cast<double>(s.n) * s.Q * spread;
  s.amplitude = i_pow(s.kmah) * s.principal * s.L;
  return s;
}

InjectivityReport injectivity_check(const std::vector<TraceSingularity>& rows, double period_tol,
                                    double amp_tol) {
  InjectivityReport rep;
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return rows[a].T < rows[b].T; });
  for (std::size_t s = 0; s < idx.size();) {
    std::size_t e = s + 1;
    while (e < idx.size() &&
           rows[idx[e]].T - rows[idx[e - 1]].T <= period_tol * std::max(1.0, rows[idx[e]].T))
      ++e;
    std::vector<std::size_t> members(idx.begin() + s, idx.begin() + e);
    bool distinct = false;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto& A = rows[members[a]];
        const auto& B = rows[members[b]];
        if (A.class_key == B.class_key) continue;  // same class: a duplicate
        distinct = true;
        const double scale = std::max(std::abs(A.principal), std::abs(B.principal));
        if (std::abs(A.principal - B.principal) <= amp_tol * scale)
          rep.violations.push_back({members[a], members[b], A.T});
      }
    if (distinct) rep.groups.push_back({rows[members[0]].T, members});
    s = e;
  }
  rep.passed = rep.violations.empty();
  return rep;
}

GlidingDecay gliding_amplitude_decay(const GlidingSequence& seq, const LayeredProfile& P,
                                     std::size_t target) {
  if (seq.rays.size() < 8) throw InvalidArgument("need at least 8 approximants");
  GlidingDecay out;
  out.target = target;
  const int k = seq.spec.k;
  for (const auto& g : seq.rays) {
    const auto c = interface_coefficients(P, seq.interface, g.p);
    const cplx Q = ipow(c.R_pp, k - 1) * c.T_pm * c.T_mp * ipow(c.R_mm, g.m - 1);
    const double spread = 1.0 / std::sqrt(std::abs(g.dalpha_dp) / (g.p * g.p));
    out.a.push_back(i_pow(Rational(g.m)) * static_cast<double>(k) * Q * g.T * spread);
    out.m.push_back(g.m);
    out.max_m_beta = std::max(out.max_m_beta, g.m * g.beta_below);
    out.partial_sum += std::abs(out.a.back());
  }
  // Fit the upper half of the sequence, where the asymptotic rate applies.
  const std::size_t n = out.a.size(), first = n / 2;
  Eigen::MatrixXd A(n - first, 2);
  Eigen::VectorXd y(n - first);
  for (std::size_t j = first; j < n; ++j) {
    A(j - first, 0) = std::log(static_cast<double>(out.m[j]));
    A(j - first, 1) = 1.0;
    y(j - first) = std::log(std::abs(out.a[j]));
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
  if (!coef.allFinite()) throw ConvergenceError("decay fit failed");
  out.exponent = coef(0);
  out.intercept = coef(1);
  const double s = out.exponent;
  out.tail_estimate = s < -1.0 ? std::exp(out.intercept) * std::pow(static_cast<double>(target), s + 1.0) / (-s - 1.0)
                               : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace planetspec
