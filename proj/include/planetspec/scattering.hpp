#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "planetspec/kinematics.hpp"
#include "planetspec/profile.hpp"
#include "planetspec/spectrum.hpp"

namespace planetspec {

using cplx = std::complex<double>;
using Rational = boost::rational<long long>;

struct InterfaceCoefficients {
  cplx R_pp, T_pm, R_mm, T_mp;
  cplx Z_plus, Z_minus;  // impedances mu beta above and below
  Regime regime = Regime::Transmitting;
  bool evanescent_below = false;
};

// Leading-order coefficients for impedances Z+ (upper medium) and Z- (lower).
InterfaceCoefficients coefficients_from_impedances(cplx Z_plus, cplx Z_minus);

// Coefficients at interface k for ray parameter p. Under total internal
// reflection beta below is i |beta|.
InterfaceCoefficients interface_coefficients(const LayeredProfile& profile, std::size_t interface,
                                             double p, double graze_tol = kGrazeTol);

// Counts at one interface: m0 reflections from above, m1 transmission pairs,
// m2 reflections from below.
struct DebyeIndex {
  int m0 = 0, m1 = 0, m2 = 0;
};

// Number of Debye constituents with the given counts.
std::uint64_t debye_count(const DebyeIndex& M);

struct ScatteringItinerary {
  std::vector<DebyeIndex> M;  // one entry per interface, outermost first
  double p = 0.0;
};

// Product of coefficient powers over all interfaces in the itinerary.
cplx q_product(const LayeredProfile& profile, const ScatteringItinerary& it,
               double graze_tol = kGrazeTol);
// Product of debye_count over interfaces.
std::uint64_t itinerary_count(const ScatteringItinerary& it);

struct KmahRules {
  // Phase of a grazing turning point as a fraction of pi.
  Rational grazing_fraction_of_pi{1, 6};
};

// KMAH index in units of pi/2: one per ordinary turning point, and the
// grazing phase for each turning point that grazes an interface.
Rational kmah_index(int turning_points, int grazing_points, const KmahRules& rules = {});

struct TraceSingularity {
  double T = 0.0;
  Rational order{-5, 2};
  cplx amplitude;  // i^kmah n Q L |p^-2 dalpha/dp|^-1/2
  cplx principal;  // n Q |p^-2 dalpha/dp|^-1/2
  Rational kmah{0};
  std::uint64_t n = 1;
  cplx Q{1.0, 0.0};
  double L = 0.0;
  bool degenerate = false;  // p = 0: the spreading factor vanishes
  std::string class_key;
  std::string note;
};

// Basic-ray contribution; throws DomainError when d alpha / dp vanishes.
TraceSingularity trace_amplitude(const PeriodicBasicRay& ray, const LayeredProfile& profile,
                                 const KmahRules& rules = {}, double pcc_tol = 1e-6);

std::string class_key(const PeriodicBasicRay& ray);

struct InjectivityGroup {
  double T;
  std::vector<std::size_t> members;
};
struct InjectivityViolation {
  std::size_t a, b;
  double T;
};
struct InjectivityReport {
  std::vector<InjectivityGroup> groups;  // coincident periods, two or more classes
  std::vector<InjectivityViolation> violations;
  bool passed = true;
};

InjectivityReport injectivity_check(const std::vector<TraceSingularity>& rows, double period_tol = 1e-9,
                                    double amp_tol = 1e-9);

struct GlidingDecay {
  std::vector<cplx> a;
  std::vector<int> m;
  double exponent = 0.0;   // least-squares slope of log |a| against log m
  double intercept = 0.0;
  double max_m_beta = 0.0;  // sup of m beta_below over the sequence
  double partial_sum = 0.0;  // sum of |a| over the computed terms
  double tail_estimate = 0.0;  // power-law tail beyond the target index
  std::size_t target = 10000;
};

// i^m k Q T |p^-2 dalpha/dp|^-1/2 with Q = R_pp^(k-1) T_pm T_mp R_mm^(m-1).
GlidingDecay gliding_amplitude_decay(const GlidingSequence& seq, const LayeredProfile& profile,
                                     std::size_t target = 10000);

}  // namespace planetspec
