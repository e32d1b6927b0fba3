#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "planetspec/kinematics.hpp"
#include "planetspec/profile.hpp"

namespace planetspec {

enum class RayKind { Turning, InterfaceReflecting, Radial };
std::string to_string(RayKind k);

struct PeriodicBasicRay {
  std::size_t layer = 0;
  RayKind kind = RayKind::Turning;
  double p = 0.0;
  int N = 1;  // full down-and-up legs
  int m = 0;  // winding number
  int harmonic = 1;  // l > 1 for the l-fold repetition of a primitive ray
  double T = 0.0;
  double alpha = 0.0;      // 2N X(p)
  double dalpha_dp = 0.0;  // derivative of the total, 2N X'(p)
  double leg_time = 0.0;   // L(p), one way
  double r_star = 0.0;
  bool conjugacy_ok = true;
};

struct SpectrumOptions {
  int max_legs = 12;
  int max_winding = 12;
  bool harmonics = false;  // add l (N, m) repetitions with l N <= max_legs
  double closure_tol = 1e-8;
  double dedupe_rel = 1e-9;  // lengths merge when within dedupe_rel * T
  double pcc_tol = 1e-6;
  double leg_tol = 1e-12;
  std::size_t scan_points = 160;  // p samples per layer used to split at zeros of d alpha / dp
};

struct EnumerationFailure {
  std::size_t layer;
  int N;
  int m;
  std::string message;
};

struct BasicEnumeration {
  std::vector<PeriodicBasicRay> rays;
  std::vector<EnumerationFailure> failures;
};

// Periodic rays confined to layer k, one representative per rotation and
// time-reversal class, sorted by (T, N, m).
BasicEnumeration enumerate_basic(const LayeredProfile& profile, std::size_t layer,
                                 const SpectrumOptions& opt = {});

struct SpectrumEntry {
  double T = 0.0;
  std::vector<PeriodicBasicRay> rays;
  std::size_t multiplicity = 0;
};

struct Spectrum {
  std::vector<SpectrumEntry> entries;
  std::vector<EnumerationFailure> failures;
  double cutoff = 0.0;
  SpectrumOptions options;
};

Spectrum blsp(const LayeredProfile& profile, double cutoff, const SpectrumOptions& opt = {});

struct TaggedEntry {
  std::string source;  // "P" or "S"
  SpectrumEntry entry;
};
struct Collision {
  double T_P;
  double T_S;
};
struct TwoSpeedSpectrum {
  std::vector<TaggedEntry> entries;  // merged, sorted by T
  std::vector<Collision> collisions;
  std::vector<EnumerationFailure> failures;
};

TwoSpeedSpectrum blsp_two_speeds(const LayeredProfile& P, const LayeredProfile& S, double cutoff,
                                 const SpectrumOptions& opt = {});

// One-way epicentral distance X(p) from the ray bottom to the top of layer k,
// and its derivative. In the ball X(0) is the pi / 2 limit through the center.
double one_way_alpha(const LayeredProfile& profile, std::size_t layer, double p,
                     double tol = kLegTol);
double one_way_alpha_dp(const LayeredProfile& profile, std::size_t layer, double p,
                        double tol = kLegTol);

bool check_periodic_conjugacy(const PeriodicBasicRay& ray, double pcc_tol = 1e-6);

struct ConjugacyZero {
  double radius;  // turning radius
  double p;
};

// Zeros of d X / dp along the turning branch of layer k, located by sign
// changes on a uniform grid in p and refined by root bracketing.
std::vector<ConjugacyZero> countable_conjugacy_scan(const LayeredProfile& profile,
                                                    std::size_t layer, std::size_t grid = 200,
                                                    double tol = 1e-12);

// h(r) = int_r^1 f(s) rho(s) / (c(s) sqrt(rho(s)^2 - rho(r)^2)) ds, for r in
// the outermost layer.
double abel_forward(const LayeredProfile& profile, const std::function<double(double)>& f,
                    double r, double tol = 1e-10);

// Derivative of the one-way radial travel time between interface i and the
// surface when the interface moves with speed dr_dtau. Outward motion shortens
// the path, so the sign is opposite to dr_dtau.
double interface_motion_derivative(const LayeredProfile& profile, std::size_t interface,
                                   double dr_dtau);
// The one-way radial travel time itself.
double radial_length(const LayeredProfile& profile, std::size_t interface, double tol = 1e-13);

// Head-wave approximants: k up-legs in the layer above interface i closed by
// m shallow chords just below it, with total winding w.
struct GlidingSpec {
  int k = 1;
  int w = 1;
};

struct GlidingApproximant {
  int m = 0;
  double p = 0.0;
  double theta = 0.0;  // incidence parameter, cos(theta) = p c(r_i^+) / r_i
  double kappa = 0.0;  // half the angle of one sub-interface chord
  double T = 0.0;
  double alpha_up = 0.0;     // one up-leg, down and back
  double phi = 0.0;          // one sub-interface chord
  double dalpha_dp = 0.0;    // of the whole closed ray
  double beta_below = 0.0;   // beta just below the interface
};

struct GlidingSequence {
  std::size_t interface = 0;
  GlidingSpec spec;
  double p0 = 0.0;       // critical ray parameter rho(r_i^-)
  double theta0 = 0.0;
  double Theta_H = 0.0;  // angle travelled along the interface in the limit
  double T_limit = 0.0;
  std::vector<GlidingApproximant> rays;  // T strictly increasing
  double kappa_exponent = 0.0;  // slope of log kappa vs log(theta - theta0), last 10 terms
  std::vector<std::string> warnings;
};

GlidingSequence gliding_approximation(const LayeredProfile& profile, std::size_t interface,
                                      const GlidingSpec& spec, std::size_t n_max,
                                      double tol = 1e-13);

}  // namespace planetspec
