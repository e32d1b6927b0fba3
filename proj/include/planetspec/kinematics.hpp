#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "planetspec/profile.hpp"

namespace planetspec {

struct Beta {
  double value;     // |beta|
  bool evanescent;  // c^-2 - p^2 / r^2 < 0
};

// beta^2 = c(r)^-2 - p^2 / r^2 at a one-sided radius.
Beta beta(const LayeredProfile& profile, double r, double p, Side side = Side::Below);

enum class Regime {
  Transmitting,
  TotalInternalReflection,
  GrazingTransmission,
  TurningAbove,
  TurningAtInterface,
  InnerBoundaryReflection,
  Center,
};
std::string to_string(Regime r);

struct TurningPoint {
  double radius = 0.0;
  std::size_t layer = 0;
  Regime regime = Regime::TurningAbove;
  bool grazing = false;
  std::optional<std::size_t> interface;  // interface at which the ray stops, if any
};

struct RegimeClassification {
  std::vector<Regime> verdicts;  // one per interface
  TurningPoint turning;
};

inline constexpr double kGrazeTol = 1e-9;
inline constexpr double kLegTol = 1e-10;

// Deepest radius reached by a ray leaving the surface downward.
TurningPoint turning_radius(const LayeredProfile& profile, double p, double graze_tol = kGrazeTol);
RegimeClassification classify_regimes(const LayeredProfile& profile, double p,
                                      double graze_tol = kGrazeTol);

// Radius in layer k where rho = p, or nullopt when rho > p on the whole layer
// (the ray reaches the bottom). Requires p < rho at the layer top.
std::optional<double> layer_turning_radius(const LayeredProfile& profile, std::size_t k, double p);
// Lowest radius of a ray with parameter p confined to layer k.
double ray_bottom(const LayeredProfile& profile, std::size_t k, double p);

struct LegIntegrals {
  double alpha = 0.0;  // integral of p / (r^2 beta)
  double time = 0.0;   // integral of 1 / (c^2 beta)
  std::size_t layer = 0;
  double r_lo = 0.0, r_hi = 0.0, p = 0.0;
};

LegIntegrals leg_integrals(const LayeredProfile& profile, std::size_t layer, double r_lo, double r_hi,
                           double p, double abs_tol = kLegTol);

// d/dp of the alpha integral over [r_lo, r_hi]. When r_lo is the turning
// radius it moves with p; otherwise both limits are fixed.
double leg_alpha_dp(const LayeredProfile& profile, std::size_t layer, double r_lo, double r_hi,
                    double p, double abs_tol = kLegTol);

// Integral of sqrt(|beta^2|) over an interval where beta^2 keeps one sign.
double radial_action(const LayeredProfile& profile, std::size_t layer, double r_lo, double r_hi,
                     double p, double abs_tol = kLegTol);

struct BasicGeometry {
  double alpha = 0.0;
  double T = 0.0;
  double r_star = 0.0;
  bool reflecting = false;  // bottom of the leg is the layer's lower boundary
  double leg_time = 0.0;    // L(p): one way from r_star to the layer top
};

// N full legs (down and up) of a ray confined to layer k.
BasicGeometry basic_ray_geometry(const LayeredProfile& profile, std::size_t layer, double p, int N,
                                 double abs_tol = kLegTol);

enum class Decision { Reflect, Transmit };

struct PathLeg {
  std::size_t layer = 0;
  std::vector<std::pair<double, double>> samples;  // (r, theta)
  double alpha = 0.0;
  double time = 0.0;
};

struct RayPath {
  std::vector<PathLeg> legs;
  double alpha_total = 0.0;
  double time_total = 0.0;
  double theta_end = 0.0;
  std::size_t decisions_used = 0;
};

// Follows a ray that starts at (r0, theta0) heading down. Surface and inner
// boundary reflections are automatic; every interface encounter consumes one
// decision. Stops when a decision is needed and none is left, or after
// max_legs legs. A leg runs between consecutive boundary or interface hits.
RayPath trace_path(const LayeredProfile& profile, double r0, double theta0, double p,
                   const std::vector<Decision>& itinerary, std::size_t max_legs,
                   std::size_t samples_per_leg = 17);

}  // namespace planetspec
