#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "planetspec/common.hpp"
#include "planetspec/kinematics.hpp"
#include "planetspec/profile.hpp"

using namespace planetspec;

namespace {

std::shared_ptr<const SpeedModel> constant(double c) { return std::make_shared<ConstantSpeed>(c); }
LayeredProfile disk() { return LayeredProfile(0.0, {}, {constant(1.0)}); }
LayeredProfile head_wave() { return LayeredProfile(0.0, {0.6}, {constant(1.0), constant(1.5)}); }

}  // namespace

TEST_CASE("beta in the disk") {
  auto P = disk();
  auto b = beta(P, 0.8, 0.4);
  CHECK_FALSE(b.evanescent);
  CHECK(b.value == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
  CHECK(beta(P, 0.4, 0.4).value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(beta(P, 0.3, 0.4).evanescent);
}

TEST_CASE("turning radius and regimes") {
  auto P = disk();
  auto t = turning_radius(P, 0.5);
  CHECK(t.radius == doctest::Approx(0.5));
  CHECK(t.regime == Regime::TurningAbove);
  CHECK(turning_radius(P, 0.0).regime == Regime::Center);

  auto lp = make_log_profile({{2.0, 0.5}}, {}, 0.3);
  const double p = std::sqrt(1.9);
  CHECK(turning_radius(lp, p).radius == doctest::Approx(std::exp((1.9 - 2.0) / 0.5)).epsilon(1e-13));
  auto ann = make_log_profile({{2.0, 0.5}}, {}, 0.5);
  CHECK(turning_radius(ann, 0.5).regime == Regime::InnerBoundaryReflection);

  auto hw = head_wave();
  auto tir = classify_regimes(hw, 0.5);
  CHECK(tir.turning.regime == Regime::TotalInternalReflection);
  CHECK(tir.turning.radius == doctest::Approx(0.6));
  CHECK(tir.verdicts[0] == Regime::TotalInternalReflection);
  auto tx = classify_regimes(hw, 0.3);
  CHECK(tx.verdicts[0] == Regime::Transmitting);
  CHECK(tx.turning.layer == 1);
  CHECK(tx.turning.radius == doctest::Approx(0.45));
  auto graze = classify_regimes(hw, 0.4);
  CHECK(graze.verdicts[0] == Regime::GrazingTransmission);
  CHECK(graze.turning.grazing);
  CHECK_THROWS_AS(classify_regimes(hw, 1.0), InvalidArgument);
}

TEST_CASE("regime brackets sit exactly on the one-sided rho values") {
  auto P = make_log_profile({{2.0, 0.5}, {1.6, 0.9}}, {0.6}, 0.3);
  const double above = P.rho(0.6, Side::Above), below = P.rho(0.6, Side::Below);
  REQUIRE(below < above);
  CHECK(classify_regimes(P, std::nextafter(below, 0.0), 0.0).verdicts[0] == Regime::Transmitting);
  CHECK(classify_regimes(P, below, 0.0).verdicts[0] == Regime::GrazingTransmission);
  CHECK(classify_regimes(P, 0.5 * (below + above), 0.0).verdicts[0] == Regime::TotalInternalReflection);
  CHECK(classify_regimes(P, std::nextafter(above, 2.0), 0.0).verdicts[0] == Regime::TurningAbove);
}

TEST_CASE("leg integrals against chord geometry") {
  auto P = disk();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> up(0.0, 0.999);
  for (int i = 0; i < 1000; ++i) {
    const double p = up(rng);
    auto li = leg_integrals(P, 0, p, 1.0, p);
    CHECK(li.alpha == doctest::Approx(std::acos(p)).epsilon(1e-9));
    CHECK(li.time == doctest::Approx(std::sqrt(1 - p * p)).epsilon(1e-9));
  }
  auto radial = leg_integrals(P, 0, 0.0, 1.0, 0.0);
  CHECK(radial.alpha == 0.0);
  CHECK(radial.time == doctest::Approx(1.0));
  CHECK(leg_alpha_dp(P, 0, 0.4, 1.0, 0.4) == doctest::Approx(-1 / std::sqrt(1 - 0.16)).epsilon(1e-8));
}

TEST_CASE("leg integrals are additive, including from the turning point") {
  auto lp = make_log_profile({{2.0, 0.5}}, {}, 0.3);
  for (double p : {1.2, 1.3, 1.4}) {
    const double rt = *layer_turning_radius(lp, 0, p);
    const double mid = 0.5 * (rt + 1.0);
    auto whole = leg_integrals(lp, 0, rt, 1.0, p);
    auto lo = leg_integrals(lp, 0, rt, mid, p), hi = leg_integrals(lp, 0, mid, 1.0, p);
    CHECK(lo.alpha + hi.alpha == doctest::Approx(whole.alpha).epsilon(1e-9));
    CHECK(lo.time + hi.time == doctest::Approx(whole.time).epsilon(1e-9));
  }
}

TEST_CASE("log profile turning leg matches the closed form") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(1.5, 4.0), ub(0.2, 1.0), uf(0.2, 0.95);
  for (int i = 0; i < 50; ++i) {
    const double a = ua(rng), b = ub(rng);
    // Inner radius where the radicand has dropped to a tenth of a.
    auto lp = make_log_profile({{a, b}}, {}, std::exp(-0.9 * a / b));
    const double pmin = lp.layer_rho(0, lp.inner_radius());
    const double p = pmin + uf(rng) * (std::sqrt(a) - pmin);
    const double rt = *layer_turning_radius(lp, 0, p);
    auto li = leg_integrals(lp, 0, rt, 1.0, p);
    CHECK(li.alpha == doctest::Approx(2 * p / b * std::sqrt(a - p * p)).epsilon(1e-8));
  }
}

TEST_CASE("basic ray geometry in the disk") {
  auto P = disk();
  auto d = basic_ray_geometry(P, 0, 0.0, 2);
  CHECK(d.T == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(d.alpha == 0.0);
  auto h = basic_ray_geometry(P, 0, std::cos(kPi / 6), 6);
  CHECK(h.alpha == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(h.T == doctest::Approx(6.0).epsilon(1e-12));
  auto lp = make_log_profile({{2.0, 0.5}}, {}, 0.3);
  const double p = 1.3;
  auto g = basic_ray_geometry(lp, 0, p, 3);
  CHECK(g.alpha == doctest::Approx(3 * 2 * (2 * p / 0.5) * std::sqrt(2.0 - p * p)).epsilon(1e-9));
  CHECK_FALSE(g.reflecting);
}

TEST_CASE("travel time is continuous in p within a regime") {
  auto lp = make_log_profile({{2.0, 0.5}}, {}, 0.3);
  const double lo = lp.layer_rho(0, 0.3) + 1e-6, hi = std::sqrt(2.0) - 1e-3;
  // Halving the step halves the largest increment unless T jumps.
  auto worst_step = [&](int n) {
    double prev = basic_ray_geometry(lp, 0, lo, 1).T, worst = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double T = basic_ray_geometry(lp, 0, lo + (hi - lo) * i / n, 1).T;
      CHECK(T < prev);
      worst = std::max(worst, prev - T);
      prev = T;
    }
    return worst;
  };
  CHECK(worst_step(800) < 0.6 * worst_step(400));
}

TEST_CASE("trace_path follows chords and transmissions") {
  auto P = disk();
  auto hex = trace_path(P, 1.0, 0.0, std::cos(kPi / 6), {}, 6);
  CHECK(hex.legs.size() == 6);
  CHECK(hex.alpha_total == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(hex.time_total == doctest::Approx(6.0).epsilon(1e-12));
  auto diam = trace_path(P, 1.0, 0.0, 0.0, {}, 2);
  CHECK(diam.legs.size() == 2);
  CHECK(diam.alpha_total == 0.0);
  CHECK(diam.time_total == doctest::Approx(4.0));

  auto hw = head_wave();
  const double p = 0.3;
  auto tx = trace_path(hw, 1.0, 0.0, p, {Decision::Transmit, Decision::Transmit}, 3);
  REQUIRE(tx.legs.size() == 3);
  CHECK(tx.decisions_used == 2);
  const double a0 = leg_integrals(hw, 0, 0.6, 1.0, p).alpha;
  const double a1 = leg_integrals(hw, 1, 1.5 * p, 0.6, p).alpha;
  CHECK(tx.alpha_total == doctest::Approx(2 * a0 + 2 * a1).epsilon(1e-10));
  CHECK_THROWS_AS(trace_path(hw, 1.0, 0.0, 0.5, {Decision::Transmit}, 4), InvalidArgument);
}
