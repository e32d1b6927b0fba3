#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "planetspec/common.hpp"
#include "planetspec/kinematics.hpp"
#include "planetspec/profile.hpp"
#include "planetspec/profile_io.hpp"

using namespace planetspec;

namespace {

std::shared_ptr<const SpeedModel> constant(double c) { return std::make_shared<ConstantSpeed>(c); }

// Forwards c and dc only, so every consumer falls back to generic quadrature.
class Opaque final : public SpeedModel {
 public:
  explicit Opaque(std::shared_ptr<const SpeedModel> m) : m_(std::move(m)) {}
  double c(double r) const override { return m_->c(r); }
  double dc(double r) const override { return m_->dc(r); }
  nlohmann::json describe() const override { return m_->describe(); }

 private:
  std::shared_ptr<const SpeedModel> m_;
};

double central(const std::function<double(double)>& f, double r, double h = 1e-5) {
  return (f(r + h) - f(r - h)) / (2 * h);
}

}  // namespace

TEST_CASE("rho of the identity and log profiles") {
  LayeredProfile ball(0.0, {}, {constant(1.0)});
  CHECK(ball.rho(0.5, Side::Below) == doctest::Approx(0.5).epsilon(1e-15));
  auto lp = make_log_profile({{2.0, 0.5}}, {}, 0.3);
  CHECK(lp.rho(1.0, Side::Below) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(lp.c(1.0, Side::Below) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("one-sided evaluation picks the layer at an interface") {
  LayeredProfile two(0.0, {0.6}, {constant(1.0), constant(1.5)});
  CHECK(two.layer_at(0.6, Side::Above) == 0);
  CHECK(two.layer_at(0.6, Side::Below) == 1);
  CHECK(two.rho(0.6, Side::Above) == doctest::Approx(0.6));
  CHECK(two.rho(0.6, Side::Below) == doctest::Approx(0.4));
  CHECK_THROWS_AS(two.c(1.2, Side::Below), InvalidArgument);
}

TEST_CASE("constructor rejects malformed profiles") {
  CHECK_THROWS_AS(LayeredProfile(0.0, {0.5}, {constant(1.0)}), InvalidArgument);
  CHECK_THROWS_AS(LayeredProfile(0.0, {0.4, 0.6}, {constant(1.0), constant(2.0), constant(3.0)}),
                  InvalidArgument);
  CHECK_THROWS_AS(LayeredProfile(0.0, {0.5}, {constant(1.0), constant(1.0)}), InvalidArgument);
  CHECK_THROWS_AS(LayeredProfile(1.0, {}, {constant(1.0)}), InvalidArgument);
  CHECK_THROWS_AS(make_log_profile({{2.0, 0.5}, {2.0, 0.5}}, {0.6}, 0.3), InvalidArgument);
  // a + b ln r reaches zero at r = exp(-4) > 0.01.
  CHECK_THROWS_AS(make_log_profile({{2.0, 0.5}}, {}, 0.01), InvalidArgument);
  std::vector<LayerDensity> wrong{{1.0, 4.0}};
  CHECK_THROWS_AS(LayeredProfile(0.0, {}, {constant(1.0)}, wrong), InvalidArgument);
}

TEST_CASE("shear modulus defaults to density times c squared") {
  std::vector<LayerDensity> d{{2.0, std::nullopt}};
  LayeredProfile P(0.0, {}, {constant(1.5)}, d);
  CHECK(P.layer_mu(0, 0.5) == doctest::Approx(4.5));
  LayeredProfile bare(0.0, {}, {constant(1.5)});
  CHECK(bare.layer_mu(0, 0.5) == doctest::Approx(2.25));
}

TEST_CASE("speed model derivatives match central differences") {
  std::vector<std::shared_ptr<const SpeedModel>> models{
      std::make_shared<LogSpeed>(2.0, 0.5), std::make_shared<LnPolySpeed>(std::vector<double>{1.0, 0.2, 0.05}),
      std::make_shared<PolySpeed>(std::vector<double>{1.0, 0.0, -0.3}), std::make_shared<PowerSpeed>(0.8, 0.4),
      std::make_shared<ScaledSpeed>(std::make_shared<LogSpeed>(3.0, 1.0), 2.0)};
  for (const auto& m : models)
    for (double r : {0.35, 0.5, 0.77, 0.95}) {
      CHECK(m->dc(r) == doctest::Approx(central([&](double x) { return m->c(x); }, r)).epsilon(1e-7));
      CHECK(m->d2c(r) == doctest::Approx(central([&](double x) { return m->dc(x); }, r)).epsilon(1e-6));
    }
}

TEST_CASE("log rho derivative matches a centred difference") {
  auto lp = make_log_profile({{2.0, 0.5}}, {}, 0.3);
  for (double r = 0.32; r < 0.99; r += 0.05) {
    const double fd = central([&](double x) { return lp.layer_rho(0, x); }, r, 1e-6);
    CHECK(lp.layer_drho(0, r) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(lp.layer_drho(0, r) == doctest::Approx(0.5 / (2 * r * std::sqrt(2.0 + 0.5 * std::log(r)))).epsilon(1e-12));
  }
}

TEST_CASE("spline is shape preserving and flagged as C1 only") {
  SplineSpeed s({{0.0, 1.0}, {0.3, 1.1}, {0.6, 1.15}, {1.0, 1.4}});
  CHECK_FALSE(s.is_c11());
  for (double r = 0.01; r < 1.0; r += 0.01) CHECK(s.dc(r) >= 0.0);
  CHECK(s.c(0.6) == doctest::Approx(1.15));
  LayeredProfile P(0.0, {}, {std::make_shared<SplineSpeed>(s)});
  CHECK_FALSE(check_smooth_herglotz(P).regularity_note.empty());
}

TEST_CASE("closed-form log shortcuts agree with generic quadrature") {
  auto log = std::make_shared<LogSpeed>(2.0, 0.5);
  LayeredProfile fast(0.3, {}, {log});
  LayeredProfile slow(0.3, {}, {std::make_shared<Opaque>(log)});
  // rho(0.3) = 1.182: lower p reach the inner wall.
  CHECK_FALSE(layer_turning_radius(fast, 0, 0.9).has_value());
  CHECK_FALSE(layer_turning_radius(slow, 0, 0.9).has_value());
  for (double p : {1.2, 1.3, 1.38}) {
    const double rt = *layer_turning_radius(fast, 0, p);
    CHECK(rt == doctest::Approx(std::exp((p * p - 2.0) / 0.5)).epsilon(1e-13));
    CHECK(*layer_turning_radius(slow, 0, p) == doctest::Approx(rt).epsilon(1e-12));
    CHECK(radial_action(fast, 0, rt, 1.0, p) ==
          doctest::Approx(radial_action(slow, 0, rt, 1.0, p)).epsilon(1e-9));
  }
}

TEST_CASE("Herglotz checks") {
  CHECK(check_smooth_herglotz(LayeredProfile(0.0, {}, {constant(1.0)})).passed);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(1.0, 4.0), ub(0.1, 1.0);
  for (int i = 0; i < 20; ++i) CHECK(check_smooth_herglotz(make_log_profile({{ua(rng), ub(rng)}}, {}, 0.3)).passed);

  // c = r^2: r / c = 1 / r decreases.
  LayeredProfile bad(0.2, {}, {std::make_shared<PowerSpeed>(1.0, 2.0)});
  auto rep = check_smooth_herglotz(bad);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(rep.violations.empty());

  // rho jumps up going down (0.4 below vs 0.6 above): head-wave geometry.
  LayeredProfile up(0.0, {0.6}, {constant(1.0), constant(1.5)});
  auto d1 = check_distributional_herglotz(up);
  CHECK(d1.smooth_ok);
  CHECK(d1.passed);
  // rho jumps down: rays dive just below the interface.
  LayeredProfile down(0.0, {0.6}, {constant(1.0), constant(0.8)});
  auto d2 = check_distributional_herglotz(down);
  CHECK(d2.smooth_ok);
  CHECK_FALSE(d2.passed);
  auto one = check_distributional_herglotz(LayeredProfile(0.0, {}, {constant(1.0)}));
  CHECK(one.passed == check_smooth_herglotz(LayeredProfile(0.0, {}, {constant(1.0)})).passed);
}

TEST_CASE("distributional pass implies smooth pass on random two-layer profiles") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(1.0, 4.0), ub(-0.5, 1.0), ur(0.4, 0.8);
  for (int i = 0; i < 50; ++i) {
    const double a0 = ua(rng), b0 = ub(rng), a1 = ua(rng), b1 = ub(rng);
    if (b0 <= 0.0 || b1 <= 0.0) {
      // Power layers with a random exponent cover the failing side too.
      LayeredProfile P(0.0, {ur(rng)},
                       {std::make_shared<PowerSpeed>(a0, b0 + 0.5), std::make_shared<PowerSpeed>(a1, b1 + 0.5)});
      auto d = check_distributional_herglotz(P);
      if (d.passed) CHECK(check_smooth_herglotz(P).passed);
      continue;
    }
    auto P = make_log_profile({{a0, b0}, {a1, b1}}, {ur(rng)}, 0.3);
    auto d = check_distributional_herglotz(P);
    if (d.passed) CHECK(check_smooth_herglotz(P).passed);
  }
}

TEST_CASE("Herglotz profiles have rho increasing on every sampled grid") {
  auto P = make_log_profile({{2.0, 0.5}, {1.2, 0.8}}, {0.6}, 0.3);
  REQUIRE(check_smooth_herglotz(P).passed);
  for (const auto& layer : emit_phase_space(P, 257))
    for (std::size_t i = 1; i < layer.size(); ++i) CHECK(layer[i].rho > layer[i - 1].rho);
}

TEST_CASE("phase-space samples") {
  auto s = emit_phase_space(LayeredProfile(0.0, {}, {constant(1.0)}), 3);
  REQUIRE(s.size() == 1);
  REQUIRE(s[0].size() == 3);
  CHECK(s[0][0].r == 0.0);
  CHECK(s[0][0].rho == 0.0);
  CHECK(s[0][2].r == 1.0);
  CHECK(s[0][2].rho == 1.0);
  auto lp = emit_phase_space(make_log_profile({{2.0, 0.5}}, {}, 0.3), 5);
  for (const auto& x : lp[0]) CHECK(x.rho == doctest::Approx(std::sqrt(2.0 + 0.5 * std::log(x.r))));
  auto two = emit_phase_space(LayeredProfile(0.0, {0.6}, {constant(1.0), constant(1.5)}), 4);
  REQUIRE(two.size() == 2);
  // Innermost layer first.
  CHECK(two[0].back().r == doctest::Approx(0.6));
  CHECK(two[1].front().r == doctest::Approx(0.6));
  CHECK(two[0].back().rho != doctest::Approx(two[1].front().rho));
}

TEST_CASE("profile JSON round trip and schema errors") {
  auto P = make_log_profile({{2.0, 0.5}, {1.2, 0.8}}, {0.6}, 0.3,
                            std::vector<LayerDensity>{{1.0, std::nullopt}, {2.0, std::nullopt}});
  auto Q = profile_from_json(P.to_json());
  CHECK(Q.hash() == P.hash());
  CHECK(Q.layer_c(1, 0.5) == P.layer_c(1, 0.5));
  CHECK(Q.layer_density(1) == 2.0);
  nlohmann::json spline = {{"inner_radius", 0.0},
                           {"interfaces", nlohmann::json::array()},
                           {"layers", {{{"model", "spline"}, {"knots", {{0.0, 1.0}, {0.4, 1.1}, {0.7, 1.2}, {1.0, 1.3}}}}}}};
  CHECK(profile_from_json(spline).layer_c(0, 0.4) == doctest::Approx(1.1));
  CHECK_THROWS_AS(profile_from_json(nlohmann::json::array()), InvalidArgument);
  CHECK_THROWS_AS(profile_from_json({{"layers", {{{"model", "bogus"}}}}}), InvalidArgument);
  CHECK_THROWS_AS(profile_from_json({{"layers", {{{"model", "constant"}}}}}), InvalidArgument);
  CHECK_THROWS_AS(load_profile("/nonexistent/profile.json"), InvalidArgument);
}

TEST_CASE("hash follows the profile content") {
  auto a = make_log_profile({{2.0, 0.5}}, {}, 0.3);
  auto b = make_log_profile({{2.0, 0.5000001}}, {}, 0.3);
  auto c = make_log_profile({{2.0, 0.5}}, {}, 0.3);
  CHECK(a.hash() != b.hash());
  CHECK(a.hash() == c.hash());
  auto two = make_log_profile({{2.0, 0.5}, {1.2, 0.8}}, {0.6}, 0.3);
  CHECK(two.with_interface(0, 0.55).hash() != two.hash());
}
