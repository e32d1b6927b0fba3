#include <algorithm>
#include <cmath>
#include <memory>

#include "doctest.h"
#include "oracles.hpp"
#include "planetspec/common.hpp"
#include "planetspec/modesum.hpp"
#include "planetspec/profile.hpp"

using namespace planetspec;

namespace {

const std::vector<LayerDensity> kUnitDensity{{1.0, {}}};

LayeredProfile dense_ball(double c = 1.0) {
  return LayeredProfile(0.0, {}, {std::make_shared<ConstantSpeed>(c)}, kUnitDensity);
}

std::vector<double> order(const ModeTable& t, int l) {
  std::vector<double> out;
  for (const auto& e : t.entries)
    if (e.l == l) out.push_back(e.omega);
  return out;
}

double max_rel_error(const std::vector<double>& got, const std::vector<double>& ref, std::size_t from = 0) {
  double worst = 0.0;
  for (std::size_t i = from; i < std::min(got.size(), ref.size()); ++i)
    worst = std::max(worst, std::abs(got[i] - ref[i]) / ref[i]);
  return worst;
}

}  // namespace

TEST_CASE("airy phase limits and continuity") {
  CHECK(airy_neumann_phase(0.0) == doctest::Approx(-2 * M_PI / 3).epsilon(1e-12));
  CHECK(airy_neumann_phase(-40.0) == doctest::Approx(-M_PI / 2).epsilon(1e-9));
  const double x = 60.0, z = 2.0 / 3.0 * std::pow(x, 1.5);
  CHECK(airy_neumann_phase(x) == doctest::Approx(z - 0.75 * M_PI + 7 * z / (32 * x * x * x)).epsilon(1e-9));
  // Branch switches sit at -8, 3 and 20.
  for (double s : {-8.0, 3.0, 20.0})
    for (double eps : {0.0, 0.05, -0.05}) {
      CAPTURE(s);
      CAPTURE(eps);
      CHECK(std::abs(airy_neumann_phase(s + 1e-9, eps) - airy_neumann_phase(s - 1e-9, eps)) < 1e-6);
    }
  double prev = airy_neumann_phase(-12.0);
  for (int i = 1; i <= 4000; ++i) {
    const double x = -12.0 + 0.01 * i, v = airy_neumann_phase(x);
    // Minimum at x = 0; exponentially flat far into the evanescent side.
    if (x > 1e-9) CHECK(v > prev);
    else if (x > -4.0) CHECK(v < prev);
    else CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("constant ball frequencies match finite differences") {
  auto P = dense_ball();
  auto t = wkb_eigenfrequencies(P, 50, 140.0);
  CHECK(t.failures.empty());
  CHECK(t.profile_hash == P.hash());
  for (int l : {0, 10, 50}) {
    CAPTURE(l);
    auto got = order(t, l);
    REQUIRE(got.size() >= 20);
    auto ref = oracles::fd_frequencies([](double) { return 1.0; }, 0.0, l * (l + 1.0), 20);
    // Frequencies are sorted in n and overtone numbers start at 0.
    CHECK(std::is_sorted(got.begin(), got.end()));
    CHECK(max_rel_error(got, ref) < 1e-3);
  }
  for (const auto& e : t.entries) CHECK(e.omega <= 140.0);
}

TEST_CASE("annulus with a log profile matches finite differences") {
  const double R = 0.5;
  auto P = make_log_profile({{2.0, 0.5}}, {}, R, kUnitDensity);
  auto t = wkb_eigenfrequencies(P, 0, 200.0);
  auto got = order(t, 0);
  REQUIRE(got.size() >= 25);
  auto ref = oracles::fd_frequencies([&](double r) { return P.layer_c(0, r); }, R, 0.0, 26);
  // Neumann at both walls admits the constant at omega = 0; the table starts at n = 1.
  REQUIRE(ref[0] < 1e-2);
  ref.erase(ref.begin());
  CHECK(t.entries.front().n == 1);
  CHECK(max_rel_error(got, ref, 4) < 5e-3);
  CHECK(max_rel_error(got, ref) < 1e-3);
}

TEST_CASE("frequencies scale with the speed and spacing approaches pi / T") {
  auto slow = wkb_eigenfrequencies(dense_ball(1.0), 3, 80.0);
  auto fast = wkb_eigenfrequencies(dense_ball(2.0), 3, 160.0);
  REQUIRE(slow.entries.size() == fast.entries.size());
  for (std::size_t i = 0; i < slow.entries.size(); ++i) {
    CHECK(fast.entries[i].l == slow.entries[i].l);
    CHECK(fast.entries[i].omega == doctest::Approx(2 * slow.entries[i].omega).epsilon(1e-8));
  }
  // The one-way radial time is 1, so l = 0 overtones are spaced by pi.
  auto w = order(slow, 0);
  REQUIRE(w.size() > 10);
  CHECK(w.back() - w[w.size() - 2] == doctest::Approx(M_PI).epsilon(1e-3));
}

TEST_CASE("weighted mode count follows the Weyl law") {
  const double W = 100.0;
  auto t = wkb_eigenfrequencies(dense_ball(), 110, W);
  double count = 0.0;
  for (const auto& e : t.entries) count += 2 * e.l + 1;
  const double weyl = 2 * W * W * W / (9 * M_PI);
  CHECK(std::abs(count / weyl - 1.0) < 0.1);
}

TEST_CASE("mode computation needs a density model") {
  LayeredProfile bare(0.0, {}, {std::make_shared<ConstantSpeed>(1.0)});
  CHECK_THROWS_AS(wkb_eigenfrequencies(bare, 2, 10.0), InvalidArgument);
  CHECK_THROWS_AS(wkb_eigenfrequencies(dense_ball(), -1, 10.0), InvalidArgument);
  CHECK_THROWS_AS(wkb_eigenfrequencies(dense_ball(), 2, 0.0), InvalidArgument);
}

TEST_CASE("transmitting orders of a layered profile are unsupported") {
  LayeredProfile hw(0.0, {0.6}, {std::make_shared<ConstantSpeed>(1.0), std::make_shared<ConstantSpeed>(1.5)},
                    std::vector<LayerDensity>{{1.0, {}}, {1.0, {}}});
  // l = 0 transmits straight through the interface.
  CHECK(std::isnan(quantization_phase(hw, 0, 50.0)));
  // k / omega = 0.5 is totally reflected.
  CHECK(std::isfinite(quantization_phase(hw, 25, 50.0)));
}

TEST_CASE("trace of a single mode and linearity") {
  ModeTable one;
  one.entries = {{0, 2, 3.0}};
  const double sigma = 0.1;
  auto z = trace_series(one, 0.0, 2.0, 201, sigma);
  REQUIRE(z.values.size() == 201);
  CHECK(z.dt == doctest::Approx(0.01));
  for (std::size_t i = 0; i < z.values.size(); i += 17)
    CHECK(z.values[i] == doctest::Approx(5 * std::cos(3 * z.t(i)) * std::exp(-0.5 * 0.09)).epsilon(1e-12));

  ModeTable two;
  two.entries = {{1, 0, 7.5}};
  ModeTable both;
  both.entries = {{0, 2, 3.0}, {1, 0, 7.5}};
  auto a = trace_series(two, 0.0, 2.0, 201, sigma), b = trace_series(both, 0.0, 2.0, 201, sigma);
  for (std::size_t i = 0; i < b.values.size(); ++i)
    CHECK(b.values[i] == doctest::Approx(z.values[i] + a.values[i]).epsilon(1e-12));
  CHECK_THROWS_AS(trace_series(one, 1.0, 0.0, 10, sigma), InvalidArgument);
  CHECK_THROWS_AS(trace_series(one, 0.0, 1.0, 10, 0.0), InvalidArgument);
}

TEST_CASE("peak finding on a synthetic trace") {
  SmoothedTrace tr;
  tr.t0 = 0.0;
  tr.dt = 0.01;
  tr.sigma = 0.05;
  for (int i = 0; i <= 1000; ++i) {
    const double t = 0.01 * i;
    tr.values.push_back(3 * std::exp(-std::pow((t - 4.0) / 0.05, 2)) - std::exp(-std::pow((t - 7.0) / 0.05, 2)));
  }
  auto peaks = find_peaks(tr);
  REQUIRE(peaks.size() >= 2);
  CHECK(peaks[0].t == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(peaks[1].t == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(peaks[0].prominence > peaks[1].prominence);
  // A shoulder 0.05 from the main peak is dropped under a 0.1 separation.
  tr.values[405] = tr.values[404] + 0.5;
  auto all = find_peaks(tr), merged = find_peaks(tr, 0.1);
  CHECK(all.size() > merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i)
    for (std::size_t j = i + 1; j < merged.size(); ++j) CHECK(std::abs(merged[i].t - merged[j].t) >= 0.1);

  auto m = detect_peaks(tr, {4.02, 7.0, 9.99, 12.0}, 0.1);
  REQUIRE(m.size() == 4);
  CHECK(m[0].matched);
  CHECK(m[0].offset == doctest::Approx(-0.02).epsilon(1e-9));
  CHECK(m[1].matched);
  CHECK_FALSE(m[2].covered);
  CHECK_FALSE(m[3].covered);
  CHECK_FALSE(m[3].matched);
}
