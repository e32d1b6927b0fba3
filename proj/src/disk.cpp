#include "planetspec/disk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "planetspec/common.hpp"

namespace planetspec {

namespace {

using Big50 = boost::multiprecision::cpp_dec_float_50;

const Big50& pi50() {
  static const Big50 v = boost::math::constants::pi<Big50>();
  return v;
}

Big50 sin_turns(const BigRational& r) {  // sin(2 pi r)
  const Big50 x = Big50(numerator(r)) / Big50(denominator(r));
  return sin(2 * pi50() * x);
}

std::int64_t to_i64(const BigInt& v) { return static_cast<std::int64_t>(v); }

// Best rational approximation with denominator at most max_den, accepted
// when it reproduces x to 40 digits.
std::optional<BigRational> probe_rational(const Big50& x, std::int64_t max_den) {
  BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  Big50 y = x;
  const Big50 eps("1e-40");
  for (int it = 0; it < 60; ++it) {
    const Big50 a = floor(y);
    const BigInt ai = static_cast<BigInt>(a);
    const BigInt h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    const Big50 approx = Big50(h1) / Big50(k1);
    const Big50 ax = abs(x);
    if (abs(approx - x) <= eps * (ax > 1 ? ax : Big50(1))) return BigRational(h1, k1);
    const Big50 frac = y - a;
    if (frac == 0) break;
    y = 1 / frac;
  }
  return std::nullopt;
}

}  // namespace

ChordRay make_chord(std::int64_t p, std::int64_t q) {
  const bool diameter = p == 1 && q == 2;
  if (!diameter && !(p >= 1 && 2 * p < q && std::gcd(p, q) == 1))
    throw InvalidArgument("chord rotation number must be p/q in lowest terms with p < q/2, or 1/2");
  ChordRay c;
  c.p = p;
  c.q = q;
  c.opening_angle = 2.0 * kPi * static_cast<double>(p) / static_cast<double>(q);
  c.length = 2.0 * static_cast<double>(q) * std::sin(kPi * static_cast<double>(p) / static_cast<double>(q));
  c.exact = "2*" + std::to_string(q) + "*sin(" + std::to_string(p) + "*pi/" + std::to_string(q) + ")";
  const Big50 L = 2 * Big50(q) * sin(pi50() * Big50(p) / Big50(q));
  c.decimal = L.str(50);
  return c;
}

std::uint64_t euler_totient(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("totient needs n >= 1");
  std::uint64_t result = n;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f) continue;
    while (n % f == 0) n /= f;
    result -= result / f;
  }
  if (n > 1) result -= result / n;
  return result;
}

bool phi_product_check(std::uint64_t a, std::uint64_t b) {
  if (a <= 1 || b <= 1) throw InvalidArgument("phi_product_check needs a > 1 and b > 1");
  return euler_totient(a * b) == euler_totient(b);
}

std::uint64_t cos_degree(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("cos_degree needs n >= 1");
  if (n <= 2) return 1;
  return euler_totient(n) / 2;
}

bool real_cyclotomic_equal(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) throw InvalidArgument("real_cyclotomic_equal needs positive integers");
  auto small = [](std::uint64_t n) { return n == 1 || n == 2 || n == 3 || n == 4 || n == 6; };
  return a == b || (a == 2 * b && b % 2 == 1) || (b == 2 * a && a % 2 == 1) || (small(a) && small(b));
}

SineRatioResult sine_ratio_rational(const BigRational& r1, const BigRational& r2) {
  const BigRational quarter(1, 4);
  for (const auto* r : {&r1, &r2})
    if (*r <= 0 || *r > quarter) throw InvalidArgument("sine ratio arguments must lie in (0, 1/4]");
  if (r1 == r2) throw InvalidArgument("sine ratio arguments must differ");

  SineRatioResult res;
  // With s = 1/4 - r the sines become cosines c_s = cos(2 pi s), s in [0, 1/4).
  const BigRational s1 = quarter - r1, s2 = quarter - r2;
  if (s1 == 0 || s2 == 0) {
    const BigRational& s = s1 == 0 ? s2 : s1;
    const std::int64_t q = to_i64(denominator(s));
    // c_s is rational exactly when Q(c_s) = Q, i.e. q in {1, 2, 3, 4, 6};
    // s < 1/4 forces q >= 5, which leaves q = 6 and c_s = 1/2.
    if (real_cyclotomic_equal(1, static_cast<std::uint64_t>(q))) {
      if (s != BigRational(1, 6)) throw std::logic_error("unexpected rational cosine");
      res.rational = true;
      res.witness = s1 == 0 ? BigRational(2) : BigRational(1, 2);
      res.reason = "one argument is 1/4 and the other 1/12";
    } else {
      res.reason = "cosine of 2 pi s with denominator " + std::to_string(q) + " is irrational";
    }
  } else {
    std::int64_t p1 = to_i64(numerator(s1)), q1 = to_i64(denominator(s1));
    std::int64_t p2 = to_i64(numerator(s2)), q2 = to_i64(denominator(s2));
    if (!real_cyclotomic_equal(static_cast<std::uint64_t>(q1), static_cast<std::uint64_t>(q2))) {
      res.reason = "real cyclotomic fields of " + std::to_string(q1) + " and " + std::to_string(q2) +
                   " differ";
    } else if (q1 == q2) {
      // Distinct numerators: cosines of a basis of Q(c_{1/q}) are independent.
      res.reason = "distinct basis cosines for denominator " + std::to_string(q1);
    } else {
      if (q2 == 2 * q1) std::swap(p1, p2), std::swap(q1, q2);
      // Now q1 = 2 q2 with q2 odd, and c_{p1/q1} = -c_{pt/q2}.
      const std::int64_t pt = (q2 - p1) / 2;
      if (pt == p2) throw std::logic_error("reduced numerators coincide");
      res.reason = "reduces to distinct basis cosines for denominator " + std::to_string(q2);
    }
  }

  const Big50 ratio = sin_turns(r1) / sin_turns(r2);
  res.probe = probe_rational(ratio, 1000000);
  res.probe_rational = res.probe.has_value();
  return res;
}

LspScanReport simple_lsp_scan(int q_max, int winding_max) {
  if (q_max < 2) throw InvalidArgument("q_max must be at least 2");
  if (winding_max < 1) throw InvalidArgument("winding_max must be at least 1");
  LspScanReport rep;
  rep.q_max = q_max;
  rep.winding_max = winding_max;
  rep.chords.push_back(make_chord(1, 2));
  for (std::int64_t q = 3; q <= q_max; ++q)
    for (std::int64_t p = 1; 2 * p < q; ++p)
      if (std::gcd(p, q) == 1) rep.chords.push_back(make_chord(p, q));
  std::stable_sort(rep.chords.begin(), rep.chords.end(),
                   [](const ChordRay& a, const ChordRay& b) { return a.length < b.length; });

  const std::size_t n = rep.chords.size();
  // Segment length 2 sin(pi p / q) = 2 sin(2 pi r) with r = p / (2 q).
  std::vector<BigRational> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = BigRational(rep.chords[i].p, 2 * rep.chords[i].q);

  struct PairOut {
    std::vector<RationalPair> rational;
    std::size_t checked = 0, disagreements = 0;
    bool distinct = true;
  };
  std::vector<PairOut> rows(n);
  parallel_for(n, [&](std::size_t i) {
    auto& out = rows[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      ++out.checked;
      const BigRational qratio(rep.chords[i].q, rep.chords[j].q);
      if (r[i] == r[j]) {
        // Same segment length; lengths differ by the segment count.
        if (qratio == 1) out.distinct = false;
        out.rational.push_back({i, j, qratio});
        continue;
      }
      const auto s = sine_ratio_rational(r[i], r[j]);
      if (!s.agrees()) ++out.disagreements;
      if (s.rational) {
        const BigRational ratio = qratio * *s.witness;
        if (ratio == 1) out.distinct = false;
        out.rational.push_back({i, j, ratio});
      }
    }
  });
  for (auto& row : rows) {
    rep.pairs_checked += row.checked;
    rep.probe_disagreements += row.disagreements;
    rep.pairwise_distinct = rep.pairwise_distinct && row.distinct;
    rep.rational_pairs.insert(rep.rational_pairs.end(), row.rational.begin(), row.rational.end());
  }
  // k_i L_i = k_j L_j with L_i / L_j = a / b in lowest terms means
  // (k_i, k_j) is a multiple of (b, a).
  for (const auto& rp : rep.rational_pairs) {
    const auto a = to_i64(numerator(rp.ratio)), b = to_i64(denominator(rp.ratio));
    for (std::int64_t t = 1; t * std::max(a, b) <= winding_max; ++t)
      rep.coincidences.push_back({rp.i, rp.j, t * b, t * a, static_cast<double>(t * b) * rep.chords[rp.i].length});
  }
  return rep;
}

}  // namespace planetspec
