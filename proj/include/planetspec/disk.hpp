#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace planetspec {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Periodic basic ray of the unit disk with rotation number p/q: q chords,
// each subtending 2 pi p / q. The diameter is p/q = 1/2.
struct ChordRay {
  std::int64_t p = 0;
  std::int64_t q = 0;
  double opening_angle = 0.0;  // 2 pi p / q
  double length = 0.0;         // 2 q sin(pi p / q) in double precision
  std::string exact;           // "2*q*sin(p*pi/q)"
  std::string decimal;         // 50 significant digits
};

// Requires gcd(p, q) = 1 and 1 <= p < q / 2, or p/q = 1/2.
ChordRay make_chord(std::int64_t p, std::int64_t q);

std::uint64_t euler_totient(std::uint64_t n);
// phi(a b) == phi(b), for a > 1 and b > 1.
bool phi_product_check(std::uint64_t a, std::uint64_t b);
// Degree over Q of cos(2 pi / n).
std::uint64_t cos_degree(std::uint64_t n);
// Whether R and Q(zeta_a) meet in the same field as R and Q(zeta_b).
bool real_cyclotomic_equal(std::uint64_t a, std::uint64_t b);

struct SineRatioResult {
  bool rational = false;
  std::optional<BigRational> witness;  // the exact ratio when rational
  std::string reason;                  // which branch of the case analysis decided
  // Continued-fraction probe of the 50-digit ratio, denominators up to 10^6.
  bool probe_rational = false;
  std::optional<BigRational> probe;
  bool agrees() const { return rational == probe_rational; }
};

// Decides whether sin(2 pi r1) / sin(2 pi r2) is rational for distinct
// rationals in (0, 1/4].
SineRatioResult sine_ratio_rational(const BigRational& r1, const BigRational& r2);

struct RationalPair {
  std::size_t i = 0, j = 0;  // indices into chords, L_i / L_j = ratio
  BigRational ratio;
};

struct HarmonicCoincidence {
  std::size_t i = 0, j = 0;
  std::int64_t k_i = 0, k_j = 0;  // k_i L_i = k_j L_j
  double length = 0.0;
};

struct LspScanReport {
  int q_max = 0;
  int winding_max = 0;
  std::vector<ChordRay> chords;  // sorted by length
  bool pairwise_distinct = true;
  std::vector<RationalPair> rational_pairs;
  std::vector<HarmonicCoincidence> coincidences;
  std::size_t pairs_checked = 0;
  std::size_t probe_disagreements = 0;
};

LspScanReport simple_lsp_scan(int q_max, int winding_max = 12);

}  // namespace planetspec
