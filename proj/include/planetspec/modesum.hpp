#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "planetspec/profile.hpp"

namespace planetspec {

// Angular wavenumber k in beta^2 = c^-2 - k^2 / (omega r)^2.
//   Exact:  k^2 = l (l + 1), the value in the radial equation.
//   Langer: k = l + 1/2, the usual correction at a regular singular centre.
//   Auto:   Langer on the ball for l > 0, Exact otherwise.
enum class Wavenumber { Exact, Langer, Auto };

struct ModeOptions {
  Wavenumber k = Wavenumber::Auto;
};

struct ModeEntry {
  int n = 0;  // overtone
  int l = 0;  // angular order
  double omega = 0.0;
};

struct ModeFailure {
  int l = 0;
  int n = 0;
  std::string message;
};

struct ModeTable {
  std::vector<ModeEntry> entries;  // sorted by (l, n)
  std::vector<ModeFailure> failures;
  // Orders whose ray parameter fell outside the supported regimes.
  std::size_t skipped = 0;
  std::uint64_t profile_hash = 0;
  double omega_max = 0.0;
  int l_max = 0;
};

// -arg(Ai'(-x) + eps Ai(-x) + i (Bi'(-x) + eps Bi(-x))), continuous in x. For
// eps = 0 it grows like (2/3) x^1.5 - 3 pi / 4 and tends to -pi/2 as
// x -> -infinity. eps carries the amplitude-slope term of a Neumann end.
double airy_neumann_phase(double x, double eps = 0.0);

// Quantization function: the mode (n, l) sits at theta(omega) = n. Returns
// NaN when the order has no supported regime at this omega (a ray that
// transmits through the first interface on a layered profile).
double quantization_phase(const LayeredProfile& profile, int l, double omega,
                          const ModeOptions& opt = {});

// Roots of quantization_phase for l <= l_max and omega <= omega_max, in
// parallel over l. Requires a density model on the profile.
ModeTable wkb_eigenfrequencies(const LayeredProfile& profile, int l_max, double omega_max,
                               const ModeOptions& opt = {});

struct SmoothedTrace {
  double t0 = 0.0;
  double dt = 0.0;
  double sigma = 0.0;
  std::vector<double> values;
  double t(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  double t_end() const { return values.empty() ? t0 : t(values.size() - 1); }
};

// Z(t) = sum (2l + 1) cos(omega t) exp(-(sigma omega)^2 / 2) on a uniform
// grid of `points` samples over [t0, t1].
SmoothedTrace trace_series(const ModeTable& modes, double t0, double t1, std::size_t points,
                           double sigma);

struct Peak {
  std::size_t index = 0;
  double t = 0.0;
  double height = 0.0;      // |Z|
  double prominence = 0.0;  // height above the higher of the two key cols
};

// Local maxima of |Z|, most prominent first. With separation > 0 a maximum
// closer than that to a more prominent one is dropped: the side lobes of one
// smoothed singularity count once.
std::vector<Peak> find_peaks(const SmoothedTrace& trace, double separation = 0.0);

struct PeakMatch {
  double candidate = 0.0;
  bool covered = false;  // [T - window, T + window] lies inside the grid
  bool matched = false;  // a local maximum exists in the window
  double offset = 0.0;   // nearest local maximum minus T
  double prominence = 0.0;
};

std::vector<PeakMatch> detect_peaks(const SmoothedTrace& trace, const std::vector<double>& candidates,
                                    double window);

}  // namespace planetspec
