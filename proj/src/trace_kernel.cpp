#include "trace_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace planetspec::detail {

namespace {
constexpr std::size_t kModeBlock = 512;  // four arrays of this size stay in L1
constexpr std::size_t kReseed = 256;
}  // namespace

void trace_block(const double* omega, const double* weight, std::size_t modes, double t0,
                 double dt, std::size_t count, double* out) {
  std::fill(out, out + count, 0.0);
  alignas(64) double re[kModeBlock], im[kModeBlock], cr[kModeBlock], ci[kModeBlock];
  for (std::size_t i0 = 0; i0 < modes; i0 += kModeBlock) {
    const std::size_t nb = std::min(kModeBlock, modes - i0);
    for (std::size_t i = 0; i < nb; ++i) {
      cr[i] = std::cos(omega[i0 + i] * dt);
      ci[i] = std::sin(omega[i0 + i] * dt);
    }
    for (std::size_t j0 = 0; j0 < count; j0 += kReseed) {
      const double t = t0 + dt * static_cast<double>(j0);
      for (std::size_t i = 0; i < nb; ++i) {
        re[i] = weight[i0 + i] * std::cos(omega[i0 + i] * t);
        im[i] = weight[i0 + i] * std::sin(omega[i0 + i] * t);
      }
      const std::size_t j1 = std::min(count, j0 + kReseed);
      for (std::size_t j = j0; j < j1; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < nb; ++i) {
          acc += re[i];
          const double x = re[i] * cr[i] - im[i] * ci[i];
          im[i] = re[i] * ci[i] + im[i] * cr[i];
          re[i] = x;
        }
        out[j] += acc;
      }
    }
  }
}

}  // namespace planetspec::detail
