#pragma once

#include <cstddef>

namespace planetspec::detail {

// out[j] = sum_i weight[i] cos(omega[i] (t0 + j dt)) for j < count.
// The phase is advanced by rotation and re-seeded every block, so the drift
// stays at a few ulps per block.
void trace_block(const double* omega, const double* weight, std::size_t modes, double t0,
                 double dt, std::size_t count, double* out);

}  // namespace planetspec::detail
