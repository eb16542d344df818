#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace afrac::detail {

// Banded Toeplitz operator along every grid row and column, restricted to masked nodes.
// band_x / band_y follow the line_band layout for lines of up to nmax nodes; an empty
// band skips that axis. out must be zeroed by the caller.
void axis_apply(const double* vals, const std::uint8_t* mask, int nx, int ny, const std::vector<double>& band_x,
                const std::vector<double>& band_y, double* out, int threads);

}  // namespace afrac::detail
