#pragma once

#include <cstddef>
#include <vector>

namespace gnpn {

struct KneeResult {
  std::size_t index = 0;
  double threshold = 0.0;  // values[index]
  bool found = false;
};

/// Knee of a convex, decreasing curve sampled at equally spaced points.
///
/// x = i/(N-1), y normalised to [0, 1] and flipped, D = y' - x. Local maxima
/// and minima of D use non-strict comparisons with the edges clamped. A
/// maximum at m becomes a knee once D falls below D[m] - S * mean(dx) before
/// detection is switched off by a local minimum. With `online` the scan
/// keeps going and the last knee wins; otherwise the first one is returned.
///
/// Throws InvalidArgument for fewer than 3 values or a constant vector, and
/// NoKnee when nothing is confirmed.
KneeResult kneedle(const std::vector<double>& values, double sensitivity = 1.0, bool online = true);

}  // namespace gnpn
