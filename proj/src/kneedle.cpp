#include "gnpn/kneedle.hpp"

#include <algorithm>
#include <cmath>

#include "gnpn/error.hpp"

namespace gnpn {

namespace {

template <class Cmp>
std::vector<bool> extrema(const std::vector<double>& d, Cmp cmp) {
  const std::size_t n = d.size();
  std::vector<bool> out(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = d[i == 0 ? 0 : i - 1];
    const double right = d[std::min(i + 1, n - 1)];
    out[i] = cmp(d[i], left) && cmp(d[i], right);
  }
  return out;
}

}  // namespace

KneeResult kneedle(const std::vector<double>& values, double sensitivity, bool online) {
  const std::size_t n = values.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "kneedle needs at least 3 values");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw Error(ErrorKind::InvalidArgument, "kneedle needs a non-constant curve");

  const double step = 1.0 / static_cast<double>(n - 1);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = (values[i] - lo) / (hi - lo);
  const double y_top = *std::max_element(y.begin(), y.end());
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = (y_top - y[i]) - static_cast<double>(i) * step;

  const std::vector<bool> is_max = extrema(diff, [](double a, double b) { return a >= b; });
  const std::vector<bool> is_min = extrema(diff, [](double a, double b) { return a <= b; });
  const auto first_max = std::find(is_max.begin(), is_max.end(), true);
  if (first_max == is_max.end()) throw Error(ErrorKind::NoKnee, "difference curve has no local maximum");

  // mean |dx| over equally spaced points, computed the way a diff/mean would
  double dx_sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) dx_sum += static_cast<double>(i) * step - static_cast<double>(i - 1) * step;
  const double shift = sensitivity * std::abs(dx_sum / static_cast<double>(n - 1));

  KneeResult result;
  double threshold = 0.0;
  std::size_t threshold_index = 0;
  bool active = true;
  for (auto i = static_cast<std::size_t>(first_max - is_max.begin()); i + 1 < n; ++i) {
    if (is_max[i]) {
      threshold = diff[i] - shift;
      threshold_index = i;
      active = true;
    }
    if (is_min[i]) {
      threshold = 0.0;
      active = false;
    }
    if (active && diff[i + 1] < threshold) {
      result = KneeResult{threshold_index, values[threshold_index], true};
      if (!online) return result;
    }
  }
  if (!result.found) throw Error(ErrorKind::NoKnee, "no knee confirmed");
  return result;
}

}  // namespace gnpn
