#include "oed/rng.hpp"

#include <cmath>
#include <numbers>

namespace oed {

double CounterRng::next_gaussian() {
  if (have_cached_gaussian_) {
    have_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  const double u1 = next_double_open();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = r * std::sin(angle);
  have_cached_gaussian_ = true;
  return r * std::cos(angle);
}

std::vector<long> CounterRng::sample_without_replacement(long n, long k) {
  if (k < 0 || k > n)
    throw ArgumentError("sample_without_replacement: need 0 <= k <= n");
  std::vector<long> pool(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  std::vector<long> out;
  out.reserve(static_cast<std::size_t>(k));
  for (long i = 0; i < k; ++i) {
    const long j =
        i + static_cast<long>(next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(j)]);
    out.push_back(pool[static_cast<std::size_t>(i)]);
  }
  return out;
}

long CounterRng::next_categorical(const std::vector<double>& cumulative) {
  if (cumulative.empty() || cumulative.back() <= 0.0)
    throw ArgumentError("next_categorical: empty or zero-mass distribution");
  const double u = next_double() * cumulative.back();
  // first index with cumulative > u
  long lo = 0, hi = static_cast<long>(cumulative.size()) - 1;
  while (lo < hi) {
    const long mid = lo + (hi - lo) / 2;
    if (cumulative[static_cast<std::size_t>(mid)] > u)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

std::vector<double> cumulative_weights(const std::vector<double>& weights) {
  std::vector<double> cum(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0))
      throw ArgumentError("cumulative_weights: negative or NaN weight");
    acc += weights[i];
    cum[i] = acc;
  }
  return cum;
}

}  // namespace oed
