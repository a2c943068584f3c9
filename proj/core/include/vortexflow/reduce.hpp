#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vortexflow {

/// Pairwise (cascade) summation with a fixed split, so the result depends
/// only on the input order and never on scheduling.
double pairwise_sum(std::span<const double> values);

/// Convenience for map-then-reduce: fills a scratch buffer with f(k) for
/// k in [0, count) and reduces it pairwise.
template <typename F>
double pairwise_reduce(std::size_t count, F&& f) {
  std::vector<double> terms(count);
  for (std::size_t k = 0; k < count; ++k) terms[k] = f(k);
  return pairwise_sum(terms);
}

}  // namespace vortexflow
