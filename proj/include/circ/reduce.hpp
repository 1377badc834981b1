#pragma once

#include <cstddef>
#include <span>

namespace circ {

/// Fixed-order pairwise summation. The split points depend only on the
/// length, so the result is bitwise independent of thread count and of
/// how the buffer was filled.
double pairwise_sum(std::span<const double> x);

}  // namespace circ
