#include "circ/reduce.hpp"

namespace circ {

namespace {
constexpr std::size_t kBlock = 32;

double sum_rec(const double* x, std::size_t n) {
    if (n <= kBlock) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return sum_rec(x, half) + sum_rec(x + half, n - half);
}
}  // namespace

double pairwise_sum(std::span<const double> x) { return sum_rec(x.data(), x.size()); }

}  // namespace circ
