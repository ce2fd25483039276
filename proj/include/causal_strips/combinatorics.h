#ifndef CAUSAL_STRIPS_COMBINATORICS_H
#define CAUSAL_STRIPS_COMBINATORICS_H

#include "big_count.h"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace causal_strips {

BigCount binomial(std::size_t n, std::size_t k);

// Order-preserving merges of a length-x and a length-y sequence, summed
// over the number of blocks the shorter one is cut into. Symmetric in its
// arguments; S(x, 0) = 1.
BigCount merge_count_S(std::size_t x, std::size_t y);

// Product of S(n * i, n) for i = 1 .. k-1; T(n, 1) = 1.
BigCount merge_count_T(std::size_t n, std::size_t k);

class SizeCapExceeded : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t brute_force_merge_cap = 10;

// Enumerates interleavings explicitly. Throws SizeCapExceeded when the
// lengths sum above brute_force_merge_cap.
BigCount brute_force_merge_count(const std::vector<std::size_t> &lengths);

} // namespace causal_strips

#endif
