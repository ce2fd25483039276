#include "causal_strips/combinatorics.h"

#include <algorithm>
#include <numeric>
#include <string>

using namespace std;

namespace causal_strips {

BigCount binomial(size_t n, size_t k) {
    if (k > n)
        return 0;
    k = min(k, n - k);
    BigCount result = 1;
    for (size_t i = 1; i <= k; ++i)
        result = result * (n - k + i) / i;
    return result;
}

BigCount merge_count_S(size_t x, size_t y) {
    if (x < y)
        swap(x, y);
    if (y == 0)
        return 1;
    BigCount total = 0;
    for (size_t j = 1; j <= y; ++j)
        total += binomial(y - 1, j - 1) * binomial(x + 1, j);
    return total;
}

BigCount merge_count_T(size_t n, size_t k) {
    if (n == 0 || k == 0)
        throw invalid_argument("merge_count_T needs n >= 1 and k >= 1");
    BigCount total = 1;
    for (size_t i = 1; i < k; ++i)
        total *= merge_count_S(n * i, n);
    return total;
}

namespace {
BigCount count_interleavings(vector<size_t> &remaining) {
    BigCount total = 0;
    bool any = false;
    for (size_t &left : remaining) {
        if (left == 0)
            continue;
        any = true;
        --left;
        total += count_interleavings(remaining);
        ++left;
    }
    return any ? total : BigCount(1);
}
} // namespace

BigCount brute_force_merge_count(const vector<size_t> &lengths) {
    const size_t sum = accumulate(lengths.begin(), lengths.end(), size_t(0));
    if (sum > brute_force_merge_cap)
        throw SizeCapExceeded("total length " + to_string(sum) +
                              " exceeds enumeration cap " +
                              to_string(brute_force_merge_cap));
    vector<size_t> remaining = lengths;
    return count_interleavings(remaining);
}

} // namespace causal_strips
