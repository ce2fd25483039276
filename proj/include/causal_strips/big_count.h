#ifndef CAUSAL_STRIPS_BIG_COUNT_H
#define CAUSAL_STRIPS_BIG_COUNT_H

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace causal_strips {

// Exact natural numbers; path and merge counts grow exponentially.
using BigCount = boost::multiprecision::cpp_int;

inline std::string to_string(const BigCount &value) {
    return value.str();
}

} // namespace causal_strips

#endif
