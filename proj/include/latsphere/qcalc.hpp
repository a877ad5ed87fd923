#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace latsphere {

// Exact cardinality. Every quantity counted here is a set size, so values are
// never negative; subtraction is only used where the result is known to be >= 0.
using BigCount = boost::multiprecision::cpp_int;

inline std::string to_decimal(const BigCount& c) { return c.str(); }

// Exact p^e.
BigCount ppow(unsigned long p, unsigned e);

/* Gaussian binomial [l choose k]_q.
 * Returns 0 for k < 0 or k > l; throws ValidationError for q < 2. */
BigCount gaussian_binomial(long l, long k, unsigned long q);

} // namespace latsphere
