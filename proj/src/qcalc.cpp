#include "latsphere/qcalc.hpp"

#include "latsphere/error.hpp"

namespace latsphere {

BigCount ppow(unsigned long p, unsigned e)
{
    return boost::multiprecision::pow(BigCount(p), e);
}

BigCount gaussian_binomial(long l, long k, unsigned long q)
{
    if (q < 2)
        throw ValidationError("gaussian_binomial needs q >= 2, got " + std::to_string(q));
    if (k < 0 || l < 0 || k > l)
        return 0;
    if (k > l - k)
        k = l - k;

    // After step i the accumulator equals [l-k+i choose i]_q, so each division is exact.
    BigCount acc = 1;
    const BigCount qq = q;
    for (long i = 1; i <= k; ++i) {
        acc *= boost::multiprecision::pow(qq, static_cast<unsigned>(l - k + i)) - 1;
        acc /= boost::multiprecision::pow(qq, static_cast<unsigned>(i)) - 1;
    }
    return acc;
}

} // namespace latsphere
