#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace rank1 {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class Unresolvable : public std::runtime_error {
public:
    Unresolvable(const std::string& msg, long stage)
        : std::runtime_error(msg), stage_(stage) {}
    long stage() const { return stage_; }

private:
    long stage_;
};

inline std::int64_t to_i64(const BigInt& x) {
    if (x > std::numeric_limits<std::int64_t>::max() ||
        x < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("value exceeds int64 range: " + x.str());
    return static_cast<std::int64_t>(x);
}

inline bool fits_i64(const BigInt& x) {
    return x <= std::numeric_limits<std::int64_t>::max() &&
           x >= std::numeric_limits<std::int64_t>::min();
}

// smallest m >= 1 with m^den >= x^num, i.e. ceil(x^(num/den)) for x >= 1
inline BigInt ceil_pow_frac(const BigInt& x, unsigned num, unsigned den) {
    if (x <= 1) return 1;
    BigInt target = boost::multiprecision::pow(x, num);
    BigInt lo = 1, hi = 1;
    while (boost::multiprecision::pow(hi, den) < target) hi <<= 1;
    while (lo < hi) {
        BigInt mid = (lo + hi) >> 1;
        if (boost::multiprecision::pow(mid, den) >= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    return (a + b - 1) / b;
}

inline double to_double(const BigRat& x) { return x.convert_to<double>(); }

} // namespace rank1
