#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "pclab/errors.hpp"

namespace pclab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt bi_pow(const BigInt& b, long e) {
    if (e < 0) throw precondition_error("bi_pow: negative exponent");
    BigInt r = 1, base = b;
    for (long k = e; k > 0; k >>= 1) {
        if (k & 1) r *= base;
        if (k > 1) base *= base;
    }
    return r;
}

inline BigInt binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

// Multiplicity of p in n.  Precondition: n != 0, p >= 2.
inline long bi_ord(BigInt n, const BigInt& p) {
    if (n == 0) throw precondition_error("bi_ord: zero argument");
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// p-adic value of a nonzero rational.
inline long rat_ord(const BigRat& q, const BigInt& p) {
    if (q == 0) throw precondition_error("rat_ord: zero argument");
    return bi_ord(numerator(q), p) - bi_ord(denominator(q), p);
}

inline std::string bi_str(const BigInt& n) { return n.str(); }

inline std::string rat_str(const BigRat& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline BigInt bi_parse(const std::string& s) {
    if (s.empty()) throw config_error("empty integer literal");
    try {
        return BigInt(s);
    } catch (const std::exception&) {
        throw config_error("bad integer literal: " + s);
    }
}

inline BigRat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return BigRat(bi_parse(s));
    BigInt num = bi_parse(s.substr(0, slash));
    BigInt den = bi_parse(s.substr(slash + 1));
    if (den == 0) throw config_error("zero denominator in rational literal: " + s);
    return BigRat(num, den);
}

} // namespace pclab
