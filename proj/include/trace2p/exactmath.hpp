#pragma once

// Exact rationals and outward-rounded interval arithmetic. Criterion
// verdicts compare interval endpoints; a Proved verdict needs the
// pessimistic ends to be strictly ordered, so no verdict depends on float
// rounding. An independent exact comparator for expressions of the form
// A + B*sqrt(t) backs the intervals in tests.

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <string>

#include "trace2p/int128.hpp"

namespace trace2p {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt to_bigint(u128 v) {
    BigInt hi = u64(v >> 64);
    return (hi << 64) | u64(v);
}

inline BigInt bigpow(const BigInt& base, int e) {
    BigInt r = 1, b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// floor(sqrt(v))
inline BigInt isqrt(const BigInt& v) { return boost::multiprecision::sqrt(v); }

// Sign of A + B*sqrt(t) with A, B rational and t a nonnegative integer.
// Fully exact: squares out the radical with sign analysis.
inline int sign_with_sqrt(const BigRat& A, const BigRat& B, const BigInt& t) {
    BigInt s = isqrt(t);
    bool t_square = s * s == t;
    if (t_square) {
        BigRat v = A + B * BigRat(s);
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
    }
    if (B == 0) return A > 0 ? 1 : (A < 0 ? -1 : 0);
    if (B > 0) {
        if (A >= 0) return 1;
        return B * B * BigRat(t) > A * A ? 1 : -1;  // equality impossible, sqrt(t) irrational
    }
    if (A <= 0) return -1;
    return A * A > B * B * BigRat(t) ? 1 : -1;
}

// Closed rational interval [lo, hi]; all operations round outward.
struct Interval {
    BigRat lo, hi;

    Interval() : lo(0), hi(0) {}
    Interval(BigRat v) : lo(v), hi(v) {}
    Interval(BigRat l, BigRat h) : lo(std::move(l)), hi(std::move(h)) {}

    static Interval exact(const BigRat& v) { return Interval(v, v); }

    Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
    Interval operator-(const Interval& o) const { return {lo - o.hi, hi - o.lo}; }
    Interval operator*(const Interval& o) const {
        BigRat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        BigRat mn = a, mx = a;
        for (const BigRat* v : {&b, &c, &d}) {
            if (*v < mn) mn = *v;
            if (*v > mx) mx = *v;
        }
        return {mn, mx};
    }
    Interval widened(const BigRat& pad) const { return {lo - pad, hi + pad}; }
    BigRat width() const { return hi - lo; }

    // certainly greater: pessimistic strict comparison
    bool certainly_gt(const Interval& o) const { return lo > o.hi; }

    std::string str(int digits = 15) const;
};

inline std::string decimal_string(const BigRat& v, int digits) {
    BigInt num = boost::multiprecision::numerator(v);
    BigInt den = boost::multiprecision::denominator(v);
    bool neg = num < 0;
    if (neg) num = -num;
    BigInt scale = bigpow(10, digits);
    BigInt scaled = num * scale / den;
    std::string s = scaled.str();
    while (int(s.size()) <= digits) s.insert(s.begin(), '0');
    s.insert(s.end() - digits, '.');
    // trim trailing zeros but keep one decimal
    while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    return (neg ? "-" : "") + s;
}

inline std::string Interval::str(int digits) const {
    if (lo == hi) return decimal_string(lo, digits);
    return "[" + decimal_string(lo, digits) + ", " + decimal_string(hi, digits) + "]";
}

// sqrt of a nonnegative rational as an outward-rounded interval with
// 2^-precision_bits relative slack; exact for perfect squares.
inline Interval sqrt_interval(const BigRat& v, unsigned precision_bits = 64) {
    if (v < 0) throw std::domain_error("sqrt_interval: negative argument");
    if (v == 0) return Interval(BigRat(0));
    BigInt num = boost::multiprecision::numerator(v);
    BigInt den = boost::multiprecision::denominator(v);
    BigInt sn = isqrt(num), sd = isqrt(den);
    if (sn * sn == num && sd * sd == den) return Interval(BigRat(sn, sd));
    // sqrt(num/den) = sqrt(num*den)/den; scale by 4^bits for precision
    BigInt scaled = num * den << (2 * precision_bits);
    BigInt root = isqrt(scaled);
    BigInt d = den << precision_bits;
    return {BigRat(root, d), BigRat(root + 1, d)};
}

inline Interval sqrt_interval(const BigInt& v, unsigned precision_bits = 64) {
    return sqrt_interval(BigRat(v), precision_bits);
}

}  // namespace trace2p
