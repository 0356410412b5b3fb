#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trace2p {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

inline u128 parse_u128(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    u128 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad digit in integer literal");
        u128 next = v * 10 + u128(c - '0');
        if (next < v) throw std::overflow_error("integer literal exceeds 128 bits");
        v = next;
    }
    return v;
}

inline u128 gcd128(u128 a, u128 b) {
    while (b) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// (a*b) mod m for full 128-bit operands. Fast path when everything fits in
// 64 bits; otherwise shift-and-add, which is slow but only reached by
// one-off factorizations above 2^64.
inline u128 mulmod128(u128 a, u128 b, u128 m) {
    if (m <= ~u64(0) && a <= ~u64(0) && b <= ~u64(0))
        return u128(u64(a)) * u64(b) % m;
    a %= m;
    b %= m;
    if (a < b) {
        u128 t = a;
        a = b;
        b = t;
    }
    u128 r = 0;
    while (b) {
        if (b & 1) {
            r += a;
            if (r >= m) r -= m;
        }
        b >>= 1;
        a <<= 1;
        if (a >= m) a -= m;
    }
    return r;
}

inline u128 powmod128(u128 a, u128 e, u128 m) {
    u128 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod128(r, a, m);
        a = mulmod128(a, a, m);
        e >>= 1;
    }
    return r;
}

inline u64 mulmod64(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

inline u64 powmod64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace trace2p
