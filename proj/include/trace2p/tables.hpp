#pragma once

// Expected table data for the regression diffs: thresholds for the generic
// n > 4 gate, the zero-trace sieving prime sets at n = 3, the pairs left to
// direct verification, and the trace sets of the genuine exceptions.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "trace2p/int128.hpp"

namespace trace2p::tables {

// table 1: least prime power per n satisfying the generic gate
inline const std::map<int, u64>& table1() {
    static const std::map<int, u64> t = {
        {5, 73259}, {7, 419}, {11, 25}, {13, 13}, {17, 7}, {19, 5}, {23, 4},
    };
    return t;
}

// table 2: zero-trace sieving primes at n = 3
inline const std::map<u64, std::vector<u64>>& table2() {
    static const std::map<u64, std::vector<u64>> t = {
        {29, {67, 13}},      {61, {97, 13, 3}},    {81, {73, 13}},
        {109, {571, 7}},     {277, {193, 19, 7}},  {289, {307, 13, 7}},
        {373, {73, 13}},     {1369, {67, 43}},
    };
    return t;
}

// table 3: pairs not settled theoretically
inline const std::vector<u64>& table3_n2() {
    static const std::vector<u64> t = {
        3,    5,    7,    9,    11,   13,   17,   19,   23,   25,   27,   29,   31,
        37,   41,   43,   47,   49,   53,   59,   61,   67,   71,   73,   79,   81,
        83,   89,   97,   101,  103,  109,  113,  121,  125,  127,  131,  137,  139,
        149,  151,  157,  169,  173,  181,  191,  197,  199,  211,  229,  239,  241,
        269,  281,  307,  311,  331,  337,  349,  361,  373,  379,  389,  409,  419,
        421,  461,  463,  509,  521,  529,  569,  571,  601,  617,  631,  659,  661,
        701,  761,  769,  841,  859,  881,  911,  1009, 1021, 1231, 1289, 1301, 1331,
        1429, 1609, 1741, 1849, 1861, 2029, 2281, 2311, 2729, 3541,
    };
    return t;
}

inline const std::vector<u64>& table3_n3() {
    static const std::vector<u64> t = {5, 9, 13, 25, 37, 49, 121};
    return t;
}

// table 4: traces attained by 2-primitive elements of F_{q^2} for the
// genuine exceptions, in the canonical element serialization
inline const std::map<u64, std::set<std::string>>& table4() {
    static const std::map<u64, std::set<std::string>> t = [] {
        std::map<u64, std::set<std::string>> m;
        m[3] = {"0"};
        m[5] = {"2", "3"};
        m[7] = {"1", "2", "5", "6"};
        m[9] = {"1,0", "2,0", "0,1", "0,2"};  // +-1 and +-i, i a root of x^2+1
        m[11] = {"1", "2", "3", "4", "7", "8", "9", "10"};
        m[13] = {"1", "3", "4", "5", "6", "7", "8", "9", "10", "12"};
        std::set<std::string> q31;
        for (int v = 1; v <= 30; ++v)
            if (v != 11 && v != 20) q31.insert(std::to_string(v));
        m[31] = q31;
        return m;
    }();
    return t;
}

// the nonzero-trace exceptional prime powers at n = 3 and their sieves
inline const std::vector<u64>& e1_unsieved_failures() {
    static const std::vector<u64> t = {5, 9, 13, 25, 29, 61, 121};
    return t;
}
inline const std::map<u64, std::vector<u64>>& e1_sieves() {
    static const std::map<u64, std::vector<u64>> t = {
        {29, {67, 13, 7}}, {61, {97, 13, 5}}, {121, {37, 19, 7}},
    };
    return t;
}
inline const std::vector<u64>& g1_unsieved_failures() {
    static const std::vector<u64> t = {5, 9, 13, 25, 29, 37, 49, 61, 81, 109, 121, 277, 289, 373, 1369};
    return t;
}

// scan funnel milestones
inline constexpr u64 kOddPrimePowerCount = 82247;   // odd prime powers <= 2^20
inline constexpr u64 kN2UnsievedFailures = 2425;
inline constexpr u64 kN2MaxFailure = 1044889;
inline constexpr u64 kN3ScanMax = 511095;
inline constexpr u64 kN3UnsievedFailures = 4459;
inline constexpr u64 kN3MaxFailure = 511033;
inline constexpr u64 kHighPairCount = 3735;

}  // namespace trace2p::tables
