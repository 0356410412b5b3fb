#include <catch2/catch_amalgamated.hpp>

#include "trace2p/criteria.hpp"

using namespace trace2p;

namespace {

// exact "bound <= value" for a single-radical expression
bool quad_le_value(const QuadExpr& bound, long long value) {
    return sign_with_sqrt(BigRat(value) - bound.a, -bound.b, bound.t) >= 0;
}

}  // namespace

TEST_CASE("exact radical comparisons", "[criteria]") {
    // sign of a + b sqrt(t)
    REQUIRE(sign_with_sqrt(BigRat(-4), BigRat(3), 2) == 1);    // 3 sqrt 2 = 4.24 > 4
    REQUIRE(sign_with_sqrt(BigRat(-5), BigRat(3), 2) == -1);   // 4.24 < 5
    REQUIRE(sign_with_sqrt(BigRat(-6), BigRat(2), 9) == 0);    // 2*3 - 6
    REQUIRE(sign_with_sqrt(BigRat(0), BigRat(0), 7) == 0);
    // intervals shrink onto the true value and are exact on perfect squares
    Interval s2 = sqrt_interval(BigRat(2));
    REQUIRE(s2.lo < s2.hi);
    REQUIRE(s2.lo * s2.lo < BigRat(2));
    REQUIRE(s2.hi * s2.hi > BigRat(2));
    Interval s9 = sqrt_interval(BigRat(9));
    REQUIRE(s9.lo == s9.hi);
    REQUIRE(s9.lo == BigRat(3));
    // decimal rendering
    REQUIRE(decimal_string(BigRat(1, 4), 6) == "0.25");
    REQUIRE(decimal_string(BigRat(-7, 2), 4) == "-3.5");
}

TEST_CASE("interval verdicts agree with exact signs", "[criteria]") {
    // QuadExpr comparison at several precisions never disagrees with the
    // exact sign; doubling the interval width cannot flip a verdict
    auto pps = [] {
        std::vector<u64> out;
        for (u64 q = 3; q <= 2000; q += 2)
            if (prime_power(q)) out.push_back(q);
        return out;
    }();
    for (u64 q : pps) {
        auto dec = decompose(q, 2);
        CriterionReport r = propN2_check(dec);
        int exact = sign_with_sqrt(r.lhs.a - r.rhs.a, r.lhs.b - r.rhs.b, r.rhs.t);
        bool exact_proved = exact > 0;
        REQUIRE((r.verdict == Verdict::Proved) == exact_proved);
        for (unsigned bits : {48u, 96u, 192u})
            REQUIRE(certainly_greater(r.lhs, r.rhs, bits) == exact_proved);
    }
}

TEST_CASE("pair classification", "[criteria]") {
    auto c33 = classify_pair(3, 3);
    REQUIRE(c33.odd_pair);
    auto c53 = classify_pair(5, 3);
    REQUIRE_FALSE(c53.odd_pair);
    auto c34 = classify_pair(3, 4);
    REQUIRE_FALSE(c34.odd_pair);
    REQUIRE(c34.reduction.has_value());
    REQUIRE(c34.reduction->l == 2);
    REQUIRE(c34.reduction->q_l == 9);
    REQUIRE(c34.reduction->m == 2);
    REQUIRE_FALSE(classify_pair(7, 5).reduction.has_value());
    REQUIRE_THROWS_AS(classify_pair(4, 2), std::domain_error);
}

TEST_CASE("generic r-primitive gate", "[criteria]") {
    REQUIRE(cohen2_check(3, 13, 1));
    REQUIRE_FALSE(cohen2_check(3, 12, 1));
    REQUIRE_FALSE(cohen2_check(3, 5, 2));
    REQUIRE(cohen2_check(1000000, 5, 2));
    REQUIRE_FALSE(cohen2_check(3, 2, 2));  // never true at n = 2
}

TEST_CASE("nonzero-trace lower bound criterion", "[criteria]") {
    // (13,5) with m the full q^5-1: positive bracket
    auto dec = decompose(13, 5);
    auto rep = thmH_bound(dec, dec.order_factors);
    REQUIRE(rep.verdict == Verdict::Proved);
    REQUIRE(rep.lower_bound.has_value());

    // soundness on (5,2): the bound never exceeds the exact count (checked
    // against brute-force N_beta counts frozen from the enumeration oracle:
    // q=5, n=2, m=2 -> N_beta(2) = (0,2,4,4,2) for beta = 0..4; m=6 -> (0,0,4,4,0))
    auto d52 = decompose(5, 2);
    long long exact_m2[5] = {0, 2, 4, 4, 2};
    long long exact_m6[5] = {0, 0, 4, 4, 0};
    auto rep2 = thmH_bound(d52, factorize(2));
    auto rep6 = thmH_bound(d52, factorize(6));
    for (int b = 1; b < 5; ++b) {
        REQUIRE(quad_le_value(*rep2.lower_bound, exact_m2[b]));
        REQUIRE(quad_le_value(*rep6.lower_bound, exact_m6[b]));
    }

    // minimal case m = 2: rhs reduces to 4*2 - 2*W(m_Q) - 1
    BigInt WmQ = d52.Q % 2 == 0 ? 2 : 1;
    REQUIRE(rep2.rhs.a == BigRat(8 - 2 * WmQ - 1));

    REQUIRE_THROWS_AS(thmH_bound(dec, factorize(3)), std::domain_error);  // odd m
}

TEST_CASE("zero-trace criterion", "[criteria]") {
    // all five leftover n = 5 pairs satisfy it
    for (u64 q : {5ull, 9ull, 13ull, 25ull, 37ull}) {
        auto dec = decompose(q, 5);
        REQUIRE(thmN_check(dec).verdict == Verdict::Proved);
        REQUIRE(thmH_bound(dec, dec.order_factors).verdict == Verdict::Proved);
    }
    // (5,3): W(Q) = W(31) = 2 and 5^1.5 < 16
    auto d53 = decompose(5, 3);
    REQUIRE(thmN_check(d53).verdict == Verdict::Inconclusive);
    REQUIRE_THROWS_AS(thmN_check(decompose(5, 2)), std::domain_error);
}

TEST_CASE("sieved criteria degenerate to their unsieved forms", "[criteria]") {
    // empty sieve: the n=2 sieved inequality is exactly the unsieved one
    for (u64 q : {5ull, 7ull, 9ull, 31ull, 121ull, 1009ull}) {
        auto dec = decompose(q, 2);
        auto un = propN2_check(dec);
        auto sv = siev4_check(dec, make_sieve(dec, SieveKind::OddPart, {}));
        REQUIRE(un.lhs.a == sv.lhs.a);
        REQUIRE(un.rhs.a == sv.rhs.a);
        REQUIRE(un.rhs.b == sv.rhs.b);
        REQUIRE(un.verdict == sv.verdict);
    }
    // empty sieve at T: right side exceeds the H threshold by exactly one
    for (u64 q : {5ull, 13ull, 29ull}) {
        auto dec = decompose(q, 3);
        auto t = thmT_check(dec, make_sieve(dec, SieveKind::FullRadical, {}));
        auto h = thmH_bound(dec, dec.order_factors);
        REQUIRE(t.rhs.a == h.rhs.a + 1);
        if (t.verdict == Verdict::Proved) REQUIRE(h.verdict == Verdict::Proved);
    }
}

TEST_CASE("the paper's n=3 sieving rows", "[criteria]") {
    // beta != 0 rows go through the sqrt(2) variant
    {
        auto dec = decompose(29, 3);
        auto s = make_sieve(dec, SieveKind::FullRadical, {67, 13, 7});
        REQUIRE(thmE1_check(dec, s).verdict == Verdict::Proved);
        // the plain variant is weaker and stays inconclusive here
        REQUIRE(thmT_check(dec, s).verdict == Verdict::Inconclusive);
    }
    {
        auto dec = decompose(61, 3);
        auto s = make_sieve(dec, SieveKind::FullRadical, {97, 13, 5});
        REQUIRE(thmE1_check(dec, s).verdict == Verdict::Proved);
    }
    {
        auto dec = decompose(121, 3);
        auto s = make_sieve(dec, SieveKind::FullRadical, {37, 19, 7});
        REQUIRE(thmE1_check(dec, s).verdict == Verdict::Proved);
    }
    // beta = 0 rows: Table-2 prime sets prove the sqrt(2) zero-trace variant
    {
        auto dec = decompose(81, 3);
        auto s = make_sieve(dec, SieveKind::QRadical, {73, 13});
        REQUIRE(thmG1_check(dec, s).verdict == Verdict::Proved);
        REQUIRE(thmZ_check(dec, s).verdict == Verdict::Inconclusive);
    }
    {
        auto dec = decompose(1369, 3);
        auto s = make_sieve(dec, SieveKind::QRadical, {67, 43});
        REQUIRE(thmG1_check(dec, s).verdict == Verdict::Proved);
    }
    {
        auto dec = decompose(29, 3);
        auto s = make_sieve(dec, SieveKind::QRadical, {67, 13});
        REQUIRE(thmE1G1_check(dec, BetaClass::Zero, s).verdict == Verdict::Proved);
    }
    // unsieved (5,3) stays open: 5 is a genuine theory-level exception
    {
        auto dec = decompose(5, 3);
        auto e1 = thmE1_check(dec, make_sieve(dec, SieveKind::FullRadical, {}));
        REQUIRE(e1.verdict == Verdict::Inconclusive);
    }
}

TEST_CASE("greedy sieve finds the published sets", "[criteria]") {
    auto g1_29 = greedy_sieve(decompose(29, 3), "G1");
    REQUIRE(g1_29.verdict == Verdict::Proved);
    REQUIRE(g1_29.sieve == std::vector<u64>{67, 13});
    auto g1_277 = greedy_sieve(decompose(277, 3), "G1");
    REQUIRE(g1_277.verdict == Verdict::Proved);
    REQUIRE(g1_277.sieve == std::vector<u64>{193, 19, 7});
    auto e1_61 = greedy_sieve(decompose(61, 3), "E1");
    REQUIRE(e1_61.verdict == Verdict::Proved);
    REQUIRE(e1_61.sieve == std::vector<u64>{97, 13, 5});
    // a pair proved without any sieving returns the empty set
    auto easy = greedy_sieve(decompose(163, 2), "siev4");
    REQUIRE(easy.verdict == Verdict::Proved);
    REQUIRE(easy.sieve.empty());
}

TEST_CASE("n=2 unsieved criterion", "[criteria]") {
    // genuine exceptions stay inconclusive even after greedy sieving
    for (u64 q : {3ull, 5ull, 7ull, 9ull, 11ull, 13ull, 31ull, 3541ull}) {
        auto dec = decompose(q, 2);
        REQUIRE(propN2_check(dec).verdict == Verdict::Inconclusive);
        REQUIRE(greedy_sieve(dec, "siev4").verdict == Verdict::Inconclusive);
    }
    // dominance: sqrt(q) >= 2 W(q^2-1) forces the unsieved criterion
    {
        u64 q = 786433;  // 3 * 2^18 + 1
        REQUIRE(is_prime(q));
        auto dec = decompose(q, 2);
        BigInt W = W_of(dec.order_factors);
        REQUIRE(BigRat(q) >= BigRat(4 * W * W));  // sqrt(q) >= 2W, squared
        REQUIRE(propN2_check(dec).verdict == Verdict::Proved);
    }
}

TEST_CASE("t-range procedures", "[criteria]") {
    // the published successes at n = 3 (standard prime count)
    for (auto [a, b] : std::vector<std::pair<int, int>>{
             {35, 53}, {29, 34}, {24, 28}, {21, 23}, {19, 20}, {18, 18}, {17, 17}}) {
        auto r = t_range_algorithm(3, a, b);
        INFO("pair (" << a << "," << b << ")");
        REQUIRE(r.success);
    }
    // 8 <= t <= 15 fails in both modes; t = 16 succeeds with one fewer prime
    for (int t = 8; t <= 15; ++t) {
        REQUIRE_FALSE(t_range_algorithm(3, t, t).success);
        REQUIRE_FALSE(t_range_algorithm(3, t, t, true).success);
    }
    REQUIRE(t_range_algorithm(3, 16, 16, true).success);
    REQUIRE_FALSE(t_range_algorithm(3, 8, 8).success);
    // the n = 2 runs
    REQUIRE(t_range_algorithm(2, 11, 13).success);
    REQUIRE(t_range_algorithm(2, 10, 10).success);
    // audit trail fields are populated
    auto tr = t_range_algorithm(3, 17, 17);
    REQUIRE(tr.s == 15);
    REQUIRE(tr.c == 15);
    REQUIRE(tr.delta > 0);
    REQUIRE_THROWS_AS(t_range_algorithm(4, 5, 5), std::domain_error);
    REQUIRE_THROWS_AS(t_range_algorithm(3, 9, 8), std::domain_error);
}

TEST_CASE("generic n>4 gate and thresholds", "[criteria]") {
    REQUIRE(table1_threshold(5) == 73259);
    REQUIRE(table1_threshold(7) == 419);
    REQUIRE(table1_threshold(11) == 25);
    REQUIRE(table1_threshold(13) == 13);
    REQUIRE(table1_threshold(17) == 7);
    REQUIRE(table1_threshold(19) == 5);
    REQUIRE(table1_threshold(23) == 4);
    // holds for all n >= 27 at q = 3 (and is monotone in q)
    for (int n = 27; n <= 60; ++n) REQUIRE(n4_simple_check(3, n));
    REQUIRE_FALSE(n4_simple_check(3, 23));
    // the d_t refinement strictly extends the generic gate
    for (u64 q : {73259ull, 419ull}) REQUIRE(n4_dt_check(q, 5));
    // leftover pairs fail the refinement
    for (u64 q : {5ull, 9ull, 13ull, 25ull, 37ull}) REQUIRE_FALSE(n4_dt_check(q, 5));
    REQUIRE(n4_dt_check(41, 5));
    REQUIRE_THROWS_AS(n4_simple_check(5, 4), std::domain_error);
}

TEST_CASE("sieve data assembly", "[criteria]") {
    auto dec = decompose(29, 3);  // 29^3-1 = 2^2 * 7 * 13 * 67, Q = 13 * 67
    auto s = make_sieve(dec, SieveKind::FullRadical, {67, 13, 7});
    REQUIRE(s.s() == 3);
    REQUIRE(s.r == 2);  // 67 and 13 divide Q
    REQUIRE(s.k_primes == std::vector<u64>{2});
    REQUIRE(s.Wk() == 2);
    REQUIRE(s.Wsub() == 1);
    REQUIRE(s.delta == BigRat(1) - BigRat(1, 67) - BigRat(1, 13) - BigRat(1, 7));
    REQUIRE(s.delta_sub == BigRat(1) - BigRat(1, 67) - BigRat(1, 13));
    // delta <= 0 rejected
    auto dec2 = decompose(9, 2);  // 80 = 2^4 * 5: only the odd prime 5
    auto tiny = make_sieve(dec2, SieveKind::OddPart, {5});
    REQUIRE(tiny.delta > 0);
    SieveSet bogus = tiny;
    bogus.delta = BigRat(0);
    REQUIRE_THROWS_AS(siev4_check(dec2, bogus), std::invalid_argument);
}
