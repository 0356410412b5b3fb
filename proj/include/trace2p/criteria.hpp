#pragma once

// Existence criteria for 2-primitive elements with prescribed trace: pair
// classification, the unsieved and sieved theorem inequalities, the greedy
// sieve, the t-range procedures, and the generic n > 4 gate. Inequality
// sides are a + b*sqrt(t) with exact rational a, b; verdicts compare
// outward-rounded intervals, so Proved never depends on float rounding.

#include <optional>
#include <string>
#include <vector>

#include "trace2p/exactmath.hpp"
#include "trace2p/numtheory.hpp"

namespace trace2p {

enum class BetaClass { Zero, NonZero, Any };
enum class Verdict { Proved, Inconclusive };

inline const char* to_string(BetaClass b) {
    switch (b) {
        case BetaClass::Zero: return "zero";
        case BetaClass::NonZero: return "nonzero";
        default: return "any";
    }
}
inline const char* to_string(Verdict v) { return v == Verdict::Proved ? "proved" : "inconclusive"; }

// value a + b*sqrt(t)
struct QuadExpr {
    BigRat a = 0, b = 0;
    BigInt t = 1;

    static QuadExpr exact(BigRat v) { return {std::move(v), 0, 1}; }
    int sign() const { return sign_with_sqrt(a, b, t); }
    Interval interval(unsigned precision_bits = 96) const {
        return Interval(a) + Interval(b) * sqrt_interval(BigRat(t), precision_bits);
    }
};

// strict lhs > rhs on the pessimistic interval ends
inline bool certainly_greater(const QuadExpr& lhs, const QuadExpr& rhs,
                              unsigned precision_bits = 96) {
    return lhs.interval(precision_bits).certainly_gt(rhs.interval(precision_bits));
}

inline QuadExpr half_power(u64 q, int e) {
    // q^(e/2) as a QuadExpr
    QuadExpr x;
    if (e % 2 == 0) {
        x.a = bigpow(BigInt(q), e / 2);
    } else {
        x.b = bigpow(BigInt(q), (e - 1) / 2);
        x.t = q;
    }
    return x;
}

struct CriterionReport {
    std::string id;
    u64 q = 0;
    int n = 0;
    BetaClass beta = BetaClass::Any;
    std::vector<u64> sieve;
    QuadExpr lhs, rhs;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
    std::optional<QuadExpr> lower_bound;  // for the bound-style criteria

    Interval lhs_interval(unsigned bits = 96) const { return lhs.interval(bits); }
    Interval rhs_interval(unsigned bits = 96) const { return rhs.interval(bits); }
};

inline CriterionReport make_report(std::string id, const QnDecomposition& dec, BetaClass beta,
                                   QuadExpr lhs, QuadExpr rhs, unsigned bits = 96) {
    CriterionReport r;
    r.id = std::move(id);
    r.q = dec.q;
    r.n = dec.n;
    r.beta = beta;
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    r.verdict = certainly_greater(r.lhs, r.rhs, bits) ? Verdict::Proved : Verdict::Inconclusive;
    return r;
}

// ---- pair classification ----

struct PairReduction {
    int l = 0;        // least prime factor of n
    u128 q_l = 0;     // q^l
    int m = 0;        // n / l
};

struct PairClass {
    u64 q = 0;
    int n = 0;
    bool odd_pair = false;  // q = 3 (mod 4) and n odd
    std::optional<PairReduction> reduction;
};

inline PairClass classify_pair(u64 q, int n) {
    u64 p = 0;
    if (!prime_power(q, &p) || p == 2)
        throw std::domain_error("classify_pair: q must be an odd prime power");
    if (n < 2) throw std::domain_error("classify_pair: n must be at least 2");
    PairClass pc;
    pc.q = q;
    pc.n = n;
    pc.odd_pair = (q % 4 == 3) && (n % 2 == 1);
    for (int l = 2; l * l <= n; ++l) {
        if (n % l == 0) {
            pc.reduction = PairReduction{l, pow_u128(q, l), n / l};
            break;
        }
    }
    return pc;
}

// ---- unsieved criteria ----

// n > 4(1 + log_q(9.8 r^(3/4))), evaluated exactly as q^(n-4)*10^4 > 9.8^4 r^3
inline bool cohen2_check(u64 q, int n, u64 r) {
    BigInt r3 = BigInt(r) * r * r;
    BigInt c = BigInt(92236816) * r3;  // (9.8*10)^4 r^3
    if (n >= 4) return bigpow(BigInt(q), n - 4) * 10000 > c;
    return BigInt(10000) > c * bigpow(BigInt(q), 4 - n);
}

// exact W of a factored value
inline BigInt W_of(const Factorization& f) { return BigInt(1) << f.omega(); }

// lower bound for the count of m-free xi with Tr(xi^2) = beta != 0:
// theta(m) q^((n-1)/2) { q^((n-1)/2) - 4W(m) + 2W(m_Q) + 1 }
inline CriterionReport thmH_bound(const QnDecomposition& dec, const Factorization& m) {
    if (m.value % 2 != 0) throw std::domain_error("thmH_bound: m must be even");
    if (dec.order % m.value != 0) throw std::domain_error("thmH_bound: m must divide q^n-1");
    bool even_pair = (dec.q % 4 == 1) || (dec.n % 2 == 0);
    if (!even_pair) throw std::domain_error("thmH_bound: (q,n) must be an even pair");
    BigInt Wm = W_of(m);
    BigInt WmQ = 1;
    for (auto& [p, e] : m.factors)
        if (dec.Q % p == 0) WmQ <<= 1;
    QuadExpr lhs = half_power(dec.q, dec.n - 1);
    QuadExpr rhs = QuadExpr::exact(BigRat(4 * Wm - 2 * WmQ - 1));
    auto rep = make_report("H", dec, BetaClass::NonZero, lhs, rhs);
    // theta(m) as exact rational over the full (possibly non-squarefree) m
    BigRat theta = 1;
    for (auto& [p, e] : m.factors) theta *= BigRat(to_bigint(p) - 1, to_bigint(p));
    QuadExpr bound;
    BigRat C = BigRat(2 * WmQ - 4 * Wm + 1);
    if ((dec.n - 1) % 2 == 0) {
        BigInt h = bigpow(BigInt(dec.q), (dec.n - 1) / 2);
        bound.a = theta * (BigRat(h * h) + C * BigRat(h));
    } else {
        bound.a = theta * BigRat(bigpow(BigInt(dec.q), dec.n - 1));
        bound.b = theta * C * BigRat(bigpow(BigInt(dec.q), (dec.n - 2) / 2));
        bound.t = dec.q;
    }
    rep.lower_bound = bound;
    return rep;
}

// zero-trace criterion: q^(n/2) > 2 W(Q)(q-1); also records the eq-(O)-style
// bound theta(m) q^(n/2-1){ q^(n/2) - 2W(m)(q-1) } for m = rad(Q)
inline CriterionReport thmN_check(const QnDecomposition& dec) {
    if (dec.n < 3) throw std::domain_error("thmN_check: requires n >= 3");
    bool even_pair = (dec.q % 4 == 1) || (dec.n % 2 == 0);
    if (!even_pair) throw std::domain_error("thmN_check: (q,n) must be an even pair");
    BigInt WQ = W_of(dec.Q_factors);
    QuadExpr lhs = half_power(dec.q, dec.n);
    QuadExpr rhs = QuadExpr::exact(BigRat(2 * WQ * (dec.q - 1)));
    auto rep = make_report("N", dec, BetaClass::Zero, lhs, rhs);
    // bound with m = rad(Q)
    BigRat theta = 1;
    for (auto& [p, e] : dec.Q_factors.factors) theta *= BigRat(to_bigint(p) - 1, to_bigint(p));
    QuadExpr bound;
    BigRat C = BigRat(2 * WQ * (dec.q - 1));
    if (dec.n % 2 == 0) {
        BigInt h = bigpow(BigInt(dec.q), dec.n / 2);
        bound.a = theta * (BigRat(h) - C) * BigRat(h) / BigRat(dec.q);
    } else {
        // q^(n/2-1)*q^(n/2) = q^(n-1);  q^(n/2-1) = q^((n-3)/2) sqrt(q)
        bound.a = theta * BigRat(bigpow(BigInt(dec.q), dec.n - 1));
        bound.b = -theta * C * BigRat(bigpow(BigInt(dec.q), (dec.n - 3) / 2));
        bound.t = dec.q;
    }
    rep.lower_bound = bound;
    return rep;
}

// ---- sieve machinery ----

struct SieveSet {
    std::vector<u64> primes;      // sieving primes, in greedy (descending) order
    std::vector<u64> k_primes;    // primes of the residual part k
    std::vector<u64> sub_primes;  // primes of k_Q (T/E1) resp. k_1 (siev4)
    int r = 0;                    // sieving primes dividing Q resp. q+1
    BigRat delta = 1;             // 1 - sum 1/p_i
    BigRat delta_sub = 1;         // delta_Q resp. epsilon'

    BigInt Wk() const { return BigInt(1) << k_primes.size(); }
    BigInt Wsub() const { return BigInt(1) << sub_primes.size(); }
    int s() const { return int(primes.size()); }
};

enum class SieveKind { FullRadical, QRadical, OddPart };

// Assemble the sieve data for a chosen prefix of sieving primes. The
// universe is the radical of q^n-1 (T/E1; 2 always stays in k), the radical
// of Q (Z/G1), or the odd radical of q^2-1 (siev4). "sub" primes are those
// dividing Q (resp. q+1 for siev4).
inline SieveSet make_sieve(const QnDecomposition& dec, SieveKind kind,
                           const std::vector<u64>& sieving) {
    SieveSet s;
    s.primes = sieving;
    auto divides_sub = [&](u64 p) {
        if (kind == SieveKind::OddPart) return (dec.q + 1) % p == 0;
        return dec.Q % p == 0;
    };
    std::vector<u64> universe;
    for (auto& [p, e] : dec.order_factors.factors) {
        u64 pv = u64(p);
        if (kind == SieveKind::FullRadical) universe.push_back(pv);
        if (kind == SieveKind::QRadical && dec.Q % p == 0) universe.push_back(pv);
        if (kind == SieveKind::OddPart && pv != 2) universe.push_back(pv);
    }
    for (u64 p : sieving) {
        s.delta -= BigRat(1, p);
        if (divides_sub(p)) {
            s.delta_sub -= BigRat(1, p);
            s.r++;
        }
    }
    for (u64 p : universe) {
        if (std::find(sieving.begin(), sieving.end(), p) != sieving.end()) continue;
        s.k_primes.push_back(p);
        if (kind != SieveKind::QRadical && divides_sub(p)) s.sub_primes.push_back(p);
    }
    return s;
}

// nonzero-trace sieved criterion:
// q^((n-1)/2) > 4((s-1)/d + 2)W(k) - 2((r-1+d_Q)/d + 1)W(k_Q)
inline CriterionReport thmT_check(const QnDecomposition& dec, const SieveSet& s) {
    bool even_pair = (dec.q % 4 == 1) || (dec.n % 2 == 0);
    if (!even_pair) throw std::domain_error("thmT_check: (q,n) must be an even pair");
    if (s.delta <= 0) throw std::invalid_argument("thmT_check: delta must be positive");
    QuadExpr lhs = half_power(dec.q, dec.n - 1);
    BigRat A = BigRat(s.s() - 1) / s.delta + 2;
    BigRat B = (BigRat(s.r - 1) + s.delta_sub) / s.delta + 1;
    QuadExpr rhs = QuadExpr::exact(4 * A * BigRat(s.Wk()) - 2 * B * BigRat(s.Wsub()));
    auto rep = make_report("T", dec, BetaClass::NonZero, lhs, rhs);
    rep.sieve = s.primes;
    return rep;
}

// zero-trace sieved criterion over Q: q^(n/2-1) > 2((s-1)/d + 2)W(k)
inline CriterionReport thmZ_check(const QnDecomposition& dec, const SieveSet& s) {
    if (dec.n < 3) throw std::domain_error("thmZ_check: requires n >= 3");
    bool even_pair = (dec.q % 4 == 1) || (dec.n % 2 == 0);
    if (!even_pair) throw std::domain_error("thmZ_check: (q,n) must be an even pair");
    if (s.delta <= 0) throw std::invalid_argument("thmZ_check: delta must be positive");
    QuadExpr lhs = half_power(dec.q, dec.n - 2);
    BigRat A = BigRat(s.s() - 1) / s.delta + 2;
    QuadExpr rhs = QuadExpr::exact(2 * A * BigRat(s.Wk()));
    auto rep = make_report("Z", dec, BetaClass::Zero, lhs, rhs);
    rep.sieve = s.primes;
    return rep;
}

// sqrt(2)-improved variants for q = 1 (mod 4), n odd
inline CriterionReport thmE1_check(const QnDecomposition& dec, const SieveSet& s) {
    if (dec.q % 4 != 1 || dec.n % 2 == 0)
        throw std::domain_error("thmE1_check: requires q = 1 (mod 4) and n odd");
    if (s.delta <= 0) throw std::invalid_argument("thmE1_check: delta must be positive");
    QuadExpr lhs = half_power(dec.q, dec.n - 1);  // integer: n odd
    BigRat A = BigRat(s.s() - 1) / s.delta + 2;
    BigRat B = (BigRat(s.r - 1) + s.delta_sub) / s.delta + 1;
    QuadExpr rhs;
    rhs.b = 2 * A * BigRat(s.Wk()) - B * BigRat(s.Wsub());
    rhs.t = 2;
    auto rep = make_report("E1", dec, BetaClass::NonZero, lhs, rhs);
    rep.sieve = s.primes;
    return rep;
}

inline CriterionReport thmG1_check(const QnDecomposition& dec, const SieveSet& s) {
    if (dec.q % 4 != 1 || dec.n % 2 == 0)
        throw std::domain_error("thmG1_check: requires q = 1 (mod 4) and n odd");
    if (dec.n < 3) throw std::domain_error("thmG1_check: requires n >= 3");
    if (s.delta <= 0) throw std::invalid_argument("thmG1_check: delta must be positive");
    QuadExpr lhs = half_power(dec.q, dec.n - 2);
    BigRat A = BigRat(s.s() - 1) / s.delta + 2;
    QuadExpr rhs;
    rhs.b = A * BigRat(s.Wk());
    rhs.t = 2;
    auto rep = make_report("G1", dec, BetaClass::Zero, lhs, rhs);
    rep.sieve = s.primes;
    return rep;
}

// combined entry point per the CLI contract
inline CriterionReport thmE1G1_check(const QnDecomposition& dec, BetaClass beta,
                                     const SieveSet& s) {
    if (beta == BetaClass::Zero) return thmG1_check(dec, s);
    return thmE1_check(dec, s);
}

// ---- the n = 2 criteria ----

// W data of the odd radical of q^2-1 and of its part dividing q+1
struct N2Data {
    std::vector<u64> r_primes;   // odd primes of q^2-1
    std::vector<u64> r1_primes;  // those dividing q+1
};

inline N2Data n2_data(const QnDecomposition& dec) {
    N2Data d;
    for (auto& [p, e] : dec.order_factors.factors) {
        if (p == 2) continue;
        d.r_primes.push_back(u64(p));
        if ((dec.q + 1) % p == 0) d.r1_primes.push_back(u64(p));
    }
    return d;
}

// unsieved n=2 criterion:
//   q=1 (mod 4):  q+1 > 4(W(r) sqrt(q) - W(r_1)(sqrt(q)-1)/2)
//   q=3 (mod 4):  q+1 > 4(W(r) sqrt(q) - W(r_1)(sqrt(q)-1))
inline CriterionReport propN2_check(const QnDecomposition& dec) {
    if (dec.n != 2) throw std::domain_error("propN2_check: requires n = 2");
    N2Data d = n2_data(dec);
    BigInt Wr = BigInt(1) << d.r_primes.size();
    BigInt Wr1 = BigInt(1) << d.r1_primes.size();
    QuadExpr lhs = QuadExpr::exact(BigRat(dec.q + 1));
    QuadExpr rhs;
    rhs.t = dec.q;
    if (dec.q % 4 == 1) {
        rhs.b = BigRat(4 * Wr - 2 * Wr1);
        rhs.a = BigRat(2 * Wr1);
    } else {
        rhs.b = BigRat(4 * Wr - 4 * Wr1);
        rhs.a = BigRat(4 * Wr1);
    }
    auto rep = make_report("n2", dec, BetaClass::NonZero, lhs, rhs);
    return rep;
}

// sieved n=2 criterion:
//   q=1 (mod 4): q+1 > 4[W(k)((s-1)/e + 2) sqrt(q) - W(k_1)((r-1+e')/e + 1)(sqrt(q)-1)/2]
//   q=3 (mod 4): same with the last factor (sqrt(q)-1)
inline CriterionReport siev4_check(const QnDecomposition& dec, const SieveSet& s) {
    if (dec.n != 2) throw std::domain_error("siev4_check: requires n = 2");
    if (s.delta <= 0) throw std::invalid_argument("siev4_check: epsilon must be positive");
    BigRat A = BigRat(s.s() - 1) / s.delta + 2;
    BigRat B = (BigRat(s.r - 1) + s.delta_sub) / s.delta + 1;
    QuadExpr lhs = QuadExpr::exact(BigRat(dec.q + 1));
    QuadExpr rhs;
    rhs.t = dec.q;
    if (dec.q % 4 == 1) {
        rhs.b = 4 * A * BigRat(s.Wk()) - 2 * B * BigRat(s.Wsub());
        rhs.a = 2 * B * BigRat(s.Wsub());
    } else {
        rhs.b = 4 * A * BigRat(s.Wk()) - 4 * B * BigRat(s.Wsub());
        rhs.a = 4 * B * BigRat(s.Wsub());
    }
    auto rep = make_report("siev4", dec, BetaClass::NonZero, lhs, rhs);
    rep.sieve = s.primes;
    return rep;
}

// ---- greedy sieving ----

inline SieveKind sieve_kind_for(const std::string& id) {
    if (id == "T" || id == "E1") return SieveKind::FullRadical;
    if (id == "Z" || id == "G1") return SieveKind::QRadical;
    if (id == "siev4") return SieveKind::OddPart;
    throw std::domain_error("greedy_sieve: criterion has no sieve");
}

inline CriterionReport evaluate_sieved(const QnDecomposition& dec, const std::string& id,
                                       const SieveSet& s) {
    if (id == "T") return thmT_check(dec, s);
    if (id == "Z") return thmZ_check(dec, s);
    if (id == "E1") return thmE1_check(dec, s);
    if (id == "G1") return thmG1_check(dec, s);
    if (id == "siev4") return siev4_check(dec, s);
    throw std::domain_error("evaluate_sieved: unknown criterion id");
}

// Grow the sieve from the largest prime down; report the first prefix that
// proves the criterion, or the final inconclusive state.
inline CriterionReport greedy_sieve(const QnDecomposition& dec, const std::string& id) {
    SieveKind kind = sieve_kind_for(id);
    std::vector<u64> candidates;  // descending
    {
        SieveSet base = make_sieve(dec, kind, {});
        candidates = base.k_primes;
        // for T/E1, 2 must stay in k
        if (kind == SieveKind::FullRadical)
            candidates.erase(std::remove(candidates.begin(), candidates.end(), u64(2)),
                             candidates.end());
        std::sort(candidates.rbegin(), candidates.rend());
    }
    CriterionReport last;
    bool have = false;
    std::vector<u64> prefix;
    for (size_t len = 0; len <= candidates.size(); ++len) {
        if (len > 0) prefix.push_back(candidates[len - 1]);
        SieveSet s = make_sieve(dec, kind, prefix);
        if (s.delta <= 0) break;
        last = evaluate_sieved(dec, id, s);
        have = true;
        if (last.verdict == Verdict::Proved) return last;
    }
    if (!have) {
        // no admissible sieve at all; evaluate the empty set before giving up
        SieveSet s = make_sieve(dec, kind, {});
        last = evaluate_sieved(dec, id, s);
    }
    return last;
}

// ---- t-range procedures ----

struct TRangeResult {
    bool success = false;
    int t1 = 0, t2 = 0;
    int s = 0;
    BigRat delta = 1;
    BigRat q1 = 0;
    int c = 0;
};

// Step 1 helper: largest s <= t1 with 1 - sum_{i<s} 1/p(t1-i) > 0; the
// reduced variant backs off one prime, which can strengthen the result.
inline TRangeResult t_range_algorithm(int n, int t1, int t2, bool reduce_s = false) {
    if (!(n == 2 || n == 3)) throw std::domain_error("t_range_algorithm: n must be 2 or 3");
    if (t1 > t2) throw std::domain_error("t_range_algorithm: requires t1 <= t2");
    TRangeResult res;
    res.t1 = t1;
    res.t2 = t2;
    int smax = 0;
    for (int s = 1; s <= t1; ++s) {
        BigRat d = 1;
        for (int i = 0; i < s; ++i) d -= BigRat(1, nth_prime(t1 - i));
        if (d > 0)
            smax = s;
        else
            break;
    }
    int s = reduce_s ? smax - 1 : smax;
    if (s < 0) s = 0;
    res.s = s;
    BigRat delta = 1;
    for (int i = 0; i < s; ++i) delta -= BigRat(1, nth_prime(t1 - i));
    res.delta = delta;
    BigRat X = BigRat(s - 1) / delta + 2;
    BigRat base = (n == 3 ? 4 : 2) * X * BigRat(BigInt(1) << (t2 - s));
    res.q1 = base * base;  // exponent 2/(n-2) = 2 at n=3; squared by design at n=2
    BigRat limit = res.q1;
    for (int i = 1; i < n; ++i) limit *= res.q1;
    limit -= 1;
    BigInt primorial = 1;
    int c = 0;
    while (BigRat(primorial * BigInt(nth_prime(c + 1))) <= limit) {
        primorial *= BigInt(nth_prime(c + 1));
        ++c;
    }
    res.c = c;
    // the n=3 run needs strict dominance (c < t1); the n=2 run admits equality
    res.success = (n == 3) ? (c < t1) : (c <= t1);
    return res;
}

// ---- generic n > 4 gate ----

// q^(3n/8 - 1) > 4 * 4514.7, exactly: q^(3n-8) * 10^8 > 180588^8
inline bool n4_simple_check(u64 q, int n) {
    if (n <= 4) throw std::domain_error("n4_simple_check: requires n > 4");
    static const BigInt rhs = bigpow(BigInt(180588), 8);
    return bigpow(BigInt(q), 3 * n - 8) * 100000000 > rhs;
}

// refinement with the exact d_t = c_{t,8} of t = q^n-1:
// q^(3n-8) * (p_1...p_j) > 2^(8j+16) over the primes p_i <= 256 dividing t
inline bool n4_dt_check(u64 q, int n) {
    if (n <= 4) throw std::domain_error("n4_dt_check: requires n > 4");
    static const std::vector<u64> small = primes_up_to(256);
    u128 t = pow_u128(q, n) - 1;
    BigInt P = 1;
    int j = 0;
    for (u64 p : small) {
        if (t % p == 0) {
            P *= p;
            ++j;
        }
    }
    return bigpow(BigInt(q), 3 * n - 8) * P > (BigInt(1) << (8 * j + 16));
}

// least prime power (any characteristic) satisfying the generic gate
inline u64 table1_threshold(int n) {
    for (u64 q = 3;; ++q) {
        if (!prime_power(q)) continue;
        if (n4_simple_check(q, n)) return q;
    }
}

}  // namespace trace2p
