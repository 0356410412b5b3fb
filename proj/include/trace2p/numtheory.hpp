#pragma once

// Exact integer arithmetic: deterministic primality, factorization up to
// 2^80, square-free divisor counts and the derived quantities the existence
// criteria consume.

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "trace2p/int128.hpp"

namespace trace2p {

// Miller-Rabin with the first 13 prime bases is deterministic for
// n < 3.317e24 > 2^81, which covers the factorization contract.
inline bool is_prime(u128 n) {
    if (n < 2) return false;
    static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (u64 p : kBases)
        if (n % p == 0) return n == p;
    u128 d = n - 1;
    int r = 0;
    while (!(d & 1)) {
        d >>= 1;
        ++r;
    }
    for (u64 a : kBases) {
        u128 x = powmod128(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod128(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// ascending list of primes <= limit
inline std::vector<u64> primes_up_to(u64 limit) {
    std::vector<bool> comp(limit + 1, false);
    std::vector<u64> out;
    for (u64 i = 2; i <= limit; ++i) {
        if (!comp[i]) {
            out.push_back(i);
            for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
        }
    }
    return out;
}

inline const std::vector<u64>& trial_primes() {
    static const std::vector<u64> table = primes_up_to(65536);
    return table;
}

struct Factorization {
    u128 value = 1;
    std::vector<std::pair<u128, int>> factors;  // primes ascending

    u128 radical() const {
        u128 r = 1;
        for (auto& [p, e] : factors) r *= p;
        return r;
    }
    int omega() const { return int(factors.size()); }
    // W(value): number of square-free divisors = 2^omega
    u128 squarefree_divisor_count() const { return u128(1) << factors.size(); }
    bool divides_radical(u128 p) const {
        for (auto& [q, e] : factors)
            if (q == p) return true;
        return false;
    }
};

namespace detail {

// Pollard rho with the increment schedule c = 1, 2, 3, ..., so
// factorizations are identical across runs and threads.
inline u128 pollard_rho(u128 n) {
    for (u64 c = 1;; ++c) {
        u128 x = 2, y = 2, d = 1;
        auto step = [&](u128 v) { return (mulmod128(v, v, n) + c) % n; };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            u128 diff = x > y ? x - y : y - x;
            if (diff == 0) break;  // cycle without factor; retry with next c
            d = gcd128(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

inline void factor_into(u128 n, std::map<u128, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n]++;
        return;
    }
    u128 d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace detail

inline Factorization factorize(u128 t) {
    if (t < 1) throw std::domain_error("factorize: argument must be positive");
    Factorization f;
    f.value = t;
    if (t == 1) return f;
    std::map<u128, int> acc;
    for (u64 p : trial_primes()) {
        if (u128(p) * p > t) break;
        while (t % p == 0) {
            acc[p]++;
            t /= p;
        }
    }
    if (t > 1) detail::factor_into(t, acc);
    f.factors.assign(acc.begin(), acc.end());
    return f;
}

// Optional process-wide memo; behaves as one atomic insert-if-absent map.
class FactorCache {
  public:
    Factorization get(u128 t) {
        if (t <= ~u64(0)) {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(u64(t));
            if (it != memo_.end()) return it->second;
        }
        Factorization f = factorize(t);
        if (t <= ~u64(0)) {
            std::lock_guard<std::mutex> lock(mu_);
            memo_.emplace(u64(t), f);
        }
        return f;
    }

  private:
    std::mutex mu_;
    std::unordered_map<u64, Factorization> memo_;
};

inline u128 squarefree_divisor_count(u128 t) { return factorize(t).squarefree_divisor_count(); }

// c_{t,a} = 2^j / (p_1...p_j)^{1/a} over the primes p_i | t with p_i <= 2^a,
// kept exact as (j, product); W(t) <= c_{t,a} * t^{1/a} always holds.
struct WrBound {
    int j = 0;
    u128 prime_product = 1;
    int a = 8;

    // numeric value of c_{t,a}, good to ~18 significant digits
    long double value() const {
        long double prod = 0.0L;
        long double scale = 1.0L;
        u128 v = prime_product;
        while (v) {
            prod += scale * (long double)(u64)(v & 0xffffffffULL);
            scale *= 4294967296.0L;
            v >>= 32;
        }
        return exp2l((long double)j) / powl(prod, 1.0L / a);
    }
};

inline WrBound wr_bound(const Factorization& f, int a) {
    if (a < 1) throw std::domain_error("wr_bound: a must be >= 1");
    WrBound b;
    b.a = a;
    u128 cutoff = a >= 127 ? ~u128(0) : (u128(1) << a);
    for (auto& [p, e] : f.factors) {
        if (p <= cutoff) {
            b.j++;
            b.prime_product *= p;
        }
    }
    return b;
}

inline WrBound wr_bound(u128 t, int a) { return wr_bound(factorize(t), a); }

inline u64 euler_phi(u64 m) {
    u64 r = m;
    for (auto& [p, e] : factorize(m).factors) r -= r / u64(p);
    return r;
}

inline int moebius(u64 m) {
    auto f = factorize(m);
    for (auto& [p, e] : f.factors)
        if (e > 1) return 0;
    return f.factors.size() % 2 == 0 ? 1 : -1;
}

// theta(m) = phi(m)/m as an exact reduced fraction
inline std::pair<u64, u64> theta_exact(u64 m) {
    u64 num = euler_phi(m), den = m;
    u64 g = std::gcd(num, den);
    return {num / g, den / g};
}

// All integer invariants of a pair (q, n): q^n-1 factored, its radical,
// Q = (q^n-1)/(q-1), m_Q, and for n=2 the split q^2-1 = 2^ell * r2 * s2.
struct QnDecomposition {
    u64 q = 0;
    int n = 0;
    u128 order = 0;  // q^n - 1
    Factorization order_factors;
    u128 q0 = 1;  // radical of q^n - 1
    u128 Q = 1;   // (q^n - 1)/(q - 1)
    Factorization Q_factors;
    u128 mQ = 1;  // product of primes of q0 dividing Q
    int ell = 0;  // 2-adic valuation of q^n - 1
    std::optional<u64> r2;  // odd part of q+1 (n = 2 only)
    std::optional<u64> s2;  // odd part of q-1 (n = 2 only)
};

inline u128 pow_u128(u64 q, int n) {
    u128 v = 1;
    for (int i = 0; i < n; ++i) v *= q;
    return v;
}

inline bool prime_power(u64 q, u64* base = nullptr, int* exp = nullptr) {
    if (q < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (q % p == 0) {
            u64 v = q;
            int a = 0;
            while (v % p == 0) {
                v /= p;
                ++a;
            }
            if (v != 1) return false;
            if (base) *base = p;
            if (exp) *exp = a;
            return true;
        }
    }
    if (is_prime(q)) {
        if (base) *base = q;
        if (exp) *exp = 1;
        return true;
    }
    auto f = factorize(q);
    if (f.factors.size() != 1) return false;
    if (base) *base = u64(f.factors[0].first);
    if (exp) *exp = f.factors[0].second;
    return true;
}

inline QnDecomposition decompose(u64 q, int n, FactorCache* cache = nullptr) {
    u64 p = 0;
    int a = 0;
    if (!prime_power(q, &p, &a) || p == 2)
        throw std::domain_error("decompose: q must be an odd prime power");
    if (n < 1) throw std::domain_error("decompose: n must be positive");
    QnDecomposition d;
    d.q = q;
    d.n = n;
    d.order = pow_u128(q, n) - 1;
    // factor q^n-1 through the subgroup orders q^d-1 for d | n: every prime
    // factor of q^n-1 divides some q^d-1 with the cofactors much smaller
    // than q^n-1 itself.
    std::map<u128, int> acc;
    u128 remaining = d.order;
    for (int dd = 1; dd <= n; ++dd) {
        if (n % dd != 0) continue;
        u128 part = pow_u128(q, dd) - 1;
        Factorization pf = cache ? cache->get(part) : factorize(part);
        for (auto& [pp, e] : pf.factors) {
            while (remaining % pp == 0) {
                acc[pp]++;
                remaining /= pp;
            }
        }
        if (remaining == 1) break;
    }
    d.order_factors.value = d.order;
    d.order_factors.factors.assign(acc.begin(), acc.end());
    d.q0 = d.order_factors.radical();
    d.Q = d.order / (q - 1);
    d.Q_factors.value = d.Q;
    for (auto& [pp, e] : d.order_factors.factors) {
        if (d.Q % pp == 0) {
            int cnt = 0;
            u128 v = d.Q;
            while (v % pp == 0) {
                v /= pp;
                ++cnt;
            }
            d.Q_factors.factors.push_back({pp, cnt});
            d.mQ *= pp;
        }
    }
    while (d.order % (u128(1) << (d.ell + 1)) == 0) ++d.ell;
    if (n == 2) {
        u64 rp = q + 1, sp = q - 1;
        while (rp % 2 == 0) rp /= 2;
        while (sp % 2 == 0) sp /= 2;
        d.r2 = rp;
        d.s2 = sp;
    }
    return d;
}

// p(i), 1-based: p(1) = 2
inline u64 nth_prime(int i) {
    static const std::vector<u64> table = primes_up_to(1000);
    if (i < 1 || i > int(table.size())) throw std::domain_error("nth_prime: index out of range");
    return table[i - 1];
}

// Smallest-prime-factor sieve; the scan over q <= 2^20 factors q-1 and q+1
// through this instead of trial division.
class SpfSieve {
  public:
    explicit SpfSieve(u64 limit) : limit_(limit), spf_(limit + 1, 0) {
        for (u64 i = 2; i <= limit; ++i) {
            if (!spf_[i])
                for (u64 j = i; j <= limit; j += i)
                    if (!spf_[j]) spf_[j] = uint32_t(i);
        }
    }
    u64 limit() const { return limit_; }
    bool is_prime(u64 v) const { return v >= 2 && spf_[v] == v; }
    bool is_prime_power(u64 v, u64* base = nullptr) const {
        if (v < 2) return false;
        u64 p = spf_[v];
        while (v % p == 0) v /= p;
        if (base) *base = p;
        return v == 1;
    }
    std::vector<std::pair<u64, int>> factor(u64 v) const {
        std::vector<std::pair<u64, int>> out;
        while (v > 1) {
            u64 p = spf_[v];
            int e = 0;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            out.push_back({p, e});
        }
        return out;
    }

  private:
    u64 limit_;
    std::vector<uint32_t> spf_;
};

}  // namespace trace2p
