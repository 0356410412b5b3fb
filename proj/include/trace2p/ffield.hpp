#pragma once

// Extension fields F_{p^k} with a canonical construction: lexicographically
// least monic irreducible modulus (constant coefficient compared first) and
// the least primitive element as generator. Elements enumerate in base-p
// counter order on their coefficient vectors, so every "first such element"
// below is deterministic.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "trace2p/numtheory.hpp"

namespace trace2p {

inline constexpr int kMaxFieldDegree = 25;  // 3^25 is the largest p^k <= 2^40

struct FFElem {
    std::array<u64, kMaxFieldDegree> c{};

    bool operator==(const FFElem& o) const { return c == o.c; }
    bool operator!=(const FFElem& o) const { return !(*this == o); }
};

namespace polyfp {

// dense polynomials over F_p, used only for modulus construction
using Poly = std::vector<u64>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& f, u64 p) {
    if (a.empty() || b.empty()) return {};
    std::vector<u128> acc(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) acc[i + j] += u128(a[i]) % p * (b[j] % p) % p;
    Poly r(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) r[i] = u64(acc[i] % p);
    // reduce by monic f
    int k = int(f.size()) - 1;
    for (int i = int(r.size()) - 1; i >= k; --i) {
        u64 lead = r[i] % p;
        if (!lead) continue;
        r[i] = 0;
        for (int j = 0; j < k; ++j) {
            u128 sub = u128(lead) * (f[j] % p) % p;
            r[i - k + j] = u64((u128(r[i - k + j]) + p - u64(sub)) % p);
        }
    }
    r.resize(k);
    return r;
}

inline Poly powmod_x(u128 e, const Poly& f, u64 p) {
    Poly base = mulmod({0, 1}, {1}, f, p);
    Poly r = {1};
    while (e) {
        if (e & 1) r = mulmod(r, base, f, p);
        base = mulmod(base, base, f, p);
        e >>= 1;
    }
    r.resize(f.size() - 1);
    return r;
}

// a mod b in place, b nonzero
inline void rem_inplace(Poly& a, const Poly& b, u64 p) {
    u64 inv = powmod64(b.back() % p, p - 2, p);
    while (true) {
        trim(a);
        if (a.size() < b.size()) return;
        u64 lead = mulmod64(a.back(), inv, p);
        size_t off = a.size() - b.size();
        for (size_t j = 0; j < b.size(); ++j)
            a[off + j] = u64((u128(a[off + j]) + p - mulmod64(lead, b[j] % p, p)) % p);
    }
}

inline Poly gcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        rem_inplace(a, b, p);
        std::swap(a, b);
    }
    return a;
}

inline bool irreducible(const Poly& f, u64 p) {
    int k = int(f.size()) - 1;
    if (k == 1) return true;
    if (f[0] == 0) return false;
    // x^(p^k) == x mod f, and gcd(x^(p^(k/l)) - x, f) = 1 for prime l | k
    u128 pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    Poly xp = powmod_x(pk, f, p);
    Poly x = {0, 1};
    x.resize(f.size() - 1);
    if (xp != x) return false;
    for (auto& [l, e] : factorize(u64(k)).factors) {
        u128 pd = 1;
        for (int i = 0; i < k / int(l); ++i) pd *= p;
        Poly g = powmod_x(pd, f, p);
        if (g.size() < 2) g.resize(2, 0);
        g[1] = (g[1] + p - 1) % p;  // g - x
        Poly d = gcd(g, f, p);
        if (d.size() != 1) return false;
    }
    return true;
}

}  // namespace polyfp

class FieldCtx;

// Base-subfield view of an extension: F_{q^n} over F_q with q = p^d, n = k/d.
struct ExtensionView;

class FieldCtx {
  public:
    // canonical construction
    FieldCtx(u64 p, int k) : FieldCtx(p, k, canonical_modulus(p, k)) {}

    // explicit monic irreducible modulus (coefficients ascending, size k+1)
    FieldCtx(u64 p, int k, std::vector<u64> modulus) : p_(p), k_(k), modulus_(std::move(modulus)) {
        if (p < 3 || !is_prime(p)) throw std::domain_error("field: p must be an odd prime");
        if (k < 1 || k > kMaxFieldDegree) throw std::domain_error("field: degree out of range");
        u128 sz = 1;
        for (int i = 0; i < k; ++i) {
            sz *= p;
            if (sz > (u128(1) << 40)) throw std::domain_error("field: p^k exceeds 2^40");
        }
        size_ = u64(sz);
        order_ = size_ - 1;
        if (modulus_.size() != size_t(k) + 1 || modulus_.back() != 1)
            throw std::domain_error("field: modulus must be monic of degree k");
        if (!polyfp::irreducible(modulus_, p))
            throw std::domain_error("field: modulus is reducible");
        order_factors_ = factorize(order_);
        init_trace_tables();
        generator_ = find_generator();
    }

    u64 p() const { return p_; }
    int k() const { return k_; }
    u64 size() const { return size_; }            // p^k
    u64 group_order() const { return order_; }    // p^k - 1
    const Factorization& group_order_factors() const { return order_factors_; }
    const std::vector<u64>& modulus() const { return modulus_; }
    const FFElem& generator() const { return generator_; }

    static std::vector<u64> canonical_modulus(u64 p, int k) {
        if (p < 3 || !is_prime(p)) throw std::domain_error("field: p must be an odd prime");
        if (k < 1 || k > kMaxFieldDegree) throw std::domain_error("field: degree out of range");
        if (k == 1) return {0, 1};  // x
        std::vector<u64> coeffs(k, 0);  // c_0 .. c_{k-1}
        // odometer with c_0 as the most significant digit
        while (true) {
            polyfp::Poly f(coeffs.begin(), coeffs.end());
            f.push_back(1);
            if (f[0] != 0 && polyfp::irreducible(f, p)) return f;
            int i = k - 1;
            while (i >= 0 && coeffs[i] == p - 1) coeffs[i--] = 0;
            if (i < 0) throw std::logic_error("no irreducible polynomial found");
            coeffs[i]++;
        }
    }

    // ---- element basics ----

    FFElem zero() const { return FFElem{}; }
    FFElem one() const {
        FFElem e{};
        e.c[0] = 1;
        return e;
    }
    FFElem from_scalar(u64 v) const {
        FFElem e{};
        e.c[0] = v % p_;
        return e;
    }
    bool is_zero(const FFElem& x) const {
        for (int i = 0; i < k_; ++i)
            if (x.c[i]) return false;
        return true;
    }

    u64 index_of(const FFElem& x) const {
        u64 idx = 0;
        for (int i = k_ - 1; i >= 0; --i) idx = idx * p_ + x.c[i];
        return idx;
    }
    FFElem element_at(u64 idx) const {
        FFElem e{};
        for (int i = 0; i < k_; ++i) {
            e.c[i] = idx % p_;
            idx /= p_;
        }
        return e;
    }

    std::string to_string(const FFElem& x) const {
        std::string s;
        for (int i = 0; i < k_; ++i) {
            if (i) s += ',';
            s += std::to_string(x.c[i]);
        }
        return s;
    }
    FFElem parse(const std::string& s) const {
        FFElem e{};
        int i = 0;
        size_t pos = 0;
        while (pos < s.size() && i < k_) {
            size_t next = s.find(',', pos);
            if (next == std::string::npos) next = s.size();
            e.c[i++] = std::stoull(s.substr(pos, next - pos)) % p_;
            pos = next + 1;
        }
        return e;
    }

    // ---- arithmetic ----

    FFElem add(const FFElem& a, const FFElem& b) const {
        FFElem r{};
        for (int i = 0; i < k_; ++i) {
            u64 v = a.c[i] + b.c[i];
            r.c[i] = v >= p_ ? v - p_ : v;
        }
        return r;
    }
    FFElem sub(const FFElem& a, const FFElem& b) const {
        FFElem r{};
        for (int i = 0; i < k_; ++i) {
            u64 v = a.c[i] + p_ - b.c[i];
            r.c[i] = v >= p_ ? v - p_ : v;
        }
        return r;
    }
    FFElem neg(const FFElem& a) const { return sub(zero(), a); }
    FFElem scalar_mul(u64 s, const FFElem& a) const {
        s %= p_;
        FFElem r{};
        for (int i = 0; i < k_; ++i) r.c[i] = u64(u128(a.c[i]) * s % p_);
        return r;
    }

    FFElem mul(const FFElem& a, const FFElem& b) const {
        std::array<u128, 2 * kMaxFieldDegree> acc{};
        for (int i = 0; i < k_; ++i) {
            if (!a.c[i]) continue;
            for (int j = 0; j < k_; ++j) acc[i + j] += u128(a.c[i]) * b.c[j];
        }
        std::array<u64, 2 * kMaxFieldDegree> r{};
        for (int i = 0; i < 2 * k_ - 1; ++i) r[i] = u64(acc[i] % p_);
        for (int i = 2 * k_ - 2; i >= k_; --i) {
            u64 lead = r[i];
            if (!lead) continue;
            r[i] = 0;
            for (int j = 0; j < k_; ++j) {
                u64 sub = u64(u128(lead) * modulus_[j] % p_);
                u64 v = r[i - k_ + j] + p_ - sub;
                r[i - k_ + j] = v >= p_ ? v - p_ : v;
            }
        }
        FFElem out{};
        for (int i = 0; i < k_; ++i) out.c[i] = r[i];
        return out;
    }

    FFElem pow(FFElem base, u128 e) const {
        FFElem r = one();
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    FFElem inverse(const FFElem& x) const {
        if (is_zero(x)) throw std::domain_error("inverse of zero");
        return pow(x, order_ - 1);
    }

    // ---- multiplicative structure ----

    u64 mult_order(const FFElem& x) const {
        if (is_zero(x)) throw std::domain_error("mult_order: zero has no order");
        u64 e = order_;
        for (auto& [pp, a] : order_factors_.factors) {
            for (int i = 0; i < a && e % u64(pp) == 0; ++i) {
                u64 cand = e / u64(pp);
                if (pow(x, cand) == one())
                    e = cand;
                else
                    break;
            }
        }
        return e;
    }

    bool is_primitive(const FFElem& x) const {
        if (is_zero(x)) return false;
        for (auto& [pp, a] : order_factors_.factors)
            if (pow(x, order_ / u64(pp)) == one()) return false;
        return true;
    }

    // m-free per the gcd criterion: gcd(m, (p^k-1)/ord(x)) = 1
    bool is_m_free(const FFElem& x, u64 m) const {
        if (is_zero(x)) throw std::domain_error("is_m_free: zero argument");
        if (order_ % m != 0) throw std::domain_error("is_m_free: m does not divide group order");
        u64 cofactor = order_ / mult_order(x);
        return std::gcd(m, cofactor) == 1;
    }

    bool is_r_primitive(const FFElem& x, u64 r) const {
        if (order_ % r != 0) throw std::domain_error("is_r_primitive: r does not divide group order");
        if (is_zero(x)) return false;
        return mult_order(x) == order_ / r;
    }

    // quadratic character on the full field, 0 at zero
    int chi2(const FFElem& x) const {
        if (is_zero(x)) return 0;
        return pow(x, order_ / 2) == one() ? 1 : -1;
    }

    // ---- traces ----

    // Tr_{k/d}(x) = sum of x^(p^(d*i)); result lies in the degree-d subfield
    FFElem trace(const FFElem& x, int d = 1) const {
        if (d < 1 || k_ % d != 0) throw std::domain_error("trace: d must divide k");
        const auto& images = trace_images_.at(d);
        FFElem acc{};
        for (int j = 0; j < k_; ++j)
            if (x.c[j]) acc = add(acc, scalar_mul(x.c[j], images[j]));
        return acc;
    }

    // absolute trace as a scalar in [0, p)
    u64 trace_abs(const FFElem& x) const {
        u128 acc = 0;
        for (int j = 0; j < k_; ++j) acc += u128(x.c[j]) * abs_trace_consts_[j] % p_;
        return u64(acc % p_);
    }

    // ---- discrete logs (lazy; only for p^k <= 2^26) ----

    bool log_table_available() const { return size_ <= (u64(1) << 26); }
    u64 log(const FFElem& x) const {
        ensure_log_table();
        if (is_zero(x)) throw std::domain_error("log of zero");
        return (*log_table_)[index_of(x)];
    }

    // ---- subfield machinery ----

    struct SubfieldMap {
        int d = 0;
        bool identity = false;                      // d == k
        std::vector<u64> modulus;                   // canonical degree-d modulus over F_p
        std::vector<FFElem> by_subindex;            // F_q elements in canonical F_q order
        std::unordered_map<u64, u64> subindex_of;   // big-field index -> F_q index
    };

    const SubfieldMap& subfield(int d) const {
        if (d < 1 || k_ % d != 0) throw std::domain_error("subfield: d must divide k");
        std::lock_guard<std::mutex> lock(subfield_mu_);
        auto it = subfields_.find(d);
        if (it != subfields_.end()) return *it->second;
        auto m = std::make_unique<SubfieldMap>(build_subfield(d));
        return *subfields_.emplace(d, std::move(m)).first->second;
    }

  private:
    void init_trace_tables() {
        for (int d = 1; d <= k_; ++d) {
            if (k_ % d != 0) continue;
            std::vector<FFElem> images(k_);
            u128 pd = 1;
            for (int i = 0; i < d; ++i) pd *= p_;
            for (int j = 0; j < k_; ++j) {
                FFElem yj{};
                if (j == 0)
                    yj.c[0] = 1;
                else
                    yj.c[j] = 1;
                FFElem t = yj, acc = yj;
                for (int i = 1; i < k_ / d; ++i) {
                    t = pow(t, pd);
                    acc = add(acc, t);
                }
                images[j] = acc;
            }
            trace_images_[d] = std::move(images);
        }
        abs_trace_consts_.resize(k_);
        for (int j = 0; j < k_; ++j) abs_trace_consts_[j] = trace_images_.at(1)[j].c[0];
    }

    FFElem find_generator() const {
        for (u64 idx = 1; idx < size_; ++idx) {
            FFElem cand = element_at(idx);
            if (is_primitive(cand)) return cand;
        }
        throw std::logic_error("no generator found");
    }

    void ensure_log_table() const {
        if (!log_table_available())
            throw std::runtime_error("log table unavailable: field larger than 2^26");
        std::call_once(log_once_, [this] {
            auto table = std::make_unique<std::vector<uint32_t>>(size_, 0);
            FFElem x = one();
            for (u64 e = 0; e < order_; ++e) {
                (*table)[index_of(x)] = uint32_t(e);
                x = mul(x, generator_);
            }
            log_table_ = std::move(table);
        });
    }

    SubfieldMap build_subfield(int d) const {
        SubfieldMap m;
        m.d = d;
        if (d == k_) {
            m.identity = true;
            m.modulus = modulus_;
            return m;
        }
        u64 q = 1;
        for (int i = 0; i < d; ++i) q *= p_;
        m.modulus = canonical_modulus(p_, d);
        // subfield elements: 0 together with the order q-1 subgroup
        std::vector<FFElem> elems;
        elems.push_back(zero());
        FFElem h = pow(generator_, order_ / (q - 1));
        FFElem x = one();
        for (u64 j = 0; j + 1 < q; ++j) {
            elems.push_back(x);
            x = mul(x, h);
        }
        if (d == 1) {
            m.by_subindex.resize(q);
            for (u64 a = 0; a < q; ++a) m.by_subindex[a] = from_scalar(a);
        } else {
            // least-index root of the canonical subfield modulus
            std::vector<u64> idxs;
            for (auto& e : elems) idxs.push_back(index_of(e));
            std::sort(idxs.begin(), idxs.end());
            FFElem root{};
            bool found = false;
            for (u64 idx : idxs) {
                FFElem cand = element_at(idx);
                // evaluate modulus at cand
                FFElem acc = from_scalar(m.modulus[d]);
                for (int i = d - 1; i >= 0; --i)
                    acc = add(mul(acc, cand), from_scalar(m.modulus[i]));
                if (is_zero(acc)) {
                    root = cand;
                    found = true;
                    break;
                }
            }
            if (!found) throw std::logic_error("subfield modulus has no root in field");
            m.by_subindex.resize(q);
            for (u64 a = 0; a < q; ++a) {
                u64 v = a;
                FFElem acc = zero(), zpow = one();
                for (int i = 0; i < d; ++i) {
                    acc = add(acc, scalar_mul(v % p_, zpow));
                    v /= p_;
                    zpow = mul(zpow, root);
                }
                m.by_subindex[a] = acc;
            }
        }
        m.subindex_of.reserve(m.by_subindex.size() * 2);
        for (u64 a = 0; a < q; ++a) m.subindex_of[index_of(m.by_subindex[a])] = a;
        return m;
    }

    u64 p_;
    int k_;
    u64 size_ = 0, order_ = 0;
    std::vector<u64> modulus_;
    Factorization order_factors_;
    FFElem generator_{};
    std::map<int, std::vector<FFElem>> trace_images_;
    std::vector<u64> abs_trace_consts_;

    mutable std::once_flag log_once_;
    mutable std::unique_ptr<std::vector<uint32_t>> log_table_;
    mutable std::mutex subfield_mu_;
    mutable std::map<int, std::unique_ptr<SubfieldMap>> subfields_;
};

// F_{q^n} over F_q with q = p^d and n = k/d.
struct ExtensionView {
    const FieldCtx* F;
    int d;

    ExtensionView(const FieldCtx& ctx, int base_degree) : F(&ctx), d(base_degree) {
        if (d < 1 || ctx.k() % d != 0)
            throw std::domain_error("extension view: base degree must divide k");
    }

    u64 q() const {
        u64 v = 1;
        for (int i = 0; i < d; ++i) v *= F->p();
        return v;
    }
    int n() const { return F->k() / d; }

    // elements of the base field in canonical F_q order
    const std::vector<FFElem>& base_elements() const {
        return F->subfield(d).identity ? identity_elements() : F->subfield(d).by_subindex;
    }
    u64 base_index(const FFElem& x) const {
        const auto& m = F->subfield(d);
        if (m.identity) return F->index_of(x);
        auto it = m.subindex_of.find(F->index_of(x));
        if (it == m.subindex_of.end()) throw std::domain_error("element not in base subfield");
        return it->second;
    }
    FFElem base_element(u64 subidx) const {
        const auto& m = F->subfield(d);
        if (m.identity) return F->element_at(subidx);
        return m.by_subindex[subidx];
    }
    bool in_base(const FFElem& x) const {
        const auto& m = F->subfield(d);
        if (m.identity) return true;
        return m.subindex_of.count(F->index_of(x)) != 0;
    }
    std::string base_to_string(const FFElem& x) const {
        u64 a = base_index(x);
        std::string s;
        u64 v = a;
        for (int i = 0; i < d; ++i) {
            if (i) s += ',';
            s += std::to_string(v % F->p());
            v /= F->p();
        }
        return s;
    }

    // Tr_{n/1} relative to this view: big field down to F_q
    FFElem trace(const FFElem& x) const { return F->trace(x, d); }

    // quadratic character of the base field at a base element
    int base_chi2(const FFElem& u) const {
        if (F->is_zero(u)) return 0;
        return F->pow(u, (q() - 1) / 2) == F->one() ? 1 : -1;
    }

    // least nonsquare of F_q in canonical order
    FFElem least_base_nonsquare() const {
        for (u64 a = 1; a < q(); ++a) {
            FFElem u = base_element(a);
            if (base_chi2(u) == -1) return u;
        }
        throw std::logic_error("no nonsquare in base field");
    }

  private:
    const std::vector<FFElem>& identity_elements() const {
        std::lock_guard<std::mutex> lock(cache_mu_);
        if (identity_cache_.empty()) {
            identity_cache_.reserve(F->size());
            for (u64 i = 0; i < F->size(); ++i) identity_cache_.push_back(F->element_at(i));
        }
        return identity_cache_;
    }
    mutable std::mutex cache_mu_;
    mutable std::vector<FFElem> identity_cache_;
};

// ---- constructions the reduction and basis arguments use ----

inline FieldCtx build_field(u64 p, int k) { return FieldCtx(p, k); }

// first nonzero alpha in F_{q^l} (canonical field over the same prime) with
// Tr_{l/1}(alpha) = beta, beta given as an element of the base subfield
inline FFElem find_lift(const FieldCtx& big, int base_degree, const FFElem& beta) {
    ExtensionView v(big, base_degree);
    for (u64 idx = 1; idx < big.size(); ++idx) {
        FFElem a = big.element_at(idx);
        if (v.trace(a) == beta) return a;
    }
    throw std::logic_error("find_lift: no element with the requested trace");
}

// first c in F_q^* with c*xi primitive, for xi free of the radical of
// Q = (q^n-1)/(q-1)
inline FFElem scale_to_primitive(const ExtensionView& v, const FFElem& xi) {
    const FieldCtx& F = *v.F;
    u64 Q = F.group_order() / (v.q() - 1);
    u64 radQ = 1;
    for (auto& [p, e] : F.group_order_factors().factors)
        if (Q % u64(p) == 0) radQ *= u64(p);
    if (!F.is_m_free(xi, radQ))
        throw std::invalid_argument("scale_to_primitive: xi is not Q-free");
    for (u64 a = 1; a < v.q(); ++a) {
        FFElem c = v.base_element(a);
        if (F.is_primitive(F.mul(c, xi))) return c;
    }
    throw std::logic_error("scale_to_primitive: no scaling constant found");
}

// theta1, theta2 in F_{q^2} with Tr(theta1) = beta != 0, Tr(theta2) = 0,
// linearly independent over F_q; first such pair in enumeration order
inline std::pair<FFElem, FFElem> trace_basis(const FieldCtx& big, int base_degree,
                                             const FFElem& beta) {
    ExtensionView v(big, base_degree);
    if (v.n() != 2) throw std::domain_error("trace_basis: requires a quadratic extension");
    if (big.is_zero(beta)) throw std::domain_error("trace_basis: beta must be nonzero");
    FFElem theta1{}, theta2{};
    bool f1 = false, f2 = false;
    for (u64 idx = 0; idx < big.size() && !(f1 && f2); ++idx) {
        FFElem x = big.element_at(idx);
        FFElem t = v.trace(x);
        if (!f1 && t == beta) {
            theta1 = x;
            f1 = true;
        }
        if (!f2 && idx > 0 && big.is_zero(t)) {
            theta2 = x;
            f2 = true;
        }
    }
    if (!f1 || !f2) throw std::logic_error("trace_basis: construction failed");
    return {theta1, theta2};
}

}  // namespace trace2p
