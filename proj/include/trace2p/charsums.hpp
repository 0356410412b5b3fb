#pragma once

// Multiplicative and additive characters, Gauss / hybrid / Katz sums, the
// Vinogradov-style characteristic functions, and the exact counting
// formulas together with their brute-force companions.

#include <complex>
#include <numbers>
#include <vector>

#include "trace2p/ffield.hpp"

namespace trace2p {

using Complex = std::complex<double>;

// Multiplicative character by its global exponent: chi(g^e) = zeta_N^(m*e)
// where N = p^k - 1. Order is N / gcd(m, N); chi(0) = 0 by convention.
struct MultChar {
    const FieldCtx* F;
    u64 m;

    u64 order() const { return F->group_order() / std::gcd(m, F->group_order()); }
    bool trivial() const { return m % F->group_order() == 0; }

    Complex operator()(const FFElem& x) const {
        if (F->is_zero(x)) return {0.0, 0.0};
        u64 e = F->log(x);
        u64 N = F->group_order();
        double ang = 2.0 * std::numbers::pi * double(mulmod64(m % N, e, N)) / double(N);
        return std::polar(1.0, ang);
    }
    MultChar conj() const { return {F, (F->group_order() - m % F->group_order()) % F->group_order()}; }
    MultChar times(const MultChar& o) const { return {F, (m + o.m) % F->group_order()}; }
};

// characters of exact order d, one per unit j mod d
inline std::vector<MultChar> characters_of_order(const FieldCtx& F, u64 d) {
    u64 N = F.group_order();
    if (N % d != 0) throw std::domain_error("characters_of_order: d does not divide group order");
    std::vector<MultChar> out;
    for (u64 j = 1; j <= d; ++j)
        if (std::gcd(j, d) == 1) out.push_back({&F, j * (N / d) % N});
    return out;
}

inline std::vector<MultChar> all_nontrivial_characters(const FieldCtx& F) {
    std::vector<MultChar> out;
    for (u64 m = 1; m < F.group_order(); ++m) out.push_back({&F, m});
    return out;
}

inline MultChar quadratic_character(const FieldCtx& F) { return {&F, F.group_order() / 2}; }

// canonical additive character of the big field at u*x
inline Complex psi_canonical(const FieldCtx& F, const FFElem& x) {
    double ang = 2.0 * std::numbers::pi * double(F.trace_abs(x)) / double(F.p());
    return std::polar(1.0, ang);
}

// absolute trace of an element of the base subfield, i.e. trace of the
// degree-d subfield onto F_p (not the big field's trace)
inline u64 base_trace_abs(const ExtensionView& v, const FFElem& z) {
    const FieldCtx& F = *v.F;
    FFElem t = z, acc = z;
    for (int i = 1; i < v.d; ++i) {
        t = F.pow(t, F.p());
        acc = F.add(acc, t);
    }
    return acc.c[0];
}

// canonical additive character of the base field F_q
inline Complex psi_base(const ExtensionView& v, const FFElem& z) {
    double ang = 2.0 * std::numbers::pi * double(base_trace_abs(v, z)) / double(v.F->p());
    return std::polar(1.0, ang);
}

// ---- characteristic functions ----

// omega_m: 1 on m-free elements, 0 elsewhere (within float tolerance)
inline Complex omega_m(const FieldCtx& F, u64 m, const FFElem& xi) {
    if (F.is_zero(xi)) throw std::domain_error("omega_m: zero argument");
    if (F.group_order() % m != 0) throw std::domain_error("omega_m: m does not divide group order");
    auto mf = factorize(m);
    // sum over squarefree divisors d of m
    int r = mf.omega();
    Complex total = 0;
    for (int mask = 0; mask < (1 << r); ++mask) {
        u64 d = 1;
        for (int i = 0; i < r; ++i)
            if (mask & (1 << i)) d *= u64(mf.factors[i].first);
        int mu = __builtin_popcount(unsigned(mask)) % 2 == 0 ? 1 : -1;
        Complex inner = 0;
        for (auto& chi : characters_of_order(F, d)) inner += chi(xi);
        total += double(mu) / double(euler_phi(d)) * inner;
    }
    auto [tn, td] = theta_exact(m);
    return double(tn) / double(td) * total;
}

// w_k: 1 on k-th powers, 0 elsewhere
inline Complex w_k(const FieldCtx& F, u64 kk, const FFElem& xi) {
    if (F.is_zero(xi)) throw std::domain_error("w_k: zero argument");
    if (F.group_order() % kk != 0) throw std::domain_error("w_k: k does not divide group order");
    Complex total = 0;
    for (u64 d = 1; d <= kk; ++d) {
        if (kk % d != 0) continue;
        for (auto& chi : characters_of_order(F, d)) total += chi(xi);
    }
    return total / double(kk);
}

// t_beta: 1 on elements of F_{q^n} with Tr(xi) = beta, 0 elsewhere
inline Complex t_beta(const ExtensionView& v, const FFElem& beta, const FFElem& xi) {
    const FieldCtx& F = *v.F;
    Complex total = 0;
    for (const FFElem& u : v.base_elements()) {
        FFElem ub = F.mul(u, beta);
        Complex psi_bar = std::conj(psi_base(v, ub));
        Complex psi_lift = psi_canonical(F, F.mul(u, xi));
        total += psi_bar * psi_lift;
    }
    return total / double(v.q());
}

// ---- Gauss sums ----

struct GaussSum {
    Complex value;
    bool degenerate = false;  // u = 0
};

// g_n(u) = sum over the whole field of psi(u xi^2)
inline GaussSum gauss_sum(const FieldCtx& F, const FFElem& u) {
    GaussSum g;
    if (F.is_zero(u)) {
        g.value = double(F.size());
        g.degenerate = true;
        return g;
    }
    Complex total = 0;
    for (u64 idx = 0; idx < F.size(); ++idx) {
        FFElem x = F.element_at(idx);
        total += psi_canonical(F, F.mul(u, F.mul(x, x)));
    }
    g.value = total;
    return g;
}

// closed-form prediction for A = sum_{xi != 0} psi~(u xi^2), by parity of n
struct GaussSignPrediction {
    int eps = 0;       // epsilon_1 (n even) or epsilon_2 (n odd)
    int chi2_u = 1;    // quadratic character of u in F_q (n odd only)
    double value = 0;  // predicted A
};

enum class SquareClass { Square, NonSquare };

inline GaussSignPrediction gauss_sign(u64 q, int n, SquareClass u_class) {
    u64 p = 0;
    int a = 0;
    if (!prime_power(q, &p, &a) || p == 2)
        throw std::domain_error("gauss_sign: q must be an odd prime power");
    bool even_pair = (q % 4 == 1) || (n % 2 == 0);
    if (!even_pair) throw std::domain_error("gauss_sign: (q,n) must be an even pair");
    GaussSignPrediction out;
    if (n % 2 == 0) {
        out.eps = (q % 4 == 3 && n % 4 == 2) ? 1 : -1;
        out.value = double(out.eps) * std::pow(double(q), n / 2.0) - 1.0;
        return out;
    }
    // n odd: hypothesis requires q square when p = 3 mod 4
    bool q_square = a % 2 == 0;
    bool q_fourth = a % 4 == 0;
    if (p % 4 == 3 && !q_square)
        throw std::domain_error("gauss_sign: n odd with p = 3 (mod 4) requires q square");
    if (p % 4 == 1)
        out.eps = q_square ? -1 : 1;
    else
        out.eps = q_fourth ? -1 : 1;
    out.chi2_u = u_class == SquareClass::Square ? 1 : -1;
    out.value = double(out.chi2_u) * double(out.eps) * std::pow(double(q), n / 2.0) - 1.0;
    return out;
}

// ---- bounded sums ----

struct SumReport {
    Complex value;
    double bound = 0;
    bool tight = false;
    std::string note;
};

// A = sum_xi chi(xi) psi~(u xi^r), u in the base field
inline SumReport hybrid_sum(const ExtensionView& v, const MultChar& chi, const FFElem& u, u64 r) {
    const FieldCtx& F = *v.F;
    if (F.group_order() % r != 0) throw std::domain_error("hybrid_sum: r does not divide group order");
    Complex total = 0;
    for (u64 idx = 0; idx < F.size(); ++idx) {
        FFElem x = F.element_at(idx);
        if (F.is_zero(x)) continue;  // chi(0) = 0
        total += chi(x) * psi_canonical(F, F.mul(u, F.pow(x, r)));
    }
    SumReport rep;
    rep.value = total;
    double qn2 = std::sqrt(double(F.size()));
    bool d1 = chi.trivial(), u0 = F.is_zero(u);
    if (d1 && u0) {
        rep.bound = double(F.size() - 1);
        rep.note = "exact: q^n - 1";
    } else if (d1 && !u0) {
        rep.bound = double(r - 1) * qn2 + 1.0;
    } else if (!d1 && u0) {
        rep.bound = 0.0;
        rep.note = "exact: 0";
    } else {
        rep.bound = double(r) * qn2;
    }
    rep.tight = std::abs(std::abs(total) - rep.bound) <= 1e-6;
    return rep;
}

// B = sum over alpha in F_q of chi(theta + alpha), theta generating F_{q^2}
inline SumReport katz_sum(const ExtensionView& v, const FFElem& theta, const MultChar& chi) {
    const FieldCtx& F = *v.F;
    if (v.n() != 2) throw std::domain_error("katz_sum: view must be a quadratic extension");
    if (v.in_base(theta)) throw std::domain_error("katz_sum: theta must generate the extension");
    if (chi.trivial()) throw std::domain_error("katz_sum: chi must be nontrivial");
    Complex total = 0;
    for (const FFElem& a : v.base_elements()) total += chi(F.add(theta, a));
    SumReport rep;
    rep.value = total;
    if ((v.q() + 1) % chi.order() == 0) {
        rep.bound = 1.0;
        rep.note = "ord(chi) | q+1: B = -1";
    } else {
        rep.bound = std::sqrt(double(v.q()));
        rep.note = "ord(chi) does not divide q+1: |B| = sqrt(q)";
    }
    rep.tight = std::abs(std::abs(total) - rep.bound) <= 1e-6;
    return rep;
}

// ---- exact counting ----

// number of nonzero squares with trace beta: brute count and closed form
struct SquareTraceCount {
    long long exact = -1;  // -1 when the field is too large to enumerate
    long long formula = 0;
};

inline long long msquares_formula(const ExtensionView& v, const FFElem& beta) {
    u64 q = v.q();
    int n = v.n();
    bool even_pair = (q % 4 == 1) || (n % 2 == 0);
    if (!even_pair) throw std::domain_error("msquares: (q,n) must be an even pair");
    auto ipow = [](u64 b, int e) {
        long long r = 1;
        for (int i = 0; i < e; ++i) r *= (long long)b;
        return r;
    };
    bool beta_zero = v.F->is_zero(beta);
    if (n % 2 == 0) {
        int eps1 = (q % 4 == 3 && n % 4 == 2) ? 1 : -1;
        if (beta_zero)
            return (ipow(q, n - 1) - 1 + (long long)eps1 * (long long)(q - 1) * ipow(q, n / 2 - 1)) / 2;
        return (ipow(q, n - 1) - (long long)eps1 * ipow(q, n / 2 - 1)) / 2;
    }
    if (beta_zero) return (ipow(q, n - 1) - 1) / 2;
    int chi = v.base_chi2(beta);
    return (ipow(q, n - 1) + (long long)chi * ipow(q, (n - 1) / 2)) / 2;
}

inline SquareTraceCount count_squares_with_trace(const ExtensionView& v, const FFElem& beta) {
    SquareTraceCount out;
    out.formula = msquares_formula(v, beta);
    const FieldCtx& F = *v.F;
    if (F.size() <= (u64(1) << 26)) {
        u64 N = F.group_order();
        FFElem g2 = F.mul(F.generator(), F.generator());
        FFElem y = F.one();
        long long cnt = 0;
        for (u64 j = 0; j < N / 2; ++j) {
            if (v.trace(y) == beta) ++cnt;
            y = F.mul(y, g2);
        }
        out.exact = cnt;
    }
    return out;
}

// N_beta(m): exact count of m-free xi with Tr(xi^2) = beta
inline long long count_Nbeta(const ExtensionView& v, u64 m, const FFElem& beta) {
    const FieldCtx& F = *v.F;
    if (F.size() > (u64(1) << 26))
        throw std::runtime_error("count_Nbeta: field larger than 2^26");
    u64 N = F.group_order();
    if (N % m != 0) throw std::domain_error("count_Nbeta: m does not divide group order");
    bool even_pair = (v.q() % 4 == 1) || (v.n() % 2 == 0);
    if (!even_pair) throw std::domain_error("count_Nbeta: (q,n) must be an even pair");
    FFElem g = F.generator(), g2 = F.mul(g, g);
    FFElem x = F.one(), y = F.one();  // x = g^e, y = x^2
    long long cnt = 0;
    for (u64 e = 0; e < N; ++e) {
        if (std::gcd(m, e) == 1 && v.trace(y) == beta) ++cnt;
        x = F.mul(x, g);
        y = F.mul(y, g2);
    }
    return cnt;
}

// ---- the |X_b(chi)|^2 identity and its companion bound ----

// X_b(chi) = sum_{xi != 0} chi(xi) psi(b xi^2) over the big field
inline Complex X_sum(const FieldCtx& F, const MultChar& chi, const FFElem& b) {
    Complex total = 0;
    for (u64 idx = 1; idx < F.size(); ++idx) {
        FFElem x = F.element_at(idx);
        total += chi(x) * psi_canonical(F, F.mul(b, F.mul(x, x)));
    }
    return total;
}

struct A1Identity {
    double lhs = 0, rhs = 0;
    double c_magnitude = 0, c_bound = 0;
    bool holds = false;
};

inline A1Identity a1_identity_check(const FieldCtx& F, const MultChar& chi, const FFElem& b,
                                    double tol = 1e-6) {
    if (chi.trivial()) throw std::domain_error("a1_identity_check: chi must be nontrivial");
    A1Identity out;
    Complex X = X_sum(F, chi, b);
    out.lhs = std::norm(X);
    MultChar chi2 = quadratic_character(F);
    Complex G = gauss_sum(F, F.one()).value;
    Complex C = 0;
    for (u64 idx = 1; idx < F.size(); ++idx) {
        FFElem x = F.element_at(idx);
        FFElem x2m1 = F.sub(F.mul(x, x), F.one());
        C += chi(x) * double(F.chi2(x2m1));
    }
    Complex chi_m1 = chi(F.neg(F.one()));
    Complex rhs = (1.0 + chi_m1) * double(F.size()) + double(F.chi2(b)) * G * C;
    out.rhs = rhs.real();
    out.c_magnitude = std::abs(C);
    out.c_bound = 2.0 * std::sqrt(double(F.size()));
    out.holds = std::abs(out.lhs - rhs.real()) <= tol * (1.0 + std::abs(out.lhs)) &&
                std::abs(rhs.imag()) <= tol * (1.0 + std::abs(out.lhs)) &&
                out.c_magnitude <= out.c_bound + tol;
    return out;
}

// |X_1(chi)| + |X_c(chi)| <= 2 sqrt(2) q^(n/2) for q = 1 (mod 4), n odd
struct C1Bound {
    double lhs = 0, rhs = 0;
    bool holds = false;
};

inline C1Bound c1_bound_check(const ExtensionView& v, const MultChar& chi, double tol = 1e-6) {
    if (v.q() % 4 != 1 || v.n() % 2 == 0)
        throw std::domain_error("c1_bound_check: requires q = 1 (mod 4) and n odd");
    const FieldCtx& F = *v.F;
    FFElem c = v.least_base_nonsquare();
    C1Bound out;
    out.lhs = std::abs(X_sum(F, chi, F.one())) + std::abs(X_sum(F, chi, c));
    out.rhs = 2.0 * std::sqrt(2.0) * std::sqrt(double(F.size()));
    out.holds = out.lhs <= out.rhs + tol;
    return out;
}

}  // namespace trace2p
