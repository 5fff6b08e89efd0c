#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pclab/bigint.hpp"
#include "pclab/errors.hpp"

namespace pclab {

// ---------------------------------------------------------------------------
// Prime fields with runtime modulus.  Elements carry their modulus so that
// mixed-modulus arithmetic is caught instead of silently wrong.
// ---------------------------------------------------------------------------

struct Fp {
    std::int64_t p = 0;   // 0 marks an uninitialized element
    std::int64_t v = 0;   // canonical representative in [0, p)

    Fp() = default;
    Fp(std::int64_t p_, std::int64_t v_) : p(p_) {
        if (p_ < 2) throw precondition_error("Fp: modulus must be at least 2");
        v = v_ % p_;
        if (v < 0) v += p_;
    }
};

inline void fp_require_same(const Fp& a, const Fp& b) {
    if (a.p == 0 || b.p == 0) throw precondition_error("Fp: uninitialized element");
    if (a.p != b.p) throw descriptor_mismatch("Fp: mixed moduli");
}

inline bool operator==(const Fp& a, const Fp& b) {
    fp_require_same(a, b);
    return a.v == b.v;
}

inline Fp operator+(const Fp& a, const Fp& b) {
    fp_require_same(a, b);
    return Fp(a.p, a.v + b.v);
}

inline Fp operator-(const Fp& a, const Fp& b) {
    fp_require_same(a, b);
    return Fp(a.p, a.v - b.v);
}

inline Fp operator-(const Fp& a) { return Fp(a.p, -a.v); }

inline Fp operator*(const Fp& a, const Fp& b) {
    fp_require_same(a, b);
    return Fp(a.p, static_cast<std::int64_t>((__int128)a.v * b.v % a.p));
}

inline Fp fp_inv(const Fp& a) {
    if (a.p == 0) throw precondition_error("Fp: uninitialized element");
    if (a.v == 0) throw precondition_error("Fp: inverse of zero");
    std::int64_t r0 = a.p, r1 = a.v, s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1, s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    return Fp(a.p, s0);
}

inline Fp operator/(const Fp& a, const Fp& b) { return a * fp_inv(b); }

// ---------------------------------------------------------------------------
// Customization points shared by every coefficient field the templates see:
// Fp, BigRat, and RatFunc<B> below.  The first argument supplies context
// (e.g. the modulus) so that zero and embedded integers land in the right
// structure.
// ---------------------------------------------------------------------------

inline bool fe_is_zero(const Fp& a) {
    if (a.p == 0) throw precondition_error("Fp: uninitialized element");
    return a.v == 0;
}
inline Fp fe_zero(const Fp& ctx) { return Fp(ctx.p, 0); }
inline Fp fe_one(const Fp& ctx) { return Fp(ctx.p, 1); }
inline Fp fe_embed(const Fp& ctx, const BigInt& n) {
    return Fp(ctx.p, static_cast<std::int64_t>(n % ctx.p));
}
inline Fp fe_inv(const Fp& a) { return fp_inv(a); }
inline std::string fe_str(const Fp& a) { return std::to_string(a.v); }

inline bool fe_is_zero(const BigRat& a) { return a == 0; }
inline BigRat fe_zero(const BigRat&) { return BigRat(0); }
inline BigRat fe_one(const BigRat&) { return BigRat(1); }
inline BigRat fe_embed(const BigRat&, const BigInt& n) { return BigRat(n); }
inline BigRat fe_inv(const BigRat& a) {
    if (a == 0) throw precondition_error("BigRat: inverse of zero");
    return 1 / a;
}
inline std::string fe_str(const BigRat& a) { return rat_str(a); }

// ---------------------------------------------------------------------------
// Dense univariate polynomials over a base field, lowest coefficient first,
// trimmed so the zero polynomial is the empty vector.
// ---------------------------------------------------------------------------

template <class B>
struct TPoly {
    std::vector<B> c;
};

template <class B>
TPoly<B> tp_trim(TPoly<B> f) {
    while (!f.c.empty() && fe_is_zero(f.c.back())) f.c.pop_back();
    return f;
}

template <class B>
bool tp_is_zero(const TPoly<B>& f) { return f.c.empty(); }

template <class B>
long tp_deg(const TPoly<B>& f) { return static_cast<long>(f.c.size()) - 1; }

// Order of vanishing at t = 0.  Precondition: f != 0.
template <class B>
long tp_ord(const TPoly<B>& f) {
    for (std::size_t k = 0; k < f.c.size(); ++k)
        if (!fe_is_zero(f.c[k])) return static_cast<long>(k);
    throw precondition_error("tp_ord: zero polynomial");
}

template <class B>
bool tp_eq(const TPoly<B>& a, const TPoly<B>& b) {
    if (a.c.size() != b.c.size()) return false;
    for (std::size_t k = 0; k < a.c.size(); ++k)
        if (!(a.c[k] == b.c[k])) return false;
    return true;
}

template <class B>
TPoly<B> tp_add(const TPoly<B>& a, const TPoly<B>& b) {
    TPoly<B> r;
    const std::size_t n = std::max(a.c.size(), b.c.size());
    r.c.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k < a.c.size() && k < b.c.size()) r.c.push_back(a.c[k] + b.c[k]);
        else if (k < a.c.size()) r.c.push_back(a.c[k]);
        else r.c.push_back(b.c[k]);
    }
    return tp_trim(std::move(r));
}

template <class B>
TPoly<B> tp_neg(const TPoly<B>& a) {
    TPoly<B> r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

template <class B>
TPoly<B> tp_sub(const TPoly<B>& a, const TPoly<B>& b) { return tp_add(a, tp_neg(b)); }

template <class B>
TPoly<B> tp_mul(const TPoly<B>& a, const TPoly<B>& b) {
    if (tp_is_zero(a) || tp_is_zero(b)) return {};
    TPoly<B> r;
    r.c.assign(a.c.size() + b.c.size() - 1, fe_zero(a.c[0]));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    return tp_trim(std::move(r));
}

template <class B>
TPoly<B> tp_scale(const TPoly<B>& a, const B& s) {
    if (fe_is_zero(s)) return {};
    TPoly<B> r = a;
    for (auto& x : r.c) x = x * s;
    return tp_trim(std::move(r));
}

// Multiply by t^k.
template <class B>
TPoly<B> tp_shift(const TPoly<B>& a, long k) {
    if (tp_is_zero(a)) return {};
    TPoly<B> r;
    r.c.assign(a.c.size() + k, fe_zero(a.c[0]));
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i + k] = a.c[i];
    return r;
}

template <class B>
std::pair<TPoly<B>, TPoly<B>> tp_divmod(const TPoly<B>& a, const TPoly<B>& b) {
    if (tp_is_zero(b)) throw precondition_error("tp_divmod: division by zero polynomial");
    TPoly<B> rem = a, quo;
    if (tp_deg(a) >= tp_deg(b))
        quo.c.assign(a.c.size() - b.c.size() + 1, fe_zero(b.c[0]));
    const B lead_inv = fe_inv(b.c.back());
    while (!tp_is_zero(rem) && tp_deg(rem) >= tp_deg(b)) {
        const long shift = tp_deg(rem) - tp_deg(b);
        const B q = rem.c.back() * lead_inv;
        quo.c[shift] = quo.c[shift] + q;
        for (std::size_t k = 0; k < b.c.size(); ++k)
            rem.c[shift + k] = rem.c[shift + k] - q * b.c[k];
        rem = tp_trim(std::move(rem));
    }
    return {tp_trim(std::move(quo)), std::move(rem)};
}

template <class B>
TPoly<B> tp_make_monic(const TPoly<B>& a) {
    if (tp_is_zero(a)) return a;
    return tp_scale(a, fe_inv(a.c.back()));
}

template <class B>
TPoly<B> tp_gcd(TPoly<B> a, TPoly<B> b) {
    while (!tp_is_zero(b)) {
        auto r = tp_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return tp_make_monic(a);
}

template <class B>
B tp_eval(const TPoly<B>& f, const B& x) {
    B acc = fe_zero(x);
    for (std::size_t k = f.c.size(); k-- > 0;) acc = acc * x + f.c[k];
    return acc;
}

// ---------------------------------------------------------------------------
// Rational functions over B, the exact scalars of the t-adic rings.
// Normal form: denominator monic, gcd(num, den) = 1, zero is {[], [1]}.
// A default-constructed RatFunc is an invalid sentinel (empty denominator);
// every real element is produced through rf_make or the ring factories.
// ---------------------------------------------------------------------------

template <class B>
struct RatFunc {
    TPoly<B> num, den;
};

template <class B>
void rf_require_valid(const RatFunc<B>& f) {
    if (tp_is_zero(f.den)) throw precondition_error("RatFunc: uninitialized element");
}

template <class B>
RatFunc<B> rf_make(TPoly<B> num, TPoly<B> den) {
    if (tp_is_zero(den)) throw precondition_error("rf_make: zero denominator");
    if (tp_is_zero(num)) return {TPoly<B>{}, TPoly<B>{{fe_one(den.c[0])}}};
    auto g = tp_gcd(num, den);
    if (tp_deg(g) > 0 || !(g.c[0] == fe_one(g.c[0]))) {
        num = tp_divmod(num, g).first;
        den = tp_divmod(den, g).first;
    }
    const B lead_inv = fe_inv(den.c.back());
    return {tp_scale(num, lead_inv), tp_scale(den, lead_inv)};
}

template <class B>
bool fe_is_zero(const RatFunc<B>& f) {
    rf_require_valid(f);
    return tp_is_zero(f.num);
}

template <class B>
RatFunc<B> fe_zero(const RatFunc<B>& ctx) {
    rf_require_valid(ctx);
    return {TPoly<B>{}, TPoly<B>{{fe_one(ctx.den.c[0])}}};
}

template <class B>
RatFunc<B> fe_one(const RatFunc<B>& ctx) {
    rf_require_valid(ctx);
    const B one = fe_one(ctx.den.c[0]);
    return {TPoly<B>{{one}}, TPoly<B>{{one}}};
}

template <class B>
RatFunc<B> fe_embed(const RatFunc<B>& ctx, const BigInt& n) {
    rf_require_valid(ctx);
    const B one = fe_one(ctx.den.c[0]);
    TPoly<B> num{{fe_embed(one, n)}};
    return {tp_trim(std::move(num)), TPoly<B>{{one}}};
}

template <class B>
bool operator==(const RatFunc<B>& a, const RatFunc<B>& b) {
    rf_require_valid(a);
    rf_require_valid(b);
    return tp_eq(a.num, b.num) && tp_eq(a.den, b.den);
}

template <class B>
RatFunc<B> operator+(const RatFunc<B>& a, const RatFunc<B>& b) {
    rf_require_valid(a);
    rf_require_valid(b);
    return rf_make(tp_add(tp_mul(a.num, b.den), tp_mul(b.num, a.den)), tp_mul(a.den, b.den));
}

template <class B>
RatFunc<B> operator-(const RatFunc<B>& a) {
    rf_require_valid(a);
    return {tp_neg(a.num), a.den};
}

template <class B>
RatFunc<B> operator-(const RatFunc<B>& a, const RatFunc<B>& b) { return a + (-b); }

template <class B>
RatFunc<B> operator*(const RatFunc<B>& a, const RatFunc<B>& b) {
    rf_require_valid(a);
    rf_require_valid(b);
    return rf_make(tp_mul(a.num, b.num), tp_mul(a.den, b.den));
}

template <class B>
RatFunc<B> fe_inv(const RatFunc<B>& a) {
    rf_require_valid(a);
    if (tp_is_zero(a.num)) throw precondition_error("RatFunc: inverse of zero");
    return rf_make(a.den, a.num);
}

template <class B>
RatFunc<B> operator/(const RatFunc<B>& a, const RatFunc<B>& b) { return a * fe_inv(b); }

// t-adic order: ord(num) - ord(den).  Precondition: nonzero.
template <class B>
long rf_ord(const RatFunc<B>& f) {
    rf_require_valid(f);
    if (tp_is_zero(f.num)) throw precondition_error("rf_ord: zero element");
    return tp_ord(f.num) - tp_ord(f.den);
}

template <class B>
std::string fe_str(const RatFunc<B>& f) {
    rf_require_valid(f);
    auto poly_str = [](const TPoly<B>& p) {
        if (tp_is_zero(p)) return std::string("0");
        std::string s;
        for (std::size_t k = 0; k < p.c.size(); ++k) {
            if (fe_is_zero(p.c[k])) continue;
            if (!s.empty()) s += "+";
            s += "(" + fe_str(p.c[k]) + ")t^" + std::to_string(k);
        }
        return s;
    };
    if (tp_deg(f.den) == 0 && f.den.c[0] == fe_one(f.den.c[0])) return poly_str(f.num);
    return "(" + poly_str(f.num) + ")/(" + poly_str(f.den) + ")";
}

} // namespace pclab
