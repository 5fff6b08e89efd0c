#pragma once

#include <vector>

#include "pclab/bigint.hpp"
#include "pclab/errors.hpp"
#include "pclab/fields.hpp"
#include "pclab/valued_arith.hpp"

namespace pclab {

// Univariate polynomials over a ring's exact scalars reuse the dense TPoly
// representation; this module adds the analysis the lab actually runs on
// them: Hasse-Schmidt derivatives, linear substitution, precision-tracked
// evaluation, and content extraction.

// n-th Hasse-Schmidt derivative: coefficient m of f contributes
// binom(m, n) * f_m to coefficient m - n.  Works in every characteristic;
// over Q it satisfies n! * D^n f = d^n f / dY^n.
template <class K>
std::vector<TPoly<K>> hasse_derivatives(const TPoly<K>& f) {
    if (tp_is_zero(f)) return {f};
    std::vector<TPoly<K>> out;
    const long deg = tp_deg(f);
    out.reserve(static_cast<std::size_t>(deg) + 1);
    for (long n = 0; n <= deg; ++n) {
        TPoly<K> d;
        d.c.reserve(static_cast<std::size_t>(deg - n) + 1);
        for (long m = n; m <= deg; ++m) {
            const K& cm = f.c[static_cast<std::size_t>(m)];
            d.c.push_back(cm * fe_embed(cm, binomial(m, n)));
        }
        out.push_back(tp_trim(std::move(d)));
    }
    return out;
}

// f(a + bY) expanded through the Taylor identity
// f(a + bY) = sum_n (D^n f)(a) b^n Y^n.
template <class K>
TPoly<K> compose_linear(const TPoly<K>& f, const K& a, const K& b) {
    if (tp_is_zero(f)) return f;
    const auto ders = hasse_derivatives(f);
    TPoly<K> out;
    out.c.reserve(ders.size());
    K bpow = fe_one(a);
    for (std::size_t n = 0; n < ders.size(); ++n) {
        out.c.push_back(tp_eval(ders[n], a) * bpow);
        bpow = bpow * b;
    }
    return tp_trim(std::move(out));
}

// Evaluate f at an approximate point.  Horner order: the top coefficient
// enters exactly, every later step is one tracked multiplication and one
// mixed addition, so the result's precision certificate is the pessimistic
// product of the chain.
template <class R>
typename R::Approx eval_at_approx(const R& ring, const TPoly<typename R::Exact>& f,
                                  const typename R::Approx& x) {
    if (tp_is_zero(f)) return ring.ap_zero(x.prec);
    const long deg = tp_deg(f);
    if (deg == 0) return ring.approximate(f.c[0], x.prec);
    auto acc = ring.ap_mul_ex(x, f.c[static_cast<std::size_t>(deg)]);
    acc = ring.ap_add_ex(acc, f.c[static_cast<std::size_t>(deg - 1)]);
    for (long k = deg - 2; k >= 0; --k) {
        acc = ring.ap_mul(acc, x);
        acc = ring.ap_add_ex(acc, f.c[static_cast<std::size_t>(k)]);
    }
    return acc;
}

template <class R>
struct ContentResult {
    long content;                       // minimal coefficient value
    typename R::Exact u;                // uniformizer^content
    TPoly<typename R::Exact> primitive; // f / u, content zero
};

// Extract the uniformizer-power content of a nonzero polynomial with
// coefficients in the valuation ring.
template <class R>
ContentResult<R> content_split(const R& ring, const TPoly<typename R::Exact>& f) {
    if (tp_is_zero(f)) throw precondition_error("content_split: zero polynomial");
    bool seen = false;
    long k = 0;
    for (const auto& c : f.c) {
        if (ring.ex_is_zero(c)) continue;
        const CertifiedValue v = ring.val(c);
        if (!v.is_exact_finite())
            throw content_uncertain("content_split: coefficient value not exactly known");
        if (v.level < 0) throw negative_value("content_split: coefficient outside the valuation ring");
        if (!seen || v.level < k) k = v.level;
        seen = true;
    }
    const auto u = ring.uniformizer_pow(k);
    TPoly<typename R::Exact> prim = f;
    for (auto& c : prim.c)
        if (!ring.ex_is_zero(c)) c = ring.ex_div(c, u);
    return {k, u, prim};
}

} // namespace pclab
