#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pclab/errors.hpp"
#include "pclab/poly_calc.hpp"
#include "pclab/valued_arith.hpp"

namespace pclab {

// A validated pseudo-convergent prefix: elements of the valuation ring whose
// consecutive differences have strictly increasing (finite) values, the
// breadths.  Validation also spot-checks the defining three-index inequality
// val(v_i - v_k) < val(v_j - v_k) for all i < j < k, and the derived law
// val(v_j - v_i) = gamma_i for every j > i.
template <class R>
struct PseudoPrefix {
    std::vector<typename R::Exact> v;
    std::vector<long> gammas;   // size N - 1

    std::size_t size() const { return v.size(); }
};

template <class R>
PseudoPrefix<R> validate_prefix(const R& ring, const std::vector<typename R::Exact>& v) {
    const std::size_t N = v.size();
    if (N < 3) throw precondition_error("validate_prefix: need at least three elements");
    for (std::size_t i = 0; i < N; ++i)
        if (!ring.in_ring(v[i]))
            throw negative_value("validate_prefix: element " + std::to_string(i) +
                                 " outside the valuation ring");

    std::vector<long> gammas(N - 1);
    for (std::size_t i = 0; i + 1 < N; ++i) {
        const auto d = ring.ex_sub(v[i + 1], v[i]);
        if (ring.ex_is_zero(d))
            throw not_pseudo_convergent("validate_prefix: elements " + std::to_string(i) + " and " +
                                            std::to_string(i + 1) + " coincide",
                                        i, i + 1, i + 1);
        gammas[i] = ring.val(d).level;
    }
    for (std::size_t i = 0; i + 2 < N; ++i)
        if (gammas[i] >= gammas[i + 1])
            throw not_pseudo_convergent("validate_prefix: breadth does not increase at step " +
                                            std::to_string(i + 1),
                                        i, i + 1, i + 2);

    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i + 1; j < N; ++j) {
            const CertifiedValue vij = ring.val(ring.ex_sub(v[j], v[i]));
            if (!(vij.is_exact_finite() && vij.level == gammas[i]))
                throw not_pseudo_convergent("validate_prefix: val(v_" + std::to_string(j) + " - v_" +
                                                std::to_string(i) + ") != gamma_" + std::to_string(i),
                                            i, j, j);
            for (std::size_t k = j + 1; k < N; ++k) {
                const CertifiedValue vik = ring.val(ring.ex_sub(v[k], v[i]));
                const CertifiedValue vjk = ring.val(ring.ex_sub(v[k], v[j]));
                if (cv_cmp_exact(vik, vjk) >= 0)
                    throw not_pseudo_convergent("validate_prefix: three-index inequality fails", i, j, k);
            }
        }
    }
    return PseudoPrefix<R>{v, std::move(gammas)};
}

template <class R>
struct LimitCheck {
    bool ok;
    std::vector<CertifiedValue> vals;   // val(w - v_i) for i < N - 1
};

// Exact candidate limit: val(w - v_i) must equal gamma_i for every i with a
// known breadth.
template <class R>
LimitCheck<R> is_pseudo_limit(const R& ring, const typename R::Exact& w,
                              const PseudoPrefix<R>& prefix) {
    LimitCheck<R> out{true, {}};
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i) {
        const CertifiedValue c = ring.val(ring.ex_sub(w, prefix.v[i]));
        out.vals.push_back(c);
        if (!(c.is_exact_finite() && c.level == prefix.gammas[i])) out.ok = false;
    }
    return out;
}

// Approximate candidate limit.  Decidable once the precision exceeds the
// last known breadth: each difference then either shows a digit at gamma_i
// or is certified to vanish past it.
template <class R>
LimitCheck<R> is_pseudo_limit_ap(const R& ring, const typename R::Approx& w,
                                 const PseudoPrefix<R>& prefix) {
    if (!w.exact_zero && w.prec <= prefix.gammas[prefix.size() - 2])
        throw insufficient_precision("is_pseudo_limit_ap: precision does not reach the last breadth");
    LimitCheck<R> out{true, {}};
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i) {
        const CertifiedValue c = ring.val(ring.ap_sub_ex(w, prefix.v[i]));
        out.vals.push_back(c);
        if (!(c.is_exact_finite() && c.level == prefix.gammas[i])) out.ok = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Behaviour of val(f(v_i)) along the prefix.
// ---------------------------------------------------------------------------

struct Classification {
    enum class Kind { Increasing, EventuallyConstant, Undetermined };
    Kind kind = Kind::Undetermined;
    std::size_t from = 0;                 // first index of the uniform tail
    CertifiedValue value;                 // the constant, when eventually constant
    std::vector<CertifiedValue> vals;     // val(f(v_i)) for every i, exact
};

// The verdict requires a uniform tail of at least three comparison steps
// (four values); shorter evidence stays Undetermined.
template <class R>
Classification classify(const R& ring, const TPoly<typename R::Exact>& f,
                        const PseudoPrefix<R>& prefix) {
    Classification out;
    const std::size_t N = prefix.size();
    out.vals.reserve(N);
    for (std::size_t i = 0; i < N; ++i)
        out.vals.push_back(ring.val(tp_eval(f, prefix.v[i])));
    if (N < 4) return out;

    auto increasing_at = [&](std::size_t i) { return cv_cmp_exact(out.vals[i], out.vals[i + 1]) < 0; };
    auto constant_at = [&](std::size_t i) { return cv_cmp_exact(out.vals[i], out.vals[i + 1]) == 0; };

    if (increasing_at(N - 2) && increasing_at(N - 3) && increasing_at(N - 4)) {
        std::size_t a = N - 4;
        while (a > 0 && increasing_at(a - 1)) --a;
        out.kind = Classification::Kind::Increasing;
        out.from = a;
        return out;
    }
    if (constant_at(N - 2) && constant_at(N - 3) && constant_at(N - 4)) {
        std::size_t a = N - 4;
        while (a > 0 && constant_at(a - 1)) --a;
        out.kind = Classification::Kind::EventuallyConstant;
        out.from = a;
        out.value = out.vals[N - 1];
        return out;
    }
    return out;
}

struct Kap1Result {
    Classification cls;
    bool determined() const { return cls.kind == Classification::Kind::Increasing; }
};

// The increasing law for the minimal polynomial: val(h(v_i)) must strictly
// increase along the prefix tail.  An eventually constant tail is the
// certified counterexample shape and raises lemma_violation_candidate;
// anything shorter than the evidence bar passes through as undetermined.
template <class R>
Kap1Result kap1_check(const R& ring, const TPoly<typename R::Exact>& h,
                      const PseudoPrefix<R>& prefix) {
    Kap1Result out{classify(ring, h, prefix)};
    if (out.cls.kind == Classification::Kind::EventuallyConstant)
        throw lemma_violation_candidate(
            "kap1_check: val(h(v_i)) is constant (" + cv_str(out.cls.value) + ") from index " +
            std::to_string(out.cls.from));
    return out;
}

// ---------------------------------------------------------------------------
// Unit decomposition g(x) = d * u for polynomials g whose evaluation values
// stabilize: d = g(v_i) for a certified index i, u a unit in 1 + m'.
// ---------------------------------------------------------------------------

template <class R>
struct KaResult {
    std::size_t i_used = 0;
    typename R::Exact d;
    typename R::Approx u;
    std::vector<CertifiedValue> terms;   // Taylor term values at i_used
    CertifiedValue u_val;                // Exactly(0)
    CertifiedValue u_minus_one;          // lower bound >= 1
};

// Search upward from i_start for an index where the Taylor term values
// T_n = val((D^n g)(v_i)) + n * gamma_i are pairwise distinct with the
// constant term strictly minimal; that certifies dominance and the
// decomposition.  Early indices may order the terms differently while the
// evaluation values are still drifting, so only the last examined index
// decides between dominance_failure (distinct terms, wrong argmin: g cannot
// satisfy the minimal-degree hypothesis) and prefix_too_short (a tie).
template <class R>
KaResult<R> ka_decompose(const R& ring, const TPoly<typename R::Exact>& g,
                         const typename R::Approx& x, const PseudoPrefix<R>& prefix,
                         std::size_t i_start = 0) {
    if (tp_is_zero(g)) throw precondition_error("ka_decompose: zero polynomial");

    const Classification cls = classify(ring, g, prefix);
    if (cls.kind == Classification::Kind::Increasing)
        throw precondition_error("ka_decompose: evaluation values increase; no stable d exists");
    if (cls.kind == Classification::Kind::Undetermined)
        throw prefix_too_short("ka_decompose: cannot classify the test polynomial on this prefix");
    if (!cls.value.is_exact_finite())
        throw precondition_error("ka_decompose: test polynomial vanishes along the prefix tail");

    const auto ders = hasse_derivatives(g);
    const std::size_t N = prefix.size();
    if (i_start + 1 >= N) throw precondition_error("ka_decompose: start index has no breadth");

    long bad_argmin = -1;
    bool last_tied = false;
    std::vector<CertifiedValue> terms;
    for (std::size_t i = i_start; i + 1 < N; ++i) {
        terms.clear();
        bad_argmin = -1;
        last_tied = false;
        bool t0_finite = false;
        long best = 0, best_n = -1;
        bool tie = false;
        for (std::size_t n = 0; n < ders.size(); ++n) {
            const auto dn = tp_eval(ders[n], prefix.v[i]);
            if (ring.ex_is_zero(dn)) {
                terms.push_back(CertifiedValue::infinity());
                continue;
            }
            const long t = ring.val(dn).level + static_cast<long>(n) * prefix.gammas[i];
            terms.push_back(CertifiedValue::exactly(t));
            if (n == 0) t0_finite = true;
            for (std::size_t m = 0; m < n; ++m)
                if (terms[m].is_exact_finite() && terms[m].level == t) tie = true;
            if (best_n < 0 || t < best) {
                best = t;
                best_n = static_cast<long>(n);
            }
        }
        if (!t0_finite) continue;   // g(v_i) = 0: this index certifies nothing
        if (tie) {
            last_tied = true;
            continue;
        }
        if (best_n != 0) {
            bad_argmin = best_n;
            continue;
        }

        const auto d = tp_eval(g, prefix.v[i]);
        const auto gx = eval_at_approx(ring, g, x);
        const auto u = ring.ap_div_ex(gx, d);
        const CertifiedValue uv = ring.val(u);
        if (!uv.is_exact_finite())
            throw insufficient_precision("ka_decompose: cannot certify the unit's value");
        if (uv.level != 0)
            throw value_certificate_failure("ka_decompose: computed factor is not a unit");
        const CertifiedValue um1 = ring.val(ring.ap_sub_ex(u, ring.ex_one()));
        if (um1.kind == CertifiedValue::Kind::Exactly && um1.level < 1)
            throw value_certificate_failure("ka_decompose: unit does not lie in 1 + m'");

        KaResult<R> out;
        out.i_used = i;
        out.d = d;
        out.u = u;
        out.terms = terms;
        out.u_val = uv;
        out.u_minus_one = um1;
        return out;
    }
    if (bad_argmin > 0 && !last_tied)
        throw dominance_failure("ka_decompose: Taylor term " + std::to_string(bad_argmin) +
                                    " dominates the constant term at every usable index",
                                static_cast<std::size_t>(bad_argmin));
    throw prefix_too_short("ka_decompose: no index certifies dominance within the prefix");
}

// Re-derive the decomposition identity d * u = g(x) from its parts, to the
// full precision both sides share.
template <class R>
bool verify_decomposition(const R& ring, const TPoly<typename R::Exact>& g,
                          const typename R::Approx& x, const typename R::Exact& d,
                          const typename R::Approx& u) {
    const auto lhs = eval_at_approx(ring, g, x);
    const auto rhs = ring.ap_mul_ex(u, d);
    const CertifiedValue c = ring.val(ring.ap_sub(lhs, rhs));
    return !c.is_exact_finite();
}

} // namespace pclab
