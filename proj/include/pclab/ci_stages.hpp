#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pclab/errors.hpp"
#include "pclab/poly_calc.hpp"
#include "pclab/pseudo_seq.hpp"
#include "pclab/valued_arith.hpp"

namespace pclab {

// ---------------------------------------------------------------------------
// One stage of the chain: substituting Y -> v_i + (v_{i+1} - v_i) Y into the
// minimal polynomial, splitting off the content, and certifying that the
// stage coordinate x_i satisfies the primitive relation to the available
// precision.
// ---------------------------------------------------------------------------

template <class R>
struct StagePresentation {
    std::size_t i = 0;
    TPoly<typename R::Exact> g;       // h(v_i + b_i Y)
    long content = 0;                 // value of the extracted uniformizer power
    typename R::Exact u;              // uniformizer^content, g = u * h_prim
    TPoly<typename R::Exact> h;       // primitive stage relation
    typename R::Approx x;             // (x_hat - v_i) / b_i, a unit
    CertifiedValue residual;          // val(h(x)), an AtLeast certificate
};

template <class R>
StagePresentation<R> build_stage(const R& ring, const PseudoPrefix<R>& prefix,
                                 const TPoly<typename R::Exact>& hpoly,
                                 const typename R::Approx& xhat, std::size_t i) {
    if (i + 1 >= prefix.size())
        throw precondition_error("build_stage: stage " + std::to_string(i) +
                                 " needs the next prefix element");
    if (tp_deg(hpoly) < 1) throw precondition_error("build_stage: relation must be non-constant");

    StagePresentation<R> out;
    out.i = i;
    const auto b = ring.ex_sub(prefix.v[i + 1], prefix.v[i]);
    out.g = compose_linear(hpoly, prefix.v[i], b);
    auto split = content_split(ring, out.g);
    out.content = split.content;
    out.u = split.u;
    out.h = split.primitive;
    out.x = ring.ap_div_ex(ring.ap_sub_ex(xhat, prefix.v[i]), b);

    out.residual = ring.val(eval_at_approx(ring, out.h, out.x));
    if (out.residual.is_exact_finite())
        throw value_certificate_failure("build_stage: stage relation visibly fails at stage " +
                                        std::to_string(i));
    if (out.residual.kind == CertifiedValue::Kind::AtLeast &&
        out.residual.level < xhat.prec - out.content)
        throw insufficient_precision("build_stage: residual certificate weaker than expected");

    // Stage identity g_i(x_i) = h(x), to the precision both sides share.
    const auto lhs = eval_at_approx(ring, out.g, out.x);
    const auto rhs = eval_at_approx(ring, hpoly, xhat);
    if (ring.val(ring.ap_sub(lhs, rhs)).is_exact_finite())
        throw value_certificate_failure("build_stage: stage identity visibly fails at stage " +
                                        std::to_string(i));
    return out;
}

// ---------------------------------------------------------------------------
// Transition between two stages: x_i = a + b x_j with val(a) = 0 and
// val(b) = gamma_j - gamma_i > 0, plus the exact divisibility
// h_i(a + b X_j) = c h_j.
// ---------------------------------------------------------------------------

template <class R>
struct TransitionMap {
    std::size_t i = 0, j = 0;
    typename R::Exact a, b, c;
    long val_b = 0;
};

template <class R>
TransitionMap<R> transition(const R& ring, const PseudoPrefix<R>& prefix,
                            const StagePresentation<R>& si, const StagePresentation<R>& sj) {
    const std::size_t i = si.i, j = sj.i;
    if (!(i < j)) throw precondition_error("transition: stages must be strictly ordered");

    TransitionMap<R> out;
    out.i = i;
    out.j = j;
    const auto bi = ring.ex_sub(prefix.v[i + 1], prefix.v[i]);
    out.a = ring.ex_div(ring.ex_sub(prefix.v[j], prefix.v[i]), bi);
    out.b = ring.ex_div(ring.ex_sub(prefix.v[j + 1], prefix.v[j]), bi);
    out.val_b = prefix.gammas[j] - prefix.gammas[i];

    const CertifiedValue va = ring.val(out.a);
    if (!(va.is_exact_finite() && va.level == 0))
        throw value_certificate_failure("transition: offset is not a unit");
    const CertifiedValue vb = ring.val(out.b);
    if (!(vb.is_exact_finite() && vb.level == out.val_b))
        throw value_certificate_failure("transition: scale value does not match the breadth gap");

    // Coordinate identity x_i = a + b x_j, checked to shared precision.
    const auto rhs = ring.ap_add_ex(ring.ap_mul_ex(sj.x, out.b), out.a);
    if (ring.val(ring.ap_sub(si.x, rhs)).is_exact_finite())
        throw value_certificate_failure("transition: coordinate identity visibly fails");

    // Exact composite identity g_i(a + b Y) = g_j, then the primitive form.
    if (!tp_eq(compose_linear(si.g, out.a, out.b), sj.g))
        throw value_certificate_failure("transition: composed stage polynomial mismatch");
    out.c = ring.ex_div(sj.u, si.u);
    const auto lifted = compose_linear(si.h, out.a, out.b);
    if (!tp_eq(lifted, tp_scale(sj.h, out.c)))
        throw value_certificate_failure("transition: primitive divisibility fails");
    // Chain inclusion: the substitution keeps coefficients inside V.
    for (const auto& coeff : lifted.c)
        if (!ring.in_ring(coeff))
            throw value_certificate_failure("transition: substituted relation leaves the valuation ring");
    return out;
}

// a_ik = a_ij + b_ij a_jk and b_ik = b_ij b_jk (and the scalars multiply).
template <class R>
bool cocycle_holds(const R& ring, const TransitionMap<R>& tij, const TransitionMap<R>& tjk,
                   const TransitionMap<R>& tik) {
    if (tij.i != tik.i || tij.j != tjk.i || tjk.j != tik.j)
        throw precondition_error("cocycle_holds: indices do not chain");
    return ring.ex_eq(tik.a, ring.ex_add(tij.a, ring.ex_mul(tij.b, tjk.a))) &&
           ring.ex_eq(tik.b, ring.ex_mul(tij.b, tjk.b)) &&
           ring.ex_eq(tik.c, ring.ex_mul(tij.c, tjk.c));
}

template <class R>
struct ChainResult {
    std::vector<StagePresentation<R>> stages;
    std::vector<TransitionMap<R>> transitions;   // between consecutive chosen stages
    std::size_t cocycle_triples = 0;
};

// Build the finite chain over the chosen stage indices, with consecutive
// transitions and the cocycle identity over every consecutive triple.
template <class R>
ChainResult<R> build_chain(const R& ring, const PseudoPrefix<R>& prefix,
                           const TPoly<typename R::Exact>& hpoly,
                           const typename R::Approx& xhat, const std::vector<std::size_t>& indices) {
    if (indices.empty()) throw precondition_error("build_chain: no stage indices");
    for (std::size_t k = 0; k + 1 < indices.size(); ++k)
        if (indices[k] >= indices[k + 1])
            throw precondition_error("build_chain: stage indices must strictly increase");

    ChainResult<R> out;
    for (const auto i : indices) out.stages.push_back(build_stage(ring, prefix, hpoly, xhat, i));
    for (std::size_t k = 0; k + 1 < indices.size(); ++k)
        out.transitions.push_back(transition(ring, prefix, out.stages[k], out.stages[k + 1]));
    for (std::size_t k = 0; k + 2 < indices.size(); ++k) {
        const auto direct = transition(ring, prefix, out.stages[k], out.stages[k + 2]);
        if (!cocycle_holds(ring, out.transitions[k], out.transitions[k + 1], direct))
            throw value_certificate_failure("build_chain: cocycle identity fails at triple " +
                                            std::to_string(k));
        ++out.cocycle_triples;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finitely presented stage algebras and their pairwise composition.  A
// presentation is triangular when relation k involves only the first k + 1
// variables, the staircase shape the chain produces.
// ---------------------------------------------------------------------------

template <class K>
struct MPoly {
    int nvars = 0;
    std::map<std::vector<int>, K> terms;   // exponent vector -> nonzero coefficient
};

template <class K>
MPoly<K> mp_from_univariate(const TPoly<K>& f, int var, int nvars) {
    if (var < 0 || var >= nvars) throw precondition_error("mp_from_univariate: variable out of range");
    MPoly<K> out;
    out.nvars = nvars;
    for (std::size_t k = 0; k < f.c.size(); ++k) {
        if (fe_is_zero(f.c[k])) continue;
        std::vector<int> e(static_cast<std::size_t>(nvars), 0);
        e[static_cast<std::size_t>(var)] = static_cast<int>(k);
        out.terms.emplace(std::move(e), f.c[k]);
    }
    return out;
}

template <class K>
MPoly<K> mp_pad(const MPoly<K>& f, int nvars) {
    if (nvars < f.nvars) throw precondition_error("mp_pad: cannot drop variables");
    MPoly<K> out;
    out.nvars = nvars;
    for (const auto& [e, c] : f.terms) {
        std::vector<int> e2 = e;
        e2.resize(static_cast<std::size_t>(nvars), 0);
        out.terms.emplace(std::move(e2), c);
    }
    return out;
}

template <class K>
int mp_max_var(const MPoly<K>& f) {
    int hi = -1;
    for (const auto& [e, c] : f.terms)
        for (int v = 0; v < f.nvars; ++v)
            if (e[static_cast<std::size_t>(v)] > 0 && v > hi) hi = v;
    return hi;
}

// Evaluate at approximate points, term by term in the map's deterministic
// order.  fallback_prec covers the all-constant corner.
template <class R>
typename R::Approx mp_eval(const R& ring, const MPoly<typename R::Exact>& f,
                           const std::vector<typename R::Approx>& xs, long fallback_prec) {
    if (static_cast<int>(xs.size()) != f.nvars)
        throw precondition_error("mp_eval: wrong number of points");
    long prec = fallback_prec;
    for (const auto& x : xs) prec = std::min(prec, x.prec);
    if (prec < 1) throw insufficient_precision("mp_eval: no working precision");
    auto acc = ring.ap_zero(prec);
    for (const auto& [e, c] : f.terms) {
        auto mono = ring.approximate(ring.ex_one(), prec);
        for (int v = 0; v < f.nvars; ++v)
            for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k)
                mono = ring.ap_mul(mono, xs[static_cast<std::size_t>(v)]);
        acc = ring.ap_add(acc, ring.ap_mul_ex(mono, c));
    }
    return acc;
}

template <class K>
struct AlgebraPresentation {
    std::vector<std::string> vars;
    std::vector<MPoly<K>> relations;
};

template <class K>
void validate_triangular(const AlgebraPresentation<K>& p) {
    if (p.relations.size() > p.vars.size())
        throw non_triangular("presentation has more relations than variables");
    for (std::size_t k = 0; k < p.relations.size(); ++k) {
        if (p.relations[k].nvars != static_cast<int>(p.vars.size()))
            throw lift_missing("relation " + std::to_string(k) +
                               " is not expressed over the presentation's variables");
        if (mp_max_var(p.relations[k]) > static_cast<int>(k))
            throw non_triangular("relation " + std::to_string(k) + " uses a later variable");
    }
}

// Glue an inner presentation on top of an outer one.  The inner relations
// must already be lifted over the combined variable list (outer variables
// first); the result keeps the staircase shape.
template <class K>
AlgebraPresentation<K> compose_presentations(const AlgebraPresentation<K>& outer,
                                             const std::vector<std::string>& inner_vars,
                                             const std::vector<MPoly<K>>& inner_lifts) {
    AlgebraPresentation<K> out;
    out.vars = outer.vars;
    for (const auto& v : inner_vars) {
        for (const auto& w : out.vars)
            if (v == w) throw precondition_error("compose_presentations: variable name reused: " + v);
        out.vars.push_back(v);
    }
    const int total = static_cast<int>(out.vars.size());
    for (const auto& r : outer.relations) out.relations.push_back(mp_pad(r, total));
    for (const auto& r : inner_lifts) {
        if (r.nvars != total)
            throw lift_missing("compose_presentations: inner relation not lifted over " +
                               std::to_string(total) + " variables");
        out.relations.push_back(r);
    }
    validate_triangular(out);
    return out;
}

} // namespace pclab
