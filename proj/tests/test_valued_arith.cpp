#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "pclab/valued_arith.hpp"

using namespace pclab;

namespace {

// val(a+b) >= min(val a, val b), with infinity absorbing.
bool ultrametric_sum_ok(const CertifiedValue& va, const CertifiedValue& vb,
                        const CertifiedValue& vs) {
    if (vs.kind == CertifiedValue::Kind::ExactlyInfinity) return true;
    if (va.kind == CertifiedValue::Kind::ExactlyInfinity) return vs.level == vb.level;
    if (vb.kind == CertifiedValue::Kind::ExactlyInfinity) return vs.level == va.level;
    return vs.level >= std::min(va.level, vb.level);
}

bool product_val_ok(const CertifiedValue& va, const CertifiedValue& vb, const CertifiedValue& vp) {
    if (va.kind == CertifiedValue::Kind::ExactlyInfinity ||
        vb.kind == CertifiedValue::Kind::ExactlyInfinity)
        return vp.kind == CertifiedValue::Kind::ExactlyInfinity;
    return vp.is_exact_finite() && vp.level == va.level + vb.level;
}

BigRat random_rat(std::mt19937& rng, const BigInt& avoid_den_factor) {
    std::uniform_int_distribution<long> num(-500, 500), den(1, 60);
    BigInt d(den(rng));
    if (avoid_den_factor > 1)
        while (d % avoid_den_factor == 0) d = BigInt(den(rng));
    return BigRat(BigInt(num(rng)), d);
}

template <class B>
RatFunc<B> random_ratfunc(std::mt19937& rng, const B& one, int maxdeg) {
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::uniform_int_distribution<long> coe(-6, 6);
    auto poly = [&](bool nonzero) {
        TPoly<B> f;
        const int d = deg(rng);
        for (int k = 0; k <= d; ++k) f.c.push_back(fe_embed(one, BigInt(coe(rng))));
        f = tp_trim(std::move(f));
        if (nonzero && tp_is_zero(f)) f.c.push_back(one);
        return f;
    };
    return rf_make(poly(false), poly(true));
}

template <class R, class Gen>
void ultrametric_suite(const R& ring, Gen&& gen, int iters) {
    for (int it = 0; it < iters; ++it) {
        const auto a = gen();
        const auto b = gen();
        const auto va = ring.val(a), vb = ring.val(b);
        CHECK(product_val_ok(va, vb, ring.val(ring.ex_mul(a, b))));
        CHECK(ultrametric_sum_ok(va, vb, ring.val(ring.ex_add(a, b))));
        // strict triangle equality when values differ
        if (va.is_exact_finite() && vb.is_exact_finite() && va.level != vb.level) {
            const auto vs = ring.val(ring.ex_add(a, b));
            CHECK(vs.is_exact_finite());
            CHECK(vs.level == std::min(va.level, vb.level));
        }
    }
}

} // namespace

TEST_CASE("ring descriptors parse and format") {
    for (const char* s : {"padic:7", "padic:2", "tadic:F2", "tadic:F3", "tadic:Q"})
        CHECK(format_ring(parse_ring(s)) == s);
    CHECK(parse_ring("padic:7").family == RingDescriptor::Family::PAdic);
    CHECK(parse_ring("tadic:F3").p == 3);
    for (const char* s : {"padic:6", "padic:x", "tadic:F4", "tadic:R", "foo:1", "padic"})
        CHECK_THROWS_AS(parse_ring(s), config_error);
}

TEST_CASE("certified values compare exactly or refuse") {
    CHECK(cv_cmp_exact(CertifiedValue::exactly(2), CertifiedValue::exactly(5)) < 0);
    CHECK(cv_cmp_exact(CertifiedValue::exactly(3), CertifiedValue::infinity()) < 0);
    CHECK(cv_cmp_exact(CertifiedValue::infinity(), CertifiedValue::infinity()) == 0);
    CHECK_THROWS_AS(cv_cmp_exact(CertifiedValue::at_least(4), CertifiedValue::exactly(1)),
                    precondition_error);
    CHECK(CertifiedValue::at_least(4).lower_bound() == 4);
    CHECK(cv_str(CertifiedValue::exactly(2)) == "=2");
    CHECK(cv_str(CertifiedValue::at_least(7)) == ">=7");
    CHECK(cv_str(CertifiedValue::infinity()) == "=inf");
}

TEST_CASE("exact values: frozen examples") {
    const PAdicRing r7(BigInt(7));
    CHECK(r7.val(BigRat(98)).is_exact_finite());
    CHECK(r7.val(BigRat(98)).level == 2);   // 98 = 2 * 7^2
    CHECK(r7.val(BigRat(0)).kind == CertifiedValue::Kind::ExactlyInfinity);
    CHECK(r7.val(BigRat(BigInt(1), BigInt(7))).level == -1);
    CHECK(r7.in_ring(BigRat(98)));
    CHECK(!r7.in_ring(BigRat(BigInt(1), BigInt(7))));
    CHECK(r7.in_ring(BigRat(BigInt(3), BigInt(2))));

    const TAdicRing<Fp> f2(Fp(2, 1));
    const auto t = f2.uniformizer_pow(1);
    CHECK(f2.val(t).level == 1);
    CHECK(f2.val(f2.ex_mul(t, t)).level == 2);
    CHECK(f2.val(f2.ex_zero()).kind == CertifiedValue::Kind::ExactlyInfinity);
    CHECK(f2.val(fe_inv(t)).level == -1);
    CHECK(!f2.in_ring(fe_inv(t)));
}

TEST_CASE("ultrametric axioms on random exact pairs, five rings") {
    std::mt19937 rng(424242);
    const PAdicRing r7(BigInt(7)), r2(BigInt(2));
    ultrametric_suite(r7, [&] { return random_rat(rng, BigInt(7)); }, 300);
    ultrametric_suite(r2, [&] { return random_rat(rng, BigInt(2)); }, 300);
    const TAdicRing<Fp> f2(Fp(2, 1)), f3(Fp(3, 1));
    ultrametric_suite(f2, [&] { return random_ratfunc(rng, f2.one, 4); }, 300);
    ultrametric_suite(f3, [&] { return random_ratfunc(rng, f3.one, 4); }, 300);
    const TAdicRing<BigRat> fq(BigRat(1));
    ultrametric_suite(fq, [&] { return random_ratfunc(rng, fq.one, 3); }, 200);
}

TEST_CASE("p-adic expansion, digits, and truncation cohere") {
    const PAdicRing r7(BigInt(7));
    const auto a = BigRat(BigInt(3), BigInt(2));   // 3/2, a unit in Z_(7)
    const auto ap = r7.approximate(a, 10);
    CHECK(ap.prec == 10);
    const auto dg = r7.digits(ap);
    REQUIRE(dg.size() == 10);
    for (const auto& d : dg) {
        CHECK(d >= 0);
        CHECK(d < 7);
    }
    // round-trip through digits
    const auto back = r7.from_digits(dg);
    CHECK(back.v == ap.v);
    CHECK(back.prec == ap.prec);
    // truncation recovers the element up to val >= k
    for (long k : {1L, 4L, 10L}) {
        const auto tr = r7.truncate_exact(ap, k);
        const auto diff = r7.val(r7.ex_sub(a, tr));
        const bool deep = diff.kind == CertifiedValue::Kind::ExactlyInfinity ||
                          (diff.is_exact_finite() && diff.level >= k);
        CHECK(deep);
    }
    CHECK_THROWS_AS(r7.from_digits(std::vector<BigInt>{BigInt(7)}), config_error);
    CHECK_THROWS_AS(r7.approximate(BigRat(BigInt(1), BigInt(7)), 5), negative_value);
}

TEST_CASE("t-adic expansion matches the geometric series") {
    const TAdicRing<Fp> f3(Fp(3, 1));
    // 1 / (1 - t) = 1 + t + t^2 + ...
    const auto one = TPoly<Fp>{{Fp(3, 1)}};
    const auto den = tp_trim(TPoly<Fp>{{Fp(3, 1), Fp(3, -1)}});
    const auto e = rf_make(one, den);
    const auto ap = f3.approximate(e, 8);
    for (const auto& d : f3.digits(ap)) CHECK(d.v == 1);
    // round-trip: truncation differs from e by val >= 8
    const auto tr = f3.truncate_exact(ap, 8);
    CHECK(f3.val(f3.ex_sub(e, tr)).level >= 8);
}

TEST_CASE("approximate arithmetic propagates precision pessimistically") {
    const PAdicRing r7(BigInt(7));
    const auto a = r7.approximate(BigRat(10), 8);
    const auto b = r7.approximate(BigRat(3), 6);
    CHECK(r7.ap_add(a, b).prec == 6);
    CHECK(r7.ap_sub(a, b).prec == 6);
    // val(3) = 0, val(10) = 0: product precision min(8+0, 6+0)
    CHECK(r7.ap_mul(a, b).prec == 6);
    // multiplying by 49 shifts content up and keeps the stronger bound
    const auto c = r7.approximate(BigRat(49), 6);
    CHECK(r7.ap_mul(a, c).prec == std::min(8L + 6L, std::min(6L + 0L, 8L + 2L)));
    // division by value-k elements costs k digits
    const auto q = r7.ap_div(r7.approximate(BigRat(98), 8), r7.approximate(BigRat(49), 8));
    CHECK(q.prec == 6);
    CHECK(r7.val(q).is_exact_finite());
    CHECK(r7.val(q).level == 0);
    // exact cancellation: (3 + 7) - 3 has value exactly 1
    const auto d = r7.ap_sub_ex(r7.approximate(BigRat(10), 8), BigRat(3));
    CHECK(r7.val(d).is_exact_finite());
    CHECK(r7.val(d).level == 1);
}

TEST_CASE("approximate zero and exhausted precision") {
    const PAdicRing r7(BigInt(7));
    const auto z = r7.ap_zero(12);
    CHECK(z.exact_zero);
    CHECK(r7.val(z).kind == CertifiedValue::Kind::ExactlyInfinity);
    // a nonzero exact minus its own approximation: all visible digits vanish
    const auto a = r7.approximate(BigRat(5), 12);
    const auto residue = r7.ap_sub_ex(a, BigRat(5));
    CHECK(!residue.exact_zero);
    CHECK(residue.v == 0);
    CHECK(r7.val(residue).kind == CertifiedValue::Kind::AtLeast);
    CHECK(r7.val(residue).level == 12);
    // dividing by something indistinguishable from zero refuses
    CHECK_THROWS_AS(r7.ap_div(a, residue), division_by_indistinguishable_zero);
    // dividing by a certified zero is a caller error, not a precision problem
    CHECK_THROWS_AS(r7.ap_div(a, z), precondition_error);
}

TEST_CASE("operations that would leave the ring refuse") {
    const PAdicRing r7(BigInt(7));
    const auto a = r7.approximate(BigRat(3), 8);
    CHECK_THROWS_AS(r7.ap_add_ex(a, BigRat(BigInt(1), BigInt(7))), negative_value);
    CHECK_THROWS_AS(r7.ap_div_ex(a, BigRat(7)), negative_value);
    // dividing a value-2 element by value-1 stays inside
    const auto b = r7.approximate(BigRat(98), 8);
    const auto q = r7.ap_div_ex(b, BigRat(7));
    CHECK(r7.val(q).level == 1);
}

TEST_CASE("residues and units") {
    const PAdicRing r7(BigInt(7));
    CHECK(r7.residue_ex(BigRat(10)) == 3);
    CHECK(r7.residue(r7.approximate(BigRat(10), 4)) == 3);
    CHECK(r7.is_unit_ex(BigRat(10)));
    CHECK(!r7.is_unit_ex(BigRat(14)));
    const TAdicRing<Fp> f2(Fp(2, 1));
    CHECK(f2.residue_ex(f2.ex_one()).v == 1);
    CHECK(!f2.is_unit_ex(f2.uniformizer_pow(1)));
}

TEST_CASE("mixed moduli are rejected") {
    CHECK_THROWS_AS(Fp(2, 1) + Fp(3, 1), descriptor_mismatch);
    CHECK_THROWS_AS(Fp(5, 2) * Fp(7, 3), descriptor_mismatch);
}

TEST_CASE("digit-by-digit root lifting: square root of 2 in the 7-adics") {
    const PAdicRing r7(BigInt(7));
    const std::vector<BigRat> f{BigRat(-2), BigRat(0), BigRat(1)};
    const auto r3 = r7.hensel_lift(f, BigInt(3), 3);
    CHECK(r7.digits(r3) == std::vector<BigInt>{BigInt(3), BigInt(1), BigInt(2)});
    // 108^2 = 11664 = 2 + 34 * 343
    CHECK(r7.truncate_exact(r3, 3) == BigRat(108));
    // truncation coherence: the short lift is a prefix of the long one
    const auto r10 = r7.hensel_lift(f, BigInt(3), 10);
    const auto d10 = r7.digits(r10);
    const auto d3 = r7.digits(r3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(d3[k] == d10[k]);
    // the lifted root satisfies the relation to full precision
    const auto sq = r7.ap_sub_ex(r7.ap_mul(r10, r10), BigRat(2));
    CHECK(r7.val(sq).kind == CertifiedValue::Kind::AtLeast);
    CHECK(r7.val(sq).level == 10);
    // the other residue root lifts to the negation
    const auto neg = r7.hensel_lift(f, BigInt(4), 10);
    CHECK(r7.val(r7.ap_add(r10, neg)).kind == CertifiedValue::Kind::AtLeast);
}

TEST_CASE("root lifting refusals") {
    const PAdicRing r2(BigInt(2));
    const std::vector<BigRat> f{BigRat(-2), BigRat(0), BigRat(1)};
    // derivative 2x vanishes mod 2
    CHECK_THROWS_AS(r2.hensel_lift(f, BigInt(0), 5), not_simple_root);
    const PAdicRing r7(BigInt(7));
    // 1 is not a root of x^2 - 2 mod 7
    CHECK_THROWS_AS(r7.hensel_lift(f, BigInt(1), 5), precondition_error);
}

TEST_CASE("root lifting over power series") {
    const TAdicRing<Fp> f2(Fp(2, 1));
    // Y^2 + Y + t = 0: roots t + t^2 + t^4 + ... and its shift by 1
    const auto t = f2.uniformizer_pow(1);
    const std::vector<RatFunc<Fp>> f{t, f2.ex_one(), f2.ex_one()};
    const auto root = f2.hensel_lift(f, Fp(2, 0), 20);
    const auto dg = f2.digits(root);
    for (std::size_t k = 0; k < 20; ++k) {
        const bool pow2 = k == 1 || k == 2 || k == 4 || k == 8 || k == 16;
        CHECK(dg[k].v == (pow2 ? 1 : 0));
    }
    const auto other = f2.hensel_lift(f, Fp(2, 1), 20);
    CHECK(f2.digits(other)[0].v == 1);
    // the two roots differ by the unit 1
    const auto diff = f2.ap_sub(other, root);
    CHECK(f2.val(diff).is_exact_finite());
    CHECK(f2.val(diff).level == 0);
}

TEST_CASE("two working precisions give coherent digits through arithmetic") {
    const PAdicRing r7(BigInt(7));
    const auto a = BigRat(BigInt(3), BigInt(2));
    const auto b = BigRat(BigInt(5), BigInt(4));
    for (long lo : {4L, 7L}) {
        const long hi = lo + 6;
        const auto xs = r7.ap_mul(r7.approximate(a, lo), r7.approximate(b, lo));
        const auto xl = r7.ap_mul(r7.approximate(a, hi), r7.approximate(b, hi));
        const auto ds = r7.digits(xs);
        const auto dl = r7.digits(xl);
        for (long k = 0; k < xs.prec; ++k)
            CHECK(ds[static_cast<std::size_t>(k)] == dl[static_cast<std::size_t>(k)]);
    }
}
