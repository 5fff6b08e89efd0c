#pragma once

#include <boost/multiprecision/miller_rabin.hpp>

#include <string>
#include <utility>
#include <vector>

#include "pclab/bigint.hpp"
#include "pclab/errors.hpp"
#include "pclab/fields.hpp"

namespace pclab {

// ---------------------------------------------------------------------------
// Certified values.  Every valuation this module reports is either known
// exactly (possibly +infinity, the value of zero) or bounded from below by
// the precision that was available.  Both concrete ring families have value
// group Z, so levels are machine integers; the ordered-values module supplies
// the general group machinery where reports need it.
// ---------------------------------------------------------------------------

struct CertifiedValue {
    enum class Kind { Exactly, ExactlyInfinity, AtLeast };
    Kind kind = Kind::AtLeast;
    long level = 0;

    static CertifiedValue exactly(long v) { return {Kind::Exactly, v}; }
    static CertifiedValue infinity() { return {Kind::ExactlyInfinity, 0}; }
    static CertifiedValue at_least(long v) { return {Kind::AtLeast, v}; }

    bool is_exact() const { return kind != Kind::AtLeast; }
    bool is_exact_finite() const { return kind == Kind::Exactly; }

    // Lower bound valid for every kind.
    long lower_bound() const {
        if (kind == Kind::ExactlyInfinity)
            throw precondition_error("CertifiedValue: no finite lower bound for infinity");
        return level;
    }

    friend bool operator==(const CertifiedValue&, const CertifiedValue&) = default;
};

// Compare two exactly known values (infinity allowed).  AtLeast operands are
// rejected: order between bounds is not knowledge.
inline int cv_cmp_exact(const CertifiedValue& a, const CertifiedValue& b) {
    if (!a.is_exact() || !b.is_exact())
        throw precondition_error("cv_cmp_exact: operand is only bounded");
    const bool ai = a.kind == CertifiedValue::Kind::ExactlyInfinity;
    const bool bi = b.kind == CertifiedValue::Kind::ExactlyInfinity;
    if (ai && bi) return 0;
    if (ai) return 1;
    if (bi) return -1;
    return a.level < b.level ? -1 : a.level > b.level ? 1 : 0;
}

inline std::string cv_str(const CertifiedValue& c) {
    switch (c.kind) {
        case CertifiedValue::Kind::Exactly: return "=" + std::to_string(c.level);
        case CertifiedValue::Kind::ExactlyInfinity: return "=inf";
        case CertifiedValue::Kind::AtLeast: return ">=" + std::to_string(c.level);
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Ring descriptors: "padic:<p>", "tadic:F<p>", "tadic:Q".
// ---------------------------------------------------------------------------

struct RingDescriptor {
    enum class Family { PAdic, TAdicFp, TAdicQ };
    Family family = Family::PAdic;
    BigInt p = 0;   // prime for PAdic / TAdicFp, unused for TAdicQ

    friend bool operator==(const RingDescriptor&, const RingDescriptor&) = default;
};

inline bool looks_prime(const BigInt& p) {
    if (p < 2) return false;
    return boost::multiprecision::miller_rabin_test(p, 32);
}

inline RingDescriptor parse_ring(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw config_error("bad ring descriptor: " + s);
    const std::string head = s.substr(0, colon), tail = s.substr(colon + 1);
    if (head == "padic") {
        BigInt p = bi_parse(tail);
        if (!looks_prime(p)) throw config_error("padic modulus is not prime: " + tail);
        return {RingDescriptor::Family::PAdic, p};
    }
    if (head == "tadic") {
        if (tail == "Q") return {RingDescriptor::Family::TAdicQ, 0};
        if (!tail.empty() && tail[0] == 'F') {
            BigInt p = bi_parse(tail.substr(1));
            if (!looks_prime(p) || p > BigInt(1) << 31)
                throw config_error("bad residue characteristic in: " + s);
            return {RingDescriptor::Family::TAdicFp, p};
        }
    }
    throw config_error("unknown ring descriptor: " + s);
}

inline std::string format_ring(const RingDescriptor& d) {
    switch (d.family) {
        case RingDescriptor::Family::PAdic: return "padic:" + d.p.str();
        case RingDescriptor::Family::TAdicFp: return "tadic:F" + d.p.str();
        case RingDescriptor::Family::TAdicQ: return "tadic:Q";
    }
    return "?";
}

inline BigInt inv_mod(const BigInt& a, const BigInt& m) {
    BigInt r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    if (r1 < 0) r1 += m;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1, s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw precondition_error("inv_mod: argument not invertible");
    s0 %= m;
    if (s0 < 0) s0 += m;
    return s0;
}

// ---------------------------------------------------------------------------
// The p-adic ring family.  Exact scalars are rationals (the field K = Q with
// the p-adic value); approximations are truncated expansions: the residue
// modulo p^prec together with the digit count that is actually known.
// Arithmetic propagates precision pessimistically, so every digit an Approx
// claims is a true digit of the represented element.
// ---------------------------------------------------------------------------

struct PAdicRing {
    using Exact = BigRat;
    using Base = BigInt;   // residue field representatives in [0, p)

    struct Approx {
        BigInt v;               // canonical residue in [0, p^prec)
        long prec = 0;          // number of certified digits, >= 1
        bool exact_zero = false;   // exactly zero: every digit known to vanish
    };

    BigInt p;

    explicit PAdicRing(BigInt p_) : p(std::move(p_)) {
        if (!looks_prime(p)) throw config_error("PAdicRing: modulus is not prime");
    }

    std::string name() const { return "padic:" + p.str(); }

    // exact scalars -----------------------------------------------------

    Exact ex_zero() const { return BigRat(0); }
    Exact ex_one() const { return BigRat(1); }
    Exact ex_from_int(const BigInt& n) const { return BigRat(n); }
    bool ex_is_zero(const Exact& a) const { return a == 0; }
    bool ex_eq(const Exact& a, const Exact& b) const { return a == b; }
    Exact ex_add(const Exact& a, const Exact& b) const { return a + b; }
    Exact ex_sub(const Exact& a, const Exact& b) const { return a - b; }
    Exact ex_mul(const Exact& a, const Exact& b) const { return a * b; }
    Exact ex_neg(const Exact& a) const { return -a; }

    Exact ex_div(const Exact& a, const Exact& b) const {
        if (b == 0) throw precondition_error("ex_div: division by zero");
        return a / b;
    }

    Exact uniformizer_pow(long k) const {
        if (k >= 0) return BigRat(bi_pow(p, k));
        return BigRat(1, bi_pow(p, -k));
    }

    CertifiedValue val(const Exact& a) const {
        if (a == 0) return CertifiedValue::infinity();
        return CertifiedValue::exactly(rat_ord(a, p));
    }

    CertifiedValue val(const Approx& a) const {
        if (a.exact_zero) return CertifiedValue::infinity();
        if (a.v == 0) return CertifiedValue::at_least(a.prec);
        return CertifiedValue::exactly(bi_ord(a.v, p));
    }

    bool in_ring(const Exact& a) const { return a == 0 || rat_ord(a, p) >= 0; }

    std::string ex_str(const Exact& a) const { return rat_str(a); }

    // expansions ---------------------------------------------------------

    // Residue of a ring element modulo p^N.
    BigInt expansion(const Exact& a, long N) const {
        if (N < 0) throw precondition_error("expansion: negative precision");
        if (a == 0) return 0;
        if (rat_ord(a, p) < 0) throw negative_value("expansion: element outside the valuation ring");
        const BigInt m = bi_pow(p, N);
        BigInt num = numerator(a) % m, den = denominator(a) % m;
        if (num < 0) num += m;
        return num * inv_mod(den, m) % m;
    }

    Approx approximate(const Exact& a, long N) const {
        if (N < 1) throw insufficient_precision("approximate: precision below one digit");
        if (a == 0) return Approx{0, N, true};
        if (rat_ord(a, p) < 0) throw negative_value("approximate: element outside the valuation ring");
        return Approx{expansion(a, N), N, false};
    }

    std::vector<BigInt> digits(const Approx& a) const {
        std::vector<BigInt> d(static_cast<std::size_t>(a.prec));
        BigInt v = a.v;
        for (auto& x : d) {
            x = v % p;
            v /= p;
        }
        return d;
    }

    Approx from_digits(const std::vector<BigInt>& d, bool exact_zero = false) const {
        if (d.empty()) throw insufficient_precision("from_digits: no digits");
        BigInt v = 0;
        for (std::size_t k = d.size(); k-- > 0;) {
            if (d[k] < 0 || d[k] >= p) throw config_error("from_digits: digit out of range");
            v = v * p + d[k];
        }
        if (exact_zero && v != 0) throw config_error("from_digits: exact zero with nonzero digit");
        return Approx{v, static_cast<long>(d.size()), exact_zero};
    }

    // The element of K carried by the digits below position k.
    Exact truncate_exact(const Approx& a, long k) const {
        if (a.exact_zero) return BigRat(0);
        if (k < 0 || k > a.prec) throw precondition_error("truncate_exact: cut outside known digits");
        return BigRat(a.v % bi_pow(p, k));
    }

    // approximate arithmetic ----------------------------------------------

    Approx ap_zero(long N) const { return Approx{0, N, true}; }

    Approx ap_neg(const Approx& a) const {
        if (a.exact_zero || a.v == 0) return a;
        return Approx{bi_pow(p, a.prec) - a.v, a.prec, false};
    }

    Approx ap_add(const Approx& a, const Approx& b) const {
        if (a.exact_zero) return b;
        if (b.exact_zero) return a;
        const long N = std::min(a.prec, b.prec);
        return Approx{(a.v + b.v) % bi_pow(p, N), N, false};
    }

    Approx ap_sub(const Approx& a, const Approx& b) const { return ap_add(a, ap_neg(b)); }

    Approx ap_mul(const Approx& a, const Approx& b) const {
        if (a.exact_zero) return a;
        if (b.exact_zero) return b;
        const long va = a.v == 0 ? a.prec : bi_ord(a.v, p);
        const long vb = b.v == 0 ? b.prec : bi_ord(b.v, p);
        const long N = std::min(a.prec + vb, b.prec + va);
        return Approx{a.v * b.v % bi_pow(p, N), N, false};
    }

    Approx ap_div(const Approx& a, const Approx& b) const {
        if (b.exact_zero) throw precondition_error("ap_div: division by exact zero");
        if (b.v == 0)
            throw division_by_indistinguishable_zero("ap_div: divisor has no visible digit");
        const long k = bi_ord(b.v, p);
        if (a.exact_zero) return a;
        if (a.v != 0 && bi_ord(a.v, p) < k)
            throw negative_value("ap_div: quotient leaves the valuation ring");
        if (a.v == 0 && a.prec < k)
            throw insufficient_precision("ap_div: cannot certify the quotient stays integral");
        const long N = std::min(a.prec, b.prec) - k;
        if (N < 1) throw insufficient_precision("ap_div: no certified digits would remain");
        const BigInt m = bi_pow(p, N);
        const BigInt pk = bi_pow(p, k);
        return Approx{(a.v / pk) % m * inv_mod(b.v / pk % m, m) % m, N, false};
    }

    // mixed arithmetic with exact ring elements ---------------------------

    Approx ap_add_ex(const Approx& a, const Exact& e) const {
        if (e != 0 && rat_ord(e, p) < 0)
            throw negative_value("ap_add_ex: exact term outside the valuation ring");
        if (a.exact_zero) return approximate(e, a.prec);
        return Approx{(a.v + expansion(e, a.prec)) % bi_pow(p, a.prec), a.prec, false};
    }

    Approx ap_sub_ex(const Approx& a, const Exact& e) const { return ap_add_ex(a, -e); }

    Approx ap_ex_sub(const Exact& e, const Approx& a) const { return ap_neg(ap_sub_ex(a, e)); }

    Approx ap_mul_ex(const Approx& a, const Exact& e) const {
        if (e == 0) return Approx{0, a.prec, true};
        const long k = rat_ord(e, p);
        if (k < 0) throw negative_value("ap_mul_ex: exact factor outside the valuation ring");
        if (a.exact_zero) return Approx{0, a.prec + k, true};
        const long N = a.prec + k;
        return Approx{a.v * expansion(e, N) % bi_pow(p, N), N, false};
    }

    Approx ap_div_ex(const Approx& a, const Exact& e) const {
        if (e == 0) throw precondition_error("ap_div_ex: division by exact zero");
        const long k = rat_ord(e, p);
        if (a.exact_zero) {
            const long N = a.prec - k;
            return Approx{0, N < 1 ? 1 : N, true};
        }
        if (a.v != 0 && bi_ord(a.v, p) < k)
            throw negative_value("ap_div_ex: quotient leaves the valuation ring");
        if (a.v == 0 && a.prec < k)
            throw insufficient_precision("ap_div_ex: cannot certify the quotient stays integral");
        const long N = a.prec - k;
        if (N < 1) throw insufficient_precision("ap_div_ex: no certified digits would remain");
        const BigInt m = bi_pow(p, N);
        BigInt shifted = k >= 0 ? a.v / bi_pow(p, k) : a.v * bi_pow(p, -k);
        const Exact unit = ex_div(e, uniformizer_pow(k));
        return Approx{shifted % m * expansion(fe_inv(unit), N) % m, N, false};
    }

    // residues and units ---------------------------------------------------

    Base residue(const Approx& a) const {
        if (a.exact_zero) return 0;
        return a.v % p;
    }

    Base residue_ex(const Exact& a) const {
        if (a == 0) return 0;
        if (rat_ord(a, p) < 0) throw negative_value("residue_ex: element outside the valuation ring");
        return expansion(a, 1);
    }

    bool is_unit(const Approx& a) const { return !a.exact_zero && a.v % p != 0; }
    bool is_unit_ex(const Exact& a) const { return a != 0 && rat_ord(a, p) == 0; }

    // Hensel lifting -------------------------------------------------------

    // Lift a simple residue root of f (coefficients in V) to N digits,
    // one digit at a time.  Digit k of the result depends only on digits
    // below k, so truncations of a longer lift coincide with shorter lifts.
    Approx hensel_lift(const std::vector<Exact>& f, const BigInt& root0, long N) const {
        if (N < 1) throw insufficient_precision("hensel_lift: precision below one digit");
        if (f.size() < 2) throw precondition_error("hensel_lift: polynomial must be non-constant");
        std::vector<BigInt> F(f.size());
        const BigInt m = bi_pow(p, N);
        for (std::size_t j = 0; j < f.size(); ++j) F[j] = expansion(f[j], N);

        auto eval_mod = [&](const BigInt& x, const BigInt& mod) {
            BigInt acc = 0;
            for (std::size_t j = F.size(); j-- > 0;) acc = (acc * x + F[j]) % mod;
            return acc;
        };

        BigInt x = root0 % p;
        if (x < 0) x += p;
        if (eval_mod(x, p) != 0) throw precondition_error("hensel_lift: seed is not a residue root");
        BigInt fp = 0;
        for (std::size_t j = F.size(); j-- > 1;) fp = (fp * x + F[j] * j) % p;
        if (fp == 0) throw not_simple_root("hensel_lift: derivative vanishes at the seed");
        const BigInt fp_inv = inv_mod(fp, p);

        BigInt pk = p;
        for (long k = 1; k < N; ++k) {
            const BigInt r = eval_mod(x, pk * p) / pk;
            const BigInt d = (p - r * fp_inv % p) % p;
            x += d * pk;
            pk *= p;
        }
        return Approx{x % m, N, false};
    }
};

// ---------------------------------------------------------------------------
// The t-adic ring family over a base field B (a prime field or Q).  Exact
// scalars are rational functions in t; approximations are digit vectors,
// one base-field coefficient per power of t.
// ---------------------------------------------------------------------------

template <class B>
struct TAdicRing {
    using Exact = RatFunc<B>;
    using Base = B;

    struct Approx {
        std::vector<B> d;   // coefficients of t^0 .. t^(prec-1)
        long prec = 0;
        bool exact_zero = false;
    };

    B one;   // exemplar of the base field, carries the modulus when there is one

    explicit TAdicRing(B one_) : one(std::move(one_)) {
        if (fe_is_zero(one)) throw precondition_error("TAdicRing: exemplar must be one");
    }

    std::string name() const {
        if constexpr (std::is_same_v<B, Fp>) return "tadic:F" + std::to_string(one.p);
        else return "tadic:Q";
    }

    // exact scalars -----------------------------------------------------

    Exact ex_zero() const { return fe_zero(ex_one()); }
    Exact ex_one() const { return Exact{TPoly<B>{{one}}, TPoly<B>{{one}}}; }
    Exact ex_from_int(const BigInt& n) const { return fe_embed(ex_one(), n); }
    bool ex_is_zero(const Exact& a) const { return fe_is_zero(a); }
    bool ex_eq(const Exact& a, const Exact& b) const { return a == b; }
    Exact ex_add(const Exact& a, const Exact& b) const { return a + b; }
    Exact ex_sub(const Exact& a, const Exact& b) const { return a - b; }
    Exact ex_mul(const Exact& a, const Exact& b) const { return a * b; }
    Exact ex_neg(const Exact& a) const { return -a; }

    Exact ex_div(const Exact& a, const Exact& b) const {
        if (fe_is_zero(b)) throw precondition_error("ex_div: division by zero");
        return a / b;
    }

    Exact uniformizer_pow(long k) const {
        TPoly<B> tk;
        tk.c.assign(static_cast<std::size_t>(std::abs(k)) + 1, fe_zero(one));
        tk.c.back() = one;
        if (k >= 0) return Exact{tk, TPoly<B>{{one}}};
        return Exact{TPoly<B>{{one}}, tk};
    }

    CertifiedValue val(const Exact& a) const {
        if (fe_is_zero(a)) return CertifiedValue::infinity();
        return CertifiedValue::exactly(rf_ord(a));
    }

    CertifiedValue val(const Approx& a) const {
        if (a.exact_zero) return CertifiedValue::infinity();
        for (long k = 0; k < a.prec; ++k)
            if (!fe_is_zero(a.d[k])) return CertifiedValue::exactly(k);
        return CertifiedValue::at_least(a.prec);
    }

    bool in_ring(const Exact& a) const { return fe_is_zero(a) || rf_ord(a) >= 0; }

    std::string ex_str(const Exact& a) const { return fe_str(a); }

    // expansions ---------------------------------------------------------

    // First N t-adic digits of a ring element.
    std::vector<B> expansion(const Exact& a, long N) const {
        if (N < 0) throw precondition_error("expansion: negative precision");
        std::vector<B> out(static_cast<std::size_t>(N), fe_zero(one));
        if (fe_is_zero(a)) return out;
        const long w = rf_ord(a);
        if (w < 0) throw negative_value("expansion: element outside the valuation ring");
        // In normal form with ord >= 0 the denominator has a unit constant term,
        // so w = ord(num) and the series quotient below is well defined.
        const long num_shift = tp_ord(a.num);
        std::vector<B> num(static_cast<std::size_t>(N), fe_zero(one));
        for (long k = 0; k + w < N && k + num_shift <= tp_deg(a.num); ++k)
            num[static_cast<std::size_t>(k)] = a.num.c[static_cast<std::size_t>(k + num_shift)];
        const B d0_inv = fe_inv(a.den.c[0]);
        std::vector<B> ser(static_cast<std::size_t>(N), fe_zero(one));
        for (long k = 0; k + w < N; ++k) {
            B acc = num[static_cast<std::size_t>(k)];
            for (long j = 1; j <= k && j <= tp_deg(a.den); ++j)
                acc = acc - a.den.c[static_cast<std::size_t>(j)] * ser[static_cast<std::size_t>(k - j)];
            ser[static_cast<std::size_t>(k)] = acc * d0_inv;
        }
        for (long k = w; k < N; ++k) out[static_cast<std::size_t>(k)] = ser[static_cast<std::size_t>(k - w)];
        return out;
    }

    Approx approximate(const Exact& a, long N) const {
        if (N < 1) throw insufficient_precision("approximate: precision below one digit");
        if (fe_is_zero(a)) return Approx{std::vector<B>(static_cast<std::size_t>(N), fe_zero(one)), N, true};
        if (rf_ord(a) < 0) throw negative_value("approximate: element outside the valuation ring");
        return Approx{expansion(a, N), N, false};
    }

    std::vector<B> digits(const Approx& a) const { return a.d; }

    Approx from_digits(const std::vector<B>& d, bool exact_zero = false) const {
        if (d.empty()) throw insufficient_precision("from_digits: no digits");
        if (exact_zero)
            for (const auto& x : d)
                if (!fe_is_zero(x)) throw config_error("from_digits: exact zero with nonzero digit");
        return Approx{d, static_cast<long>(d.size()), exact_zero};
    }

    Exact truncate_exact(const Approx& a, long k) const {
        if (a.exact_zero) return ex_zero();
        if (k < 0 || k > a.prec) throw precondition_error("truncate_exact: cut outside known digits");
        TPoly<B> num;
        num.c.assign(a.d.begin(), a.d.begin() + k);
        return Exact{tp_trim(std::move(num)), TPoly<B>{{one}}};
    }

    // approximate arithmetic ----------------------------------------------

    Approx ap_zero(long N) const {
        return Approx{std::vector<B>(static_cast<std::size_t>(N), fe_zero(one)), N, true};
    }

    Approx ap_neg(const Approx& a) const {
        Approx r = a;
        for (auto& x : r.d) x = -x;
        return r;
    }

    Approx ap_add(const Approx& a, const Approx& b) const {
        if (a.exact_zero) return b;
        if (b.exact_zero) return a;
        const long N = std::min(a.prec, b.prec);
        Approx r{std::vector<B>(static_cast<std::size_t>(N), fe_zero(one)), N, false};
        for (long k = 0; k < N; ++k)
            r.d[static_cast<std::size_t>(k)] =
                a.d[static_cast<std::size_t>(k)] + b.d[static_cast<std::size_t>(k)];
        return r;
    }

    Approx ap_sub(const Approx& a, const Approx& b) const { return ap_add(a, ap_neg(b)); }

  private:
    long first_nonzero(const std::vector<B>& d) const {   // -1 when all zero
        for (std::size_t k = 0; k < d.size(); ++k)
            if (!fe_is_zero(d[k])) return static_cast<long>(k);
        return -1;
    }

    std::vector<B> conv_trunc(const std::vector<B>& a, const std::vector<B>& b, long N) const {
        std::vector<B> r(static_cast<std::size_t>(N), fe_zero(one));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (static_cast<long>(i) >= N) break;
            if (fe_is_zero(a[i])) continue;
            for (std::size_t j = 0; j < b.size() && static_cast<long>(i + j) < N; ++j)
                r[i + j] = r[i + j] + a[i] * b[j];
        }
        return r;
    }

    std::vector<B> series_inv(const std::vector<B>& a, long N) const {
        std::vector<B> r(static_cast<std::size_t>(N), fe_zero(one));
        const B a0_inv = fe_inv(a[0]);
        r[0] = a0_inv;
        for (long k = 1; k < N; ++k) {
            B acc = fe_zero(one);
            for (long j = 1; j <= k; ++j) {
                if (static_cast<std::size_t>(j) >= a.size()) break;
                acc = acc + a[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(k - j)];
            }
            r[static_cast<std::size_t>(k)] = -(acc * a0_inv);
        }
        return r;
    }

  public:
    Approx ap_mul(const Approx& a, const Approx& b) const {
        if (a.exact_zero) return a;
        if (b.exact_zero) return b;
        const long fa = first_nonzero(a.d), fb = first_nonzero(b.d);
        const long va = fa < 0 ? a.prec : fa;
        const long vb = fb < 0 ? b.prec : fb;
        const long N = std::min(a.prec + vb, b.prec + va);
        return Approx{conv_trunc(a.d, b.d, N), N, false};
    }

    Approx ap_div(const Approx& a, const Approx& b) const {
        if (b.exact_zero) throw precondition_error("ap_div: division by exact zero");
        const long k = first_nonzero(b.d);
        if (k < 0) throw division_by_indistinguishable_zero("ap_div: divisor has no visible digit");
        if (a.exact_zero) return a;
        const long fa = first_nonzero(a.d);
        if (fa >= 0 && fa < k)
            throw negative_value("ap_div: quotient leaves the valuation ring");
        if (fa < 0 && a.prec < k)
            throw insufficient_precision("ap_div: cannot certify the quotient stays integral");
        const long N = std::min(a.prec, b.prec) - k;
        if (N < 1) throw insufficient_precision("ap_div: no certified digits would remain");
        std::vector<B> au(a.d.begin() + k, a.d.end());
        std::vector<B> bu(b.d.begin() + k, b.d.end());
        return Approx{conv_trunc(au, series_inv(bu, N), N), N, false};
    }

    // mixed arithmetic with exact ring elements ---------------------------

    Approx ap_add_ex(const Approx& a, const Exact& e) const {
        if (!fe_is_zero(e) && rf_ord(e) < 0)
            throw negative_value("ap_add_ex: exact term outside the valuation ring");
        if (a.exact_zero) return approximate(e, a.prec);
        auto ed = expansion(e, a.prec);
        Approx r = a;
        r.exact_zero = false;
        for (long k = 0; k < a.prec; ++k)
            r.d[static_cast<std::size_t>(k)] =
                r.d[static_cast<std::size_t>(k)] + ed[static_cast<std::size_t>(k)];
        return r;
    }

    Approx ap_sub_ex(const Approx& a, const Exact& e) const { return ap_add_ex(a, -e); }

    Approx ap_ex_sub(const Exact& e, const Approx& a) const { return ap_neg(ap_sub_ex(a, e)); }

    Approx ap_mul_ex(const Approx& a, const Exact& e) const {
        if (fe_is_zero(e)) return Approx{std::vector<B>(a.d.size(), fe_zero(one)), a.prec, true};
        const long k = rf_ord(e);
        if (k < 0) throw negative_value("ap_mul_ex: exact factor outside the valuation ring");
        if (a.exact_zero) return ap_zero(a.prec + k);
        const long N = a.prec + k;
        return Approx{conv_trunc(a.d, expansion(e, N), N), N, false};
    }

    Approx ap_div_ex(const Approx& a, const Exact& e) const {
        if (fe_is_zero(e)) throw precondition_error("ap_div_ex: division by exact zero");
        const long k = rf_ord(e);
        if (a.exact_zero) {
            const long N = a.prec - k;
            return ap_zero(N < 1 ? 1 : N);
        }
        const long fa = first_nonzero(a.d);
        if (fa >= 0 && fa < k)
            throw negative_value("ap_div_ex: quotient leaves the valuation ring");
        if (fa < 0 && a.prec < k)
            throw insufficient_precision("ap_div_ex: cannot certify the quotient stays integral");
        const long N = a.prec - k;
        if (N < 1) throw insufficient_precision("ap_div_ex: no certified digits would remain");
        std::vector<B> shifted;
        if (k >= 0) {
            shifted.assign(a.d.begin() + k, a.d.end());
        } else {
            shifted.assign(static_cast<std::size_t>(-k), fe_zero(one));
            shifted.insert(shifted.end(), a.d.begin(), a.d.end());
        }
        const Exact unit = ex_div(e, uniformizer_pow(k));
        return Approx{conv_trunc(shifted, expansion(fe_inv(unit), N), N), N, false};
    }

    // residues and units ---------------------------------------------------

    Base residue(const Approx& a) const {
        if (a.exact_zero) return fe_zero(one);
        return a.d[0];
    }

    Base residue_ex(const Exact& a) const {
        if (fe_is_zero(a)) return fe_zero(one);
        if (rf_ord(a) < 0) throw negative_value("residue_ex: element outside the valuation ring");
        return expansion(a, 1)[0];
    }

    bool is_unit(const Approx& a) const { return !a.exact_zero && !fe_is_zero(a.d[0]); }
    bool is_unit_ex(const Exact& a) const { return !fe_is_zero(a) && rf_ord(a) == 0; }

    // Hensel lifting -------------------------------------------------------

    Approx hensel_lift(const std::vector<Exact>& f, const B& root0, long N) const {
        if (N < 1) throw insufficient_precision("hensel_lift: precision below one digit");
        if (f.size() < 2) throw precondition_error("hensel_lift: polynomial must be non-constant");
        std::vector<std::vector<B>> F(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) F[j] = expansion(f[j], N);

        B x0 = root0;
        B r0 = fe_zero(one);
        for (std::size_t j = F.size(); j-- > 0;) r0 = r0 * x0 + F[j][0];
        if (!fe_is_zero(r0)) throw precondition_error("hensel_lift: seed is not a residue root");
        B fp = fe_zero(one);
        for (std::size_t j = F.size(); j-- > 1;)
            fp = fp * x0 + F[j][0] * fe_embed(one, BigInt(j));
        if (fe_is_zero(fp)) throw not_simple_root("hensel_lift: derivative vanishes at the seed");
        const B fp_inv = fe_inv(fp);

        std::vector<B> x(static_cast<std::size_t>(N), fe_zero(one));
        x[0] = x0;
        for (long k = 1; k < N; ++k) {
            // Evaluate f at the current truncation modulo t^(k+1).
            std::vector<B> acc(F.back().begin(), F.back().begin() + (k + 1));
            std::vector<B> xt(x.begin(), x.begin() + (k + 1));
            for (std::size_t j = F.size() - 1; j-- > 0;) {
                acc = conv_trunc(acc, xt, k + 1);
                for (long m = 0; m <= k; ++m)
                    acc[static_cast<std::size_t>(m)] =
                        acc[static_cast<std::size_t>(m)] + F[j][static_cast<std::size_t>(m)];
            }
            x[static_cast<std::size_t>(k)] = -(acc[static_cast<std::size_t>(k)] * fp_inv);
        }
        return Approx{x, N, false};
    }
};

} // namespace pclab
