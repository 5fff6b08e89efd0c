#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "pclab/bigint.hpp"
#include "pclab/errors.hpp"
#include "pclab/ordered_values.hpp"
#include "pclab/valued_arith.hpp"

namespace pclab {

using json = nlohmann::json;

// nlohmann's default object map keeps keys sorted, so reports serialize
// canonically; nothing here may introduce unordered containers.

inline json cv_to_json(const CertifiedValue& c) {
    switch (c.kind) {
        case CertifiedValue::Kind::Exactly: return json{{"kind", "exactly"}, {"level", c.level}};
        case CertifiedValue::Kind::ExactlyInfinity: return json{{"kind", "infinity"}};
        case CertifiedValue::Kind::AtLeast: return json{{"kind", "at_least"}, {"level", c.level}};
    }
    throw precondition_error("cv_to_json: bad kind");
}

inline CertifiedValue cv_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw config_error("bad value certificate");
    const std::string k = j.at("kind").get<std::string>();
    if (k == "infinity") return CertifiedValue::infinity();
    if (!j.contains("level") || !j.at("level").is_number_integer())
        throw config_error("value certificate without level");
    const long level = j.at("level").get<long>();
    if (k == "exactly") return CertifiedValue::exactly(level);
    if (k == "at_least") return CertifiedValue::at_least(level);
    throw config_error("unknown value certificate kind: " + k);
}

// --- ordered group elements -------------------------------------------------

inline json coord_to_json(const BigRat& q) {
    if (denominator(q) == 1) {
        const BigInt n = numerator(q);
        if (n >= -((BigInt(1) << 53)) && n <= (BigInt(1) << 53))
            return static_cast<std::int64_t>(n);
    }
    return rat_str(q);
}

inline BigRat coord_from_json(const json& j) {
    if (j.is_number_integer()) return BigRat(BigInt(j.get<std::int64_t>()));
    if (j.is_string()) return rat_parse(j.get<std::string>());
    throw config_error("bad group coordinate");
}

inline json gel_to_json(const GroupElement& g) {
    if (g.desc.kind == GroupKind::LexZ) {
        json arr = json::array();
        for (const auto& c : g.coords) arr.push_back(coord_to_json(c));
        return arr;
    }
    return coord_to_json(g.coords[0]);
}

inline GroupElement gel_from_json(const GroupDescriptor& d, const json& j) {
    std::vector<BigRat> coords;
    if (d.kind == GroupKind::LexZ) {
        if (!j.is_array()) throw config_error("lex group element must be an array");
        for (const auto& el : j) coords.push_back(coord_from_json(el));
    } else if (j.is_array()) {
        if (j.size() != 1) throw config_error("rank-1 group element must be a single coordinate");
        coords.push_back(coord_from_json(j[0]));
    } else {
        coords.push_back(coord_from_json(j));
    }
    return GroupElement(d, std::move(coords));
}

// --- residue-field scalars, per ring ----------------------------------------

inline json base_to_json(const PAdicRing&, const PAdicRing::Base& b) { return b.str(); }

inline PAdicRing::Base base_from_json(const PAdicRing& ring, const json& j) {
    BigInt v;
    if (j.is_string()) v = bi_parse(j.get<std::string>());
    else if (j.is_number_integer()) v = j.get<std::int64_t>();
    else throw config_error("bad residue digit");
    if (v < 0 || v >= ring.p) throw config_error("residue digit out of range: " + v.str());
    return v;
}

inline json base_to_json(const TAdicRing<Fp>&, const Fp& b) { return b.v; }

inline Fp base_from_json(const TAdicRing<Fp>& ring, const json& j) {
    if (!j.is_number_integer()) throw config_error("bad residue coefficient");
    return Fp(ring.one.p, j.get<std::int64_t>());
}

inline json base_to_json(const TAdicRing<BigRat>&, const BigRat& b) { return rat_str(b); }

inline BigRat base_from_json(const TAdicRing<BigRat>&, const json& j) {
    if (j.is_number_integer()) return BigRat(BigInt(j.get<std::int64_t>()));
    if (j.is_string()) return rat_parse(j.get<std::string>());
    throw config_error("bad rational coefficient");
}

// --- exact scalars, per ring --------------------------------------------------

inline json scalar_to_json(const PAdicRing&, const PAdicRing::Exact& e) { return rat_str(e); }

inline PAdicRing::Exact scalar_from_json(const PAdicRing&, const json& j) {
    if (j.is_number_integer()) return BigRat(BigInt(j.get<std::int64_t>()));
    if (j.is_string()) return rat_parse(j.get<std::string>());
    throw config_error("bad p-adic scalar");
}

template <class B>
json scalar_to_json(const TAdicRing<B>& ring, const RatFunc<B>& e) {
    rf_require_valid(e);
    auto poly_json = [&](const TPoly<B>& f) {
        json arr = json::array();
        for (const auto& c : f.c) arr.push_back(base_to_json(ring, c));
        return arr;
    };
    if (tp_deg(e.den) == 0 && e.den.c[0] == fe_one(ring.one)) return poly_json(e.num);
    return json{{"den", poly_json(e.den)}, {"num", poly_json(e.num)}};
}

template <class B>
RatFunc<B> scalar_from_json(const TAdicRing<B>& ring, const json& j) {
    auto poly_from = [&](const json& arr) {
        if (!arr.is_array()) throw config_error("t-adic polynomial must be a coefficient array");
        TPoly<B> f;
        for (const auto& el : arr) f.c.push_back(base_from_json(ring, el));
        return tp_trim(std::move(f));
    };
    if (j.is_array()) return rf_make(poly_from(j), TPoly<B>{{ring.one}});
    if (j.is_object() && j.contains("num") && j.contains("den"))
        return rf_make(poly_from(j.at("num")), poly_from(j.at("den")));
    throw config_error("bad t-adic scalar");
}

// --- polynomials and approximations -------------------------------------------

template <class R>
TPoly<typename R::Exact> poly_from_json(const R& ring, const json& j) {
    if (!j.is_array()) throw config_error("polynomial must be an array of coefficients");
    TPoly<typename R::Exact> f;
    for (const auto& el : j) f.c.push_back(scalar_from_json(ring, el));
    return tp_trim(std::move(f));
}

template <class R>
json poly_to_json(const R& ring, const TPoly<typename R::Exact>& f) {
    json arr = json::array();
    for (const auto& c : f.c) arr.push_back(scalar_to_json(ring, c));
    return arr;
}

template <class R>
json approx_to_json(const R& ring, const typename R::Approx& a) {
    json digits = json::array();
    for (const auto& d : ring.digits(a)) digits.push_back(base_to_json(ring, d));
    json out{{"digits", digits}, {"precision", a.prec}};
    if (a.exact_zero) out["exact_zero"] = true;
    return out;
}

template <class R>
typename R::Approx approx_from_json(const R& ring, const json& j) {
    if (!j.is_object() || !j.contains("digits")) throw config_error("bad approximation record");
    std::vector<typename R::Base> d;
    for (const auto& el : j.at("digits")) d.push_back(base_from_json(ring, el));
    const bool ez = j.value("exact_zero", false);
    auto out = ring.from_digits(d, ez);
    if (j.contains("precision") && j.at("precision").get<long>() != out.prec)
        throw config_error("approximation precision does not match its digits");
    return out;
}

} // namespace pclab
