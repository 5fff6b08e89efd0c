#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pclab/bigint.hpp"
#include "pclab/errors.hpp"

namespace pclab {

// Totally ordered abelian groups the lab works in: Z, Q, and Z^n with the
// lexicographic order.  A descriptor is parsed from "Z", "Q" or "Z^n:lex".
enum class GroupKind { Z, Q, LexZ };

struct GroupDescriptor {
    GroupKind kind = GroupKind::Z;
    int rank = 1;

    friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

inline GroupDescriptor parse_group(const std::string& s) {
    if (s == "Z") return {GroupKind::Z, 1};
    if (s == "Q") return {GroupKind::Q, 1};
    if (s.rfind("Z^", 0) == 0) {
        auto colon = s.find(':');
        if (colon == std::string::npos || s.substr(colon + 1) != "lex")
            throw config_error("bad group descriptor: " + s);
        int n;
        try {
            n = std::stoi(s.substr(2, colon - 2));
        } catch (const std::exception&) {
            throw config_error("bad group descriptor: " + s);
        }
        if (n < 1 || n > 16) throw config_error("bad group rank in: " + s);
        return {GroupKind::LexZ, n};
    }
    throw config_error("unknown group descriptor: " + s);
}

inline std::string format_group(const GroupDescriptor& d) {
    switch (d.kind) {
        case GroupKind::Z: return "Z";
        case GroupKind::Q: return "Q";
        case GroupKind::LexZ: return "Z^" + std::to_string(d.rank) + ":lex";
    }
    return "?";
}

// One element of a described group.  Coordinates are rationals; for Z and
// Z^n:lex integrality is enforced at construction.
struct GroupElement {
    GroupDescriptor desc;
    std::vector<BigRat> coords;

    GroupElement() : coords{BigRat(0)} {}

    GroupElement(GroupDescriptor d, std::vector<BigRat> c) : desc(d), coords(std::move(c)) {
        if (static_cast<int>(coords.size()) != (desc.kind == GroupKind::LexZ ? desc.rank : 1))
            throw config_error("group element arity does not match descriptor");
        if (desc.kind != GroupKind::Q)
            for (const auto& x : coords)
                if (denominator(x) != 1)
                    throw config_error("non-integral coordinate in integral group");
    }
};

inline GroupElement group_zero(const GroupDescriptor& d) {
    std::vector<BigRat> c(d.kind == GroupKind::LexZ ? d.rank : 1, BigRat(0));
    return GroupElement(d, std::move(c));
}

inline void require_same_group(const GroupElement& a, const GroupElement& b) {
    if (!(a.desc == b.desc))
        throw descriptor_mismatch("group elements live in different groups");
}

// Lexicographic comparison; for rank 1 this is the plain order.
inline int group_cmp(const GroupElement& a, const GroupElement& b) {
    require_same_group(a, b);
    for (std::size_t k = 0; k < a.coords.size(); ++k) {
        if (a.coords[k] < b.coords[k]) return -1;
        if (a.coords[k] > b.coords[k]) return 1;
    }
    return 0;
}

inline GroupElement group_add(const GroupElement& a, const GroupElement& b) {
    require_same_group(a, b);
    auto c = a.coords;
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += b.coords[k];
    return GroupElement(a.desc, std::move(c));
}

inline GroupElement group_sub(const GroupElement& a, const GroupElement& b) {
    require_same_group(a, b);
    auto c = a.coords;
    for (std::size_t k = 0; k < c.size(); ++k) c[k] -= b.coords[k];
    return GroupElement(a.desc, std::move(c));
}

inline GroupElement group_neg(const GroupElement& a) {
    auto c = a.coords;
    for (auto& x : c) x = -x;
    return GroupElement(a.desc, std::move(c));
}

inline GroupElement group_scale(long n, const GroupElement& a) {
    auto c = a.coords;
    for (auto& x : c) x *= n;
    return GroupElement(a.desc, std::move(c));
}

// A group value extended by +infinity (the value of zero).
struct ExtendedValue {
    bool infinite = false;
    GroupElement v;

    static ExtendedValue infinity(const GroupDescriptor& d) { return {true, group_zero(d)}; }
    static ExtendedValue finite(GroupElement g) { return {false, std::move(g)}; }
};

inline int ext_cmp(const ExtendedValue& a, const ExtendedValue& b) {
    if (a.infinite && b.infinite) return 0;
    if (a.infinite) return 1;
    if (b.infinite) return -1;
    return group_cmp(a.v, b.v);
}

struct OstrowskiResult {
    long nu;         // least index past which the dominance pattern is stable
    std::size_t r;   // index of the minimal multiplier, the eventual argmin
};

// Given finitely many affine families beta_i + t_i * gamma_s (t_i pairwise
// distinct positive integers, gammas strictly increasing), find the least nu
// such that for every observed s > nu the family values are pairwise distinct
// and ordered the way the multipliers t order them; then the argmin for all
// such s is r = argmin t_i.  Comparisons stay inside the group: the pair
// (i, j) with t_i < t_j is settled at s iff (t_j - t_i) * gamma_s exceeds
// beta_i - beta_j.  Throws prefix_too_short if some pair never settles within
// the observed gammas, or if no settled index leaves a non-empty window.
inline OstrowskiResult ostrowski_select(const std::vector<GroupElement>& betas,
                                        const std::vector<long>& ts,
                                        const std::vector<GroupElement>& gammas) {
    const std::size_t m = betas.size();
    if (m == 0 || ts.size() != m) throw precondition_error("ostrowski_select: bad family sizes");
    if (gammas.empty()) throw precondition_error("ostrowski_select: empty gamma prefix");
    for (std::size_t i = 0; i < m; ++i) {
        if (ts[i] < 1) throw precondition_error("ostrowski_select: multipliers must be positive");
        for (std::size_t j = i + 1; j < m; ++j) {
            if (ts[i] == ts[j]) throw precondition_error("ostrowski_select: multipliers must be distinct");
            require_same_group(betas[i], betas[j]);
        }
        require_same_group(betas[i], gammas[0]);
    }
    for (std::size_t s = 0; s + 1 < gammas.size(); ++s)
        if (group_cmp(gammas[s], gammas[s + 1]) >= 0)
            throw precondition_error("ostrowski_select: gammas must be strictly increasing");

    std::size_t r = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (ts[i] < ts[r]) r = i;

    const long S = static_cast<long>(gammas.size());
    long sigma_max = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (ts[i] >= ts[j]) continue;
            const GroupElement gap = group_sub(betas[i], betas[j]);
            const long dt = ts[j] - ts[i];
            long sigma = -1;
            for (long s = 0; s < S; ++s) {
                if (group_cmp(group_scale(dt, gammas[s]), gap) > 0) {
                    sigma = s;
                    break;
                }
            }
            if (sigma < 0)
                throw prefix_too_short("ostrowski_select: pair (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") never settles in the observed prefix");
            if (sigma > sigma_max) sigma_max = sigma;
        }
    }
    const long nu = sigma_max > 0 ? sigma_max - 1 : 0;
    if (nu + 1 >= S)
        throw prefix_too_short("ostrowski_select: settling leaves no observed index past nu");
    return {nu, r};
}

} // namespace pclab
