// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Everything here recomputes from scratch — no result is trusted unless it
// reproduces, and the frozen constants were derived by hand before the
// library existed.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pclab/ci_stages.hpp"
#include "pclab/ordered_values.hpp"
#include "pclab/runner.hpp"
#include "pclab/scenario.hpp"

using namespace pclab;
using nlohmann::json;

namespace {

int g_failures = 0;

void report_line(int k, const std::string& what, bool ok, const std::string& detail) {
    std::printf("[%s] %d. %s%s%s\n", ok ? "PASS" : "FAIL", k, what.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++g_failures;
}

long ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 t0)
        .count();
}

// --- random elements --------------------------------------------------------

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

// --- 1. ultrametric laws ----------------------------------------------------

bool sum_law(const CertifiedValue& va, const CertifiedValue& vb, const CertifiedValue& vs) {
    if (vs.kind == CertifiedValue::Kind::ExactlyInfinity) return true;
    if (va.kind == CertifiedValue::Kind::ExactlyInfinity) return vs.level == vb.level;
    if (vb.kind == CertifiedValue::Kind::ExactlyInfinity) return vs.level == va.level;
    return vs.level >= std::min(va.level, vb.level);
}

bool product_law(const CertifiedValue& va, const CertifiedValue& vb, const CertifiedValue& vp) {
    if (va.kind == CertifiedValue::Kind::ExactlyInfinity ||
        vb.kind == CertifiedValue::Kind::ExactlyInfinity)
        return vp.kind == CertifiedValue::Kind::ExactlyInfinity;
    return vp.is_exact_finite() && vp.level == va.level + vb.level;
}

template <class R, class Gen>
long ultrametric_pairs(const R& ring, Gen&& gen, int iters) {
    long bad = 0;
    for (int it = 0; it < iters; ++it) {
        const auto a = gen();
        const auto b = gen();
        const auto va = ring.val(a), vb = ring.val(b);
        if (!product_law(va, vb, ring.val(ring.ex_mul(a, b)))) ++bad;
        if (!sum_law(va, vb, ring.val(ring.ex_add(a, b)))) ++bad;
    }
    return bad;
}

void criterion_ultrametric() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(1804);
    long bad = 0;
    {
        const PAdicRing r7(BigInt(7)), r2(BigInt(2));
        bad += ultrametric_pairs(r7, [&] { return random_rat(rng, BigInt(7)); }, 1000);
        bad += ultrametric_pairs(r2, [&] { return random_rat(rng, BigInt(2)); }, 1000);
    }
    {
        const TAdicRing<Fp> f2(Fp(2, 1)), f3(Fp(3, 1));
        bad += ultrametric_pairs(f2, [&] { return random_ratfunc(rng, Fp(2, 1), 4); }, 1000);
        bad += ultrametric_pairs(f3, [&] { return random_ratfunc(rng, Fp(3, 1), 4); }, 1000);
    }
    {
        const TAdicRing<BigRat> fq(BigRat(1));
        bad += ultrametric_pairs(fq, [&] { return random_ratfunc(rng, BigRat(1), 4); }, 1000);
    }
    const long ms = ms_since(t0);
    report_line(1, "ultrametric value laws, 1000 pairs per ring across five rings",
                bad == 0 && ms < 5000,
                std::to_string(bad) + " violations, " + std::to_string(ms) + " ms");
}

// --- 2. divided-power derivatives -------------------------------------------

template <class K>
TPoly<K> random_poly(std::mt19937& rng, const K& one, int maxdeg) {
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::uniform_int_distribution<long> coe(-9, 9);
    TPoly<K> f;
    const int d = deg(rng);
    for (int k = 0; k <= d; ++k) f.c.push_back(fe_embed(one, BigInt(coe(rng))));
    return tp_trim(std::move(f));
}

template <class K>
TPoly<K> formal_derivative(const TPoly<K>& f) {
    TPoly<K> out;
    for (std::size_t m = 1; m < f.c.size(); ++m)
        out.c.push_back(f.c[m] * fe_embed(f.c[m], BigInt(static_cast<long>(m))));
    return tp_trim(std::move(out));
}

template <class K>
long taylor_pairs(std::mt19937& rng, const K& one, int iters, bool factorial_identity) {
    std::uniform_int_distribution<long> pt(-9, 9);
    long bad = 0;
    for (int it = 0; it < iters; ++it) {
        const auto f = random_poly(rng, one, 8);
        const K a = fe_embed(one, BigInt(pt(rng)));
        const K b = fe_embed(one, BigInt(pt(rng)));
        const auto ders = hasse_derivatives(f);
        K lhs = tp_eval(f, K(a + b));
        K rhs = fe_zero(one);
        K bpow = fe_one(one);
        for (const auto& d : ders) {
            rhs = rhs + tp_eval(d, a) * bpow;
            bpow = bpow * b;
        }
        if (!fe_is_zero(K(lhs - rhs))) ++bad;
        if (factorial_identity && !tp_is_zero(f)) {
            // n! * (nth divided derivative) matches the iterated derivative
            TPoly<K> iter = f;
            K fact = fe_one(one);
            for (std::size_t n = 0; n < ders.size(); ++n) {
                if (n > 0) {
                    iter = formal_derivative(iter);
                    fact = fact * fe_embed(one, BigInt(static_cast<long>(n)));
                }
                TPoly<K> scaled;
                for (const auto& c : ders[n].c) scaled.c.push_back(c * fact);
                scaled = tp_trim(std::move(scaled));
                if (scaled.c.size() != iter.c.size()) { ++bad; break; }
                for (std::size_t m = 0; m < scaled.c.size(); ++m)
                    if (!fe_is_zero(K(scaled.c[m] - iter.c[m]))) { ++bad; break; }
            }
        }
    }
    return bad;
}

void criterion_taylor() {
    std::mt19937 rng(31415);
    long bad = 0;
    bad += taylor_pairs(rng, BigRat(1), 200, true);
    bad += taylor_pairs(rng, Fp(2, 1), 200, false);
    bad += taylor_pairs(rng, Fp(3, 1), 200, false);
    report_line(2, "divided-power Taylor identity, 200 polynomials per coefficient field",
                bad == 0, std::to_string(bad) + " violations");
}

// --- 3. index selection against brute force ---------------------------------

std::optional<OstrowskiResult> brute_select(const std::vector<GroupElement>& betas,
                                            const std::vector<long>& ts,
                                            const std::vector<GroupElement>& gammas) {
    const std::size_t m = betas.size(), S = gammas.size();
    std::size_t r = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (ts[i] < ts[r]) r = i;
    auto value = [&](std::size_t i, std::size_t s) {
        return group_add(betas[i], group_scale(ts[i], gammas[s]));
    };
    auto certifies = [&](std::size_t s) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                const int cmp = group_cmp(value(i, s), value(j, s));
                if (cmp == 0 || (ts[i] < ts[j]) != (cmp < 0)) return false;
            }
        return true;
    };
    for (long nu = 0; nu + 1 < static_cast<long>(S); ++nu) {
        bool all = true;
        for (std::size_t s = static_cast<std::size_t>(nu) + 1; s < S; ++s) all = all && certifies(s);
        if (all) return OstrowskiResult{nu, r};
    }
    return std::nullopt;
}

GroupElement random_group_element(std::mt19937& rng, const GroupDescriptor& d, long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    std::vector<BigRat> c;
    const int n = d.kind == GroupKind::LexZ ? d.rank : 1;
    for (int k = 0; k < n; ++k) {
        if (d.kind == GroupKind::Q) {
            std::uniform_int_distribution<long> den(1, 7);
            c.emplace_back(BigInt(dist(rng)), BigInt(den(rng)));
        } else {
            c.emplace_back(BigInt(dist(rng)));
        }
    }
    return GroupElement(d, std::move(c));
}

GroupElement random_positive_step(std::mt19937& rng, const GroupDescriptor& d) {
    for (;;) {
        auto g = random_group_element(rng, d, 0, 4);
        if (group_cmp(g, group_scale(0, g)) > 0) return g;
    }
}

void criterion_selection() {
    long bad = 0;
    for (const char* name : {"Z", "Q", "Z^2:lex"}) {
        const GroupDescriptor d = parse_group(name);
        std::mt19937 rng(7134);
        for (int inst = 0; inst < 100; ++inst) {
            std::uniform_int_distribution<int> md(1, 5), sd(2, 30);
            const int m = md(rng);
            const int S = sd(rng);
            std::vector<long> pool{1, 2, 3, 4, 5, 6, 7, 8, 9};
            std::shuffle(pool.begin(), pool.end(), rng);
            std::vector<long> ts(pool.begin(), pool.begin() + m);
            std::vector<GroupElement> betas, gammas;
            for (int i = 0; i < m; ++i) betas.push_back(random_group_element(rng, d, -20, 20));
            auto g = random_group_element(rng, d, -5, 5);
            for (int s = 0; s < S; ++s) {
                g = group_add(g, random_positive_step(rng, d));
                gammas.push_back(g);
            }
            std::optional<OstrowskiResult> fast;
            try {
                fast = ostrowski_select(betas, ts, gammas);
            } catch (const prefix_too_short&) {
            }
            const auto slow = brute_select(betas, ts, gammas);
            if (fast.has_value() != slow.has_value()) { ++bad; continue; }
            if (fast && (fast->nu != slow->nu || fast->r != slow->r)) ++bad;
        }
    }
    report_line(3, "index selection agrees with brute-force scan, 100 instances per group",
                bad == 0, std::to_string(bad) + " disagreements");
}

// --- 4/5/6. end-to-end chain facts -------------------------------------------

bool cv_is(const json& j, const char* kind, long level) {
    return j.at("kind") == kind && (std::string(kind) == "infinity" || j.at("level") == level);
}

void criterion_sqrt2_chain() {
    const auto t0 = std::chrono::steady_clock::now();
    std::string why;
    bool ok = true;
    auto need = [&](bool cond, const std::string& msg) {
        if (!cond && ok) { ok = false; why = msg; }
    };
    try {
        const auto res = run_scenario(load_scenario("sqrt2_7adic"));
        need(res.verdict == "PASS", "verdict " + res.verdict);
        const auto& c = res.report.at("checks");

        const auto& kv = c.at("kap1").at("values");
        need(kv.size() == 12, "kap1 has " + std::to_string(kv.size()) + " levels");
        for (std::size_t i = 0; ok && i < kv.size(); ++i)
            need(cv_is(kv[i], "exactly", static_cast<long>(i) + 1), "kap1 level out of line");

        const auto& ka = c.at("ka").at("items");
        need(ka.size() == 5, "expected five test polynomials");
        for (const auto& it : ka)
            need(cv_is(it.at("u_val"), "exactly", 0), "unit factor is not a unit");

        const auto& st = c.at("stages").at("items");
        need(st.size() == 11, "expected eleven stages from a twelve-element chain");
        const PAdicRing ring(BigInt(7));
        for (const auto& it : st) {
            const long content = it.at("content").get<long>();
            const auto& resj = it.at("residual");
            need(resj.at("kind") == "at_least" && resj.at("level").get<long>() >= 16 - content,
                 "stage residual below precision minus content");
            long minv = 1 << 20;
            for (const auto& coeff : it.at("h")) {
                const auto v = ring.val(BigRat(coeff.get<std::string>()));
                if (v.is_exact_finite()) minv = std::min(minv, v.level);
            }
            need(minv == 0, "stage relation is not primitive");
            need(ring.val(BigRat(it.at("u").get<std::string>())).level == content,
                 "content realizer does not match the content");
        }

        const auto& tr = c.at("transitions").at("items");
        need(tr.size() == 10, "expected ten consecutive transitions");
        for (const auto& it : tr) {
            need(it.at("val_a") == 0, "transition constant is not a unit");
            need(it.at("val_b").get<long>() ==
                     it.at("j").get<long>() - it.at("i").get<long>(),
                 "transition slope value is not the index gap");
        }

        // every triple, not only consecutive ones: rebuild the chain exactly
        const auto x = ring.hensel_lift({BigRat(-2), BigRat(0), BigRat(1)}, BigInt(3), 16);
        const auto digits = ring.digits(x);
        std::vector<BigRat> v;
        for (std::size_t k = 0; k < digits.size() && v.size() < 12; ++k)
            if (digits[k] != 0) v.push_back(ring.truncate_exact(x, static_cast<long>(k) + 1));
        const auto prefix = validate_prefix(ring, v);
        const TPoly<BigRat> h{{BigRat(-2), BigRat(0), BigRat(1)}};
        std::vector<StagePresentation<PAdicRing>> stages;
        for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
            stages.push_back(build_stage(ring, prefix, h, x, i));
        std::vector<std::vector<TransitionMap<PAdicRing>>> t(stages.size());
        for (std::size_t i = 0; i < stages.size(); ++i) {
            t[i].resize(stages.size());
            for (std::size_t j = i + 1; j < stages.size(); ++j)
                t[i][j] = transition(ring, prefix, stages[i], stages[j]);
        }
        long triples = 0;
        for (std::size_t i = 0; ok && i < stages.size(); ++i)
            for (std::size_t j = i + 1; ok && j < stages.size(); ++j)
                for (std::size_t k = j + 1; ok && k < stages.size(); ++k) {
                    need(cocycle_holds(ring, t[i][j], t[j][k], t[i][k]),
                         "cocycle fails at a non-consecutive triple");
                    ++triples;
                }
        need(triples == 165, "triple count off");
    } catch (const std::exception& e) {
        need(false, std::string("threw: ") + e.what());
    }
    const long ms = ms_since(t0);
    need(ms < 10000, "too slow");
    report_line(4, "seven-adic square-root chain: levels, units, stages, all 165 cocycle triples",
                ok, ok ? std::to_string(ms) + " ms" : why);
}

void criterion_char2_chain() {
    std::string why;
    bool ok = true;
    auto need = [&](bool cond, const std::string& msg) {
        if (!cond && ok) { ok = false; why = msg; }
    };
    try {
        const auto res = run_scenario(load_scenario("artin_schreier_p2"));
        need(res.verdict == "PASS", "verdict " + res.verdict);
        const auto& c = res.report.at("checks");
        const auto& kv = c.at("kap1").at("values");
        need(kv.size() == 5, "kap1 has " + std::to_string(kv.size()) + " levels");
        long expect = 2;
        for (const auto& cv : kv) {
            need(cv_is(cv, "exactly", expect), "kap1 level is not the doubling sequence");
            expect *= 2;
        }
        const auto& s0 = c.at("stages").at("items").at(0);
        need(s0.at("content") == 2, "first stage content");
        need(s0.at("u") == json::parse("[0,0,1]"), "first stage content realizer");
        need(s0.at("h") == json::parse("[[1],[1],[0,0,1]]"), "first stage relation");
    } catch (const std::exception& e) {
        need(false, std::string("threw: ") + e.what());
    }
    report_line(5, "characteristic-two series chain: doubling levels and first-stage relation", ok,
                why);
}

void criterion_char3_chain() {
    std::string why;
    bool ok = true;
    auto need = [&](bool cond, const std::string& msg) {
        if (!cond && ok) { ok = false; why = msg; }
    };
    try {
        const auto res = run_scenario(load_scenario("sqrt_1pt_f3t"));
        need(res.verdict == "PASS", "verdict " + res.verdict);
        const auto& c = res.report.at("checks");
        const auto& kv = c.at("kap1").at("values");
        need(kv.size() == 8, "kap1 has " + std::to_string(kv.size()) + " levels");
        long prev = -1;
        for (const auto& cv : kv) {
            need(cv.at("kind") == "exactly" && cv.at("level").get<long>() > prev,
                 "kap1 levels fail to increase");
            prev = cv.at("level").get<long>();
        }
        need(c.at("stages").at("status") == "pass", "stage certificates");
        need(c.at("transitions").at("status") == "pass", "transition certificates");
    } catch (const std::exception& e) {
        need(false, std::string("threw: ") + e.what());
    }
    report_line(6, "characteristic-three series chain: increasing levels, certified stages", ok,
                why);
}

// --- 7. negative controls -----------------------------------------------------

void criterion_negative_controls() {
    std::string why;
    bool ok = true;
    auto need = [&](bool cond, const std::string& msg) {
        if (!cond && ok) { ok = false; why = msg; }
    };
    try {
        const auto res = run_scenario(load_scenario("scenarios/tampered_prefix.json"));
        need(res.verdict == "FAIL" && res.exit_code == 1, "tampered prefix not rejected");
        const auto& v = res.report.at("checks").at("validate");
        need(v.at("status") == "fail" && v.contains("witness_indices") &&
                 v.at("witness_indices").size() == 3,
             "tampered prefix carries no witness triple");

        const PAdicRing ring(BigInt(7));
        const TPoly<BigRat> h{{BigRat(-2), BigRat(0), BigRat(1)}};
        const auto x = ring.hensel_lift(h.c, BigInt(3), 16);
        const std::vector<BigRat> v5{ring.truncate_exact(x, 1), ring.truncate_exact(x, 2),
                                     ring.truncate_exact(x, 3), ring.truncate_exact(x, 4),
                                     ring.truncate_exact(x, 5)};
        const auto prefix = validate_prefix(ring, v5);
        bool rejected = false;
        try {
            ka_decompose(ring, h, x, prefix);   // degree not below the relation's
        } catch (const precondition_error&) {
            rejected = true;
        }
        need(rejected, "over-degree test polynomial was accepted");

        const TPoly<BigRat> f{{BigRat(1), BigRat(1)}};
        AlgebraPresentation<BigRat> crooked{{"A", "B"}, {mp_from_univariate(f, 1, 2)}};
        rejected = false;
        try {
            compose_presentations(crooked, {"C"}, {mp_from_univariate(f, 2, 3)});
        } catch (const non_triangular&) {
            rejected = true;
        }
        need(rejected, "non-staircase composition was accepted");
    } catch (const std::exception& e) {
        need(false, std::string("threw: ") + e.what());
    }
    report_line(7, "negative controls: tampered prefix, over-degree test, crooked composition", ok,
                why);
}

// --- 8. pairwise composition at raised precision ------------------------------

void criterion_composition() {
    std::string why;
    bool ok = true;
    auto need = [&](bool cond, const std::string& msg) {
        if (!cond && ok) { ok = false; why = msg; }
    };
    try {
        const auto res = run_scenario(load_scenario("sqrt2_7adic"), 24);
        need(res.verdict == "PASS", "verdict " + res.verdict);
        const auto& items = res.report.at("checks").at("compose").at("items");
        need(items.size() == 10, "expected ten composed pairs");
        long worst = 1 << 20;
        for (const auto& it : items)
            for (const auto& r : it.at("residuals")) {
                need(r.at("kind") == "at_least", "composed relation visibly nonzero");
                worst = std::min(worst, r.at("level").get<long>());
            }
        need(worst >= 12, "residual floor " + std::to_string(worst) + " below 12");
        if (ok) why = "residual floor " + std::to_string(worst);
    } catch (const std::exception& e) {
        need(false, std::string("threw: ") + e.what());
    }
    report_line(8, "pairwise composed presentations vanish at the witness to level 12", ok, why);
}

// --- 9. determinism ------------------------------------------------------------

void criterion_determinism() {
    std::string why;
    bool ok = true;
    for (const auto& name : builtin_scenario_names()) {
        const auto sc = load_scenario(name);
        const auto a = run_scenario(sc).report.dump();
        const auto b = run_scenario(sc).report.dump();
        if (a != b && ok) {
            ok = false;
            why = name + " differs between runs";
        }
    }
    report_line(9, "byte-identical reports across repeated runs of every built-in", ok, why);
}

} // namespace

int main() {
    criterion_ultrametric();
    criterion_taylor();
    criterion_selection();
    criterion_sqrt2_chain();
    criterion_char2_chain();
    criterion_char3_chain();
    criterion_negative_controls();
    criterion_composition();
    criterion_determinism();
    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria pass\n");
        return 0;
    }
    std::printf("acceptance: %d of 9 criteria FAILED\n", g_failures);
    return 1;
}
