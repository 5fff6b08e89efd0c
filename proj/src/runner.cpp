#include "pclab/runner.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pclab/ci_stages.hpp"
#include "pclab/jsonio.hpp"
#include "pclab/ordered_values.hpp"
#include "pclab/pseudo_seq.hpp"

namespace pclab {
namespace {

const char* kCheckOrder[] = {"validate", "kap1", "ka", "stages", "transitions", "compose"};

bool digit_is_zero(const PAdicRing&, const BigInt& d) { return d == 0; }
template <class B>
bool digit_is_zero(const TAdicRing<B>&, const B& d) {
    return fe_is_zero(d);
}

enum class Status { Pass, Fail, Indeterminate, Skipped };

const char* status_str(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Indeterminate: return "indeterminate";
        case Status::Skipped: return "skipped";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Shared state for one valued run.  Prefix, stages and transitions are built
// lazily so that a check subset only pays for what it certifies.
// ---------------------------------------------------------------------------

template <class R>
struct VCtx {
    const R& ring;
    long precision;

    TPoly<typename R::Exact> h;
    std::vector<typename R::Exact> elems;
    std::string block_reason;   // nonempty: prefix not materializable at this precision
    std::optional<typename R::Approx> xhat;
    std::optional<std::vector<std::size_t>> stage_indices;
    std::vector<TPoly<typename R::Exact>> gs;
    std::vector<std::string> requested;
    std::string prefix_source = "literal";
    long prefix_length = 0;

    std::optional<PseudoPrefix<R>> prefix;
    std::vector<StagePresentation<R>> stages;
    std::vector<TransitionMap<R>> transitions;
    bool stages_built = false;
    bool transitions_built = false;

    VCtx(const R& r, long prec) : ring(r), precision(prec) {}
};

template <class R>
TPoly<typename R::Exact> parse_ring_poly(const R& ring, const nlohmann::json& j, const char* what) {
    auto f = poly_from_json(ring, j);
    for (const auto& c : f.c)
        if (!ring.in_ring(c))
            throw config_error(std::string(what) + ": coefficient outside the valuation ring");
    return f;
}

template <class R>
void setup_from_scenario(VCtx<R>& c, const nlohmann::json& raw) {
    c.h = parse_ring_poly(c.ring, raw.at("h"), "h");
    if (tp_deg(c.h) < 2) throw config_error("h: degree must be at least 2 after trimming");

    if (raw.contains("checks")) {
        std::vector<std::string> wanted;
        for (const auto& el : raw.at("checks")) wanted.push_back(el.get<std::string>());
        for (const auto& w : wanted) {
            bool known = false;
            for (const char* name : kCheckOrder) known = known || w == name;
            if (!known) throw config_error("checks: unknown check '" + w + "'");
        }
        for (const char* name : kCheckOrder)
            if (std::find(wanted.begin(), wanted.end(), name) != wanted.end())
                c.requested.push_back(name);
    } else {
        for (const char* name : kCheckOrder) c.requested.push_back(name);
    }

    if (raw.contains("g_list")) {
        std::size_t k = 0;
        for (const auto& gj : raw.at("g_list")) {
            auto g = parse_ring_poly(c.ring, gj, "g_list");
            if (tp_is_zero(g)) throw config_error("g_list[" + std::to_string(k) + "]: zero polynomial");
            if (tp_deg(g) >= tp_deg(c.h))
                throw config_error("g_list[" + std::to_string(k) + "]: degree must stay below deg h");
            c.gs.push_back(std::move(g));
            ++k;
        }
    }

    if (raw.contains("indices")) {
        std::vector<std::size_t> idx;
        for (const auto& el : raw.at("indices")) idx.push_back(el.get<std::size_t>());
        c.stage_indices = std::move(idx);
    }

    const nlohmann::json& p = raw.at("prefix");
    if (p.contains("literal")) {
        c.prefix_source = "literal";
        for (const auto& el : p.at("literal")) c.elems.push_back(scalar_from_json(c.ring, el));
        c.prefix_length = static_cast<long>(c.elems.size());
        if (raw.contains("x")) c.xhat = approx_from_json(c.ring, raw.at("x"));
        return;
    }

    c.prefix_source = "hensel";
    const nlohmann::json& hs = p.at("hensel");
    auto fpoly = parse_ring_poly(c.ring, hs.at("poly"), "prefix.hensel.poly");
    if (tp_deg(fpoly) < 1) throw config_error("prefix.hensel.poly: must be non-constant");
    const auto root0 = base_from_json(c.ring, hs.at("root0"));
    try {
        c.xhat = c.ring.hensel_lift(fpoly.c, root0, c.precision);
    } catch (const not_simple_root& e) {
        throw config_error(std::string("prefix.hensel: ") + e.what());
    } catch (const precondition_error& e) {
        throw config_error(std::string("prefix.hensel: ") + e.what());
    }

    c.prefix_length = p.at("length").get<long>();
    const auto dg = c.ring.digits(*c.xhat);
    std::vector<long> cuts;   // truncate after each nonzero digit
    for (long k = 0; k < c.xhat->prec; ++k)
        if (!digit_is_zero(c.ring, dg[static_cast<std::size_t>(k)])) cuts.push_back(k + 1);
    if (static_cast<long>(cuts.size()) < c.prefix_length) {
        c.block_reason = "prefix: the lifted root exposes only " + std::to_string(cuts.size()) +
                         " distinct truncations at precision " + std::to_string(c.precision) +
                         " (need " + std::to_string(c.prefix_length) + ")";
        return;
    }
    for (long k = 0; k < c.prefix_length; ++k)
        c.elems.push_back(c.ring.truncate_exact(*c.xhat, cuts[static_cast<std::size_t>(k)]));
}

template <class R>
void ensure_prefix(VCtx<R>& c) {
    if (c.prefix) return;
    if (!c.block_reason.empty()) throw insufficient_precision(c.block_reason);
    c.prefix = validate_prefix(c.ring, c.elems);
}

template <class R>
std::vector<std::size_t> resolve_indices(const VCtx<R>& c) {
    const std::size_t N = c.prefix->size();
    if (c.stage_indices) {
        for (const auto i : *c.stage_indices)
            if (i + 1 >= N)
                throw config_error("indices: stage " + std::to_string(i) + " needs prefix element " +
                                   std::to_string(i + 1));
        return *c.stage_indices;
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i + 1 < N; ++i) idx.push_back(i);
    return idx;
}

template <class R>
void ensure_stages(VCtx<R>& c) {
    ensure_prefix(c);
    if (c.stages_built) return;
    if (!c.xhat) throw config_error("stage checks need a candidate limit ('x' or a lifted root)");
    for (const auto i : resolve_indices(c))
        c.stages.push_back(build_stage(c.ring, *c.prefix, c.h, *c.xhat, i));
    c.stages_built = true;
}

template <class R>
void ensure_transitions(VCtx<R>& c) {
    ensure_stages(c);
    if (c.transitions_built) return;
    for (std::size_t k = 0; k + 1 < c.stages.size(); ++k)
        c.transitions.push_back(transition(c.ring, *c.prefix, c.stages[k], c.stages[k + 1]));
    c.transitions_built = true;
}

// ---------------------------------------------------------------------------
// The individual checks.  Each writes its certificate payload incrementally,
// so a throw still leaves the evidence gathered so far in the report.
// ---------------------------------------------------------------------------

inline nlohmann::json cv_list(const std::vector<CertifiedValue>& vs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back(cv_to_json(v));
    return arr;
}

template <class R>
void check_validate(VCtx<R>& c, nlohmann::json& payload) {
    ensure_prefix(c);
    nlohmann::json pj = nlohmann::json::array();
    for (const auto& e : c.elems) pj.push_back(scalar_to_json(c.ring, e));
    payload["prefix"] = std::move(pj);
    payload["gammas"] = c.prefix->gammas;
    if (!c.xhat) return;
    payload["x"] = approx_to_json(c.ring, *c.xhat);
    const auto lim = is_pseudo_limit_ap(c.ring, *c.xhat, *c.prefix);
    payload["limit_values"] = cv_list(lim.vals);
    if (!lim.ok)
        throw value_certificate_failure("validate: candidate limit does not reproduce the breadths");
}

template <class R>
void check_kap1(VCtx<R>& c, nlohmann::json& payload) {
    ensure_prefix(c);
    const Classification cls = classify(c.ring, c.h, *c.prefix);
    payload["values"] = cv_list(cls.vals);
    if (cls.kind == Classification::Kind::EventuallyConstant)
        throw lemma_violation_candidate("kap1: val(h(v_i)) stabilizes at " + cv_str(cls.value) +
                                        " from index " + std::to_string(cls.from));
    if (cls.kind == Classification::Kind::Undetermined)
        throw insufficient_precision("kap1: evidence tail too short to classify val(h(v_i))");
    payload["from"] = static_cast<long>(cls.from);
}

template <class R>
void check_ka(VCtx<R>& c, nlohmann::json& payload) {
    ensure_prefix(c);
    if (!c.xhat) throw config_error("ka check needs a candidate limit");
    if (c.gs.empty()) throw config_error("ka check needs a non-empty g_list");
    nlohmann::json items = nlohmann::json::array();
    for (std::size_t k = 0; k < c.gs.size(); ++k) {
        const std::string tag = "ka: g[" + std::to_string(k) + "]";
        payload["items"] = items;
        try {
            const auto r = ka_decompose(c.ring, c.gs[k], *c.xhat, *c.prefix);
            if (!verify_decomposition(c.ring, c.gs[k], *c.xhat, r.d, r.u))
                throw value_certificate_failure("recombination d*u does not match g(x)");
            nlohmann::json it;
            it["g"] = poly_to_json(c.ring, c.gs[k]);
            it["i_used"] = static_cast<long>(r.i_used);
            it["d"] = scalar_to_json(c.ring, r.d);
            it["u"] = approx_to_json(c.ring, r.u);
            it["terms"] = cv_list(r.terms);
            it["u_val"] = cv_to_json(r.u_val);
            it["u_minus_one"] = cv_to_json(r.u_minus_one);
            items.push_back(std::move(it));
        } catch (const insufficient_precision& e) {
            throw insufficient_precision(tag + ": " + e.what());
        } catch (const check_failure& e) {
            throw value_certificate_failure(tag + ": " + e.what());
        } catch (const precondition_error& e) {
            throw value_certificate_failure(tag + ": " + e.what());
        }
    }
    payload["items"] = std::move(items);
}

template <class R>
void check_stages(VCtx<R>& c, nlohmann::json& payload) {
    ensure_stages(c);
    nlohmann::json items = nlohmann::json::array();
    for (const auto& st : c.stages) {
        nlohmann::json it;
        it["i"] = static_cast<long>(st.i);
        it["g"] = poly_to_json(c.ring, st.g);
        it["content"] = st.content;
        it["u"] = scalar_to_json(c.ring, st.u);
        it["h"] = poly_to_json(c.ring, st.h);
        it["x"] = approx_to_json(c.ring, st.x);
        it["residual"] = cv_to_json(st.residual);
        items.push_back(std::move(it));
    }
    payload["items"] = std::move(items);
}

template <class R>
void check_transitions(VCtx<R>& c, nlohmann::json& payload) {
    ensure_transitions(c);
    nlohmann::json items = nlohmann::json::array();
    for (const auto& t : c.transitions) {
        nlohmann::json it;
        it["i"] = static_cast<long>(t.i);
        it["j"] = static_cast<long>(t.j);
        it["a"] = scalar_to_json(c.ring, t.a);
        it["b"] = scalar_to_json(c.ring, t.b);
        it["c"] = scalar_to_json(c.ring, t.c);
        it["val_a"] = 0;
        it["val_b"] = t.val_b;
        items.push_back(std::move(it));
    }
    payload["items"] = std::move(items);
    std::size_t triples = 0;
    payload["cocycle_triples"] = triples;
    for (std::size_t k = 0; k + 2 < c.stages.size(); ++k) {
        const auto direct = transition(c.ring, *c.prefix, c.stages[k], c.stages[k + 2]);
        if (!cocycle_holds(c.ring, c.transitions[k], c.transitions[k + 1], direct))
            throw value_certificate_failure("transitions: cocycle identity fails at triple " +
                                            std::to_string(k));
        payload["cocycle_triples"] = ++triples;
    }
}

template <class R>
void check_compose(VCtx<R>& c, nlohmann::json& payload) {
    ensure_stages(c);
    if (c.stages.size() < 2) throw config_error("compose check needs at least two stages");
    nlohmann::json items = nlohmann::json::array();
    for (std::size_t k = 0; k + 1 < c.stages.size(); ++k) {
        payload["items"] = items;
        const auto& si = c.stages[k];
        const auto& sj = c.stages[k + 1];
        const std::string xi = "X" + std::to_string(si.i);
        const std::string xj = "X" + std::to_string(sj.i);
        AlgebraPresentation<typename R::Exact> outer{{xi}, {mp_from_univariate(si.h, 0, 1)}};
        validate_triangular(outer);
        const auto composed =
            compose_presentations(outer, {xj}, {mp_from_univariate(sj.h, 1, 2)});
        const std::vector<typename R::Approx> pts{si.x, sj.x};
        nlohmann::json residuals = nlohmann::json::array();
        for (const auto& rel : composed.relations) {
            const CertifiedValue cv = c.ring.val(mp_eval(c.ring, rel, pts, c.precision));
            if (cv.is_exact_finite())
                throw value_certificate_failure("compose: relation visibly fails between stages " +
                                                std::to_string(si.i) + " and " + std::to_string(sj.i));
            residuals.push_back(cv_to_json(cv));
        }
        nlohmann::json it;
        it["i"] = static_cast<long>(si.i);
        it["j"] = static_cast<long>(sj.i);
        it["vars"] = nlohmann::json::array({xi, xj});
        it["residuals"] = std::move(residuals);
        items.push_back(std::move(it));
    }
    payload["items"] = std::move(items);
}

// ---------------------------------------------------------------------------
// Driving one check with the uniform error-to-status mapping.
// ---------------------------------------------------------------------------

template <class Fn>
std::pair<Status, nlohmann::json> run_check(Fn&& fn) {
    nlohmann::json payload = nlohmann::json::object();
    Status st = Status::Pass;
    try {
        fn(payload);
    } catch (const not_pseudo_convergent& e) {
        st = Status::Fail;
        payload["witness"] = e.what();
        payload["witness_indices"] = nlohmann::json::array(
            {static_cast<long>(e.i), static_cast<long>(e.j), static_cast<long>(e.k)});
    } catch (const insufficient_precision& e) {
        st = Status::Indeterminate;
        payload["note"] = e.what();
    } catch (const check_failure& e) {
        st = Status::Fail;
        payload["witness"] = e.what();
    }
    payload["status"] = status_str(st);
    return {st, std::move(payload)};
}

template <class R>
std::pair<Status, nlohmann::json> run_named_check(VCtx<R>& c, const std::string& name) {
    if (name == "validate") return run_check([&](nlohmann::json& p) { check_validate(c, p); });
    if (name == "kap1") return run_check([&](nlohmann::json& p) { check_kap1(c, p); });
    if (name == "ka") return run_check([&](nlohmann::json& p) { check_ka(c, p); });
    if (name == "stages") return run_check([&](nlohmann::json& p) { check_stages(c, p); });
    if (name == "transitions") return run_check([&](nlohmann::json& p) { check_transitions(c, p); });
    if (name == "compose") return run_check([&](nlohmann::json& p) { check_compose(c, p); });
    throw config_error("unknown check: " + name);
}

template <class R>
std::pair<nlohmann::json, std::string> run_checks(VCtx<R>& c, std::string& summary_lines) {
    nlohmann::json checks = nlohmann::json::object();
    bool failed = false, indet = false;
    for (const auto& name : c.requested) {
        if (failed || indet) {
            checks[name] = nlohmann::json{{"status", "skipped"}};
            summary_lines += "  " + name + ": skipped\n";
            continue;
        }
        auto [st, entry] = run_named_check(c, name);
        std::string line = "  " + name + ": " + status_str(st);
        if (st == Status::Fail && entry.contains("witness"))
            line += " (" + entry["witness"].template get<std::string>() + ")";
        if (st == Status::Indeterminate && entry.contains("note"))
            line += " (" + entry["note"].template get<std::string>() + ")";
        summary_lines += line + "\n";
        checks[name] = std::move(entry);
        if (st == Status::Fail) failed = true;
        if (st == Status::Indeterminate) indet = true;
    }
    const std::string verdict = failed ? "FAIL" : indet ? "INDETERMINATE" : "PASS";
    return {std::move(checks), verdict};
}

int verdict_exit(const std::string& v) { return v == "PASS" ? 0 : v == "FAIL" ? 1 : 2; }

template <class R>
RunResult run_valued(const R& ring, const Scenario& sc, long precision) {
    VCtx<R> c(ring, precision);
    setup_from_scenario(c, sc.raw);

    std::string lines;
    auto [checks, verdict] = run_checks(c, lines);

    std::ostringstream sum;
    sum << "scenario " << sc.name << " (valued, ring " << ring.name() << ", precision " << precision
        << ")\n"
        << lines << "verdict: " << verdict << "\n";

    nlohmann::json rep;
    rep["format"] = "pclab-report/1";
    rep["kind"] = "valued";
    rep["name"] = sc.name;
    rep["ring"] = ring.name();
    rep["x_precision"] = precision;
    rep["prefix_source"] = c.prefix_source;
    rep["prefix_length"] = c.prefix_length;
    rep["h"] = poly_to_json(ring, c.h);
    rep["checks"] = std::move(checks);
    rep["verdict"] = verdict;

    RunResult out;
    out.exit_code = verdict_exit(verdict);
    out.verdict = verdict;
    out.report = std::move(rep);
    out.summary = sum.str();
    return out;
}

// ---------------------------------------------------------------------------
// Index-selection runs: exact group arithmetic only.
// ---------------------------------------------------------------------------

struct OstrowskiData {
    GroupDescriptor gd;
    std::vector<GroupElement> betas;
    std::vector<GroupElement> gammas;
    std::vector<long> ts;
};

OstrowskiData parse_ostrowski_data(const nlohmann::json& raw) {
    OstrowskiData d;
    d.gd = parse_group(raw.at("group").get<std::string>());
    for (const auto& b : raw.at("betas")) d.betas.push_back(gel_from_json(d.gd, b));
    for (const auto& g : raw.at("gammas")) d.gammas.push_back(gel_from_json(d.gd, g));
    for (const auto& t : raw.at("ts")) d.ts.push_back(t.get<long>());
    for (std::size_t i = 0; i < d.ts.size(); ++i) {
        if (d.ts[i] < 1) throw config_error("ts: multipliers must be positive");
        for (std::size_t j = i + 1; j < d.ts.size(); ++j)
            if (d.ts[i] == d.ts[j]) throw config_error("ts: multipliers must be pairwise distinct");
    }
    if (d.betas.empty() || d.betas.size() != d.ts.size())
        throw config_error("betas and ts must be non-empty and of equal length");
    for (std::size_t s = 0; s + 1 < d.gammas.size(); ++s)
        if (group_cmp(d.gammas[s], d.gammas[s + 1]) >= 0)
            throw config_error("gammas: must be strictly increasing");
    return d;
}

GroupElement family_value(const OstrowskiData& d, std::size_t i, std::size_t s) {
    return group_add(d.betas[i], group_scale(d.ts[i], d.gammas[s]));
}

// Distinctness plus the multiplier ordering at one index; argmin must be r.
bool row_certifies(const OstrowskiData& d, std::size_t s, std::size_t r) {
    const std::size_t m = d.betas.size();
    std::vector<GroupElement> row;
    row.reserve(m);
    for (std::size_t i = 0; i < m; ++i) row.push_back(family_value(d, i, s));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const int cmp = group_cmp(row[i], row[j]);
            if (cmp == 0) return false;
            if ((d.ts[i] < d.ts[j]) != (cmp < 0)) return false;
        }
    for (std::size_t i = 0; i < m; ++i)
        if (group_cmp(row[i], row[r]) < 0) return false;
    return true;
}

RunResult run_ostrowski(const Scenario& sc) {
    const OstrowskiData d = parse_ostrowski_data(sc.raw);
    const std::size_t S = d.gammas.size();

    nlohmann::json result;
    result["betas"] = [&] {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& b : d.betas) arr.push_back(gel_to_json(b));
        return arr;
    }();
    result["ts"] = d.ts;
    result["gammas"] = [&] {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& g : d.gammas) arr.push_back(gel_to_json(g));
        return arr;
    }();
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t s = 0; s < S; ++s) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t i = 0; i < d.betas.size(); ++i)
            row.push_back(gel_to_json(family_value(d, i, s)));
        values.push_back(std::move(row));
    }
    result["values"] = std::move(values);

    std::string verdict;
    std::string detail;
    try {
        const OstrowskiResult r = ostrowski_select(d.betas, d.ts, d.gammas);
        for (std::size_t s = static_cast<std::size_t>(r.nu) + 1; s < S; ++s)
            if (!row_certifies(d, s, r.r))
                throw value_certificate_failure("selection does not certify index " +
                                                std::to_string(s));
        result["nu"] = r.nu;
        result["r"] = static_cast<long>(r.r);
        verdict = "PASS";
        detail = "nu = " + std::to_string(r.nu) + ", r = " + std::to_string(r.r);
    } catch (const prefix_too_short& e) {
        result["note"] = e.what();
        verdict = "INDETERMINATE";
        detail = e.what();
    } catch (const check_failure& e) {
        result["witness"] = e.what();
        verdict = "FAIL";
        detail = e.what();
    }

    std::ostringstream sum;
    sum << "scenario " << sc.name << " (ostrowski, group " << format_group(d.gd) << ")\n"
        << "  select: " << (verdict == "PASS" ? "pass" : verdict == "FAIL" ? "fail" : "indeterminate")
        << " (" << detail << ")\n"
        << "verdict: " << verdict << "\n";

    nlohmann::json rep;
    rep["format"] = "pclab-report/1";
    rep["kind"] = "ostrowski";
    rep["name"] = sc.name;
    rep["group"] = format_group(d.gd);
    rep["result"] = std::move(result);
    rep["verdict"] = verdict;

    RunResult out;
    out.exit_code = verdict_exit(verdict);
    out.verdict = verdict;
    out.report = std::move(rep);
    out.summary = sum.str();
    return out;
}

long resolve_precision(const Scenario& sc, std::optional<long> override_prec) {
    long prec = 0;
    if (override_prec) {
        prec = *override_prec;
    } else if (const char* env = std::getenv("PCLAB_PRECISION"); env && *env) {
        char* end = nullptr;
        prec = std::strtol(env, &end, 10);
        if (end == env || *end != '\0')
            throw config_error("PCLAB_PRECISION must be a positive integer");
    } else {
        prec = sc.raw.at("x_precision").get<long>();
    }
    if (prec < 1 || prec > (1L << 20)) throw config_error("precision out of range: " + std::to_string(prec));
    return prec;
}

// ---------------------------------------------------------------------------
// Verification: rebuild every section the report claims as "pass" from the
// report's own data and require byte-for-byte agreement.
// ---------------------------------------------------------------------------

struct VerifyLog {
    bool ok = true;
    std::ostringstream log;

    void accept(const std::string& line) { log << "ok: " << line << "\n"; }
    void mismatch(const std::string& line) {
        ok = false;
        log << "MISMATCH: " << line << "\n";
    }
};

void verify_verdict_shape(const nlohmann::json& checks, const std::string& verdict, VerifyLog& vl) {
    bool failed = false, indet = false, terminated = false;
    for (const char* name : kCheckOrder) {
        if (!checks.contains(name)) continue;
        const std::string st = checks.at(name).at("status").get<std::string>();
        if (terminated && st != "skipped") {
            vl.mismatch("section '" + std::string(name) + "' runs after a terminal status");
            return;
        }
        if (!terminated && st == "skipped") {
            vl.mismatch("section '" + std::string(name) + "' skipped without a terminal status");
            return;
        }
        if (st == "fail") failed = terminated = true;
        else if (st == "indeterminate") indet = terminated = true;
        else if (st != "pass" && st != "skipped") {
            vl.mismatch("section '" + std::string(name) + "' has unknown status '" + st + "'");
            return;
        }
    }
    const std::string expect = failed ? "FAIL" : indet ? "INDETERMINATE" : "PASS";
    if (verdict != expect)
        vl.mismatch("verdict '" + verdict + "' does not follow from section statuses ('" + expect + "')");
    else
        vl.accept("verdict follows from section statuses");
}

template <class R>
void verify_valued(const R& ring, const nlohmann::json& rep, VerifyLog& vl) {
    if (rep.at("ring").get<std::string>() != ring.name())
        throw config_error("ring descriptor does not round-trip");
    const nlohmann::json& checks = rep.at("checks");
    for (const auto& [key, sec] : checks.items()) {
        bool known = false;
        for (const char* name : kCheckOrder) known = known || key == name;
        if (!known) {
            vl.mismatch("unknown check section '" + key + "'");
            return;
        }
        if (!sec.is_object() || !sec.contains("status")) {
            vl.mismatch("check section '" + key + "' has no status");
            return;
        }
    }

    VCtx<R> c(ring, rep.at("x_precision").get<long>());
    c.h = poly_from_json(ring, rep.at("h"));
    if (poly_to_json(ring, c.h) != rep.at("h")) {
        vl.mismatch("relation h is not in canonical form");
        return;
    }
    if (tp_deg(c.h) < 2) {
        vl.mismatch("relation h has degree below 2");
        return;
    }

    bool have_prefix = false;
    if (checks.contains("validate") && checks.at("validate").contains("prefix")) {
        for (const auto& el : checks.at("validate").at("prefix"))
            c.elems.push_back(scalar_from_json(ring, el));
        have_prefix = true;
        if (rep.at("prefix_length").get<long>() != static_cast<long>(c.elems.size())) {
            vl.mismatch("prefix_length does not match the recorded prefix");
            return;
        }
        if (checks.at("validate").contains("x"))
            c.xhat = approx_from_json(ring, checks.at("validate").at("x"));
    }
    if (checks.contains("ka") && checks.at("ka").contains("items"))
        for (const auto& it : checks.at("ka").at("items"))
            c.gs.push_back(poly_from_json(ring, it.at("g")));
    std::vector<std::size_t> idx;
    if (checks.contains("stages") && checks.at("stages").contains("items")) {
        for (const auto& it : checks.at("stages").at("items"))
            idx.push_back(it.at("i").get<std::size_t>());
    } else if (checks.contains("transitions") && checks.at("transitions").contains("items")) {
        for (const auto& it : checks.at("transitions").at("items")) {
            idx.push_back(it.at("i").get<std::size_t>());
            idx.push_back(it.at("j").get<std::size_t>());
        }
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    }
    if (!idx.empty()) c.stage_indices = std::move(idx);

    for (const char* name : kCheckOrder) {
        if (!checks.contains(name)) continue;
        const nlohmann::json& sec = checks.at(name);
        const std::string st = sec.at("status").get<std::string>();
        if (st != "pass") {
            vl.accept("section '" + std::string(name) + "' (" + st + ") accepted without recomputation");
            continue;
        }
        if (!have_prefix) {
            vl.mismatch("section '" + std::string(name) + "' passes but no prefix is recorded");
            continue;
        }
        auto [fresh_st, fresh] = run_named_check(c, name);
        (void)fresh_st;
        if (fresh == sec)
            vl.accept("section '" + std::string(name) + "' reproduces exactly");
        else
            vl.mismatch("section '" + std::string(name) + "' does not reproduce from the report data");
    }
    verify_verdict_shape(checks, rep.at("verdict").get<std::string>(), vl);
}

void verify_ostrowski(const nlohmann::json& rep, VerifyLog& vl) {
    const nlohmann::json& result = rep.at("result");
    nlohmann::json raw;
    raw["group"] = rep.at("group");
    raw["betas"] = result.at("betas");
    raw["ts"] = result.at("ts");
    raw["gammas"] = result.at("gammas");
    const OstrowskiData d = parse_ostrowski_data(raw);
    if (format_group(d.gd) != rep.at("group").get<std::string>()) {
        vl.mismatch("group descriptor does not round-trip");
        return;
    }
    const std::size_t S = d.gammas.size();

    nlohmann::json values = nlohmann::json::array();
    for (std::size_t s = 0; s < S; ++s) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t i = 0; i < d.betas.size(); ++i)
            row.push_back(gel_to_json(family_value(d, i, s)));
        values.push_back(std::move(row));
    }
    if (values != result.at("values")) {
        vl.mismatch("family value table does not reproduce");
        return;
    }
    vl.accept("family value table reproduces");

    // Independent selection: scan candidate nu values directly.
    std::size_t r = 0;
    for (std::size_t i = 1; i < d.ts.size(); ++i)
        if (d.ts[i] < d.ts[r]) r = i;
    long brute_nu = -1;
    for (long nu = 0; nu + 1 < static_cast<long>(S); ++nu) {
        bool all = true;
        for (std::size_t s = static_cast<std::size_t>(nu) + 1; s < S; ++s)
            all = all && row_certifies(d, s, r);
        if (all) {
            brute_nu = nu;
            break;
        }
    }

    const std::string verdict = rep.at("verdict").get<std::string>();
    if (verdict == "PASS") {
        if (!result.contains("nu") || !result.contains("r")) {
            vl.mismatch("passing selection without nu/r");
            return;
        }
        const long nu = result.at("nu").get<long>();
        const long rr = result.at("r").get<long>();
        try {
            const OstrowskiResult sel = ostrowski_select(d.betas, d.ts, d.gammas);
            if (sel.nu != nu || static_cast<long>(sel.r) != rr) {
                vl.mismatch("selection does not reproduce (nu, r)");
                return;
            }
        } catch (const std::exception& e) {
            vl.mismatch(std::string("selection does not reproduce: ") + e.what());
            return;
        }
        if (brute_nu < 0 || brute_nu != nu || static_cast<long>(r) != rr) {
            vl.mismatch("direct scan disagrees with the reported (nu, r)");
            return;
        }
        vl.accept("selection reproduces and the direct scan agrees");
    } else if (verdict == "INDETERMINATE") {
        bool threw = false;
        try {
            ostrowski_select(d.betas, d.ts, d.gammas);
        } catch (const prefix_too_short&) {
            threw = true;
        }
        if (!threw) {
            vl.mismatch("report is indeterminate but the selection settles");
            return;
        }
        vl.accept("indeterminate status reproduces");
    } else {
        vl.mismatch("unexpected verdict for a selection report: " + verdict);
    }
}

} // namespace

RunResult run_scenario(const Scenario& sc, std::optional<long> precision_override) {
    if (sc.kind == Scenario::Kind::Ostrowski) return run_ostrowski(sc);
    const long precision = resolve_precision(sc, precision_override);
    const RingDescriptor rd = parse_ring(sc.raw.at("ring").get<std::string>());
    switch (rd.family) {
        case RingDescriptor::Family::PAdic: {
            PAdicRing ring(rd.p);
            return run_valued(ring, sc, precision);
        }
        case RingDescriptor::Family::TAdicFp: {
            TAdicRing<Fp> ring(Fp(static_cast<std::int64_t>(rd.p), 1));
            return run_valued(ring, sc, precision);
        }
        case RingDescriptor::Family::TAdicQ: {
            TAdicRing<BigRat> ring(BigRat(1));
            return run_valued(ring, sc, precision);
        }
    }
    throw config_error("unhandled ring family");
}

VerifyResult verify_report(const nlohmann::json& rep) {
    VerifyLog vl;
    try {
        if (!rep.is_object() || rep.value("format", std::string()) != "pclab-report/1")
            throw config_error("unrecognized report format");
        const std::string kind = rep.at("kind").get<std::string>();
        if (kind == "ostrowski") {
            verify_ostrowski(rep, vl);
        } else if (kind == "valued") {
            const RingDescriptor rd = parse_ring(rep.at("ring").get<std::string>());
            switch (rd.family) {
                case RingDescriptor::Family::PAdic: {
                    PAdicRing ring(rd.p);
                    verify_valued(ring, rep, vl);
                    break;
                }
                case RingDescriptor::Family::TAdicFp: {
                    TAdicRing<Fp> ring(Fp(static_cast<std::int64_t>(rd.p), 1));
                    verify_valued(ring, rep, vl);
                    break;
                }
                case RingDescriptor::Family::TAdicQ: {
                    TAdicRing<BigRat> ring(BigRat(1));
                    verify_valued(ring, rep, vl);
                    break;
                }
            }
        } else {
            throw config_error("unknown report kind: " + kind);
        }
    } catch (const std::exception& e) {
        vl.mismatch(std::string("verification aborted: ") + e.what());
    }
    VerifyResult out;
    out.ok = vl.ok;
    out.log = vl.log.str();
    return out;
}

} // namespace pclab
