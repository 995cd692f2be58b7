#pragma once

#include "records.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zerosum {

enum class TheoremId {
    sets,
    half,
    two_d,
    mainbound,
    lbound2,
    pcase,
    gao_lower,
    gao_equality,
    subadditive,
    inductivegeneral,
    generalbound,
    nine_kn,
    three_kn,
    conjecture,
};

inline const std::vector<TheoremId> &all_theorems()
{
    static const std::vector<TheoremId> ids{
        TheoremId::sets,        TheoremId::half,         TheoremId::two_d,          TheoremId::mainbound,
        TheoremId::lbound2,     TheoremId::pcase,        TheoremId::gao_lower,      TheoremId::gao_equality,
        TheoremId::subadditive, TheoremId::inductivegeneral, TheoremId::generalbound, TheoremId::nine_kn,
        TheoremId::three_kn,    TheoremId::conjecture};
    return ids;
}

inline std::string to_string(TheoremId id)
{
    switch (id) {
    case TheoremId::sets: return "sets";
    case TheoremId::half: return "half";
    case TheoremId::two_d: return "2d";
    case TheoremId::mainbound: return "mainbound";
    case TheoremId::lbound2: return "lbound2";
    case TheoremId::pcase: return "pcase";
    case TheoremId::gao_lower: return "gao_lower";
    case TheoremId::gao_equality: return "gao_equality";
    case TheoremId::subadditive: return "subadditive";
    case TheoremId::inductivegeneral: return "inductivegeneral";
    case TheoremId::generalbound: return "generalbound";
    case TheoremId::nine_kn: return "nine_kn";
    case TheoremId::three_kn: return "three_kn";
    case TheoremId::conjecture: return "conjecture";
    }
    return "?";
}

inline TheoremId theorem_from_string(const std::string &s)
{
    for (auto id : all_theorems())
        if (to_string(id) == s)
            return id;
    throw ParseError("unknown theorem id '" + s + "'");
}

enum class BoundKind { upper, lower, equality };

inline std::string to_string(BoundKind k)
{
    switch (k) {
    case BoundKind::upper: return "upper";
    case BoundKind::lower: return "lower";
    case BoundKind::equality: return "equality";
    }
    return "?";
}

struct Hypothesis {
    std::string condition;
    bool holds = false;
    std::string instantiation;
    bool required = true; ///< false for lines of an optional stronger branch
};

struct BoundResult {
    TheoremId theorem = TheoremId::sets;
    bool applicable = false;
    std::vector<Hypothesis> hypotheses;
    std::optional<std::int64_t> value;
    BoundKind kind = BoundKind::upper;
    std::string target;                        ///< e.g. "s_{9}", "s_{Kq}", "ell"
    std::optional<std::int64_t> target_length; ///< k*exp(G) when the bound is about one length
    bool conjectural = false;
    bool strict = false; ///< gao_lower: the inequality is strict (kn < D(G))
    std::vector<std::string> trace;

    const Hypothesis *first_failure() const
    {
        for (const auto &h : hypotheses)
            if (h.required && !h.holds)
                return &h;
        return nullptr;
    }

    nlohmann::json to_json() const
    {
        nlohmann::json hyps = nlohmann::json::array();
        for (const auto &h : hypotheses)
            hyps.push_back({{"condition", h.condition},
                            {"holds", h.holds},
                            {"instantiation", h.instantiation},
                            {"required", h.required}});
        return {{"theorem", to_string(theorem)},
                {"applicable", applicable},
                {"hypotheses", hyps},
                {"value", value ? nlohmann::json(*value) : nlohmann::json(nullptr)},
                {"kind", to_string(kind)},
                {"target", target},
                {"target_length", target_length ? nlohmann::json(*target_length) : nlohmann::json(nullptr)},
                {"conjectural", conjectural},
                {"strict", strict},
                {"trace", trace}};
    }
};

/// Free variables of the statements. Unused fields are ignored.
struct BoundParams {
    std::optional<std::int64_t> k;
    std::vector<std::int64_t> K;
    std::optional<std::int64_t> a, b;
    std::optional<std::int64_t> s_a, s_b;     ///< subadditive: known s_a(G), s_b(G)
    std::optional<std::int64_t> q;            ///< inductivegeneral: prime power modulus
    std::optional<std::int64_t> s_an_qG;      ///< inductivegeneral: known s_{an}(qG)
    std::vector<std::int64_t> factorization;  ///< a_1, ..., a_r
    std::optional<std::int64_t> davenport;    ///< D(G) when G is not a p-group
};

namespace detail {

class HypothesisBuilder {
public:
    explicit HypothesisBuilder(BoundResult &r) : r_(r) {}

    bool ge(const std::string &cond, std::int64_t lhs, std::int64_t rhs)
    {
        return add(cond, lhs >= rhs, std::to_string(lhs) + " >= " + std::to_string(rhs));
    }

    bool le(const std::string &cond, std::int64_t lhs, std::int64_t rhs)
    {
        return add(cond, lhs <= rhs, std::to_string(lhs) + " <= " + std::to_string(rhs));
    }

    bool add(const std::string &cond, bool holds, const std::string &inst)
    {
        r_.hypotheses.push_back({cond, holds, inst});
        return holds;
    }

    bool all() const
    {
        return std::all_of(r_.hypotheses.begin(), r_.hypotheses.end(),
                           [](const auto &h) { return !h.required || h.holds; });
    }

private:
    BoundResult &r_;
};

inline std::int64_t need(const std::optional<std::int64_t> &v, const char *name, TheoremId id)
{
    if (!v)
        throw DomainError(to_string(id) + ": missing parameter " + name);
    return *v;
}

inline std::string sub(std::int64_t len) { return "s_{" + std::to_string(len) + "}"; }

inline std::string set_str(const std::vector<std::int64_t> &v)
{
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

/// Primary component G_p of G for each prime dividing |G|, increasing p.
struct PrimaryPart {
    std::int64_t p;
    AbelianGroup group;
};

inline std::vector<PrimaryPart> primary_decomposition(const AbelianGroup &G)
{
    std::map<std::int64_t, std::vector<std::int64_t>> parts;
    for (auto n : G.factors())
        for (auto [p, e] : arith::factorize(n))
            parts[p].push_back(arith::ipow(p, e));
    std::vector<PrimaryPart> out;
    for (auto &[p, f] : parts)
        out.push_back({p, AbelianGroup(f)});
    return out;
}

/// Returns (n, d) when G = C_n^d, otherwise nullopt.
inline std::optional<std::pair<std::int64_t, std::int64_t>> homocyclic(const AbelianGroup &G)
{
    const auto &f = G.factors();
    if (f.empty() || std::any_of(f.begin(), f.end(), [&](auto n) { return n != f.front(); }) || f.front() < 2)
        return std::nullopt;
    return std::make_pair(f.front(), static_cast<std::int64_t>(f.size()));
}

inline std::vector<std::int64_t> primes_with_multiplicity(std::int64_t n)
{
    std::vector<std::int64_t> out;
    for (auto [p, e] : arith::factorize(n))
        for (int i = 0; i < e; ++i)
            out.push_back(p);
    return out;
}

} // namespace detail

/// Evaluates one statement on (G, params) with every hypothesis reported.
inline BoundResult evaluate_bound(TheoremId id, const AbelianGroup &G, const BoundParams &params)
{
    using detail::need;
    BoundResult r;
    r.theorem = id;
    detail::HypothesisBuilder h(r);

    auto finish = [&](std::int64_t value) {
        r.applicable = h.all();
        if (r.applicable)
            r.value = value;
        return r;
    };

    auto multipliers = [&]() {
        if (!params.K.empty())
            return LengthSpec::absolute(params.K).multipliers();
        if (params.k)
            return std::vector<std::int64_t>{*params.k};
        throw DomainError(to_string(id) + ": missing parameter K (or k)");
    };

    switch (id) {
    case TheoremId::sets: {
        const auto &pg = G.require_pgroup("sets");
        auto K = multipliers();
        auto size = static_cast<std::int64_t>(K.size());
        r.kind = BoundKind::upper;
        r.target = "s_{Kq}, K=" + detail::set_str(K) + ", q=" + std::to_string(pg.q);
        if (K.size() == 1)
            r.target_length = K.front() * pg.q;
        h.ge("|K| >= d", size, pg.dim_d);
        h.add("K subset of [1,p]", K.front() >= 1 && K.back() <= pg.p,
              "min K = " + std::to_string(K.front()) + ", max K = " + std::to_string(K.back()) +
                  ", p = " + std::to_string(pg.p));
        return finish((K.back() + 1 - size) * pg.q + pg.davenport - 1);
    }
    case TheoremId::half: {
        const auto &pg = G.require_pgroup("half");
        auto K = multipliers();
        auto size = static_cast<std::int64_t>(K.size());
        r.kind = BoundKind::upper;
        r.target = "s_{Kq}, K=" + detail::set_str(K) + ", q=" + std::to_string(pg.q);
        if (K.size() == 1)
            r.target_length = K.front() * pg.q;
        h.add("|K| >= d/2", 2 * size >= pg.dim_d,
              std::to_string(size) + " >= " + std::to_string(pg.dim_d) + "/2");
        h.le("2 max K + |K| <= p", 2 * K.back() + size, pg.p);
        return finish((2 * K.back() + 1 - size) * pg.q + pg.davenport - 1);
    }
    case TheoremId::two_d: {
        const auto &pg = G.require_pgroup("2d");
        auto k = need(params.k, "k", id);
        r.kind = BoundKind::upper;
        r.target_length = k * pg.q;
        r.target = detail::sub(k * pg.q);
        h.ge("k >= 2d - 1", k, 2 * pg.dim_d - 1);
        h.le("k <= p", k, pg.p);
        return finish(k * pg.q + 2 * pg.davenport - 2);
    }
    case TheoremId::mainbound: {
        const auto &pg = G.require_pgroup("mainbound");
        auto k = need(params.k, "k", id);
        auto m = arith::ceil_div(pg.davenport, 2 * pg.q);
        r.kind = BoundKind::upper;
        r.target_length = k * pg.q;
        r.target = detail::sub(k * pg.q);
        h.ge("k >= d", k, pg.dim_d);
        h.ge("p >= 2d + 3*ceil(D/(2q)) - 3", pg.p, 2 * pg.dim_d + 3 * m - 3);
        return finish((k + 2 * pg.dim_d - 2) * pg.q + 3 * pg.davenport - 3);
    }
    case TheoremId::lbound2: {
        const auto &pg = G.require_pgroup("lbound2");
        h.ge("p >= 2d - 2 + ceil((2D - 2)/q)", pg.p,
             2 * pg.dim_d - 2 + arith::ceil_div(2 * pg.davenport - 2, pg.q));
        if (!params.k) {
            r.kind = BoundKind::upper;
            r.target = "ell";
            return finish(pg.p + pg.dim_d);
        }
        auto k = *params.k;
        r.kind = BoundKind::equality;
        r.target_length = k * pg.q;
        r.target = detail::sub(k * pg.q);
        h.ge("k >= p + d", k, pg.p + pg.dim_d);
        return finish(k * pg.q + pg.davenport - 1);
    }
    case TheoremId::pcase: {
        const auto &pg = G.require_pgroup("pcase");
        auto k = need(params.k, "k", id);
        r.kind = BoundKind::equality;
        r.target_length = k * pg.p * pg.q;
        r.target = detail::sub(k * pg.p * pg.q);
        h.ge("k >= 1", k, 1);
        h.ge("p >= d", pg.p, pg.dim_d);
        return finish(k * pg.p * pg.q + pg.davenport - 1);
    }
    case TheoremId::gao_lower:
    case TheoremId::gao_equality: {
        auto k = need(params.k, "k", id);
        auto n = G.exponent();
        std::optional<std::int64_t> D = params.davenport;
        if (!D && G.is_pgroup())
            D = G.pgroup_profile()->davenport;
        r.target_length = k * n;
        r.target = detail::sub(k * n);
        h.ge("k >= 1", k, 1);
        h.add("D(G) known", D.has_value(), D ? "D(G) = " + std::to_string(*D) : "no Olson value and none supplied");
        auto Dv = D.value_or(0);
        if (id == TheoremId::gao_lower) {
            r.kind = BoundKind::lower;
            r.strict = D && k * n < Dv;
            if (r.strict)
                r.trace.push_back("kn = " + std::to_string(k * n) + " < D(G) = " + std::to_string(Dv) +
                                  ": the inequality is strict");
        } else {
            r.kind = BoundKind::equality;
            h.ge("kn >= |G|", k * n, G.order());
        }
        return finish(k * n + Dv - 1);
    }
    case TheoremId::subadditive: {
        auto a = need(params.a, "a", id);
        auto b = need(params.b, "b", id);
        auto sa = need(params.s_a, "s_a", id);
        auto sb = need(params.s_b, "s_b", id);
        r.kind = BoundKind::upper;
        r.target_length = a + b;
        r.target = detail::sub(a + b);
        h.ge("a >= 1", a, 1);
        h.ge("b >= 1", b, 1);
        r.trace.push_back(detail::sub(a + b) + " <= max{" + std::to_string(sa) + " + " + std::to_string(b) + ", " +
                          std::to_string(sb) + "}");
        return finish(std::max(sa + b, sb));
    }
    case TheoremId::inductivegeneral: {
        auto q = need(params.q, "q", id);
        auto a = need(params.a, "a", id);
        auto b = need(params.b, "b", id);
        auto s_an = need(params.s_an_qG, "s_an_qG", id);
        auto p = arith::prime_of_power(q);
        if (p == 0)
            throw DomainError("inductivegeneral: q = " + std::to_string(q) + " is not a prime power");
        auto qp = quotient_and_subgroup(G, q);
        const auto &pg = qp.quotient.require_pgroup("inductivegeneral quotient G/qG");
        auto n = G.exponent() / q;
        auto m = arith::ceil_div(pg.davenport, 2 * q);
        r.kind = BoundKind::upper;
        r.target_length = a * b * q * n;
        r.target = detail::sub(a * b * q * n);
        r.trace.push_back("constants d and D taken from H = G/qG = C(" + qp.quotient.spec() + "): D(H) = " +
                          std::to_string(pg.davenport) + ", d = " + std::to_string(pg.dim_d));
        h.ge("a >= 1", a, 1);
        h.ge("b >= d (main bound applied on H)", b, pg.dim_d);
        h.ge("p >= 2d + 3*ceil(D(H)/(2q)) - 3", p, 2 * pg.dim_d + 3 * m - 3);
        auto base = s_an * b * q + (2 * pg.dim_d - 2) * q + 3 * pg.davenport - 3;
        BoundResult strong;
        detail::HypothesisBuilder hs(strong);
        hs.ge("p >= 2d - 2 + ceil((2D(H) - 2)/q)", p, 2 * pg.dim_d - 2 + arith::ceil_div(2 * pg.davenport - 2, q));
        hs.ge("b >= p + d", b, p + pg.dim_d);
        bool strong_ok = hs.all();
        r.applicable = h.all();
        for (auto &x : strong.hypotheses)
            r.hypotheses.push_back({"[stronger] " + x.condition, x.holds, x.instantiation, false});
        if (r.applicable) {
            if (strong_ok) {
                r.value = s_an * b * q + pg.davenport - 1;
                r.trace.push_back("stronger branch applies (b >= p + d)");
            } else {
                r.value = base;
            }
        }
        return r;
    }
    case TheoremId::generalbound: {
        auto parts = detail::primary_decomposition(G);
        const auto &a = params.factorization;
        if (a.size() != parts.size())
            throw DomainError("generalbound: factorization needs " + std::to_string(parts.size()) +
                              " factors a_1..a_r (one per prime of |G|), got " + std::to_string(a.size()));
        std::int64_t k = 1;
        for (auto x : a)
            k *= x;
        auto n = G.exponent();
        r.kind = BoundKind::upper;
        r.target_length = k * n;
        r.target = detail::sub(k * n);
        r.trace.push_back("product read as prod_{j<=i} a_j q_j");
        std::int64_t base_err = 0, strong_err = 0, prefix = 1;
        bool strong_ok = true;
        std::vector<Hypothesis> strong_lines;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const auto &pg = *parts[i].group.pgroup_profile();
            auto tag = "[p=" + std::to_string(parts[i].p) + "] ";
            auto m = arith::ceil_div(pg.davenport, 2 * pg.q);
            h.ge(tag + "p_i >= 2d_i + 3*ceil(D_i/(2q_i)) - 3", pg.p, 2 * pg.dim_d + 3 * m - 3);
            h.ge(tag + "a_i >= d_i", a[i], pg.dim_d);
            auto sp = 2 * pg.dim_d - 2 + arith::ceil_div(2 * pg.davenport - 2, pg.q);
            bool s1 = pg.p >= sp, s2 = a[i] >= pg.p + pg.dim_d;
            strong_ok = strong_ok && s1 && s2;
            strong_lines.push_back({tag + "[stronger] p_i >= 2d_i - 2 + ceil((2D_i - 2)/q_i)", s1,
                                    std::to_string(pg.p) + " >= " + std::to_string(sp), false});
            strong_lines.push_back({tag + "[stronger] a_i >= p_i + d_i", s2,
                                    std::to_string(a[i]) + " >= " + std::to_string(pg.p + pg.dim_d), false});
            base_err += prefix * ((2 * pg.dim_d - 2) * pg.q + 3 * pg.davenport - 3);
            strong_err += prefix * (pg.davenport - 1);
            prefix *= a[i] * pg.q;
        }
        r.applicable = h.all();
        r.hypotheses.insert(r.hypotheses.end(), strong_lines.begin(), strong_lines.end());
        if (r.applicable) {
            r.value = k * n + (strong_ok ? strong_err : base_err);
            if (strong_ok)
                r.trace.push_back("stronger error term applies");
        }
        return r;
    }
    case TheoremId::nine_kn:
    case TheoremId::three_kn: {
        auto hc = detail::homocyclic(G);
        if (!hc)
            throw DomainError(to_string(id) + ": group must be C_n^d, got " + G.spec());
        auto [n, d] = *hc;
        auto primes = detail::primes_with_multiplicity(n);
        const auto &a = params.factorization;
        if (a.size() != primes.size())
            throw DomainError(to_string(id) + ": factorization needs " + std::to_string(primes.size()) +
                              " factors (one per prime factor of n with multiplicity)");
        std::int64_t k = 1;
        for (auto x : a)
            k *= x;
        r.kind = BoundKind::upper;
        r.target_length = k * n;
        r.target = detail::sub(k * n);
        for (std::size_t i = 0; i < primes.size(); ++i) {
            auto tag = "[i=" + std::to_string(i + 1) + "] ";
            if (id == TheoremId::nine_kn) {
                h.add(tag + "p_i >= 7d/2 - 3", 2 * primes[i] >= 7 * d - 6,
                      "2*" + std::to_string(primes[i]) + " >= 7*" + std::to_string(d) + " - 6");
                h.ge(tag + "a_i >= d", a[i], d);
            } else {
                h.ge(tag + "p_i >= 4d - 2", primes[i], 4 * d - 2);
                h.ge(tag + "a_i >= p_i + d", a[i], primes[i] + d);
            }
        }
        return finish((id == TheoremId::nine_kn ? 9 : 3) * k * n);
    }
    case TheoremId::conjecture: {
        const auto &pg = G.require_pgroup("conjecture");
        auto k = need(params.k, "k", id);
        r.kind = BoundKind::equality;
        r.conjectural = true;
        r.target_length = k * pg.q;
        r.target = detail::sub(k * pg.q);
        h.ge("k >= 1", k, 1);
        if (k * pg.q < pg.davenport)
            r.trace.push_back("kq < D(G): the lower bound kq + D - 1 is strict here, the conjectured value fails");
        return finish(k * pg.q + pg.davenport - 1);
    }
    }
    throw DomainError("unknown theorem id");
}

namespace detail {

/// All ordered factorizations of k into `parts` positive factors.
inline void ordered_factorizations(std::int64_t k, std::size_t parts, std::vector<std::int64_t> &cur,
                                   std::vector<std::vector<std::int64_t>> &out)
{
    if (cur.size() + 1 == parts) {
        cur.push_back(k);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (std::int64_t f = 1; f <= k; ++f) {
        if (k % f)
            continue;
        cur.push_back(f);
        ordered_factorizations(k / f, parts, cur, out);
        cur.pop_back();
    }
}

inline std::optional<std::int64_t> known_length_of(const InvariantRecord &rec)
{
    if (rec.quantity != Quantity::s_K || !rec.lengths)
        return std::nullopt;
    auto L = rec.lengths->lengths();
    if (L.size() != 1)
        return std::nullopt;
    return L.front();
}

} // namespace detail

/// Proven (never conjectural) single-length upper bounds on s_{kn}(G) from
/// the closed-form statements, in tie-break order.
inline std::vector<BoundResult> seed_bounds(const AbelianGroup &G, std::int64_t k,
                                            std::optional<std::int64_t> davenport = {})
{
    std::vector<BoundResult> out;
    auto keep = [&](BoundResult r) {
        if (r.applicable && r.value && r.kind != BoundKind::lower && !r.conjectural)
            out.push_back(std::move(r));
    };
    BoundParams bp;
    bp.k = k;
    bp.davenport = davenport;
    if (G.is_pgroup()) {
        const auto &pg = *G.pgroup_profile();
        auto len = k * pg.q;
        if (len % (pg.p * pg.q) == 0) {
            BoundParams pp;
            pp.k = len / (pg.p * pg.q);
            keep(evaluate_bound(TheoremId::pcase, G, pp));
        }
        keep(evaluate_bound(TheoremId::lbound2, G, bp));
        keep(evaluate_bound(TheoremId::gao_equality, G, bp));
        keep(evaluate_bound(TheoremId::sets, G, bp));
        keep(evaluate_bound(TheoremId::half, G, bp));
        keep(evaluate_bound(TheoremId::two_d, G, bp));
        keep(evaluate_bound(TheoremId::mainbound, G, bp));
        return out;
    }
    if (G.order() == 1)
        return out;
    keep(evaluate_bound(TheoremId::gao_equality, G, bp));
    auto parts = detail::primary_decomposition(G);
    std::vector<std::vector<std::int64_t>> facs;
    std::vector<std::int64_t> cur;
    detail::ordered_factorizations(k, parts.size(), cur, facs);
    std::optional<BoundResult> best;
    for (const auto &f : facs) {
        BoundParams gp;
        gp.factorization = f;
        auto r = evaluate_bound(TheoremId::generalbound, G, gp);
        if (r.applicable && (!best || *r.value < *best->value))
            best = r;
    }
    if (best)
        keep(*best);
    if (auto hc = detail::homocyclic(G)) {
        auto primes = detail::primes_with_multiplicity(hc->first);
        facs.clear();
        detail::ordered_factorizations(k, primes.size(), cur, facs);
        for (auto id : {TheoremId::three_kn, TheoremId::nine_kn}) {
            std::optional<BoundResult> b;
            for (const auto &f : facs) {
                BoundParams gp;
                gp.factorization = f;
                auto r = evaluate_bound(id, G, gp);
                if (r.applicable && (!b || *r.value < *b->value))
                    b = r;
            }
            if (b)
                keep(*b);
        }
    }
    return out;
}

/// Least upper bound on s_{target_len}(G) derivable from the closed-form
/// statements and `known` records, closed under s_{a+b} <= max{s_a + b, s_b}.
inline BoundResult best_upper(const AbelianGroup &G, std::int64_t target_len,
                              const std::vector<InvariantRecord> &known = {})
{
    auto n = G.exponent();
    if (target_len < 1 || target_len % n != 0)
        throw DomainError("best_upper: target length " + std::to_string(target_len) + " is not a multiple of exp(G) = " +
                          std::to_string(n));
    auto T = target_len / n;

    std::optional<std::int64_t> davenport;
    for (const auto &rec : known)
        if (rec.group == G && rec.quantity == Quantity::davenport && rec.status == Status::exact)
            davenport = rec.value;

    struct Entry {
        std::int64_t value = std::numeric_limits<std::int64_t>::max();
        TheoremId via = TheoremId::subadditive;
        std::string how;
        std::int64_t left = 0, right = 0; // closure split (multipliers)
        bool set = false;
    };
    std::vector<Entry> U(static_cast<std::size_t>(T + 1));

    for (std::int64_t j = 1; j <= T; ++j) {
        auto &e = U[static_cast<std::size_t>(j)];
        for (const auto &rec : known) {
            if (!(rec.group == G) || (rec.status != Status::exact && rec.status != Status::upper_bound))
                continue;
            if (auto len = detail::known_length_of(rec); len && *len == j * n && rec.value < e.value) {
                e = Entry{rec.value, TheoremId::subadditive, "known " + to_string(rec.status) + " (" + rec.provenance + ")",
                          0, 0, true};
            }
        }
        for (auto &r : seed_bounds(G, j, davenport)) {
            if (*r.value < e.value)
                e = Entry{*r.value, r.theorem, to_string(r.theorem), 0, 0, true};
        }
        for (std::int64_t a = 1; a < j; ++a) {
            auto b = j - a;
            const auto &ua = U[static_cast<std::size_t>(a)];
            const auto &ub = U[static_cast<std::size_t>(b)];
            if (!ua.set || !ub.set)
                continue;
            auto cand = std::max(ua.value + b * n, ub.value);
            if (cand < e.value)
                e = Entry{cand, TheoremId::subadditive, "subadditive", a, b, true};
        }
    }

    BoundResult r;
    r.kind = BoundKind::upper;
    r.target_length = target_len;
    r.target = detail::sub(target_len);
    const auto &top = U[static_cast<std::size_t>(T)];
    if (!top.set) {
        r.theorem = TheoremId::subadditive;
        r.applicable = false;
        r.hypotheses.push_back({"some statement applies", false, "no closed-form bound or known value"});
        return r;
    }
    r.applicable = true;
    r.value = top.value;
    r.theorem = top.how == "subadditive" ? TheoremId::subadditive
                : top.how.rfind("known", 0) == 0 ? TheoremId::subadditive
                                                 : theorem_from_string(top.how);
    r.hypotheses.push_back({"derivation found", true, "min over seeds and subadditive closure"});

    std::vector<bool> seen(static_cast<std::size_t>(T + 1), false);
    std::function<void(std::int64_t)> explain = [&](std::int64_t j) {
        if (seen[static_cast<std::size_t>(j)])
            return;
        seen[static_cast<std::size_t>(j)] = true;
        const auto &e = U[static_cast<std::size_t>(j)];
        if (e.how == "subadditive") {
            auto a = e.left, b = e.right;
            r.trace.push_back(detail::sub(j * n) + " <= max{" + detail::sub(a * n) + " + " + std::to_string(b * n) +
                              ", " + detail::sub(b * n) + "} = " + std::to_string(e.value) + " [subadditive]");
            explain(a);
            explain(b);
        } else {
            r.trace.push_back(detail::sub(j * n) + " <= " + std::to_string(e.value) + " [" + e.how + "]");
        }
    };
    explain(T);
    return r;
}

struct SandwichCheck {
    std::string check;
    bool holds = false;
    std::string instantiation;
};

/// Every applicable lower and upper bound compared against an exact s_K
/// record: gao_lower <= value <= each upper bound.
inline std::vector<SandwichCheck> sandwich_checks(const InvariantRecord &rec)
{
    std::vector<SandwichCheck> checks;
    if (!rec.lengths)
        return checks;
    const auto &G = rec.group;
    auto L = rec.lengths->lengths();
    auto n = G.exponent();
    auto upper = [&](const std::string &what, std::int64_t bound) {
        checks.push_back({what, rec.value <= bound, std::to_string(rec.value) + " <= " + std::to_string(bound)});
    };
    if (L.size() == 1 && L[0] % n == 0) {
        auto k = L[0] / n;
        BoundParams bp;
        bp.k = k;
        try {
            auto lo = evaluate_bound(TheoremId::gao_lower, G, bp);
            if (lo.applicable && lo.value) {
                bool holds = lo.strict ? rec.value > *lo.value : rec.value >= *lo.value;
                checks.push_back({std::string("gao_lower") + (lo.strict ? " (strict)" : ""), holds,
                                  std::to_string(rec.value) + (lo.strict ? " > " : " >= ") + std::to_string(*lo.value)});
            }
        } catch (const DomainError &) {
        }
        for (const auto &ub : seed_bounds(G, k))
            upper(to_string(ub.theorem), *ub.value);
        auto best = best_upper(G, L[0]);
        if (best.applicable && best.value)
            upper("best_upper", *best.value);
    }
    if (G.is_pgroup() && std::all_of(L.begin(), L.end(), [&](auto t) { return t % n == 0; })) {
        BoundParams bp;
        for (auto t : L)
            bp.K.push_back(t / n);
        for (auto id : {TheoremId::sets, TheoremId::half}) {
            auto r = evaluate_bound(id, G, bp);
            if (r.applicable && r.value)
                upper(to_string(id) + " (K = lengths / q)", *r.value);
        }
    }
    return checks;
}

} // namespace zerosum
