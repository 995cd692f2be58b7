#pragma once

#include "bounds.hpp"
#include "engine.hpp"
#include "sequence.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zerosum {

enum class Strategy { subadditive, pq_lift, two_piece_2d, half_lemma, main_theorem, filtration };

inline std::string to_string(Strategy s)
{
    switch (s) {
    case Strategy::subadditive: return "subadditive";
    case Strategy::pq_lift: return "pq_lift";
    case Strategy::two_piece_2d: return "two_piece_2d";
    case Strategy::half_lemma: return "half_lemma";
    case Strategy::main_theorem: return "main_theorem";
    case Strategy::filtration: return "filtration";
    }
    return "?";
}

inline Strategy strategy_from_string(const std::string &s)
{
    for (auto x : {Strategy::subadditive, Strategy::pq_lift, Strategy::two_piece_2d, Strategy::half_lemma,
                   Strategy::main_theorem, Strategy::filtration})
        if (to_string(x) == s)
            return x;
    throw ParseError("unknown strategy '" + s + "'");
}

struct TraceStep {
    std::string role;
    GSeq sequence;
};

/// A finished (or failed) extraction with every intermediate piece.
struct ExtractionPlan {
    Strategy strategy = Strategy::subadditive;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<Hypothesis> hypotheses;
    std::vector<TraceStep> trace;
    std::vector<std::string> notes;
    std::vector<std::int64_t> target_lengths;
    GSeq result;

    void step(std::string role, const GSeq &s) { trace.push_back({std::move(role), s}); }

    nlohmann::json to_json() const
    {
        nlohmann::json tr = nlohmann::json::array();
        for (const auto &t : trace)
            tr.push_back({{"role", t.role},
                          {"sequence", zerosum::to_json(t.sequence)},
                          {"length", t.sequence.length()},
                          {"sum", sigma(t.sequence).coords}});
        nlohmann::json hyps = nlohmann::json::array();
        for (const auto &h : hypotheses)
            hyps.push_back({{"condition", h.condition}, {"holds", h.holds}, {"instantiation", h.instantiation},
                            {"required", h.required}});
        return {{"strategy", to_string(strategy)},
                {"parameters", parameters},
                {"hypotheses", hyps},
                {"trace", tr},
                {"notes", notes},
                {"target_lengths", target_lengths},
                {"result", zerosum::to_json(result)}};
    }
};

/// The input does not meet the statement's hypotheses, or a stage that
/// depends on caller-supplied values came up empty.
class PremiseViolation : public Error {
public:
    PremiseViolation(const std::string &msg, ExtractionPlan plan) : Error(msg), plan_(std::move(plan)) {}
    const ExtractionPlan &plan() const { return plan_; }

private:
    ExtractionPlan plan_;
};

/// Hypotheses held but an internal search found nothing: a counterexample
/// candidate, to be cross-checked with `is_counterexample`.
class ExtractionFailure : public Error {
public:
    ExtractionFailure(const std::string &msg, ExtractionPlan plan) : Error(msg), plan_(std::move(plan)) {}
    const ExtractionPlan &plan() const { return plan_; }

private:
    ExtractionPlan plan_;
};

/// True when S really has no zero-sum subsequence with length in `lengths`.
inline bool is_counterexample(const GSeq &S, const std::vector<std::int64_t> &lengths, const EngineConfig &cfg = {})
{
    return !find_zero_sum(S, std::span<const std::int64_t>(lengths), cfg).has_value();
}

/// Independent re-check of an extraction result against its input.
inline bool verify_extraction(const ExtractionPlan &plan, const GSeq &S)
{
    return is_zero_sum_witness(plan.result, S, plan.target_lengths);
}

namespace detail {

inline GSeq take_prefix(const GSeq &S, std::int64_t len)
{
    GSeq out(S.group());
    for (const auto &[g, c] : S.multiplicities()) {
        if (len <= 0)
            break;
        auto t = std::min(c, len);
        out.add(g, t);
        len -= t;
    }
    return out;
}

inline void require(ExtractionPlan &plan, const std::string &what)
{
    if (auto it = std::find_if(plan.hypotheses.begin(), plan.hypotheses.end(),
                               [](const auto &h) { return h.required && !h.holds; });
        it != plan.hypotheses.end())
        throw PremiseViolation(what + ": hypothesis fails: " + it->condition + " (" + it->instantiation + ")", plan);
}

inline void check_hypotheses(ExtractionPlan &plan, const std::vector<Hypothesis> &hyps, const std::string &what)
{
    plan.hypotheses.insert(plan.hypotheses.end(), hyps.begin(), hyps.end());
    require(plan, what);
}

class Checker {
public:
    Checker() : r_(), h_(r_) {}
    bool ge(const std::string &c, std::int64_t a, std::int64_t b) { return h_.ge(c, a, b); }
    bool le(const std::string &c, std::int64_t a, std::int64_t b) { return h_.le(c, a, b); }
    bool add(const std::string &c, bool holds, const std::string &inst) { return h_.add(c, holds, inst); }
    const std::vector<Hypothesis> &lines() const { return r_.hypotheses; }

private:
    BoundResult r_;
    HypothesisBuilder h_;
};

inline std::vector<std::int64_t> scaled(const std::vector<std::int64_t> &mult, std::int64_t q)
{
    std::vector<std::int64_t> out;
    for (auto x : mult)
        out.push_back(x * q);
    return out;
}

} // namespace detail

/// Zero-sum S_1 of length b, then zero-sum S_2 of length a in S S_1^{-1}.
inline ExtractionPlan split_subadditive(const GSeq &S, std::int64_t a, std::int64_t b,
                                        std::optional<std::int64_t> s_a = {}, std::optional<std::int64_t> s_b = {},
                                        const EngineConfig &cfg = {})
{
    ExtractionPlan plan;
    plan.strategy = Strategy::subadditive;
    plan.parameters = {{"a", a}, {"b", b}};
    plan.target_lengths = {a + b};
    detail::Checker c;
    c.ge("a >= 1", a, 1);
    c.ge("b >= 1", b, 1);
    if (s_a && s_b)
        c.ge("|S| >= max{s_a + b, s_b}", S.length(), std::max(*s_a + b, *s_b));
    detail::check_hypotheses(plan, c.lines(), "subadditive split");
    plan.step("S", S);
    auto S1 = find_zero_sum(S, {b}, cfg);
    if (!S1)
        throw PremiseViolation("subadditive split: no zero-sum subsequence of length " + std::to_string(b), plan);
    plan.step("S_1", *S1);
    auto rest = remove(S, *S1);
    auto S2 = find_zero_sum(rest, {a}, cfg);
    if (!S2)
        throw PremiseViolation("subadditive split: no zero-sum subsequence of length " + std::to_string(a) +
                                   " remains after removing S_1",
                               plan);
    plan.step("S_2", *S2);
    plan.result = concat(*S1, *S2);
    plan.step("S_1 S_2", plan.result);
    return plan;
}

/// Length-pq zero-sum subsequence via the lift g -> (g, 1) into G + C_pq.
inline ExtractionPlan extract_pq_lift(const GSeq &S, const EngineConfig &cfg = {})
{
    const auto &G = S.group();
    const auto &pg = G.require_pgroup("pq lift");
    auto pq = pg.p * pg.q;
    ExtractionPlan plan;
    plan.strategy = Strategy::pq_lift;
    plan.parameters = {{"p", pg.p}, {"q", pg.q}, {"D", pg.davenport}, {"d", pg.dim_d}};
    plan.target_lengths = {pq};
    detail::Checker c;
    c.ge("p >= d", pg.p, pg.dim_d);
    c.ge("|S| >= pq + D(G) - 1", S.length(), pq + pg.davenport - 1);
    detail::check_hypotheses(plan, c.lines(), "pq lift");

    // Only pq + D - 1 < 2pq terms are lifted, so every nonempty zero-sum
    // subsequence of the lift has length exactly pq.
    auto base = detail::take_prefix(S, pq + pg.davenport - 1);
    plan.step("S (first pq + D - 1 terms)", base);
    auto factors = G.factors();
    factors.push_back(pq);
    AbelianGroup lifted_group(factors);
    GSeq lifted(lifted_group);
    for (const auto &[g, cnt] : base.multiplicities()) {
        auto coords = g.coords;
        coords.push_back(1);
        lifted.add(GroupElement{coords}, cnt);
    }
    plan.notes.push_back("D(G + C_pq) = " + std::to_string(pq + pg.davenport - 1) + " by Olson");
    std::vector<std::int64_t> nonempty;
    for (std::int64_t t = 1; t <= lifted.length(); ++t)
        nonempty.push_back(t);
    auto hit = find_zero_sum(lifted, std::span<const std::int64_t>(nonempty), cfg);
    if (!hit)
        throw ExtractionFailure("pq lift: lifted sequence is zero-sum free", plan);
    GSeq T(G);
    for (const auto &[g, cnt] : hit->multiplicities()) {
        auto coords = g.coords;
        coords.pop_back();
        T.add(GroupElement{coords}, cnt);
    }
    if (T.length() != pq)
        throw ExtractionFailure("pq lift: lifted zero-sum has length " + std::to_string(T.length()), plan);
    plan.result = T;
    plan.step("T", T);
    return plan;
}

/// Zero-sum subsequence of length in Kq, built from the enlarged set
/// K' = K u {2 max K + i : i in [1, |K|]} and complementation inside T.
inline ExtractionPlan extract_half_lemma(const GSeq &S, std::vector<std::int64_t> K, const EngineConfig &cfg = {})
{
    const auto &G = S.group();
    const auto &pg = G.require_pgroup("half lemma");
    K = LengthSpec::absolute(std::move(K)).multipliers();
    auto size = static_cast<std::int64_t>(K.size());
    auto maxK = K.back();
    ExtractionPlan plan;
    plan.strategy = Strategy::half_lemma;
    plan.parameters = {{"K", K}, {"q", pg.q}};
    plan.target_lengths = detail::scaled(K, pg.q);
    detail::Checker c;
    c.add("|K| >= d/2", 2 * size >= pg.dim_d, std::to_string(size) + " >= " + std::to_string(pg.dim_d) + "/2");
    c.le("2 max K + |K| <= p", 2 * maxK + size, pg.p);
    c.ge("|S| >= (2 max K + 1 - |K|) q + D - 1", S.length(), (2 * maxK + 1 - size) * pg.q + pg.davenport - 1);
    detail::check_hypotheses(plan, c.lines(), "half lemma");

    auto Kp = K;
    for (std::int64_t i = 1; i <= size; ++i)
        Kp.push_back(2 * maxK + i);
    plan.parameters["K_prime"] = Kp;
    plan.step("S", S);
    auto Kpq = detail::scaled(Kp, pg.q);
    auto T = find_zero_sum(S, std::span<const std::int64_t>(Kpq), cfg);
    if (!T)
        throw ExtractionFailure("half lemma: no zero-sum subsequence with length in K'q", plan);
    plan.step("T (length in K'q)", *T);
    auto n = T->length() / pg.q;
    if (std::binary_search(K.begin(), K.end(), n)) {
        plan.result = *T;
        return plan;
    }
    std::vector<std::int64_t> L = K;
    for (auto k : K)
        L.push_back(n - k);
    L = LengthSpec::absolute(L).multipliers();
    plan.parameters["L"] = L;
    auto Lq = detail::scaled(L, pg.q);
    auto T1 = find_zero_sum(*T, std::span<const std::int64_t>(Lq), cfg);
    if (!T1)
        throw ExtractionFailure("half lemma: T has no zero-sum subsequence with length in Lq", plan);
    plan.step("T_1 (length in Lq)", *T1);
    if (std::binary_search(K.begin(), K.end(), T1->length() / pg.q)) {
        plan.result = *T1;
    } else {
        plan.result = remove(*T, *T1);
        plan.step("T T_1^{-1}", plan.result);
    }
    return plan;
}

/// Length-kq zero-sum subsequence for k in [2d - 1, p] from the factorization
/// S = S_1 S_2 with |S_2| = (d - 1) q + D - 1.
inline ExtractionPlan extract_two_piece_2d(const GSeq &S, std::int64_t k, const EngineConfig &cfg = {})
{
    const auto &G = S.group();
    const auto &pg = G.require_pgroup("two-piece extraction");
    auto q = pg.q, d = pg.dim_d, D = pg.davenport;
    ExtractionPlan plan;
    plan.strategy = Strategy::two_piece_2d;
    plan.parameters = {{"k", k}, {"q", q}, {"d", d}};
    plan.target_lengths = {k * q};
    detail::Checker c;
    c.ge("k >= 2d - 1", k, 2 * d - 1);
    c.le("k <= p", k, pg.p);
    c.ge("|S| >= kq + 2D - 2", S.length(), k * q + 2 * D - 2);
    detail::check_hypotheses(plan, c.lines(), "two-piece extraction");

    if (d == 1) {
        plan.notes.push_back("d = 1: G is cyclic, direct search");
        plan.step("S", S);
        auto T = find_zero_sum(S, {k * q}, cfg);
        if (!T)
            throw ExtractionFailure("cyclic case: no zero-sum subsequence of length kq", plan);
        plan.result = *T;
        return plan;
    }
    auto len2 = (d - 1) * q + D - 1;
    auto S1 = detail::take_prefix(S, S.length() - len2);
    auto S2 = remove(S, S1);
    plan.step("S_1", S1);
    plan.step("S_2", S2);

    auto lens2 = zero_sum_lengths(S2, cfg);
    std::vector<std::int64_t> L{0};
    for (std::int64_t j = 1; j <= 2 * d - 2 && static_cast<std::int64_t>(L.size()) < d; ++j)
        if (std::binary_search(lens2.begin(), lens2.end(), j * q))
            L.push_back(j * q);
    plan.parameters["L"] = L;
    if (static_cast<std::int64_t>(L.size()) != d)
        throw ExtractionFailure("S_2 realizes fewer than d - 1 lengths in [1, 2d - 2]q", plan);

    std::vector<std::int64_t> targets;
    for (auto l : L)
        targets.push_back(k * q - l);
    auto T1 = find_zero_sum(S1, std::span<const std::int64_t>(targets), cfg);
    if (!T1)
        throw ExtractionFailure("S_1 has no zero-sum subsequence with length in kq - L", plan);
    plan.step("T_1", *T1);
    auto T2 = find_zero_sum(S2, {k * q - T1->length()}, cfg);
    if (!T2)
        throw ExtractionFailure("S_2 lost a length recorded in L", plan);
    plan.step("T_2", *T2);
    plan.result = concat(*T1, *T2);
    return plan;
}

/// Length-kq zero-sum subsequence whenever |S| >= (k + 2d - 2) q + 3D - 3,
/// k >= d and p >= 2d + 3m - 3 with m = ceil(D / 2q).
inline ExtractionPlan extract_main_theorem(const GSeq &S, std::int64_t k, const EngineConfig &cfg = {})
{
    const auto &G = S.group();
    const auto &pg = G.require_pgroup("main-theorem extraction");
    auto q = pg.q, d = pg.dim_d, D = pg.davenport, p = pg.p;
    auto m = arith::ceil_div(D, 2 * q);
    ExtractionPlan plan;
    plan.strategy = Strategy::main_theorem;
    plan.parameters = {{"k", k}, {"q", q}, {"d", d}, {"m", m}};
    plan.target_lengths = {k * q};
    detail::Checker c;
    c.ge("k >= d", k, d);
    c.ge("p >= 2d + 3*ceil(D/(2q)) - 3", p, 2 * d + 3 * m - 3);
    c.ge("|S| >= (k + 2d - 2) q + 3D - 3", S.length(), (k + 2 * d - 2) * q + 3 * D - 3);
    detail::check_hypotheses(plan, c.lines(), "main-theorem extraction");

    auto absorb = [&](const ExtractionPlan &sub, const std::string &prefix) {
        for (const auto &t : sub.trace)
            plan.trace.push_back({prefix + t.role, t.sequence});
        for (const auto &n : sub.notes)
            plan.notes.push_back(prefix + n);
    };

    if (k >= 2 * d - 1 && k <= p) {
        plan.notes.push_back("case k in [2d - 1, p]: two-piece construction");
        auto sub = extract_two_piece_2d(S, k, cfg);
        absorb(sub, "");
        plan.parameters["L"] = sub.parameters.value("L", nlohmann::json::array());
        plan.result = sub.result;
        return plan;
    }

    if (k > p) {
        auto kb = k - d;
        plan.notes.push_back("case k > p: split k = d + " + std::to_string(kb));
        auto first = extract_main_theorem(S, kb, cfg);
        absorb(first, "[k'=" + std::to_string(kb) + "] ");
        auto rest = remove(S, first.result);
        auto second = extract_main_theorem(rest, d, cfg);
        absorb(second, "[k=d] ");
        plan.step("S_1 (length k'q)", first.result);
        plan.step("S_2 (length dq)", second.result);
        plan.result = concat(first.result, second.result);
        return plan;
    }

    // k in [d, 2d - 2], so d >= 2.
    std::int64_t t = 0;
    std::vector<std::int64_t> L;
    GSeq S1(G), S2 = S;
    if (m == 1) {
        plan.notes.push_back("case m = 1: t = 0 and L = {0}");
        L = {0};
        S1 = detail::take_prefix(S, D - 1);
        S2 = remove(S, S1);
    } else {
        t = k / 2 + m - 1;
        S1 = detail::take_prefix(S, (2 * t - m + 1) * q + D - 1);
        S2 = remove(S, S1);
        auto lens1 = zero_sum_lengths(S1, cfg);
        auto realized = [&](std::int64_t j) { return std::binary_search(lens1.begin(), lens1.end(), j * q); };
        if (t > 2 * m - 2) {
            plan.notes.push_back("case m >= 2, t > 2m - 2");
            for (auto j = t - 2 * m + 2; j <= t && static_cast<std::int64_t>(L.size()) < m; ++j)
                if (realized(j))
                    L.push_back(j);
        } else if (t == 2 * m - 2) {
            plan.notes.push_back("case t = 2m - 2: L' of size m - 1 plus the empty subsequence");
            L.push_back(0);
            for (auto j = t - 2 * m + 3; j <= t && static_cast<std::int64_t>(L.size()) < m; ++j)
                if (realized(j))
                    L.push_back(j);
        } else {
            throw ExtractionFailure("t < 2m - 2 cannot occur for k >= d", plan);
        }
    }
    plan.parameters["t"] = t;
    plan.parameters["L"] = L;
    plan.step("S_1", S1);
    plan.step("S_2", S2);
    if (static_cast<std::int64_t>(L.size()) != m)
        throw ExtractionFailure("S_1 realizes fewer than m of the required lengths", plan);
    auto need2 = (2 * k - 2 * t + 3 * m - 3) * q + D - 1;
    if (S2.length() < need2)
        throw ExtractionFailure("|S_2| below (2k - 2t + 3m - 3) q + D - 1", plan);

    std::vector<std::int64_t> K2;
    for (auto l : L)
        K2.push_back(k - l);
    ExtractionPlan half;
    try {
        half = extract_half_lemma(S2, K2, cfg);
    } catch (const PremiseViolation &ex) {
        throw ExtractionFailure(std::string("half lemma premise failed on S_2: ") + ex.what(), plan);
    }
    absorb(half, "[S_2] ");
    auto T2 = half.result;
    auto l = k - T2.length() / q;
    GSeq T1(G);
    if (l > 0) {
        auto hit = find_zero_sum(S1, {l * q}, cfg);
        if (!hit)
            throw ExtractionFailure("S_1 lost a length recorded in L", plan);
        T1 = *hit;
    }
    plan.step("T_1", T1);
    plan.step("T_2", T2);
    plan.result = concat(T1, T2);
    return plan;
}

/// Dispatch for the three proof-guided strategies. `K` is used by the half
/// lemma (defaults to {k}).
inline ExtractionPlan extract_proof_guided(const GSeq &S, std::int64_t k, Strategy strategy,
                                           std::vector<std::int64_t> K = {}, const EngineConfig &cfg = {})
{
    switch (strategy) {
    case Strategy::two_piece_2d:
        return extract_two_piece_2d(S, k, cfg);
    case Strategy::half_lemma:
        return extract_half_lemma(S, K.empty() ? std::vector<std::int64_t>{k} : K, cfg);
    case Strategy::main_theorem:
        return extract_main_theorem(S, k, cfg);
    default:
        throw DomainError("extract_proof_guided: strategy " + to_string(strategy) + " is not proof-guided");
    }
}

/// Length-abqn zero-sum subsequence through H = G/qG: peel off length-bq
/// pieces whose sums lie in qG until their sums (read in qG) contain a
/// zero-sum subsequence of length an, then take the union of those pieces.
inline ExtractionPlan extract_filtration(const GSeq &S, std::int64_t a, std::int64_t b, std::int64_t q,
                                         std::optional<std::int64_t> s_an_qG = {}, const EngineConfig &cfg = {})
{
    const auto &G = S.group();
    if (arith::prime_of_power(q) == 0)
        throw DomainError("filtration: q = " + std::to_string(q) + " is not a prime power");
    auto qp = quotient_and_subgroup(G, q);
    const auto &H = qp.quotient;
    const auto &pg = H.require_pgroup("filtration quotient G/qG");
    auto n = G.exponent() / q;
    ExtractionPlan plan;
    plan.strategy = Strategy::filtration;
    plan.parameters = {{"a", a},   {"b", b},          {"q", q},         {"n", n},
                       {"H", H.factors()}, {"qG", qp.subgroup.factors()}, {"D_H", pg.davenport}, {"d_H", pg.dim_d}};
    plan.target_lengths = {a * b * q * n};
    plan.notes.push_back("d and D are read from H = G/qG");
    detail::Checker c;
    c.ge("a >= 1", a, 1);
    c.ge("b >= 1", b, 1);
    detail::check_hypotheses(plan, c.lines(), "filtration");
    if (s_an_qG) {
        auto need = *s_an_qG * b * q + (2 * pg.dim_d - 2) * q + 3 * pg.davenport - 3;
        bool ok = S.length() >= need;
        plan.hypotheses.push_back({"|S| >= s_an(qG) bq + (2d - 2) q + 3D(H) - 3", ok,
                                   std::to_string(S.length()) + " >= " + std::to_string(need), false});
        plan.parameters["premise_holds"] = ok;
    }

    const auto &Q = qp.subgroup;
    auto an = a * n;
    GSeq rest = S;
    std::vector<GSeq> pieces;
    GSeq sums(Q);
    std::vector<GroupElement> piece_sum;
    plan.step("S", S);
    while (!find_zero_sum(sums, {an}, cfg)) {
        GSeq projected(H);
        for (const auto &[g, cnt] : rest.multiplicities())
            projected.add(qp.project(g), cnt);
        auto hit = find_zero_sum(projected, {b * q}, cfg);
        if (!hit)
            throw PremiseViolation("filtration: no further length-bq piece with sum in qG after " +
                                       std::to_string(pieces.size()) + " pieces",
                                   plan);
        GSeq piece(G);
        for (const auto &[h, need] : hit->multiplicities()) {
            auto left = need;
            for (const auto &[g, cnt] : rest.multiplicities()) {
                if (left == 0)
                    break;
                if (qp.project(g) != h)
                    continue;
                auto take = std::min(left, cnt - piece.count(g));
                piece.add(g, take);
                left -= take;
            }
        }
        rest = remove(rest, piece);
        auto y = qp.restrict(sigma(piece));
        sums.add(y);
        piece_sum.push_back(y);
        pieces.push_back(piece);
        plan.step("piece " + std::to_string(pieces.size()), piece);
    }
    plan.parameters["pieces"] = pieces.size();
    auto chosen = *find_zero_sum(sums, {an}, cfg);
    plan.step("piece sums in qG (selected)", chosen);
    GSeq result(G);
    std::vector<bool> used(pieces.size(), false);
    for (const auto &[y, cnt] : chosen.multiplicities()) {
        auto left = cnt;
        for (std::size_t i = 0; i < pieces.size() && left > 0; ++i)
            if (!used[i] && piece_sum[i] == y) {
                used[i] = true;
                result = concat(result, pieces[i]);
                --left;
            }
    }
    plan.result = result;
    plan.step("union of selected pieces", result);
    return plan;
}

} // namespace zerosum
