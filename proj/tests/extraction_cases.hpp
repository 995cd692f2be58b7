#pragma once

// Random hypothesis-satisfying inputs for each extraction strategy, shared by
// the unit tests and the acceptance run.

#include <zerosum.hpp>

#include <map>
#include <random>

namespace cases {

using namespace zerosum;

inline GSeq random_seq(const AbelianGroup &G, std::int64_t len, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<std::int64_t> pick(0, G.order() - 1);
    GSeq S(G);
    for (std::int64_t i = 0; i < len; ++i)
        S.add(G.element_at(pick(rng)));
    return S;
}

struct Instance {
    GSeq S;
    std::string label;
    std::function<ExtractionPlan(const GSeq &)> run;
};

inline std::int64_t exact_cached(const AbelianGroup &G, std::int64_t len)
{
    static std::map<std::pair<std::vector<std::int64_t>, std::int64_t>, std::int64_t> memo;
    auto key = std::make_pair(G.factors(), len);
    if (auto it = memo.find(key); it != memo.end())
        return it->second;
    std::int64_t v = G.order() == 1 ? len : exact_s(G, len).value;
    memo[key] = v;
    return v;
}

inline Instance subadditive(std::mt19937_64 &rng)
{
    static const std::vector<const char *> groups{"2", "3", "4", "5", "2,2", "3,3"};
    auto G = parse_group(groups[rng() % groups.size()]);
    auto n = G.exponent();
    auto a = n * static_cast<std::int64_t>(1 + rng() % 2), b = n * static_cast<std::int64_t>(1 + rng() % 2);
    auto sa = exact_cached(G, a), sb = exact_cached(G, b);
    auto len = std::max(sa + b, sb);
    return {random_seq(G, len, rng), "subadditive " + G.spec(),
            [=](const GSeq &S) { return split_subadditive(S, a, b, sa, sb); }};
}

inline Instance pq_lift(std::mt19937_64 &rng)
{
    static const std::vector<const char *> groups{"2", "3", "4", "5", "7", "9", "2,2", "3,3", "5,5", "9,3"};
    auto G = parse_group(groups[rng() % groups.size()]);
    const auto &pg = *G.pgroup_profile();
    auto len = pg.p * pg.q + pg.davenport - 1 + static_cast<std::int64_t>(rng() % 3);
    return {random_seq(G, len, rng), "pq_lift " + G.spec(), [](const GSeq &S) { return extract_pq_lift(S); }};
}

inline Instance two_piece(std::mt19937_64 &rng)
{
    static const std::vector<const char *> groups{"2", "3", "5", "7", "3,3", "5,5", "9,3", "9"};
    auto G = parse_group(groups[rng() % groups.size()]);
    const auto &pg = *G.pgroup_profile();
    auto lo = 2 * pg.dim_d - 1;
    auto k = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(pg.p - lo + 1));
    auto len = k * pg.q + 2 * pg.davenport - 2;
    return {random_seq(G, len, rng), "two_piece_2d " + G.spec() + " k=" + std::to_string(k),
            [k](const GSeq &S) { return extract_two_piece_2d(S, k); }};
}

inline Instance half(std::mt19937_64 &rng)
{
    struct C {
        const char *g;
        std::vector<std::int64_t> K;
    };
    static const std::vector<C> all{{"3", {1}},    {"3,3", {1}}, {"5", {1}},      {"5", {2}},    {"5,5", {1}},
                                    {"5,5", {2}}, {"7", {1, 2}}, {"7", {3}},      {"7,7", {2}},  {"7", {1}},
                                    {"9", {1}},   {"9,3", {1}},  {"7", {2}},      {"7,7", {1, 2}}};
    auto c = all[rng() % all.size()];
    auto G = parse_group(c.g);
    const auto &pg = *G.pgroup_profile();
    auto maxK = c.K.back();
    auto len = (2 * maxK + 1 - static_cast<std::int64_t>(c.K.size())) * pg.q + pg.davenport - 1;
    auto K = c.K;
    return {random_seq(G, len, rng), std::string("half_lemma ") + c.g,
            [K](const GSeq &S) { return extract_half_lemma(S, K); }};
}

inline Instance main_theorem(std::mt19937_64 &rng)
{
    static const std::vector<const char *> groups{"2", "3", "4", "5", "7", "9", "5,5", "8"};
    auto G = parse_group(groups[rng() % groups.size()]);
    const auto &pg = *G.pgroup_profile();
    auto k = pg.dim_d + static_cast<std::int64_t>(rng() % (G.order() > 20 ? 4 : 9));
    auto len = (k + 2 * pg.dim_d - 2) * pg.q + 3 * pg.davenport - 3;
    return {random_seq(G, len, rng), "main_theorem " + G.spec() + " k=" + std::to_string(k),
            [k](const GSeq &S) { return extract_main_theorem(S, k); }};
}

inline Instance filtration(std::mt19937_64 &rng)
{
    struct C {
        const char *g;
        std::int64_t q;
    };
    static const std::vector<C> all{{"4", 2}, {"8", 2}, {"8", 4}, {"9", 3}, {"6", 2},
                                    {"6", 3}, {"10", 5}, {"12", 4}, {"25", 5}, {"27", 3}};
    auto c = all[rng() % all.size()];
    auto G = parse_group(c.g);
    auto qp = quotient_and_subgroup(G, c.q);
    const auto &pg = *qp.quotient.pgroup_profile();
    auto n = G.exponent() / c.q;
    auto a = static_cast<std::int64_t>(1 + rng() % 2);
    auto b = pg.dim_d + static_cast<std::int64_t>(rng() % 2);
    auto s_an = exact_cached(qp.subgroup, a * n);
    auto len = s_an * b * c.q + (2 * pg.dim_d - 2) * c.q + 3 * pg.davenport - 3;
    auto q = c.q;
    return {random_seq(G, len, rng), std::string("filtration ") + c.g + " q=" + std::to_string(q),
            [=](const GSeq &S) { return extract_filtration(S, a, b, q, s_an); }};
}

inline const std::vector<std::pair<Strategy, Instance (*)(std::mt19937_64 &)>> &generators()
{
    static const std::vector<std::pair<Strategy, Instance (*)(std::mt19937_64 &)>> g{
        {Strategy::subadditive, &subadditive},   {Strategy::pq_lift, &pq_lift},
        {Strategy::two_piece_2d, &two_piece},   {Strategy::half_lemma, &half},
        {Strategy::main_theorem, &main_theorem}, {Strategy::filtration, &filtration}};
    return g;
}

/// Runs one instance: true when the result re-verifies. Failures are
/// cross-checked so a genuine counterexample is distinguishable.
inline bool run_instance(const Instance &inst, std::string &why)
{
    try {
        auto plan = inst.run(inst.S);
        if (!verify_extraction(plan, inst.S)) {
            why = "result does not re-verify";
            return false;
        }
        return true;
    } catch (const ExtractionFailure &ex) {
        bool genuine = is_counterexample(inst.S, ex.plan().target_lengths);
        why = std::string(genuine ? "COUNTEREXAMPLE: " : "procedure failure: ") + ex.what() + " on " + inst.S.str();
    } catch (const PremiseViolation &ex) {
        why = std::string("premise violation: ") + ex.what();
    }
    return false;
}

} // namespace cases
