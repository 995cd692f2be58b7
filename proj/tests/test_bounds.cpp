#include <zerosum/bounds.hpp>
#include <zerosum/invariants.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace zerosum;

namespace {

// Independent restatement of the closed forms, from the factor list alone.
struct Ref {
    std::int64_t p, q, D, d;

    explicit Ref(const std::vector<std::int64_t> &f)
    {
        q = *std::max_element(f.begin(), f.end());
        p = 2;
        while (q % p)
            ++p;
        D = 1;
        for (auto x : f)
            D += x - 1;
        d = (D + q - 1) / q;
    }

    static std::int64_t cdiv(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

    std::optional<std::int64_t> sets(const std::vector<std::int64_t> &K) const
    {
        auto sz = static_cast<std::int64_t>(K.size());
        if (sz < d || K.back() > p)
            return {};
        return (K.back() + 1 - sz) * q + D - 1;
    }
    std::optional<std::int64_t> half(const std::vector<std::int64_t> &K) const
    {
        auto sz = static_cast<std::int64_t>(K.size());
        if (2 * sz < d || 2 * K.back() + sz > p)
            return {};
        return (2 * K.back() + 1 - sz) * q + D - 1;
    }
    std::optional<std::int64_t> two_d(std::int64_t k) const
    {
        if (k < 2 * d - 1 || k > p)
            return {};
        return k * q + 2 * D - 2;
    }
    std::optional<std::int64_t> mainbound(std::int64_t k) const
    {
        if (k < d || p < 2 * d + 3 * cdiv(D, 2 * q) - 3)
            return {};
        return (k + 2 * d - 2) * q + 3 * D - 3;
    }
    std::optional<std::int64_t> lbound2(std::int64_t k) const
    {
        if (p < 2 * d - 2 + cdiv(2 * D - 2, q) || k < p + d)
            return {};
        return k * q + D - 1;
    }
    std::optional<std::int64_t> pcase(std::int64_t k) const
    {
        if (p < d)
            return {};
        return k * p * q + D - 1;
    }
};

std::vector<std::vector<std::int64_t>> pgroups()
{
    return {{2},     {3},        {5},       {7},        {11},     {13},     {2, 2},    {3, 3},      {5, 5},
            {7, 7},  {11, 11},   {13, 13},  {2, 2, 2},  {3, 3, 3}, {5, 5, 5}, {11, 11, 11}, {4},    {8},
            {9},     {25},       {27},      {49},       {9, 3},   {4, 2},   {8, 4},    {25, 5},     {27, 9, 3},
            {17, 17}, {19, 19, 19}, {23, 23}, {31, 31, 31, 31}, {2, 2, 2, 2}, {29}, {37, 37}};
}

} // namespace

TEST(EvaluateBound, Examples)
{
    BoundParams K12;
    K12.K = {1, 2};
    auto sets = evaluate_bound(TheoremId::sets, parse_group("3,3"), K12);
    EXPECT_TRUE(sets.applicable);
    EXPECT_EQ(*sets.value, 7);

    BoundParams k2;
    k2.k = 2;
    auto mb = evaluate_bound(TheoremId::mainbound, parse_group("5,5"), k2);
    EXPECT_TRUE(mb.applicable);
    EXPECT_EQ(*mb.value, 44);

    auto lb = evaluate_bound(TheoremId::lbound2, parse_group("5,5"), {});
    EXPECT_FALSE(lb.applicable);
    ASSERT_NE(lb.first_failure(), nullptr);
    EXPECT_EQ(lb.first_failure()->instantiation, "5 >= 6");
    EXPECT_FALSE(lb.value);

    BoundParams k1;
    k1.k = 1;
    auto pc = evaluate_bound(TheoremId::pcase, parse_group("3,3"), k1);
    EXPECT_TRUE(pc.applicable);
    EXPECT_EQ(pc.kind, BoundKind::equality);
    EXPECT_EQ(*pc.value, 13);

    auto gl = evaluate_bound(TheoremId::gao_lower, parse_group("5,5"), k2);
    EXPECT_EQ(*gl.value, 18);
    EXPECT_FALSE(gl.strict);
    auto td = evaluate_bound(TheoremId::two_d, parse_group("5,5"), k2);
    EXPECT_FALSE(td.applicable);
}

TEST(EvaluateBound, Errors)
{
    BoundParams k1;
    k1.k = 1;
    for (auto id : {TheoremId::sets, TheoremId::half, TheoremId::two_d, TheoremId::mainbound, TheoremId::lbound2,
                    TheoremId::pcase, TheoremId::conjecture})
        EXPECT_THROW(evaluate_bound(id, parse_group("6"), k1), DomainError) << to_string(id);
    EXPECT_THROW(evaluate_bound(TheoremId::two_d, parse_group("3,3"), {}), DomainError);
    EXPECT_THROW(evaluate_bound(TheoremId::subadditive, parse_group("3,3"), k1), DomainError);
    EXPECT_THROW(evaluate_bound(TheoremId::nine_kn, parse_group("6,3"), k1), DomainError);
}

TEST(EvaluateBound, GaoBranches)
{
    auto G = parse_group("2,2");
    BoundParams k1, k2;
    k1.k = 1;
    k2.k = 2;
    auto strict = evaluate_bound(TheoremId::gao_lower, G, k1);
    EXPECT_TRUE(strict.strict);
    EXPECT_EQ(*strict.value, 4);
    EXPECT_FALSE(evaluate_bound(TheoremId::gao_equality, G, k1).applicable);
    auto eq = evaluate_bound(TheoremId::gao_equality, G, k2);
    EXPECT_TRUE(eq.applicable);
    EXPECT_EQ(*eq.value, 6);
    // Non-p-groups need D(G) supplied.
    EXPECT_FALSE(evaluate_bound(TheoremId::gao_lower, parse_group("6"), k1).applicable);
    BoundParams d6 = k1;
    d6.davenport = 6;
    EXPECT_EQ(*evaluate_bound(TheoremId::gao_lower, parse_group("6"), d6).value, 11);
}

TEST(EvaluateBound, HypothesisReportsAreComplete)
{
    BoundParams k3;
    k3.k = 3;
    auto r = evaluate_bound(TheoremId::mainbound, parse_group("3,3"), k3);
    EXPECT_FALSE(r.applicable);
    EXPECT_EQ(r.hypotheses.size(), 2U);
    EXPECT_TRUE(r.hypotheses[0].holds);
    EXPECT_FALSE(r.hypotheses[1].holds);
    EXPECT_EQ(r.hypotheses[1].instantiation, "3 >= 4");
    auto j = r.to_json();
    EXPECT_EQ(j["theorem"], "mainbound");
    EXPECT_TRUE(j["value"].is_null());
}

TEST(EvaluateBound, FormulaFidelityRandom)
{
    std::mt19937_64 rng(314159);
    auto gs = pgroups();
    int checked = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto &f = gs[rng() % gs.size()];
        AbelianGroup G(f);
        Ref ref(f);
        std::int64_t k = 1 + static_cast<std::int64_t>(rng() % 40);
        std::vector<std::int64_t> K;
        auto top = 1 + static_cast<std::int64_t>(rng() % 12);
        for (std::int64_t x = 1; x <= top; ++x)
            if (rng() % 2 || x == top)
                K.push_back(x);
        BoundParams bk;
        bk.k = k;
        BoundParams bK;
        bK.K = K;
        auto cmp = [&](TheoremId id, const BoundParams &bp, std::optional<std::int64_t> want) {
            auto r = evaluate_bound(id, G, bp);
            ASSERT_EQ(r.applicable, want.has_value()) << to_string(id) << " " << G.spec();
            if (want)
                ASSERT_EQ(*r.value, *want) << to_string(id) << " " << G.spec();
            ++checked;
        };
        cmp(TheoremId::sets, bK, ref.sets(K));
        cmp(TheoremId::half, bK, ref.half(K));
        cmp(TheoremId::two_d, bk, ref.two_d(k));
        cmp(TheoremId::mainbound, bk, ref.mainbound(k));
        cmp(TheoremId::lbound2, bk, ref.lbound2(k));
        cmp(TheoremId::pcase, bk, ref.pcase(k));
        cmp(TheoremId::gao_lower, bk, k * ref.q + ref.D - 1);
        cmp(TheoremId::gao_equality, bk,
            k * ref.q >= G.order() ? std::optional<std::int64_t>(k * ref.q + ref.D - 1) : std::nullopt);
        auto conj = evaluate_bound(TheoremId::conjecture, G, bk);
        ASSERT_TRUE(conj.conjectural);
        ASSERT_EQ(*conj.value, k * ref.q + ref.D - 1);
    }
    EXPECT_EQ(checked, 200 * 8);
}

TEST(EvaluateBound, GeneralBoundReadsProductAsAjQj)
{
    // C_5^2 + C_7^2 (exp 35): D_1 = 9, q_1 = 5, d_1 = 2; D_2 = 13, q_2 = 7, d_2 = 2.
    auto G = parse_group("5,5,7,7");
    BoundParams bp;
    bp.factorization = {2, 3};
    auto r = evaluate_bound(TheoremId::generalbound, G, bp);
    ASSERT_TRUE(r.applicable);
    auto E1 = (2 * 2 - 2) * 5 + 3 * 9 - 3;  // 34
    auto E2 = (2 * 2 - 2) * 7 + 3 * 13 - 3; // 50
    EXPECT_EQ(*r.value, 6 * 35 + E1 + (2 * 5) * E2);

    bp.factorization = {1, 3};
    auto bad = evaluate_bound(TheoremId::generalbound, G, bp);
    EXPECT_FALSE(bad.applicable);

    // Stronger error term: C_11 + C_13 with a_i >= p_i + d_i.
    auto H = parse_group("11,13");
    bp.factorization = {12, 14};
    auto s = evaluate_bound(TheoremId::generalbound, H, bp);
    ASSERT_TRUE(s.applicable);
    EXPECT_EQ(*s.value, 12 * 14 * 143 + 10 + 12 * 11 * 12);
}

TEST(EvaluateBound, InductiveGeneralUsesQuotientConstants)
{
    // G = C_25 + C_5, q = 5: H = C_5^2 (D = 9, d = 2), qG = C_5, n = 5.
    auto G = parse_group("25,5");
    BoundParams bp;
    bp.q = 5;
    bp.a = 1;
    bp.b = 2;
    bp.s_an_qG = 9; // s_5(C_5)
    auto r = evaluate_bound(TheoremId::inductivegeneral, G, bp);
    ASSERT_TRUE(r.applicable);
    EXPECT_EQ(*r.value, 9 * 2 * 5 + 2 * 5 + 3 * 9 - 3);
    EXPECT_EQ(*r.target_length, 1 * 2 * 5 * 5);
    bp.b = 1;
    EXPECT_FALSE(evaluate_bound(TheoremId::inductivegeneral, G, bp).applicable);
}

TEST(EvaluateBound, NineDominatesThree)
{
    for (std::int64_t n : {11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 143, 187, 121})
        for (std::int64_t d = 1; d <= 4; ++d) {
            std::vector<std::int64_t> f(static_cast<std::size_t>(d), n);
            AbelianGroup G(f);
            auto primes = detail::primes_with_multiplicity(n);
            for (std::int64_t a = 1; a <= 60; a += 3) {
                BoundParams bp;
                bp.factorization.assign(primes.size(), a);
                auto three = evaluate_bound(TheoremId::three_kn, G, bp);
                auto nine = evaluate_bound(TheoremId::nine_kn, G, bp);
                if (three.applicable) {
                    ASSERT_TRUE(nine.applicable);
                    ASSERT_LE(*three.value, *nine.value);
                }
            }
        }
}

TEST(BestUpper, Examples)
{
    auto r9 = best_upper(parse_group("3,3"), 9);
    EXPECT_EQ(*r9.value, 13);
    EXPECT_EQ(r9.theorem, TheoremId::pcase);

    auto r18 = best_upper(parse_group("3,3"), 18);
    EXPECT_EQ(*r18.value, 22);

    InvariantRecord egz;
    egz.group = parse_group("2");
    egz.lengths = LengthSpec::absolute({2});
    egz.value = 3;
    auto r4 = best_upper(parse_group("2"), 4, {egz});
    EXPECT_EQ(*r4.value, 5);
    EXPECT_EQ(*r4.value, exact_s(parse_group("2"), 4).value);

    EXPECT_THROW(best_upper(parse_group("3,3"), 4), DomainError);
    auto none = best_upper(parse_group("6,6,6,6"), 6);
    EXPECT_FALSE(none.applicable);
}

TEST(BestUpper, SubadditiveTraceIsConsistent)
{
    auto r = best_upper(parse_group("5,5"), 10);
    ASSERT_TRUE(r.applicable);
    EXPECT_EQ(*r.value, 23); // max{s_5 + 5, s_5} with s_5 <= 18 from the half bound
    EXPECT_FALSE(r.trace.empty());
    EXPECT_NE(r.trace.front().find("subadditive"), std::string::npos);
}

TEST(BestUpper, ForcedEqualityBeyondThreshold)
{
    // Wherever lbound2 applies and k >= p + d, the best upper bound meets gao_lower.
    for (auto spec : {"7", "11", "13", "11,11", "13,13", "19,19,19", "8", "9"}) {
        auto G = parse_group(spec);
        auto lb = evaluate_bound(TheoremId::lbound2, G, {});
        if (!lb.applicable)
            continue;
        const auto &pg = *G.pgroup_profile();
        for (auto k = pg.p + pg.dim_d; k <= pg.p + pg.dim_d + 3; ++k) {
            BoundParams bp;
            bp.k = k;
            EXPECT_EQ(*best_upper(G, k * pg.q).value, *evaluate_bound(TheoremId::gao_lower, G, bp).value) << spec;
        }
    }
}

TEST(BestUpper, NeverUsesConjecture)
{
    for (auto spec : {"3,3", "5,5", "2,2,2", "7,7"}) {
        auto G = parse_group(spec);
        for (std::int64_t k = 1; k <= 6; ++k) {
            auto r = best_upper(G, k * G.exponent());
            if (r.applicable)
                EXPECT_NE(r.theorem, TheoremId::conjecture);
            BoundParams bp;
            bp.k = k;
            if (r.applicable)
                EXPECT_GE(*r.value, *evaluate_bound(TheoremId::gao_lower, G, bp).value);
        }
    }
}
