#pragma once

#include "engine.hpp"
#include "sequence.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace zerosum {

namespace detail {

/// C(a, n) mod p for 0 <= n <= a < p.
inline std::int64_t small_binom_mod(std::int64_t a, std::int64_t n, std::int64_t p)
{
    std::int64_t num = 1, den = 1;
    for (std::int64_t i = 0; i < n; ++i) {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    return num * arith::mod_inverse(den, p) % p;
}

} // namespace detail

/// Binomial coefficient C(a, n) mod a prime p via base-p digits.
/// a = -1 is the only negative argument accepted: C(-1, n) = (-1)^n.
inline std::int64_t lucas_binom(std::int64_t a, std::int64_t n, std::int64_t p)
{
    if (!arith::is_prime(p))
        throw DomainError("lucas_binom: " + std::to_string(p) + " is not prime");
    if (a < -1)
        throw DomainError("lucas_binom: argument " + std::to_string(a) + " below -1");
    if (n < 0)
        return 0;
    if (a == -1)
        return n % 2 == 0 ? 1 % p : p - 1;
    if (n > a)
        return 0;
    std::int64_t r = 1;
    while (n > 0 || a > 0) {
        auto ad = a % p, nd = n % p;
        if (nd > ad)
            return 0;
        r = r * detail::small_binom_mod(ad, nd, p) % p;
        a /= p;
        n /= p;
    }
    return r;
}

/// Coefficients of the square-free monomial expansion of a function on
/// {0,1}^m, mod p. Index bit i stands for x_{i+1}.
struct MultilinearCoeffs {
    std::int64_t p = 2;
    int m = 0;
    std::vector<std::uint32_t> coeffs;

    std::uint32_t full() const { return coeffs.back(); }
};

/// values[J] = f(chi_J)  ->  c_I = sum_{J subset I} (-1)^{|I|-|J|} f(chi_J).
inline MultilinearCoeffs to_multilinear(std::vector<std::uint32_t> values, std::int64_t p)
{
    auto size = values.size();
    if (size == 0 || !std::has_single_bit(size))
        throw DomainError("value table size must be a power of two");
    auto m = std::countr_zero(size);
    auto P = static_cast<std::uint32_t>(p);
    for (std::size_t bit = 1; bit < size; bit <<= 1)
        for (std::size_t mask = 0; mask < size; ++mask)
            if (mask & bit)
                values[mask] = (values[mask] + P - values[mask ^ bit]) % P;
    return MultilinearCoeffs{p, m, std::move(values)};
}

/// Inverse of to_multilinear: evaluates the expansion at every cube point.
inline std::vector<std::uint32_t> from_multilinear(const MultilinearCoeffs &c)
{
    auto values = c.coeffs;
    auto P = static_cast<std::uint32_t>(c.p);
    for (std::size_t bit = 1; bit < values.size(); bit <<= 1)
        for (std::size_t mask = 0; mask < values.size(); ++mask)
            if (mask & bit)
                values[mask] = (values[mask] + values[mask ^ bit]) % P;
    return values;
}

/// Sequence S over a p-group, indexed as g_1..g_m, with a length-multiplier
/// set K. In theorem mode m = (max K + 1 - |K|) q + D(G) - 1, |K| >= d and
/// K is inside [1, p].
struct WitnessInstance {
    AbelianGroup group;
    GSeq seq;
    std::vector<GroupElement> terms;
    std::vector<std::int64_t> K;
    std::int64_t m = 0;
    bool theorem_mode = true;

    std::int64_t p() const { return group.pgroup_profile()->p; }
    std::int64_t q() const { return group.pgroup_profile()->q; }

    static std::int64_t theorem_length(const AbelianGroup &G, const std::vector<std::int64_t> &K)
    {
        const auto &pg = G.require_pgroup("polynomial witness");
        auto k = LengthSpec::absolute(K).multipliers();
        return (k.back() + 1 - static_cast<std::int64_t>(k.size())) * pg.q + pg.davenport - 1;
    }

    static WitnessInstance make(const GSeq &S, std::vector<std::int64_t> K, bool exploratory = false)
    {
        const auto &G = S.group();
        const auto &pg = G.require_pgroup("polynomial witness");
        WitnessInstance w;
        w.group = G;
        w.seq = S;
        w.terms = S.terms();
        w.K = LengthSpec::absolute(std::move(K)).multipliers();
        w.m = S.length();
        w.theorem_mode = !exploratory;
        if (!exploratory) {
            if (static_cast<std::int64_t>(w.K.size()) < pg.dim_d)
                throw DomainError("theorem mode needs |K| >= d = " + std::to_string(pg.dim_d));
            if (w.K.back() > pg.p)
                throw DomainError("theorem mode needs K inside [1, p]");
            auto want = theorem_length(G, w.K);
            if (w.m != want)
                throw DomainError("theorem mode needs |S| = " + std::to_string(want) + ", got " + std::to_string(w.m));
        }
        return w;
    }

    /// Multipliers l in [1, max K] \ K, the roots removed by P_K.
    std::vector<std::int64_t> missing() const
    {
        std::vector<std::int64_t> out;
        for (std::int64_t l = 1; l <= K.back(); ++l)
            if (!std::binary_search(K.begin(), K.end(), l))
                out.push_back(l);
        return out;
    }
};

struct PValue {
    std::int64_t value = 0; ///< P(x) mod p
    std::int64_t length_factor = 0; ///< P_L(x)
    std::int64_t sum_factor = 0;    ///< P_S(x)
    std::int64_t set_factor = 0;    ///< P_K(x)
};

namespace detail {

/// Residue tables for the three factors, indexed by |T| and by the integer
/// coordinate sums sum_i a_i^{(j)} x_i, each built with lucas_binom.
struct PTables {
    std::int64_t p;
    std::vector<std::int64_t> length_tab;             // P_L by N
    std::vector<std::int64_t> set_tab;                // P_K by N
    std::vector<std::vector<std::int64_t>> sum_tabs;  // binom(s_j - 1, q_j - 1) by s_j

    explicit PTables(const WitnessInstance &w) : p(w.p())
    {
        auto q = w.q();
        auto miss = w.missing();
        for (std::int64_t N = 0; N <= w.m; ++N) {
            length_tab.push_back(lucas_binom(N - 1, q - 1, p));
            auto b = lucas_binom(N, q, p);
            std::int64_t pk = 1 % p;
            for (auto l : miss)
                pk = pk * arith::floor_mod(b - l, p) % p;
            set_tab.push_back(pk);
        }
        const auto &f = w.group.factors();
        for (std::size_t j = 0; j < f.size(); ++j) {
            std::vector<std::int64_t> tab;
            for (std::int64_t s = 0; s <= w.m * (f[j] - 1); ++s)
                tab.push_back(lucas_binom(s - 1, f[j] - 1, p));
            sum_tabs.push_back(std::move(tab));
        }
    }

    PValue eval(std::int64_t N, const std::vector<std::int64_t> &sums) const
    {
        PValue v;
        v.length_factor = length_tab[static_cast<std::size_t>(N)];
        v.sum_factor = 1 % p;
        for (std::size_t j = 0; j < sums.size(); ++j)
            v.sum_factor = v.sum_factor * sum_tabs[j][static_cast<std::size_t>(sums[j])] % p;
        v.set_factor = set_tab[static_cast<std::size_t>(N)];
        v.value = v.length_factor * v.sum_factor % p * v.set_factor % p;
        return v;
    }
};

} // namespace detail

/// P = P_L * P_S * P_K at a cube point, all mod p.
inline PValue eval_P(const WitnessInstance &w, const std::vector<bool> &x)
{
    if (static_cast<std::int64_t>(x.size()) != w.m)
        throw DomainError("point has " + std::to_string(x.size()) + " coordinates, instance has m = " +
                          std::to_string(w.m));
    auto p = w.p();
    auto q = w.q();
    std::int64_t N = 0;
    std::vector<std::int64_t> sums(w.group.rank(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x[i])
            continue;
        ++N;
        for (std::size_t j = 0; j < sums.size(); ++j)
            sums[j] += w.terms[i].coords[j];
    }
    PValue v;
    v.length_factor = lucas_binom(N - 1, q - 1, p);
    v.sum_factor = 1 % p;
    for (std::size_t j = 0; j < sums.size(); ++j)
        v.sum_factor = v.sum_factor * lucas_binom(sums[j] - 1, w.group.factors()[j] - 1, p) % p;
    auto b = lucas_binom(N, q, p);
    v.set_factor = 1 % p;
    for (auto l : w.missing())
        v.set_factor = v.set_factor * arith::floor_mod(b - l, p) % p;
    v.value = v.length_factor * v.sum_factor % p * v.set_factor % p;
    return v;
}

inline constexpr std::int64_t max_cube_dimension = 24;

/// P(chi_J) mod p for every J, visiting the cube in Gray-code order.
inline std::vector<std::uint32_t> cube_values(const WitnessInstance &w)
{
    if (w.m > max_cube_dimension)
        throw ResourceCapExceeded("cube evaluation limited to m <= 24, got m = " + std::to_string(w.m));
    detail::PTables tabs(w);
    std::vector<std::uint32_t> values(std::size_t{1} << w.m);
    std::vector<std::int64_t> sums(w.group.rank(), 0);
    std::int64_t N = 0;
    std::uint64_t mask = 0;
    values[0] = static_cast<std::uint32_t>(tabs.eval(0, sums).value);
    for (std::uint64_t step = 1; step < values.size(); ++step) {
        auto bit = static_cast<std::size_t>(std::countr_zero(step));
        mask ^= std::uint64_t{1} << bit;
        auto sign = (mask >> bit & 1U) ? 1 : -1;
        N += sign;
        for (std::size_t j = 0; j < sums.size(); ++j)
            sums[j] += sign * w.terms[bit].coords[j];
        values[mask] = static_cast<std::uint32_t>(tabs.eval(N, sums).value);
    }
    return values;
}

/// Coefficient of x_1 x_2 ... x_m in the multilinear reduction of P, mod p.
inline std::int64_t full_coefficient(const WitnessInstance &w)
{
    return to_multilinear(cube_values(w), w.p()).full();
}

struct VanishingHit {
    std::uint64_t mask = 0;
    std::vector<std::int64_t> indices; ///< 1-based positions i with x_i = 1
    GSeq subsequence;
    std::int64_t value = 0;
    bool engine_zero_sum = false;  ///< engine finds sigma(T) = 0 at length |T|
    bool length_admissible = false; ///< |T|/q mod p lies in K or [max K + 1, p]
};

struct VanishingReport {
    std::int64_t p = 0, q = 0, m = 0;
    std::vector<std::int64_t> K;
    bool theorem_mode = true;
    std::int64_t origin_value = 0;
    std::int64_t full_coefficient = 0;
    std::uint64_t hit_count = 0;
    std::vector<VanishingHit> hits; ///< first `max_listed` hits in mask order
    bool all_hits_verified = true;
    bool all_hits_in_Kq = true; ///< |T| in Kq exactly (implied in theorem mode)
    std::vector<std::string> notes;

    nlohmann::json to_json() const
    {
        nlohmann::json hs = nlohmann::json::array();
        for (const auto &h : hits)
            hs.push_back({{"indices", h.indices},
                          {"subsequence", zerosum::to_json(h.subsequence)},
                          {"length", h.subsequence.length()},
                          {"value", h.value},
                          {"engine_zero_sum", h.engine_zero_sum},
                          {"length_admissible", h.length_admissible}});
        return {{"p", p},
                {"q", q},
                {"m", m},
                {"K", K},
                {"theorem_mode", theorem_mode},
                {"origin_value", origin_value},
                {"full_coefficient", full_coefficient},
                {"hit_count", hit_count},
                {"hits", hs},
                {"all_hits_verified", all_hits_verified},
                {"all_hits_in_Kq", all_hits_in_Kq},
                {"notes", notes}};
    }
};

/// Every x != 0 with P(x) != 0 mod p, each decoded and checked by the engine.
inline VanishingReport vanishing_report(const WitnessInstance &w, std::size_t max_listed = 1000,
                                        const EngineConfig &cfg = {})
{
    auto values = cube_values(w);
    VanishingReport rep;
    rep.p = w.p();
    rep.q = w.q();
    rep.m = w.m;
    rep.K = w.K;
    rep.theorem_mode = w.theorem_mode;
    rep.origin_value = values[0];
    rep.full_coefficient = to_multilinear(values, w.p()).full();
    rep.notes.push_back("P_K uses binom(sum x_i, q), i.e. it separates lengths l*q modulo p*q");
    const auto &G = w.group;
    for (std::uint64_t mask = 1; mask < values.size(); ++mask) {
        if (values[mask] == 0)
            continue;
        ++rep.hit_count;
        VanishingHit hit;
        hit.mask = mask;
        hit.value = values[mask];
        hit.subsequence = GSeq(G);
        for (std::int64_t i = 0; i < w.m; ++i)
            if (mask >> i & 1U) {
                hit.indices.push_back(i + 1);
                hit.subsequence.add(w.terms[static_cast<std::size_t>(i)]);
            }
        auto len = hit.subsequence.length();
        auto lens = zero_sum_lengths(hit.subsequence, cfg);
        hit.engine_zero_sum = !lens.empty() && lens.back() == len;
        if (len % rep.q == 0) {
            auto l = (len / rep.q) % rep.p;
            if (l == 0)
                l = rep.p;
            hit.length_admissible = std::binary_search(w.K.begin(), w.K.end(), l) || l > w.K.back();
        }
        bool in_Kq = len % rep.q == 0 && std::binary_search(w.K.begin(), w.K.end(), len / rep.q);
        rep.all_hits_verified = rep.all_hits_verified && hit.engine_zero_sum && hit.length_admissible;
        rep.all_hits_in_Kq = rep.all_hits_in_Kq && in_Kq;
        if (rep.hits.size() < max_listed)
            rep.hits.push_back(std::move(hit));
    }
    return rep;
}

} // namespace zerosum
