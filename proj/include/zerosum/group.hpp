#pragma once

#include "arith.hpp"

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zerosum {

/// Element of a direct sum of cyclic groups: one reduced residue per factor.
struct GroupElement {
    std::vector<std::int64_t> coords;

    auto operator<=>(const GroupElement &) const = default;
    bool operator==(const GroupElement &) const = default;
};

/// Constants that exist only when every factor is a power of one prime p.
struct PGroupProfile {
    std::int64_t p = 0;
    std::int64_t q = 0;          ///< exponent, a power of p
    std::int64_t davenport = 0;  ///< Olson: 1 + sum(factor - 1)
    std::int64_t dim_d = 0;      ///< ceil(davenport / q)
};

/// Finite abelian group C_{n_1} + ... + C_{n_e} in the caller's factor order.
///
/// Factors of 1 are accepted so that quotients and subgroups keep the
/// coordinate layout of their parent; user-facing parsing rejects them.
class AbelianGroup {
public:
    AbelianGroup() = default;

    explicit AbelianGroup(std::vector<std::int64_t> factors) : factors_(std::move(factors))
    {
        order_ = 1;
        exponent_ = 1;
        for (auto n : factors_) {
            if (n < 1)
                throw DomainError("cyclic factor must be positive, got " + std::to_string(n));
            if (order_ > (std::int64_t{1} << 40) / n)
                throw DomainError("group order too large");
            order_ *= n;
            exponent_ = arith::lcm(exponent_, n);
        }
        strides_.assign(factors_.size(), 1);
        for (std::size_t j = factors_.size(); j-- > 1;)
            strides_[j - 1] = strides_[j] * factors_[j];

        std::int64_t p = 0;
        bool pgroup = exponent_ > 1;
        for (auto n : factors_) {
            if (n == 1)
                continue;
            auto pn = arith::prime_of_power(n);
            if (pn == 0 || (p != 0 && pn != p)) {
                pgroup = false;
                break;
            }
            p = pn;
        }
        if (pgroup) {
            PGroupProfile prof;
            prof.p = p;
            prof.q = exponent_;
            prof.davenport = 1;
            for (auto n : factors_)
                prof.davenport += n - 1;
            prof.dim_d = arith::ceil_div(prof.davenport, prof.q);
            profile_ = prof;
        }
    }

    const std::vector<std::int64_t> &factors() const { return factors_; }
    std::size_t rank() const { return factors_.size(); }
    std::int64_t order() const { return order_; }
    std::int64_t exponent() const { return exponent_; }
    bool is_pgroup() const { return profile_.has_value(); }
    const std::optional<PGroupProfile> &pgroup_profile() const { return profile_; }

    const PGroupProfile &require_pgroup(std::string_view what) const
    {
        if (!profile_)
            throw DomainError(std::string(what) + " requires a p-group, got " + spec());
        return *profile_;
    }

    std::int64_t dim_d() const { return require_pgroup("dimension d").dim_d; }

    /// Invariant factor form n_1 | n_2 | ... | n_r (trivial factors dropped).
    std::vector<std::int64_t> invariant_factors() const
    {
        // Collect prime-power parts per prime, then combine largest with largest.
        std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> parts;
        for (auto n : factors_) {
            for (auto [p, e] : arith::factorize(n)) {
                auto it = std::find_if(parts.begin(), parts.end(), [&](auto &x) { return x.first == p; });
                if (it == parts.end()) {
                    parts.push_back({p, {}});
                    it = std::prev(parts.end());
                }
                it->second.push_back(arith::ipow(p, e));
            }
        }
        std::size_t r = 0;
        for (auto &[p, powers] : parts) {
            std::sort(powers.begin(), powers.end(), std::greater<>());
            r = std::max(r, powers.size());
        }
        std::vector<std::int64_t> inv(r, 1);
        for (auto &[p, powers] : parts)
            for (std::size_t i = 0; i < powers.size(); ++i)
                inv[r - 1 - i] *= powers[i];
        return inv;
    }

    std::string spec() const
    {
        std::string s;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            if (j)
                s += ',';
            s += std::to_string(factors_[j]);
        }
        return s;
    }

    bool operator==(const AbelianGroup &o) const { return factors_ == o.factors_; }

    // Elements are indexed in mixed radix with the first coordinate most
    // significant, so index order is lexicographic coordinate order.
    std::int64_t index_of(const GroupElement &g) const
    {
        check(g);
        std::int64_t idx = 0;
        for (std::size_t j = 0; j < factors_.size(); ++j)
            idx += g.coords[j] * strides_[j];
        return idx;
    }

    GroupElement element_at(std::int64_t idx) const
    {
        GroupElement g;
        g.coords.resize(factors_.size());
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            g.coords[j] = idx / strides_[j];
            idx %= strides_[j];
        }
        return g;
    }

    /// Index of element idx_a + idx_b, computed digit by digit.
    std::int64_t add_index(std::int64_t a, std::int64_t b) const
    {
        std::int64_t out = 0;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            auto da = (a / strides_[j]) % factors_[j];
            auto db = (b / strides_[j]) % factors_[j];
            auto s = da + db;
            if (s >= factors_[j])
                s -= factors_[j];
            out += s * strides_[j];
        }
        return out;
    }

    std::int64_t scale_index(std::int64_t a, std::int64_t c) const
    {
        std::int64_t out = 0;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            auto da = (a / strides_[j]) % factors_[j];
            out += arith::floor_mod(da * arith::floor_mod(c, factors_[j]), factors_[j]) * strides_[j];
        }
        return out;
    }

    GroupElement zero() const { return GroupElement{std::vector<std::int64_t>(factors_.size(), 0)}; }

    /// Reduces arbitrary integers coordinatewise into a valid element.
    GroupElement make(std::vector<std::int64_t> coords) const
    {
        if (coords.size() != factors_.size())
            throw DomainError("element has " + std::to_string(coords.size()) + " coordinates, group has " +
                              std::to_string(factors_.size()) + " factors");
        for (std::size_t j = 0; j < coords.size(); ++j)
            coords[j] = arith::floor_mod(coords[j], factors_[j]);
        return GroupElement{std::move(coords)};
    }

    /// Unit vector of the j-th cyclic factor.
    GroupElement generator(std::size_t j) const
    {
        auto g = zero();
        g.coords.at(j) = factors_[j] > 1 ? 1 : 0;
        return g;
    }

    bool contains(const GroupElement &g) const
    {
        if (g.coords.size() != factors_.size())
            return false;
        for (std::size_t j = 0; j < factors_.size(); ++j)
            if (g.coords[j] < 0 || g.coords[j] >= factors_[j])
                return false;
        return true;
    }

    void check(const GroupElement &g) const
    {
        if (g.coords.size() != factors_.size())
            throw DomainError("element has " + std::to_string(g.coords.size()) + " coordinates, group " + spec() +
                              " has " + std::to_string(factors_.size()));
        for (std::size_t j = 0; j < factors_.size(); ++j)
            if (g.coords[j] < 0 || g.coords[j] >= factors_[j])
                throw DomainError("coordinate " + std::to_string(g.coords[j]) + " out of range [0," +
                                  std::to_string(factors_[j] - 1) + "]");
    }

    GroupElement add(const GroupElement &g, const GroupElement &h) const
    {
        check(g);
        check(h);
        GroupElement r = g;
        for (std::size_t j = 0; j < factors_.size(); ++j)
            r.coords[j] = (g.coords[j] + h.coords[j]) % factors_[j];
        return r;
    }

    GroupElement neg(const GroupElement &g) const
    {
        check(g);
        GroupElement r = g;
        for (std::size_t j = 0; j < factors_.size(); ++j)
            r.coords[j] = (factors_[j] - g.coords[j]) % factors_[j];
        return r;
    }

    GroupElement scale(const GroupElement &g, std::int64_t c) const
    {
        check(g);
        GroupElement r = g;
        for (std::size_t j = 0; j < factors_.size(); ++j)
            r.coords[j] = arith::floor_mod(g.coords[j] * arith::floor_mod(c, factors_[j]), factors_[j]);
        return r;
    }

    std::int64_t element_order(const GroupElement &g) const
    {
        check(g);
        std::int64_t o = 1;
        for (std::size_t j = 0; j < factors_.size(); ++j)
            o = arith::lcm(o, factors_[j] / std::gcd(factors_[j], g.coords[j]));
        return o;
    }

private:
    std::vector<std::int64_t> factors_;
    std::vector<std::int64_t> strides_;
    std::int64_t order_ = 1;
    std::int64_t exponent_ = 1;
    std::optional<PGroupProfile> profile_;
};

/// Parses `INT ("," INT)*` with every INT >= 2.
inline AbelianGroup parse_group(std::string_view text)
{
    std::vector<std::int64_t> factors;
    std::size_t pos = 0;
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
            s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
            s.remove_suffix(1);
        return s;
    };
    while (true) {
        auto comma = text.find(',', pos);
        auto tok = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
            throw ParseError("malformed group spec '" + std::string(text) + "': expected comma-separated integers");
        if (v < 2)
            throw ParseError("group factor must be >= 2, got " + std::to_string(v));
        factors.push_back(v);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return AbelianGroup(std::move(factors));
}

enum class ElementOp { add, neg, scale };

inline GroupElement element_arith(const AbelianGroup &G, const GroupElement &g, const GroupElement &h, ElementOp op,
                                  std::int64_t c = 1)
{
    switch (op) {
    case ElementOp::add:
        return G.add(g, h);
    case ElementOp::neg:
        return G.neg(g);
    case ElementOp::scale:
        return G.scale(g, c);
    }
    return G.zero();
}

/// Olson's value 1 + sum(p^{a_i} - 1) for a p-group.
inline std::int64_t davenport_olson(const AbelianGroup &G)
{
    return G.require_pgroup("Olson's Davenport formula").davenport;
}

/// H = G/qG together with the subgroup qG, both in G's coordinate layout.
///
/// Coordinate j of H is C_{gcd(n_j, q)} and coordinate j of qG is
/// C_{n_j / gcd(n_j, q)}. `embed` sends y in qG to q*y in G, and
/// `restrict` inverts it on elements of G that lie in qG.
struct QuotientPair {
    AbelianGroup parent;
    std::int64_t q = 1;
    AbelianGroup quotient;
    AbelianGroup subgroup;

    GroupElement project(const GroupElement &g) const
    {
        parent.check(g);
        GroupElement h = g;
        for (std::size_t j = 0; j < h.coords.size(); ++j)
            h.coords[j] %= quotient.factors()[j];
        return h;
    }

    GroupElement embed(const GroupElement &y) const
    {
        subgroup.check(y);
        GroupElement g = y;
        for (std::size_t j = 0; j < g.coords.size(); ++j)
            g.coords[j] = arith::floor_mod(q * y.coords[j], parent.factors()[j]);
        return g;
    }

    bool in_subgroup(const GroupElement &g) const
    {
        parent.check(g);
        for (std::size_t j = 0; j < g.coords.size(); ++j)
            if (g.coords[j] % quotient.factors()[j] != 0)
                return false;
        return true;
    }

    GroupElement restrict(const GroupElement &g) const
    {
        if (!in_subgroup(g))
            throw DomainError("element does not lie in qG");
        GroupElement y = g;
        for (std::size_t j = 0; j < y.coords.size(); ++j) {
            auto gj = quotient.factors()[j];
            auto mj = subgroup.factors()[j];
            // q*y = g (mod n_j)  <=>  (q/gj)*y = g/gj (mod mj), and q/gj is a unit mod mj.
            y.coords[j] = arith::floor_mod((g.coords[j] / gj) * arith::mod_inverse(q / gj, mj), mj);
        }
        return y;
    }
};

inline QuotientPair quotient_and_subgroup(const AbelianGroup &G, std::int64_t q)
{
    if (q < 1 || G.exponent() % q != 0)
        throw DomainError("q = " + std::to_string(q) + " does not divide exp(G) = " + std::to_string(G.exponent()));
    std::vector<std::int64_t> hf, sf;
    for (auto n : G.factors()) {
        auto g = std::gcd(n, q);
        hf.push_back(g);
        sf.push_back(n / g);
    }
    return QuotientPair{G, q, AbelianGroup(std::move(hf)), AbelianGroup(std::move(sf))};
}

} // namespace zerosum
