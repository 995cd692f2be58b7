#pragma once

#include "group.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace zerosum {

/// Finite unordered sequence over G stored as element -> multiplicity (>= 1).
class GSeq {
public:
    GSeq() = default;
    explicit GSeq(AbelianGroup group) : group_(std::move(group)) {}

    static GSeq from_terms(const AbelianGroup &G, const std::vector<GroupElement> &terms)
    {
        GSeq s(G);
        for (const auto &g : terms)
            s.add(g);
        return s;
    }

    const AbelianGroup &group() const { return group_; }
    const std::map<GroupElement, std::int64_t> &multiplicities() const { return mult_; }

    void add(const GroupElement &g, std::int64_t count = 1)
    {
        group_.check(g);
        if (count < 0)
            throw DomainError("negative multiplicity");
        if (count == 0)
            return;
        mult_[g] += count;
        length_ += count;
    }

    std::int64_t count(const GroupElement &g) const
    {
        auto it = mult_.find(g);
        return it == mult_.end() ? 0 : it->second;
    }

    std::int64_t length() const { return length_; }
    bool empty() const { return length_ == 0; }
    std::size_t distinct() const { return mult_.size(); }

    /// Terms in canonical (lexicographic) order, repeated by multiplicity.
    std::vector<GroupElement> terms() const
    {
        std::vector<GroupElement> out;
        out.reserve(static_cast<std::size_t>(length_));
        for (const auto &[g, c] : mult_)
            for (std::int64_t i = 0; i < c; ++i)
                out.push_back(g);
        return out;
    }

    /// T | S: v_g(T) <= v_g(S) for every g.
    bool divides(const GSeq &S) const
    {
        if (!(group_ == S.group_))
            return false;
        for (const auto &[g, c] : mult_)
            if (S.count(g) < c)
                return false;
        return true;
    }

    bool operator==(const GSeq &o) const { return group_ == o.group_ && mult_ == o.mult_; }

    /// Short human-readable form, e.g. "(0,0)^2 (1,0)".
    std::string str() const
    {
        std::string s;
        for (const auto &[g, c] : mult_) {
            if (!s.empty())
                s += ' ';
            s += '(';
            for (std::size_t j = 0; j < g.coords.size(); ++j) {
                if (j)
                    s += ',';
                s += std::to_string(g.coords[j]);
            }
            s += ')';
            if (c > 1)
                s += '^' + std::to_string(c);
        }
        return s.empty() ? "[]" : s;
    }

private:
    AbelianGroup group_;
    std::map<GroupElement, std::int64_t> mult_;
    std::int64_t length_ = 0;
};

inline GroupElement sigma(const GSeq &S)
{
    const auto &G = S.group();
    auto total = G.zero();
    for (const auto &[g, c] : S.multiplicities())
        total = G.add(total, G.scale(g, c));
    return total;
}

enum class CombineOp { concat, remove };

inline GSeq combine(const GSeq &S, const GSeq &T, CombineOp op)
{
    if (!(S.group() == T.group()))
        throw DomainError("sequences live in different groups: " + S.group().spec() + " vs " + T.group().spec());
    if (op == CombineOp::concat) {
        GSeq out = S;
        for (const auto &[g, c] : T.multiplicities())
            out.add(g, c);
        return out;
    }
    if (!T.divides(S))
        throw DomainError("remove: " + T.str() + " is not a subsequence of " + S.str());
    GSeq out(S.group());
    for (const auto &[g, c] : S.multiplicities())
        out.add(g, c - T.count(g));
    return out;
}

inline GSeq concat(const GSeq &S, const GSeq &T) { return combine(S, T, CombineOp::concat); }
inline GSeq remove(const GSeq &S, const GSeq &T) { return combine(S, T, CombineOp::remove); }

inline nlohmann::json to_json(const GroupElement &g) { return g.coords; }

inline nlohmann::json to_json(const GSeq &S)
{
    nlohmann::json elems = nlohmann::json::array();
    for (const auto &[g, c] : S.multiplicities())
        elems.push_back({{"coords", g.coords}, {"mult", c}});
    return {{"group", S.group().factors()}, {"elements", elems}};
}

/// Parses the sequence file schema. When `expected` is given the file's
/// group must match it exactly.
inline GSeq sequence_from_json(const nlohmann::json &j, const AbelianGroup *expected = nullptr)
{
    if (!j.is_object() || !j.contains("group") || !j.contains("elements"))
        throw ParseError("sequence file needs 'group' and 'elements'");
    std::vector<std::int64_t> factors;
    try {
        factors = j.at("group").get<std::vector<std::int64_t>>();
    } catch (const nlohmann::json::exception &) {
        throw ParseError("'group' must be an integer array");
    }
    for (auto n : factors)
        if (n < 2)
            throw ParseError("group factor must be >= 2, got " + std::to_string(n));
    AbelianGroup G(factors);
    if (expected && !(*expected == G))
        throw ParseError("sequence group " + G.spec() + " does not match requested group " + expected->spec());
    GSeq S(G);
    std::optional<GroupElement> prev;
    for (const auto &e : j.at("elements")) {
        if (!e.contains("coords") || !e.contains("mult"))
            throw ParseError("element needs 'coords' and 'mult'");
        GroupElement g;
        std::int64_t mult = 0;
        try {
            g.coords = e.at("coords").get<std::vector<std::int64_t>>();
            mult = e.at("mult").get<std::int64_t>();
        } catch (const nlohmann::json::exception &) {
            throw ParseError("element fields must be integers");
        }
        if (!G.contains(g))
            throw ParseError("coordinates out of range for group " + G.spec());
        if (mult < 1)
            throw ParseError("multiplicity must be >= 1, got " + std::to_string(mult));
        if (prev && !(*prev < g))
            throw ParseError("elements must be sorted lexicographically by coords without repeats");
        prev = g;
        S.add(g, mult);
    }
    return S;
}

inline void write_sequence_file(const std::string &path, const GSeq &S)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    out << to_json(S).dump(2) << '\n';
}

inline GSeq read_sequence_file(const std::string &path, const AbelianGroup *expected = nullptr)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open sequence file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &ex) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + ex.what());
    }
    return sequence_from_json(j, expected);
}

} // namespace zerosum
