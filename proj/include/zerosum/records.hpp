#pragma once

#include "sequence.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zerosum {

/// Admissible zero-sum lengths: an absolute set, or K scaled by a unit q
/// (denoting Kq = {kq : k in K}).
class LengthSpec {
public:
    static LengthSpec absolute(std::vector<std::int64_t> lengths)
    {
        LengthSpec s;
        s.values_ = normalize(std::move(lengths));
        return s;
    }

    static LengthSpec scaled(std::vector<std::int64_t> multipliers, std::int64_t unit)
    {
        if (unit < 1)
            throw DomainError("length unit must be >= 1");
        LengthSpec s;
        s.values_ = normalize(std::move(multipliers));
        s.unit_ = unit;
        return s;
    }

    bool is_scaled() const { return unit_.has_value(); }
    std::int64_t unit() const { return unit_.value_or(1); }

    /// K for scaled specs, the lengths themselves otherwise.
    const std::vector<std::int64_t> &multipliers() const { return values_; }

    std::vector<std::int64_t> lengths() const
    {
        std::vector<std::int64_t> out;
        for (auto v : values_)
            out.push_back(v * unit());
        return out;
    }

    std::int64_t max_length() const { return values_.back() * unit(); }

    bool operator==(const LengthSpec &) const = default;

    std::string str() const
    {
        std::string s = "{";
        for (std::size_t i = 0; i < values_.size(); ++i)
            s += (i ? "," : "") + std::to_string(values_[i]);
        s += "}";
        if (unit_)
            s += "*" + std::to_string(*unit_);
        return s;
    }

    nlohmann::json to_json() const
    {
        if (unit_)
            return {{"K", values_}, {"unit", *unit_}};
        return {{"lengths", values_}};
    }

    static LengthSpec from_json(const nlohmann::json &j)
    {
        if (j.contains("unit"))
            return scaled(j.at("K").get<std::vector<std::int64_t>>(), j.at("unit").get<std::int64_t>());
        return absolute(j.at("lengths").get<std::vector<std::int64_t>>());
    }

private:
    static std::vector<std::int64_t> normalize(std::vector<std::int64_t> v)
    {
        if (v.empty())
            throw DomainError("length set must be nonempty");
        for (auto x : v)
            if (x < 1)
                throw DomainError("lengths must be >= 1, got " + std::to_string(x));
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    std::vector<std::int64_t> values_;
    std::optional<std::int64_t> unit_;
};

enum class Quantity { s_K, davenport, ell };
enum class Status { exact, upper_bound, lower_bound };

inline std::string to_string(Quantity q)
{
    switch (q) {
    case Quantity::s_K:
        return "s_K";
    case Quantity::davenport:
        return "davenport";
    case Quantity::ell:
        return "ell";
    }
    return "?";
}

inline std::string to_string(Status s)
{
    switch (s) {
    case Status::exact:
        return "exact";
    case Status::upper_bound:
        return "upper_bound";
    case Status::lower_bound:
        return "lower_bound";
    }
    return "?";
}

inline Quantity quantity_from_string(const std::string &s)
{
    if (s == "s_K")
        return Quantity::s_K;
    if (s == "davenport")
        return Quantity::davenport;
    if (s == "ell")
        return Quantity::ell;
    throw ParseError("unknown quantity " + s);
}

inline Status status_from_string(const std::string &s)
{
    if (s == "exact")
        return Status::exact;
    if (s == "upper_bound")
        return Status::upper_bound;
    if (s == "lower_bound")
        return Status::lower_bound;
    throw ParseError("unknown status " + s);
}

/// A computed invariant value with its status and where it came from.
struct InvariantRecord {
    AbelianGroup group;
    Quantity quantity = Quantity::s_K;
    std::optional<LengthSpec> lengths;
    std::int64_t value = 1;
    Status status = Status::exact;
    std::string provenance = "search"; ///< "search", "theorem:<id>" or "construction"
    std::optional<GSeq> witness;

    nlohmann::json to_json() const
    {
        nlohmann::json j{{"group", group.factors()},
                         {"quantity", zerosum::to_string(quantity)},
                         {"value", value},
                         {"status", zerosum::to_string(status)},
                         {"provenance", provenance}};
        j["lengths"] = lengths ? lengths->to_json() : nlohmann::json(nullptr);
        j["witness"] = witness ? zerosum::to_json(*witness) : nlohmann::json(nullptr);
        return j;
    }

    static InvariantRecord from_json(const nlohmann::json &j)
    {
        InvariantRecord r;
        r.group = AbelianGroup(j.at("group").get<std::vector<std::int64_t>>());
        r.quantity = quantity_from_string(j.at("quantity").get<std::string>());
        r.value = j.at("value").get<std::int64_t>();
        r.status = status_from_string(j.at("status").get<std::string>());
        r.provenance = j.at("provenance").get<std::string>();
        if (j.contains("lengths") && !j.at("lengths").is_null())
            r.lengths = LengthSpec::from_json(j.at("lengths"));
        if (j.contains("witness") && !j.at("witness").is_null())
            r.witness = sequence_from_json(j.at("witness"));
        return r;
    }
};

} // namespace zerosum
