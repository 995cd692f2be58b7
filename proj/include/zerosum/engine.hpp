#pragma once

#include "sequence.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace zerosum {

struct EngineConfig {
    /// Ceiling on |S|^2 * |G| table cell updates for a single build.
    std::uint64_t max_cells = 1'000'000'000ULL;
};

/// Lazily built translation permutations g -> g + x over one group.
class TranslationCache {
public:
    explicit TranslationCache(AbelianGroup G) : group_(std::move(G)), perms_(static_cast<std::size_t>(group_.order())) {}

    const AbelianGroup &group() const { return group_; }

    const std::vector<std::uint32_t> &perm(std::int64_t x)
    {
        auto &p = perms_[static_cast<std::size_t>(x)];
        if (p.empty()) {
            p.resize(static_cast<std::size_t>(group_.order()));
            for (std::int64_t g = 0; g < group_.order(); ++g)
                p[static_cast<std::size_t>(g)] = static_cast<std::uint32_t>(group_.add_index(g, x));
        }
        return p;
    }

private:
    AbelianGroup group_;
    std::vector<std::vector<std::uint32_t>> perms_;
};

/// reachable(g, t): some T | S has sigma(T) = g and |T| = t.
///
/// Stored length-major: row t is a bitset over element indices.
class ReachTable {
public:
    ReachTable() = default;

    ReachTable(const AbelianGroup &G, std::int64_t max_len)
        : order_(G.order()), words_(static_cast<std::size_t>((G.order() + 63) / 64)), max_len_(max_len),
          bits_(static_cast<std::size_t>(max_len + 1) * words_, 0)
    {
        bits_[0] = 1; // empty subsequence
    }

    std::int64_t max_len() const { return max_len_; }
    std::int64_t group_order() const { return order_; }

    bool reachable(std::int64_t g, std::int64_t t) const
    {
        if (t < 0 || t > max_len_ || g < 0 || g >= order_)
            return false;
        return (row(t)[static_cast<std::size_t>(g) / 64] >> (g % 64)) & 1U;
    }

    std::vector<std::int64_t> zero_sum_lengths() const
    {
        std::vector<std::int64_t> out;
        for (std::int64_t t = 0; t <= max_len_; ++t)
            if (row(t)[0] & 1U)
                out.push_back(t);
        return out;
    }

    /// Adds `count` copies of element x, split into chunks 1, 2, 4, ...
    /// Each chunk of size s is a 0/1 item (s*x, s); every count 0..count
    /// is a sum of a sub-collection of chunks, so the result is exact.
    void add_element(std::int64_t x, std::int64_t count, TranslationCache &tc, std::int64_t current_len)
    {
        const auto &G = tc.group();
        std::int64_t chunk = 1;
        std::int64_t left = count;
        std::int64_t len = current_len;
        while (left > 0) {
            auto s = std::min(chunk, left);
            add_chunk(G.scale_index(x, s), s, tc, len);
            len += s;
            left -= s;
            chunk *= 2;
        }
    }

    /// Single 0/1 item: rows t >= s gain row(t - s) translated by y.
    void add_chunk(std::int64_t y, std::int64_t s, TranslationCache &tc, std::int64_t current_len)
    {
        const auto &perm = tc.perm(y);
        auto top = std::min(max_len_, current_len + s);
        for (std::int64_t t = top; t >= s; --t)
            or_translated(row(t - s), row(t), perm);
    }

    bool operator==(const ReachTable &o) const { return max_len_ == o.max_len_ && bits_ == o.bits_; }

private:
    const std::uint64_t *row(std::int64_t t) const { return bits_.data() + static_cast<std::size_t>(t) * words_; }
    std::uint64_t *row(std::int64_t t) { return bits_.data() + static_cast<std::size_t>(t) * words_; }

    void or_translated(const std::uint64_t *in, std::uint64_t *out, const std::vector<std::uint32_t> &perm) const
    {
        for (std::size_t w = 0; w < words_; ++w) {
            auto word = in[w];
            while (word) {
                auto b = static_cast<std::size_t>(std::countr_zero(word));
                word &= word - 1;
                auto dst = perm[w * 64 + b];
                out[dst / 64] |= std::uint64_t{1} << (dst % 64);
            }
        }
    }

    std::int64_t order_ = 1;
    std::size_t words_ = 1;
    std::int64_t max_len_ = 0;
    std::vector<std::uint64_t> bits_;
};

namespace detail {

inline void check_cells(const GSeq &S, const EngineConfig &cfg)
{
    auto n = static_cast<std::uint64_t>(S.length());
    auto cells = n * n * static_cast<std::uint64_t>(S.group().order());
    if (cells > cfg.max_cells)
        throw ResourceCapExceeded("reach table would need " + std::to_string(cells) + " cell updates (cap " +
                                  std::to_string(cfg.max_cells) + ")");
}

struct IndexedSeq {
    std::vector<std::int64_t> values; // element indices, increasing
    std::vector<std::int64_t> counts;
};

inline IndexedSeq index_seq(const GSeq &S)
{
    IndexedSeq out;
    for (const auto &[g, c] : S.multiplicities()) {
        out.values.push_back(S.group().index_of(g));
        out.counts.push_back(c);
    }
    return out;
}

} // namespace detail

/// Exact table for S up to length `max_len` (defaults to |S|).
inline ReachTable build_reach(const GSeq &S, const EngineConfig &cfg = {}, std::optional<std::int64_t> max_len = {})
{
    detail::check_cells(S, cfg);
    auto limit = max_len ? std::min(*max_len, S.length()) : S.length();
    ReachTable table(S.group(), limit);
    TranslationCache tc(S.group());
    std::int64_t len = 0;
    for (const auto &[g, c] : S.multiplicities()) {
        table.add_element(S.group().index_of(g), c, tc, len);
        len += c;
    }
    return table;
}

inline std::vector<std::int64_t> zero_sum_lengths(const GSeq &S, const EngineConfig &cfg = {})
{
    return build_reach(S, cfg).zero_sum_lengths();
}

/// Independent oracle: enumerates all 2^|S| index subsets.
inline std::vector<std::int64_t> naive_zero_sum_lengths(const GSeq &S)
{
    if (S.length() > 20)
        throw ResourceCapExceeded("naive enumeration limited to |S| <= 20, got " + std::to_string(S.length()));
    const auto &G = S.group();
    std::vector<std::int64_t> idx;
    for (const auto &g : S.terms())
        idx.push_back(G.index_of(g));
    auto n = idx.size();
    std::vector<bool> hit(n + 1, false);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1U)
                sum = G.add_index(sum, idx[i]);
        if (sum == 0)
            hit[static_cast<std::size_t>(std::popcount(mask))] = true;
    }
    std::vector<std::int64_t> out;
    for (std::size_t t = 0; t <= n; ++t)
        if (hit[t])
            out.push_back(static_cast<std::int64_t>(t));
    return out;
}

namespace detail {

/// Suffix tables Suf_i (terms i..r-1) with square-root checkpointing:
/// checkpoints are kept every B distinct values and a block is rebuilt on
/// demand, so memory stays at O(sqrt(r)) tables.
class SuffixTables {
public:
    SuffixTables(const GSeq &S, std::int64_t max_len)
        : seq_(index_seq(S)), tc_(S.group()), group_(S.group()), max_len_(max_len)
    {
        auto r = static_cast<std::int64_t>(seq_.values.size());
        block_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(r)))));
        ReachTable t(group_, max_len_);
        std::int64_t len = 0;
        checkpoints_[r] = {t, len};
        for (std::int64_t i = r - 1; i >= 0; --i) {
            t.add_element(seq_.values[i], seq_.counts[i], tc_, len);
            len += seq_.counts[i];
            if ((r - i) % block_ == 0)
                checkpoints_[i] = {t, len};
        }
    }

    const IndexedSeq &seq() const { return seq_; }

    /// Table for terms with position >= i.
    const ReachTable &suffix(std::int64_t i)
    {
        if (auto it = checkpoints_.find(i); it != checkpoints_.end())
            return it->second.first;
        if (auto it = block_cache_.find(i); it != block_cache_.end())
            return it->second;
        block_cache_.clear();
        auto cp = checkpoints_.lower_bound(i);
        auto t = cp->second.first;
        auto len = cp->second.second;
        for (std::int64_t k = cp->first - 1; k >= i; --k) {
            t.add_element(seq_.values[k], seq_.counts[k], tc_, len);
            len += seq_.counts[k];
            block_cache_[k] = t;
        }
        return block_cache_.at(i);
    }

private:
    IndexedSeq seq_;
    TranslationCache tc_;
    AbelianGroup group_;
    std::int64_t max_len_;
    std::int64_t block_ = 1;
    std::map<std::int64_t, std::pair<ReachTable, std::int64_t>> checkpoints_;
    std::map<std::int64_t, ReachTable> block_cache_;
};

} // namespace detail

/// Deterministic witness: a subsequence T | S with sigma(T) = `target` and
/// |T| = t, taking as many copies of each element as possible in canonical
/// element order.
inline std::optional<GSeq> find_subsequence_with(const GSeq &S, std::int64_t target_index, std::int64_t t,
                                                 const EngineConfig &cfg = {})
{
    detail::check_cells(S, cfg);
    if (t < 0 || t > S.length())
        return std::nullopt;
    detail::SuffixTables suf(S, t);
    if (!suf.suffix(0).reachable(target_index, t))
        return std::nullopt;
    const auto &G = S.group();
    const auto &seq = suf.seq();
    GSeq T(G);
    auto g = target_index;
    auto rem = t;
    for (std::size_t i = 0; i < seq.values.size() && rem > 0; ++i) {
        const auto &next = suf.suffix(static_cast<std::int64_t>(i) + 1);
        auto v = seq.values[i];
        for (auto c = std::min(seq.counts[i], rem); c >= 0; --c) {
            auto rest = G.add_index(g, G.scale_index(v, -c));
            if (next.reachable(rest, rem - c)) {
                T.add(G.element_at(v), c);
                g = rest;
                rem -= c;
                break;
            }
        }
    }
    return T;
}

/// Zero-sum T | S with |T| in `lengths`; smallest admissible length first.
inline std::optional<GSeq> find_zero_sum(const GSeq &S, std::span<const std::int64_t> lengths,
                                         const EngineConfig &cfg = {})
{
    std::set<std::int64_t> wanted;
    for (auto t : lengths)
        if (t >= 0 && t <= S.length())
            wanted.insert(t);
    if (wanted.empty())
        return std::nullopt;
    if (*wanted.begin() == 0)
        return GSeq(S.group());
    auto table = build_reach(S, cfg, *wanted.rbegin());
    for (auto t : wanted)
        if (table.reachable(0, t))
            return find_subsequence_with(S, 0, t, cfg);
    return std::nullopt;
}

inline std::optional<GSeq> find_zero_sum(const GSeq &S, std::initializer_list<std::int64_t> lengths,
                                         const EngineConfig &cfg = {})
{
    std::vector<std::int64_t> v(lengths);
    return find_zero_sum(S, std::span<const std::int64_t>(v), cfg);
}

/// Direct recomputation used to validate every witness.
inline bool is_zero_sum_witness(const GSeq &T, const GSeq &S, std::span<const std::int64_t> lengths)
{
    if (!T.divides(S))
        return false;
    if (sigma(T) != S.group().zero())
        return false;
    for (auto t : lengths)
        if (t == T.length())
            return true;
    return false;
}

} // namespace zerosum
