#pragma once

#include "bounds.hpp"
#include "engine.hpp"
#include "records.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace zerosum {

struct SearchOptions {
    /// Longest avoider length explored; 0 selects the default cap.
    std::int64_t cap = 0;
    /// Restrict the first (smallest) element to 0. Valid only when every
    /// forbidden length is a multiple of exp(G), by translation invariance.
    bool normalize_first = false;
    unsigned threads = 1;
    EngineConfig engine;
};

/// Outcome of the avoider search.
struct AvoidResult {
    bool cap_exceeded = false;
    std::int64_t length = 0; ///< longest avoider found (== cap when exceeded)
    GSeq witness;            ///< lexicographically least avoider of that length
    std::uint64_t nodes = 0;
};

/// Thrown when an avoider of length `cap` exists; carries the lower bound it proves.
class SearchCapReached : public ResourceCapExceeded {
public:
    SearchCapReached(const std::string &msg, InvariantRecord lower) : ResourceCapExceeded(msg), lower_(std::move(lower)) {}
    const InvariantRecord &lower_bound() const { return lower_; }

private:
    InvariantRecord lower_;
};

namespace detail {

struct AvoidSearch {
    const AbelianGroup &G;
    std::vector<std::int64_t> forbidden; // sorted, all in [1, cap]
    std::int64_t cap;
    TranslationCache tc;
    std::vector<ReachTable> tables;
    std::vector<std::int64_t> path;
    std::int64_t best_len = -1;
    std::vector<std::int64_t> best_path;
    bool exceeded = false;
    std::uint64_t nodes = 0;
    const std::atomic<long> *stop_below = nullptr; // abort when a lower-indexed task exceeded
    long task = 0;

    AvoidSearch(const AbelianGroup &g, std::vector<std::int64_t> f, std::int64_t c)
        : G(g), forbidden(std::move(f)), cap(c), tc(g)
    {
        tables.assign(static_cast<std::size_t>(cap + 1), ReachTable(G, cap));
    }

    bool violates(const ReachTable &t, std::int64_t len) const
    {
        for (auto f : forbidden) {
            if (f > len)
                break;
            if (t.reachable(0, f))
                return true;
        }
        return false;
    }

    bool aborted() const { return stop_below && stop_below->load(std::memory_order_relaxed) < task; }

    // Depth-first over multisets in nondecreasing element order; any
    // extension of a sequence with a forbidden zero-sum length has one too.
    void dfs(std::int64_t depth, std::int64_t min_elem)
    {
        ++nodes;
        if (depth > best_len) {
            best_len = depth;
            best_path = path;
        }
        if (depth == cap) {
            exceeded = true;
            return;
        }
        if ((nodes & 0xfff) == 0 && aborted())
            return;
        auto &next = tables[static_cast<std::size_t>(depth + 1)];
        for (std::int64_t x = min_elem; x < G.order() && !exceeded; ++x) {
            next = tables[static_cast<std::size_t>(depth)];
            next.add_chunk(x, 1, tc, depth);
            if (violates(next, depth + 1))
                continue;
            path.push_back(x);
            dfs(depth + 1, x);
            path.pop_back();
        }
    }

    void run_from(std::int64_t first)
    {
        path.clear();
        tables[1] = tables[0];
        tables[1].add_chunk(first, 1, tc, 0);
        if (violates(tables[1], 1))
            return;
        path.push_back(first);
        dfs(1, first);
    }
};

inline GSeq seq_from_indices(const AbelianGroup &G, const std::vector<std::int64_t> &idx)
{
    GSeq s(G);
    for (auto i : idx)
        s.add(G.element_at(i));
    return s;
}

inline AvoidResult search_avoiders(const AbelianGroup &G, std::vector<std::int64_t> forbidden, std::int64_t cap,
                                   const SearchOptions &opts)
{
    if (cap < 1)
        throw DomainError("search cap must be >= 1");
    std::sort(forbidden.begin(), forbidden.end());
    forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
    std::erase_if(forbidden, [&](auto t) { return t < 1 || t > cap; });
    auto cells = static_cast<std::uint64_t>(cap) * static_cast<std::uint64_t>(cap) *
                 static_cast<std::uint64_t>(G.order());
    if (cells > opts.engine.max_cells)
        throw ResourceCapExceeded("avoider search tables need " + std::to_string(cells) + " cells (cap " +
                                  std::to_string(opts.engine.max_cells) + ")");

    std::vector<std::int64_t> firsts;
    if (opts.normalize_first)
        firsts.push_back(0);
    else
        for (std::int64_t x = 0; x < G.order(); ++x)
            firsts.push_back(x);

    struct TaskResult {
        std::int64_t len = 0;
        std::vector<std::int64_t> path;
        bool exceeded = false;
        std::uint64_t nodes = 0;
    };
    std::vector<TaskResult> results(firsts.size());
    std::atomic<long> exceeded_at{static_cast<long>(firsts.size())};
    std::atomic<std::size_t> next_task{0};

    auto worker = [&]() {
        AvoidSearch search(G, forbidden, cap);
        search.stop_below = &exceeded_at;
        while (true) {
            auto t = next_task.fetch_add(1);
            if (t >= firsts.size())
                break;
            if (exceeded_at.load() < static_cast<long>(t))
                continue;
            search.task = static_cast<long>(t);
            search.best_len = -1;
            search.best_path.clear();
            search.exceeded = false;
            search.nodes = 0;
            search.run_from(firsts[t]);
            auto &res = results[t];
            res.len = std::max<std::int64_t>(search.best_len, 0);
            res.path = search.best_path;
            res.exceeded = search.exceeded;
            res.nodes = search.nodes;
            if (search.exceeded) {
                long cur = exceeded_at.load();
                while (static_cast<long>(t) < cur && !exceeded_at.compare_exchange_weak(cur, static_cast<long>(t))) {
                }
            }
        }
    };

    auto threads = std::max(1U, opts.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::future<void>> futs;
        for (unsigned i = 0; i < threads; ++i)
            futs.push_back(std::async(std::launch::async, worker));
        for (auto &f : futs)
            f.get();
    }

    AvoidResult out;
    out.witness = GSeq(G);
    std::int64_t best = 0;
    std::vector<std::int64_t> best_path;
    auto stop = exceeded_at.load();
    for (std::size_t t = 0; t < results.size(); ++t) {
        out.nodes += results[t].nodes;
        if (static_cast<long>(t) > stop)
            continue;
        if (results[t].exceeded) {
            out.cap_exceeded = true;
            best = results[t].len;
            best_path = results[t].path;
            break;
        }
        if (results[t].len > best) {
            best = results[t].len;
            best_path = results[t].path;
        }
    }
    out.length = best;
    out.witness = seq_from_indices(G, best_path);
    return out;
}

/// Element (1,...,1) of order exp(G).
inline GroupElement element_of_max_order(const AbelianGroup &G)
{
    GroupElement g = G.zero();
    for (std::size_t j = 0; j < G.rank(); ++j)
        g.coords[j] = G.factors()[j] > 1 ? 1 : 0;
    return g;
}

} // namespace detail

/// Longest S with no zero-sum subsequence of length in `lengths`.
inline AvoidResult max_avoiding_length(const AbelianGroup &G, const LengthSpec &lengths, std::int64_t cap,
                                       const SearchOptions &opts = {})
{
    auto L = lengths.lengths();
    if (opts.normalize_first &&
        std::any_of(L.begin(), L.end(), [&](auto t) { return t % G.exponent() != 0; }))
        throw DomainError("first-element normalization needs every length to be a multiple of exp(G)");
    return detail::search_avoiders(G, L, cap, opts);
}

/// Default search cap for s_K: the best proven bound when one applies,
/// otherwise the conjectured value plus 8.
inline std::int64_t default_cap(const AbelianGroup &G, const LengthSpec &lengths,
                                const std::vector<InvariantRecord> &known = {})
{
    auto n = G.exponent();
    std::optional<std::int64_t> best;
    for (auto t : lengths.lengths()) {
        if (t % n != 0)
            continue;
        auto r = best_upper(G, t, known);
        if (r.applicable && (!best || *r.value < *best))
            best = *r.value;
    }
    if (G.is_pgroup() && lengths.is_scaled() && lengths.unit() == n) {
        BoundParams bp;
        bp.K = lengths.multipliers();
        auto r = evaluate_bound(TheoremId::sets, G, bp);
        if (r.applicable && (!best || *r.value < *best))
            best = *r.value;
    }
    if (best)
        return *best;
    std::int64_t D = G.is_pgroup() ? G.pgroup_profile()->davenport : G.order();
    std::optional<std::int64_t> conj;
    for (auto t : lengths.lengths())
        if (t % n == 0)
            conj = conj ? std::min(*conj, t + D - 1) : t + D - 1;
    return conj.value_or(lengths.max_length() + G.order()) + 8;
}

/// Exact s_K(G) = (longest avoider) + 1, with the avoider as witness.
inline InvariantRecord exact_s(const AbelianGroup &G, const LengthSpec &lengths, const SearchOptions &opts = {})
{
    auto cap = opts.cap > 0 ? opts.cap : default_cap(G, lengths);
    InvariantRecord rec;
    rec.group = G;
    rec.quantity = Quantity::s_K;
    rec.lengths = lengths;

    auto L = lengths.lengths();
    if (std::none_of(L.begin(), L.end(), [&](auto t) { return t % G.exponent() == 0; })) {
        // g^N with ord(g) = exp(G) has zero-sum subsequences only of lengths divisible by exp(G).
        GSeq w(G);
        w.add(detail::element_of_max_order(G), cap);
        rec.value = cap + 1;
        rec.status = Status::lower_bound;
        rec.provenance = "construction";
        rec.witness = w;
        throw SearchCapReached("s_K(G) is infinite: no admissible length is a multiple of exp(G) = " +
                                   std::to_string(G.exponent()),
                               rec);
    }

    auto res = max_avoiding_length(G, lengths, cap, opts);
    rec.witness = res.witness;
    if (res.cap_exceeded) {
        rec.value = cap + 1;
        rec.status = Status::lower_bound;
        throw SearchCapReached("an avoider of length " + std::to_string(cap) + " exists; s_K(G) >= " +
                                   std::to_string(cap + 1),
                               rec);
    }
    rec.value = res.length + 1;
    rec.status = Status::exact;
    rec.provenance = "search";
    return rec;
}

inline InvariantRecord exact_s(const AbelianGroup &G, std::int64_t length, const SearchOptions &opts = {})
{
    return exact_s(G, LengthSpec::absolute({length}), opts);
}

/// Exact D(G) = 1 + longest zero-sum-free sequence. The default cap is |G|
/// (every sequence of |G| terms has a nonempty zero-sum prefix difference).
inline InvariantRecord exact_davenport(const AbelianGroup &G, const SearchOptions &opts = {})
{
    if (opts.normalize_first)
        throw DomainError("first-element normalization is not valid for the Davenport constant");
    auto cap = opts.cap > 0 ? opts.cap : G.order();
    std::vector<std::int64_t> all;
    for (std::int64_t t = 1; t <= cap; ++t)
        all.push_back(t);
    auto res = detail::search_avoiders(G, all, cap, opts);
    InvariantRecord rec;
    rec.group = G;
    rec.quantity = Quantity::davenport;
    rec.witness = res.witness;
    if (res.cap_exceeded) {
        rec.value = cap + 1;
        rec.status = Status::lower_bound;
        throw SearchCapReached("zero-sum-free sequence of length " + std::to_string(cap) + " exists", rec);
    }
    rec.value = res.length + 1;
    rec.status = Status::exact;
    return rec;
}

struct ThresholdReport {
    InvariantRecord ell;
    std::vector<InvariantRecord> s_values; ///< s_{k exp(G)} for k = 1..k_max
};

/// Smallest l with s_{kq}(G) = kq + D(G) - 1 for all k in [l, k_max].
/// The value is exact when equality beyond k_max is already forced (kq >= |G|,
/// or the threshold corollary applies), otherwise it is a lower bound.
inline ThresholdReport exact_threshold_ell(const AbelianGroup &G, std::int64_t k_max, const SearchOptions &opts = {},
                                           const std::vector<InvariantRecord> &cached = {})
{
    const auto &pg = G.require_pgroup("threshold ell");
    if (k_max < 1)
        throw DomainError("k_max must be >= 1");
    ThresholdReport rep;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        auto len = k * pg.q;
        std::optional<InvariantRecord> hit;
        for (const auto &c : cached)
            if (c.group == G && c.status == Status::exact && detail::known_length_of(c) == len)
                hit = c;
        rep.s_values.push_back(hit ? *hit : exact_s(G, LengthSpec::absolute({len}), opts));
    }
    std::int64_t ell = k_max + 1;
    for (std::int64_t k = k_max; k >= 1; --k) {
        if (rep.s_values[static_cast<std::size_t>(k - 1)].value != k * pg.q + pg.davenport - 1)
            break;
        ell = k;
    }
    bool tail_forced = (k_max + 1) * pg.q >= G.order();
    if (!tail_forced) {
        auto lb = evaluate_bound(TheoremId::lbound2, G, {});
        tail_forced = lb.applicable && k_max + 1 >= pg.p + pg.dim_d;
    }
    rep.ell.group = G;
    rep.ell.quantity = Quantity::ell;
    rep.ell.value = ell;
    rep.ell.status = tail_forced ? Status::exact : Status::lower_bound;
    rep.ell.provenance = "search";
    return rep;
}

/// 0^{kq-1} * prod e_j^{n_j - 1}: length kq + D(G) - 2 with no zero-sum
/// subsequence of length kq.
inline GSeq extremal_witness_lower(const AbelianGroup &G, std::int64_t k, const EngineConfig &cfg = {})
{
    const auto &pg = G.require_pgroup("extremal lower-bound witness");
    if (k < 1)
        throw DomainError("k must be >= 1");
    GSeq w(G);
    w.add(G.zero(), k * pg.q - 1);
    for (std::size_t j = 0; j < G.rank(); ++j)
        w.add(G.generator(j), G.factors()[j] - 1);
    auto lens = zero_sum_lengths(w, cfg);
    if (std::find(lens.begin(), lens.end(), k * pg.q) != lens.end())
        throw std::logic_error("extremal witness has a zero-sum subsequence of length kq");
    return w;
}

} // namespace zerosum
