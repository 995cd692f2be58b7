// zerosum: command-line front end for the zero-sum invariant library.

#include <zerosum.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace zerosum;
using nlohmann::json;

namespace {

enum Exit { ok = 0, inconsistency = 1, usage = 2, resource_cap = 3 };

struct Report {
    json body = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    int exit_code = ok;
};

std::string cell(const json &v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_null())
        return "";
    return v.dump();
}

std::string csv_escape(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void render(const Report &r, const std::string &format, std::ostream &os)
{
    if (format == "json") {
        os << r.body.dump(2) << "\n";
        return;
    }
    if (format == "csv") {
        for (std::size_t i = 0; i < r.columns.size(); ++i)
            os << (i ? "," : "") << csv_escape(r.columns[i]);
        os << "\n";
        for (const auto &row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << csv_escape(row[i]);
            os << "\n";
        }
        return;
    }
    os << "|";
    for (const auto &c : r.columns)
        os << " " << c << " |";
    os << "\n|";
    for (std::size_t i = 0; i < r.columns.size(); ++i)
        os << "---|";
    os << "\n";
    for (const auto &row : r.rows) {
        os << "|";
        for (const auto &c : row) {
            std::string esc;
            for (char ch : c)
                esc += ch == '|' ? std::string("\\|") : std::string(1, ch);
            os << " " << esc << " |";
        }
        os << "\n";
    }
}

std::vector<std::int64_t> parse_list(const std::string &s)
{
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(tok, &used));
            if (used != tok.size())
                throw ParseError("bad integer '" + tok + "'");
        } catch (const std::logic_error &) {
            throw ParseError("bad integer '" + tok + "' in list '" + s + "'");
        }
    }
    if (out.empty())
        throw ParseError("empty list");
    return out;
}

struct Globals {
    std::string format = "json";
    std::string cache_path;
    bool no_cache = false;
    double max_cells = 0;
    std::string artifact_dir = ".";
    std::int64_t cap = 0;
    int threads = 1;

    EngineConfig engine() const
    {
        EngineConfig c;
        if (max_cells > 0)
            c.max_cells = max_cells;
        return c;
    }

    SearchOptions search() const
    {
        SearchOptions o;
        o.cap = cap;
        o.threads = threads;
        o.engine = engine();
        return o;
    }

    std::unique_ptr<ResultCache> open_cache() const
    {
        if (no_cache)
            return nullptr;
        return std::make_unique<ResultCache>(cache_path.empty() ? ResultCache::default_path()
                                                                : std::filesystem::path(cache_path));
    }
};

std::string write_artifact(const Globals &g, const std::string &name, const json &content)
{
    std::filesystem::create_directories(g.artifact_dir);
    std::string safe;
    for (char c : name)
        safe += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
    auto path = std::filesystem::path(g.artifact_dir) / ("zerosum-artifact-" + safe + ".json");
    std::ofstream(path) << content.dump(2) << "\n";
    return path.string();
}

/// Computes (or fetches) one record through the cache.
template <class F>
CacheEntry cached(ResultCache *cache, const std::string &key, F compute)
{
    if (cache)
        if (auto hit = cache->lookup_exact(key))
            return *hit;
    auto t0 = std::chrono::steady_clock::now();
    std::optional<InvariantRecord> rec;
    try {
        rec = compute();
    } catch (const SearchCapReached &ex) {
        if (cache)
            cache->store(key, ex.lower_bound(),
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        throw;
    }
    auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cache)
        return cache->store(key, *rec, wall);
    CacheEntry e;
    e.key = key;
    e.record = *rec;
    e.stamp.wall_time_s = wall;
    return e;
}

json entry_json(const CacheEntry &e) { return {{"record", e.record.to_json()}, {"stamp", e.stamp.to_json()}}; }

GSeq random_sequence(const AbelianGroup &G, std::int64_t length, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> pick(0, G.order() - 1);
    GSeq S(G);
    for (std::int64_t i = 0; i < length; ++i)
        S.add(G.element_at(pick(rng)));
    return S;
}

// ---------------------------------------------------------------- group info

Report cmd_group_info(const std::string &spec)
{
    auto G = parse_group(spec);
    Report r;
    auto &b = r.body;
    b["command"] = "group info";
    b["group"] = G.factors();
    b["order"] = G.order();
    b["exponent"] = G.exponent();
    b["rank"] = G.rank();
    b["invariant_factors"] = G.invariant_factors();
    b["is_pgroup"] = G.is_pgroup();
    json hyps = json::array();
    if (auto pg = G.pgroup_profile()) {
        b["pgroup"] = {{"p", pg->p}, {"q", pg->q}, {"D", pg->davenport}, {"d", pg->dim_d}};
        auto p = pg->p, d = pg->dim_d, D = pg->davenport, q = pg->q;
        auto c = (d + 1) / 2;
        auto add = [&](const std::string &st, const std::string &cond, std::int64_t need) {
            hyps.push_back({{"statement", st},
                            {"condition", cond},
                            {"holds", p >= need},
                            {"instantiation", std::to_string(p) + " >= " + std::to_string(need)}});
        };
        add("sets", "p >= d (some K in [1,p] with |K| >= d)", d);
        add("half", "p >= 3 ceil(d/2) (K = [1, ceil(d/2)])", 3 * c);
        add("2d", "p >= 2d - 1", 2 * d - 1);
        add("mainbound", "p >= 2d + 3 ceil(D/(2q)) - 3", 2 * d + 3 * arith::ceil_div(D, 2 * q) - 3);
        add("lbound2", "p >= 2d - 2 + ceil((2D - 2)/q)", 2 * d - 2 + arith::ceil_div(2 * D - 2, q));
        add("pcase", "p >= d", d);
    } else {
        json parts = json::array();
        for (const auto &part : detail::primary_decomposition(G))
            parts.push_back({{"p", part.p}, {"factors", part.group.factors()}});
        b["primary_parts"] = parts;
    }
    b["hypotheses"] = hyps;
    r.columns = {"field", "value"};
    for (const auto &key : {"group", "order", "exponent", "rank", "invariant_factors", "is_pgroup"})
        r.rows.push_back({key, cell(b[key])});
    if (b.contains("pgroup"))
        for (const auto &[k, v] : b["pgroup"].items())
            r.rows.push_back({k, cell(v)});
    for (const auto &h : hyps)
        r.rows.push_back({"hypothesis " + h["statement"].get<std::string>() + ": " + h["condition"].get<std::string>(),
                          std::string(h["holds"].get<bool>() ? "holds" : "fails") + " (" +
                              h["instantiation"].get<std::string>() + ")"});
    return r;
}

// ---------------------------------------------------------------- exact

json sandwich_checks(const InvariantRecord &rec, bool &violated)
{
    json checks = json::array();
    for (const auto &c : zerosum::sandwich_checks(rec)) {
        checks.push_back({{"check", c.check}, {"holds", c.holds}, {"instantiation", c.instantiation}});
        violated = violated || !c.holds;
    }
    return checks;
}

Report cap_report(const std::string &command, const SearchCapReached &ex)
{
    Report r;
    r.body = {{"command", command}, {"error", ex.what()}, {"record", ex.lower_bound().to_json()}};
    r.columns = {"quantity", "value", "status", "message"};
    r.rows.push_back({to_string(ex.lower_bound().quantity), std::to_string(ex.lower_bound().value),
                      to_string(ex.lower_bound().status), ex.what()});
    r.exit_code = resource_cap;
    return r;
}

Report cmd_exact_s(const Globals &g, const std::string &group, const std::string &lengths_arg, const std::string &K_arg)
{
    auto G = parse_group(group);
    if (K_arg.empty() == lengths_arg.empty())
        throw ParseError("exact s needs exactly one of --lengths and --K");
    auto lengths = !K_arg.empty() ? LengthSpec::scaled(parse_list(K_arg), G.exponent())
                                  : LengthSpec::absolute(parse_list(lengths_arg));
    auto cache = g.open_cache();
    auto opts = g.search();
    CacheEntry e;
    try {
        e = cached(cache.get(), cache_key(G, Quantity::s_K, lengths), [&] { return exact_s(G, lengths, opts); });
    } catch (const SearchCapReached &ex) {
        return cap_report("exact s", ex);
    }
    Report r;
    bool violated = false;
    r.body = entry_json(e);
    r.body["command"] = "exact s";
    r.body["checks"] = sandwich_checks(e.record, violated);
    r.columns = {"group", "lengths", "value", "status", "witness_length", "checks"};
    r.rows.push_back({G.spec(), lengths.str(), std::to_string(e.record.value), to_string(e.record.status),
                      e.record.witness ? std::to_string(e.record.witness->length()) : "",
                      violated ? "VIOLATED" : "ok"});
    if (violated) {
        r.body["artifact"] = write_artifact(g, "exact-s-" + G.spec() + "-" + lengths.str(), r.body);
        r.exit_code = inconsistency;
    }
    return r;
}

Report cmd_exact_davenport(const Globals &g, const std::string &group)
{
    auto G = parse_group(group);
    auto cache = g.open_cache();
    auto opts = g.search();
    CacheEntry e;
    try {
        e = cached(cache.get(), cache_key(G, Quantity::davenport), [&] { return exact_davenport(G, opts); });
    } catch (const SearchCapReached &ex) {
        return cap_report("exact davenport", ex);
    }
    Report r;
    r.body = entry_json(e);
    r.body["command"] = "exact davenport";
    bool violated = false;
    json checks = json::array();
    if (G.is_pgroup()) {
        auto olson = davenport_olson(G);
        bool holds = olson == e.record.value;
        checks.push_back({{"check", "olson"},
                          {"holds", holds},
                          {"instantiation", std::to_string(e.record.value) + " == " + std::to_string(olson)}});
        violated = !holds;
    }
    r.body["checks"] = checks;
    r.columns = {"group", "D", "status", "checks"};
    r.rows.push_back({G.spec(), std::to_string(e.record.value), to_string(e.record.status), violated ? "VIOLATED" : "ok"});
    if (violated) {
        r.body["artifact"] = write_artifact(g, "davenport-" + G.spec(), r.body);
        r.exit_code = inconsistency;
    }
    return r;
}

std::vector<CacheEntry> s_values(const Globals &g, ResultCache *cache, const AbelianGroup &G, std::int64_t kmax)
{
    std::vector<CacheEntry> out;
    auto opts = g.search();
    for (std::int64_t k = 1; k <= kmax; ++k) {
        auto ls = LengthSpec::absolute({k * G.exponent()});
        out.push_back(cached(cache, cache_key(G, Quantity::s_K, ls), [&] { return exact_s(G, ls, opts); }));
    }
    return out;
}

Report cmd_exact_ell(const Globals &g, const std::string &group, std::int64_t kmax)
{
    auto G = parse_group(group);
    G.require_pgroup("exact ell");
    auto cache = g.open_cache();
    std::vector<CacheEntry> svals;
    try {
        svals = s_values(g, cache.get(), G, kmax);
    } catch (const SearchCapReached &ex) {
        return cap_report("exact ell", ex);
    }
    std::vector<InvariantRecord> known;
    for (const auto &e : svals)
        known.push_back(e.record);
    auto rep = exact_threshold_ell(G, kmax, g.search(), known);
    Report r;
    json sv = json::array();
    for (const auto &e : svals)
        sv.push_back(entry_json(e));
    r.body = {{"command", "exact ell"}, {"kmax", kmax}, {"record", rep.ell.to_json()}, {"s_values", sv}};
    r.columns = {"k", "length", "s", "conjectured"};
    const auto &pg = *G.pgroup_profile();
    for (std::int64_t k = 1; k <= kmax; ++k)
        r.rows.push_back({std::to_string(k), std::to_string(k * pg.q),
                          std::to_string(svals[static_cast<std::size_t>(k - 1)].record.value),
                          std::to_string(k * pg.q + pg.davenport - 1)});
    r.rows.push_back({"ell", "", std::to_string(rep.ell.value), to_string(rep.ell.status)});
    return r;
}

// ---------------------------------------------------------------- bounds

struct BoundArgs {
    std::string group;
    std::int64_t k = 0;
    std::string K, factorization;
    std::optional<std::int64_t> a, b, s_a, s_b, q, s_an_qG, davenport;
};

Report cmd_bounds(const BoundArgs &args)
{
    auto G = parse_group(args.group);
    BoundParams bp;
    if (args.k > 0)
        bp.k = args.k;
    if (!args.K.empty())
        bp.K = LengthSpec::absolute(parse_list(args.K)).multipliers();
    if (!args.factorization.empty())
        bp.factorization = parse_list(args.factorization);
    bp.a = args.a;
    bp.b = args.b;
    bp.s_a = args.s_a;
    bp.s_b = args.s_b;
    bp.q = args.q;
    bp.s_an_qG = args.s_an_qG;
    bp.davenport = args.davenport;

    Report r;
    json rows = json::array();
    r.columns = {"theorem", "applicable", "kind", "target", "value", "conjectural", "first_failure"};
    for (auto id : all_theorems()) {
        json row;
        try {
            auto res = evaluate_bound(id, G, bp);
            row = res.to_json();
            row["reason"] = nullptr;
            if (auto f = res.first_failure())
                row["reason"] = f->condition + " (" + f->instantiation + ")";
        } catch (const DomainError &ex) {
            row = {{"theorem", to_string(id)}, {"applicable", false}, {"hypotheses", json::array()},
                   {"value", nullptr},         {"kind", nullptr},     {"target", nullptr},
                   {"target_length", nullptr}, {"conjectural", false}, {"strict", false},
                   {"trace", json::array()},   {"reason", ex.what()}};
        }
        r.rows.push_back({to_string(id), row["applicable"].get<bool>() ? "yes" : "no", cell(row["kind"]),
                          cell(row["target"]), cell(row["value"]), row["conjectural"].get<bool>() ? "yes" : "no",
                          cell(row["reason"])});
        rows.push_back(row);
    }
    r.body = {{"command", "bounds"}, {"group", G.factors()}, {"k", bp.k ? json(*bp.k) : json(nullptr)}, {"results", rows}};
    r.body["best"] = nullptr;
    if (bp.k) {
        auto best = best_upper(G, *bp.k * G.exponent());
        r.body["best"] = best.to_json();
        r.rows.push_back({"best_upper", best.applicable ? "yes" : "no", "upper", best.target,
                          best.value ? std::to_string(*best.value) : "", "no",
                          best.applicable ? to_string(best.theorem) : ""});
    }
    return r;
}

// ---------------------------------------------------------------- witness

Report cmd_witness(const Globals &g, const std::string &group, std::int64_t k, const std::string &seq_file,
                   const std::string &lengths_arg, const std::string &out)
{
    Report r;
    GSeq W;
    std::vector<std::int64_t> lengths;
    std::string origin;
    if (!seq_file.empty()) {
        std::optional<AbelianGroup> expect;
        if (!group.empty())
            expect = parse_group(group);
        W = read_sequence_file(seq_file, expect ? &*expect : nullptr);
        if (lengths_arg.empty())
            throw ParseError("--lengths is required with --seq");
        lengths = LengthSpec::absolute(parse_list(lengths_arg)).lengths();
        origin = "file";
    } else {
        if (group.empty() || k < 1)
            throw ParseError("witness needs --group and --k (or --seq and --lengths)");
        auto G = parse_group(group);
        W = extremal_witness_lower(G, k, g.engine());
        lengths = {k * G.require_pgroup("witness").q};
        origin = "extremal construction 0^{kq-1} prod e_j^{n_j-1}";
    }
    auto zs = zero_sum_lengths(W, g.engine());
    std::vector<std::int64_t> hit;
    for (auto t : lengths)
        if (std::binary_search(zs.begin(), zs.end(), t))
            hit.push_back(t);
    bool avoids = hit.empty();
    r.body = {{"command", "witness"},
              {"origin", origin},
              {"sequence", to_json(W)},
              {"length", W.length()},
              {"lengths", lengths},
              {"avoids", avoids},
              {"realized_lengths", hit},
              {"implied_lower_bound", avoids ? json(W.length() + 1) : json(nullptr)}};
    if (!out.empty())
        write_sequence_file(out, W);
    r.columns = {"group", "length", "avoids", "implied_lower_bound"};
    r.rows.push_back({W.group().spec(), std::to_string(W.length()), avoids ? "yes" : "no",
                      avoids ? std::to_string(W.length() + 1) : ""});
    return r;
}

// ---------------------------------------------------------------- poly check

Report cmd_poly_check(const Globals &g, const std::string &group, const std::string &K_arg, const std::string &seq_file,
                      std::optional<std::uint64_t> seed, std::int64_t length, bool exploratory, std::size_t max_listed)
{
    auto K = parse_list(K_arg);
    GSeq S;
    if (!seq_file.empty()) {
        std::optional<AbelianGroup> expect;
        if (!group.empty())
            expect = parse_group(group);
        S = read_sequence_file(seq_file, expect ? &*expect : nullptr);
    } else {
        if (!seed)
            throw ParseError("poly check needs --seq or --seed");
        if (group.empty())
            throw ParseError("poly check with --seed needs --group");
        auto G = parse_group(group);
        auto len = length > 0 ? length : WitnessInstance::theorem_length(G, K);
        S = random_sequence(G, len, *seed);
    }
    auto w = WitnessInstance::make(S, K, exploratory);
    auto rep = vanishing_report(w, max_listed, g.engine());
    Report r;
    json checks = json::array();
    bool violated = false;
    auto add = [&](const std::string &what, bool holds) {
        checks.push_back({{"check", what}, {"holds", holds}});
        violated = violated || !holds;
    };
    add("every non-vanishing point is an engine-verified zero-sum subsequence", rep.all_hits_verified);
    if (!exploratory) {
        add("P(0) != 0 mod p", rep.origin_value != 0);
        add("full coefficient == 0 mod p", rep.full_coefficient == 0);
        add("some nonzero point does not vanish", rep.hit_count > 0);
        add("every hit has length in Kq", rep.all_hits_in_Kq);
    }
    r.body = {{"command", "poly check"}, {"sequence", to_json(S)}, {"report", rep.to_json()}, {"checks", checks}};
    if (seed)
        r.body["seed"] = *seed;
    r.columns = {"m", "p", "q", "K", "theorem_mode", "P(0)", "full_coefficient", "hits", "checks"};
    r.rows.push_back({std::to_string(rep.m), std::to_string(rep.p), std::to_string(rep.q), json(rep.K).dump(),
                      rep.theorem_mode ? "yes" : "no", std::to_string(rep.origin_value),
                      std::to_string(rep.full_coefficient), std::to_string(rep.hit_count),
                      violated ? "VIOLATED" : "ok"});
    if (violated) {
        r.body["artifact"] = write_artifact(g, "poly-" + S.group().spec() + "-m" + std::to_string(rep.m), r.body);
        r.exit_code = inconsistency;
    }
    return r;
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
    std::string strategy, group, seq_file, K;
    std::optional<std::uint64_t> seed;
    std::int64_t length = 0, k = 0;
    std::optional<std::int64_t> a, b, q, s_a, s_b, s_an_qG;
};

std::int64_t hypothesis_length(Strategy st, const AbelianGroup &G, const ExtractArgs &x, const std::vector<std::int64_t> &K)
{
    auto pg = [&]() -> const PGroupProfile & { return G.require_pgroup(to_string(st)); };
    switch (st) {
    case Strategy::pq_lift:
        return pg().p * pg().q + pg().davenport - 1;
    case Strategy::two_piece_2d:
        return x.k * pg().q + 2 * pg().davenport - 2;
    case Strategy::half_lemma: {
        auto maxK = *std::max_element(K.begin(), K.end());
        return (2 * maxK + 1 - static_cast<std::int64_t>(K.size())) * pg().q + pg().davenport - 1;
    }
    case Strategy::main_theorem:
        return (x.k + 2 * pg().dim_d - 2) * pg().q + 3 * pg().davenport - 3;
    case Strategy::subadditive:
        if (x.s_a && x.s_b && x.b)
            return std::max(*x.s_a + *x.b, *x.s_b);
        break;
    case Strategy::filtration:
        break;
    }
    throw ParseError("--length is required for strategy " + to_string(st));
}

Report cmd_extract(const Globals &g, const ExtractArgs &x)
{
    auto st = strategy_from_string(x.strategy);
    std::vector<std::int64_t> K;
    if (!x.K.empty())
        K = parse_list(x.K);
    else if (x.k > 0)
        K = {x.k};
    GSeq S;
    if (!x.seq_file.empty()) {
        std::optional<AbelianGroup> expect;
        if (!x.group.empty())
            expect = parse_group(x.group);
        S = read_sequence_file(x.seq_file, expect ? &*expect : nullptr);
    } else {
        if (!x.seed)
            throw ParseError("extract needs --seq or --seed");
        if (x.group.empty())
            throw ParseError("extract with --seed needs --group");
        auto G = parse_group(x.group);
        auto len = x.length > 0 ? x.length : hypothesis_length(st, G, x, K);
        S = random_sequence(G, len, *x.seed);
    }
    auto need = [](const std::optional<std::int64_t> &v, const char *name) {
        if (!v)
            throw ParseError(std::string("--") + name + " is required for this strategy");
        return *v;
    };
    auto needk = [&] {
        if (x.k < 1)
            throw ParseError("--k is required for this strategy");
        return x.k;
    };
    auto cfg = g.engine();
    Report r;
    r.columns = {"strategy", "input_length", "outcome", "result_length", "verified"};
    r.body = {{"command", "extract"}, {"input", to_json(S)}};
    if (x.seed)
        r.body["seed"] = *x.seed;
    auto fail = [&](const std::string &outcome, const ExtractionPlan &plan, const std::string &msg) {
        r.body["outcome"] = outcome;
        r.body["message"] = msg;
        r.body["plan"] = plan.to_json();
        r.rows.push_back({x.strategy, std::to_string(S.length()), outcome, "", "no"});
    };
    try {
        ExtractionPlan plan;
        switch (st) {
        case Strategy::subadditive:
            plan = split_subadditive(S, need(x.a, "a"), need(x.b, "b"), x.s_a, x.s_b, cfg);
            break;
        case Strategy::pq_lift:
            plan = extract_pq_lift(S, cfg);
            break;
        case Strategy::two_piece_2d:
        case Strategy::main_theorem:
            plan = extract_proof_guided(S, needk(), st, {}, cfg);
            break;
        case Strategy::half_lemma:
            if (K.empty())
                throw ParseError("--K or --k is required for half_lemma");
            plan = extract_half_lemma(S, K, cfg);
            break;
        case Strategy::filtration:
            plan = extract_filtration(S, need(x.a, "a"), need(x.b, "b"), need(x.q, "q"), x.s_an_qG, cfg);
            break;
        }
        bool verified = verify_extraction(plan, S);
        r.body["outcome"] = verified ? "extracted" : "unverified";
        r.body["plan"] = plan.to_json();
        r.body["verified"] = verified;
        r.rows.push_back({x.strategy, std::to_string(S.length()), verified ? "extracted" : "unverified",
                          std::to_string(plan.result.length()), verified ? "yes" : "no"});
        if (!verified) {
            r.body["artifact"] = write_artifact(g, "extract-" + x.strategy + "-" + S.group().spec(), r.body);
            r.exit_code = inconsistency;
        }
    } catch (const PremiseViolation &ex) {
        fail("premise_violation", ex.plan(), ex.what());
        r.exit_code = usage;
    } catch (const ExtractionFailure &ex) {
        bool genuine = is_counterexample(S, ex.plan().target_lengths, cfg);
        fail(genuine ? "counterexample" : "procedure_failure", ex.plan(), ex.what());
        r.body["artifact"] = write_artifact(g, "extract-" + x.strategy + "-" + S.group().spec(), r.body);
        r.exit_code = inconsistency;
    }
    return r;
}

// ---------------------------------------------------------------- verify-conjecture

Report cmd_verify_conjecture(const Globals &g, const std::string &group, std::int64_t kmax)
{
    auto G = parse_group(group);
    const auto &pg = G.require_pgroup("verify-conjecture");
    auto cache = g.open_cache();
    std::vector<CacheEntry> svals;
    try {
        svals = s_values(g, cache.get(), G, kmax);
    } catch (const SearchCapReached &ex) {
        return cap_report("verify-conjecture", ex);
    }
    Report r;
    r.columns = {"k", "length", "s", "kq+D-1", "expected", "ok"};
    json rows = json::array();
    bool violated = false;
    for (std::int64_t k = 1; k <= kmax; ++k) {
        const auto &e = svals[static_cast<std::size_t>(k - 1)];
        auto len = k * pg.q;
        auto conj = len + pg.davenport - 1;
        std::string expected = len >= pg.davenport ? "equality" : "strict";
        bool holds = expected == "equality" ? e.record.value == conj : e.record.value > conj;
        violated = violated || !holds;
        rows.push_back({{"k", k},
                        {"length", len},
                        {"s", e.record.value},
                        {"conjectured", conj},
                        {"expected", expected},
                        {"holds", holds},
                        {"stamp", e.stamp.to_json()}});
        r.rows.push_back({std::to_string(k), std::to_string(len), std::to_string(e.record.value), std::to_string(conj),
                          expected, holds ? "yes" : "NO"});
    }
    r.body = {{"command", "verify-conjecture"}, {"group", G.factors()}, {"kmax", kmax}, {"D", pg.davenport},
              {"rows", rows}, {"all_hold", !violated}};
    if (violated) {
        json art = r.body;
        json recs = json::array();
        for (const auto &e : svals)
            recs.push_back(e.record.to_json());
        art["records"] = recs;
        r.body["artifact"] = write_artifact(g, "conjecture-" + G.spec(), art);
        r.exit_code = inconsistency;
    }
    return r;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"zerosum: exact values, bounds and certificates for zero-sum invariants of finite abelian groups"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv", "md"}));
    app.add_option("--cache", g.cache_path, "Cache file (default $ZEROSUM_CACHE or ~/.zerosum-cache.ndjson)");
    app.add_flag("--no-cache", g.no_cache, "Do not read or write the cache");
    app.add_option("--max-cells", g.max_cells, "Engine DP cell cap")->envname("ZEROSUM_MAX_CELLS");
    app.add_option("--artifact-dir", g.artifact_dir, "Where inconsistency artifacts are written");
    app.add_option("--cap", g.cap, "Search cap on avoider length (0 = automatic)");
    app.add_option("--threads", g.threads, "Search threads")->check(CLI::PositiveNumber);

    auto *group = app.add_subcommand("group", "Group structure");
    group->require_subcommand(1);
    auto *info = group->add_subcommand("info", "Order, exponent, p-group constants, hypothesis checks");
    std::string info_spec;
    info->add_option("spec", info_spec, "Cyclic factors, e.g. 3,3")->required();

    auto *exact = app.add_subcommand("exact", "Exact values by exhaustive search");
    exact->require_subcommand(1);
    std::string ex_group, ex_lengths, ex_K;
    std::int64_t ex_kmax = 0;
    auto *ex_s = exact->add_subcommand("s", "s_K(G)");
    ex_s->add_option("--group", ex_group)->required();
    auto *opt_len = ex_s->add_option("--lengths", ex_lengths, "Admissible lengths, e.g. 3,6");
    auto *opt_K = ex_s->add_option("--K", ex_K, "Admissible lengths as multiples of exp(G)");
    opt_len->excludes(opt_K);
    auto *ex_d = exact->add_subcommand("davenport", "D(G)");
    ex_d->add_option("--group", ex_group)->required();
    auto *ex_ell = exact->add_subcommand("ell", "threshold ell(G) from s_{kq} for k <= kmax");
    ex_ell->add_option("--group", ex_group)->required();
    ex_ell->add_option("--kmax", ex_kmax)->required()->check(CLI::PositiveNumber);

    BoundArgs ba;
    auto *bounds = app.add_subcommand("bounds", "Evaluate every closed-form statement");
    bounds->add_option("--group", ba.group)->required();
    bounds->add_option("--k", ba.k);
    bounds->add_option("--K", ba.K);
    bounds->add_option("--a", ba.a);
    bounds->add_option("--b", ba.b);
    bounds->add_option("--s-a", ba.s_a);
    bounds->add_option("--s-b", ba.s_b);
    bounds->add_option("--q", ba.q);
    bounds->add_option("--s-an-qG", ba.s_an_qG);
    bounds->add_option("--factorization", ba.factorization);
    bounds->add_option("--davenport", ba.davenport);

    std::string w_group, w_seq, w_lengths, w_out;
    std::int64_t w_k = 0;
    auto *witness = app.add_subcommand("witness", "Lower-bound witnesses");
    witness->add_option("--group", w_group);
    witness->add_option("--k", w_k);
    witness->add_option("--seq", w_seq, "Check a sequence file instead");
    witness->add_option("--lengths", w_lengths);
    witness->add_option("--out", w_out, "Write the witness as a sequence file");

    auto *poly = app.add_subcommand("poly", "Polynomial-method certificates");
    poly->require_subcommand(1);
    std::string p_group, p_K, p_seq;
    std::optional<std::uint64_t> p_seed;
    std::int64_t p_length = 0;
    bool p_explore = false;
    std::size_t p_max = 1000;
    auto *pcheck = poly->add_subcommand("check", "Full coefficient and non-vanishing points");
    pcheck->add_option("--group", p_group);
    pcheck->add_option("--K", p_K)->required();
    pcheck->add_option("--seq", p_seq);
    pcheck->add_option("--seed", p_seed);
    pcheck->add_option("--length", p_length);
    pcheck->add_flag("--exploratory", p_explore);
    pcheck->add_option("--max-listed", p_max);

    ExtractArgs xa;
    auto *extract = app.add_subcommand("extract", "Constructive zero-sum extraction");
    extract->add_option("--strategy", xa.strategy)
        ->required()
        ->check(CLI::IsMember({"subadditive", "pq_lift", "two_piece_2d", "half_lemma", "main_theorem", "filtration"}));
    extract->add_option("--group", xa.group);
    extract->add_option("--seq", xa.seq_file);
    extract->add_option("--seed", xa.seed);
    extract->add_option("--length", xa.length);
    extract->add_option("--k", xa.k);
    extract->add_option("--K", xa.K);
    extract->add_option("--a", xa.a);
    extract->add_option("--b", xa.b);
    extract->add_option("--q", xa.q);
    extract->add_option("--s-a", xa.s_a);
    extract->add_option("--s-b", xa.s_b);
    extract->add_option("--s-an-qG", xa.s_an_qG);

    std::string vc_group;
    std::int64_t vc_kmax = 0;
    auto *verify = app.add_subcommand("verify-conjecture", "Check s_{kq}(G) = kq + D(G) - 1 for k <= kmax");
    verify->add_option("--group", vc_group)->required();
    verify->add_option("--kmax", vc_kmax)->required()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return usage;
    }

    Report report;
    try {
        if (info->parsed())
            report = cmd_group_info(info_spec);
        else if (ex_s->parsed())
            report = cmd_exact_s(g, ex_group, ex_lengths, ex_K);
        else if (ex_d->parsed())
            report = cmd_exact_davenport(g, ex_group);
        else if (ex_ell->parsed())
            report = cmd_exact_ell(g, ex_group, ex_kmax);
        else if (bounds->parsed())
            report = cmd_bounds(ba);
        else if (witness->parsed())
            report = cmd_witness(g, w_group, w_k, w_seq, w_lengths, w_out);
        else if (pcheck->parsed())
            report = cmd_poly_check(g, p_group, p_K, p_seq, p_seed, p_length, p_explore, p_max);
        else if (extract->parsed())
            report = cmd_extract(g, xa);
        else if (verify->parsed())
            report = cmd_verify_conjecture(g, vc_group, vc_kmax);
    } catch (const ResourceCapExceeded &e) {
        std::cerr << "zerosum: resource cap: " << e.what() << "\n";
        return resource_cap;
    } catch (const ParseError &e) {
        std::cerr << "zerosum: " << e.what() << "\n";
        return usage;
    } catch (const DomainError &e) {
        std::cerr << "zerosum: " << e.what() << "\n";
        return usage;
    } catch (const Error &e) {
        std::cerr << "zerosum: " << e.what() << "\n";
        return usage;
    }
    render(report, g.format, std::cout);
    return report.exit_code;
}
