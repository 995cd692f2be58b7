#pragma once

#include "records.hpp"

#include <json.hpp>

#include <sys/file.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace zerosum {

inline constexpr const char *library_version = "1.0.0";

struct CacheStamp {
    std::string version = library_version;
    double wall_time_s = 0;
    std::int64_t written_at = 0; ///< seconds since the epoch

    nlohmann::json to_json() const
    {
        return {{"version", version}, {"wall_time_s", wall_time_s}, {"written_at", written_at}};
    }
    static CacheStamp from_json(const nlohmann::json &j)
    {
        CacheStamp s;
        s.version = j.at("version").get<std::string>();
        s.wall_time_s = j.at("wall_time_s").get<double>();
        s.written_at = j.at("written_at").get<std::int64_t>();
        return s;
    }
    bool operator==(const CacheStamp &) const = default;
};

struct CacheEntry {
    std::string key;
    InvariantRecord record;
    CacheStamp stamp;

    nlohmann::json to_json() const { return {{"key", key}, {"record", record.to_json()}, {"stamp", stamp.to_json()}}; }
};

/// Key for one computed quantity: group as written, quantity, lengths.
inline std::string cache_key(const AbelianGroup &G, Quantity q, const std::optional<LengthSpec> &lengths = {},
                             const std::string &extra = {})
{
    std::string k = G.spec() + "|" + to_string(q);
    if (lengths)
        k += "|" + lengths->str();
    if (!extra.empty())
        k += "|" + extra;
    return k;
}

/// Append-only newline-delimited JSON store. Exact entries are never replaced;
/// a bound entry is replaced only by an exact one or a tighter bound of the
/// same direction. Malformed lines are skipped.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path path) : path_(std::move(path)) { load(); }

    static std::filesystem::path default_path()
    {
        if (const char *env = std::getenv("ZEROSUM_CACHE"); env && *env)
            return env;
        if (const char *home = std::getenv("HOME"); home && *home)
            return std::filesystem::path(home) / ".zerosum-cache.ndjson";
        return ".zerosum-cache.ndjson";
    }

    const std::filesystem::path &path() const { return path_; }

    std::optional<CacheEntry> lookup(const std::string &key) const
    {
        std::lock_guard lk(mu_);
        auto it = entries_.find(key);
        if (it == entries_.end())
            return std::nullopt;
        return it->second;
    }

    /// Exact entry for `key`, if any.
    std::optional<CacheEntry> lookup_exact(const std::string &key) const
    {
        auto e = lookup(key);
        if (e && e->record.status == Status::exact)
            return e;
        return std::nullopt;
    }

    /// Returns the entry now held for `key` (the existing one when the new
    /// record does not supersede it).
    CacheEntry store(const std::string &key, const InvariantRecord &rec, double wall_time_s)
    {
        std::lock_guard lk(mu_);
        if (auto it = entries_.find(key); it != entries_.end() && !supersedes(rec, it->second.record))
            return it->second;
        CacheEntry e;
        e.key = key;
        e.record = rec;
        e.stamp.wall_time_s = wall_time_s;
        e.stamp.written_at =
            std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
                .count();
        append(e);
        entries_[key] = e;
        return e;
    }

    std::size_t size() const
    {
        std::lock_guard lk(mu_);
        return entries_.size();
    }

    static bool supersedes(const InvariantRecord &next, const InvariantRecord &prev)
    {
        if (prev.status == Status::exact)
            return false;
        if (next.status == Status::exact)
            return true;
        if (next.status != prev.status)
            return false;
        return next.status == Status::upper_bound ? next.value < prev.value : next.value > prev.value;
    }

private:
    void load()
    {
        std::ifstream in(path_);
        if (!in)
            return;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            try {
                auto j = nlohmann::json::parse(line);
                CacheEntry e{j.at("key").get<std::string>(), InvariantRecord::from_json(j.at("record")),
                             CacheStamp::from_json(j.at("stamp"))};
                auto it = entries_.find(e.key);
                if (it == entries_.end() || supersedes(e.record, it->second.record))
                    entries_[e.key] = std::move(e);
            } catch (const std::exception &) {
                continue;
            }
        }
    }

    void append(const CacheEntry &e)
    {
        if (path_.has_parent_path())
            std::filesystem::create_directories(path_.parent_path());
        std::FILE *f = std::fopen(path_.c_str(), "a");
        if (!f)
            throw Error("cannot open cache file " + path_.string());
        ::flock(fileno(f), LOCK_EX);
        auto line = e.to_json().dump() + "\n";
        std::fwrite(line.data(), 1, line.size(), f);
        std::fflush(f);
        ::flock(fileno(f), LOCK_UN);
        std::fclose(f);
    }

    std::filesystem::path path_;
    std::map<std::string, CacheEntry> entries_;
    mutable std::mutex mu_;
};

} // namespace zerosum
