#pragma once

// Enumeration results keyed by a stable hash of the canonical EnumSpec and a
// code-version tag. Entries live in memory and, when a directory is given, in
// a JSON-lines file that is replayed on construction.

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

#include "hexwalk/enumerator.hpp"

namespace hexwalk {

inline constexpr const char* kCacheVersion = "hexwalk-enum-1";

class ResultCache {
public:
    /// Memory-only when `dir` is empty.
    explicit ResultCache(std::string dir = {});

    static std::string key(const EnumSpec& spec);

    std::optional<EnumResult> get(const EnumSpec& spec);
    void put(const EnumSpec& spec, const EnumResult& result);

    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }
    std::size_t size() const;
    const std::string& file() const { return file_; }

    /// Drops every entry, including the on-disk file.
    void clear();

private:
    std::string file_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, EnumResult> entries_;
    std::atomic<std::uint64_t> hits_{0};
    std::atomic<std::uint64_t> misses_{0};
};

/// Cache lookup, else parallel_enumerate and store.
EnumResult run_enumeration(const EnumSpec& spec, int workers, ResultCache* cache);

} // namespace hexwalk
