#include "hexwalk/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>

#include "hexwalk/errors.hpp"

namespace hexwalk {

namespace {

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

ResultCache::ResultCache(std::string dir) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ResourceError("cannot create cache directory '" + dir + "': " + ec.message());
    file_ = (std::filesystem::path(dir) / "results.jsonl").string();
    std::ifstream in(file_);
    std::string line;
    while (std::getline(in, line)) {
        // Stale or damaged lines are skipped, never trusted.
        try {
            const auto j = nlohmann::json::parse(line);
            if (j.at("version").get<std::string>() != kCacheVersion) continue;
            entries_[j.at("key").get<std::string>()] = EnumResult::from_json(j.at("result"));
        } catch (const std::exception&) {
            continue;
        }
    }
}

std::string ResultCache::key(const EnumSpec& spec) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(std::string(kCacheVersion) + "|" + spec.canonical_json().dump())));
    return buf;
}

std::optional<EnumResult> ResultCache::get(const EnumSpec& spec) {
    const std::string k = key(spec);
    std::shared_lock lock(mutex_);
    auto it = entries_.find(k);
    if (it == entries_.end()) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    return it->second;
}

void ResultCache::put(const EnumSpec& spec, const EnumResult& result) {
    const std::string k = key(spec);
    std::unique_lock lock(mutex_);
    entries_[k] = result;
    if (file_.empty()) return;
    std::ofstream out(file_, std::ios::app);
    if (!out) throw ResourceError("cannot append to cache file '" + file_ + "'");
    nlohmann::json line{{"version", kCacheVersion}, {"key", k}, {"spec", spec.canonical_json()}, {"result", result.to_json()}};
    out << line.dump() << '\n';
}

std::size_t ResultCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

void ResultCache::clear() {
    std::unique_lock lock(mutex_);
    entries_.clear();
    if (!file_.empty()) std::filesystem::remove(file_);
}

EnumResult run_enumeration(const EnumSpec& spec, int workers, ResultCache* cache) {
    if (cache)
        if (auto hit = cache->get(spec)) return std::move(*hit);
    EnumResult r = parallel_enumerate(spec, workers);
    if (cache) cache->put(spec, r);
    return r;
}

} // namespace hexwalk
