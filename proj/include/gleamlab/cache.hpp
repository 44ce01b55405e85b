#pragma once

// Append-only invariant cache. One record per line:
//
//   <engine version> \t <fnv1a-64 of key, hex> \t <key> \t <canonical value text>
//
// Records with another engine version are ignored on load, so bumping the
// version invalidates the whole file without rewriting it.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gleamlab/error.hpp"
#include "gleamlab/invariant.hpp"
#include "gleamlab/io.hpp"

namespace gleamlab {

inline constexpr const char* kEngineVersion = "gleamlab-engine-1";

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct CacheRecord {
  std::string key;
  std::string value;
  std::string version;
};

class InvariantCache : public JonesStore {
 public:
  explicit InvariantCache(std::string path, std::string version = kEngineVersion)
      : path_(std::move(path)), version_(std::move(version)) {
    load();
  }

  const std::string& path() const { return path_; }
  std::size_t size() const {
    std::lock_guard lock(mu_);
    return index_.size();
  }
  std::size_t hits() const {
    std::lock_guard lock(mu_);
    return hits_;
  }
  std::size_t misses() const {
    std::lock_guard lock(mu_);
    return misses_;
  }

  std::optional<std::string> lookup_text(const std::string& key) {
    std::lock_guard lock(mu_);
    auto it = index_.find(key);
    if (it == index_.end()) {
      ++misses_;
      return std::nullopt;
    }
    ++hits_;
    return it->second;
  }

  void store_text(const std::string& key, const std::string& value) {
    std::lock_guard lock(mu_);
    if (!index_.emplace(key, value).second) return;
    order_.push_back(key);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) throw EvalError("cannot append to cache file " + path_);
    out << version_ << '\t' << hex64(fnv1a64(key)) << '\t' << key << '\t' << value << '\n';
  }

  std::optional<LaurentPoly> lookup(const std::string& key) override {
    auto text = lookup_text(key);
    if (!text) return std::nullopt;
    return parse_laurent(*text, Var::t);
  }

  void store(const std::string& key, const LaurentPoly& value) override { store_text(key, value.to_string()); }

  std::vector<CacheRecord> records() const {
    std::lock_guard lock(mu_);
    std::vector<CacheRecord> out;
    for (const auto& k : order_) out.push_back({k, index_.at(k), version_});
    return out;
  }

  struct VerifyResult {
    std::size_t checked = 0;
    std::vector<std::string> mismatches;
  };

  /// Recomputes every `stride`-th Jones record and compares texts.
  VerifyResult verify(std::size_t stride, const BracketOptions& opt = {}) const {
    VerifyResult r;
    const auto recs = records();
    if (stride == 0) stride = 1;
    for (std::size_t i = 0; i < recs.size(); i += stride) {
      const auto& rec = recs[i];
      if (rec.key.rfind("jones|", 0) != 0) continue;
      KnotDiagram d = diagram_from_key(rec.key.substr(6));
      ++r.checked;
      const std::string fresh = jones(d, opt).to_string();
      if (fresh != rec.value) r.mismatches.push_back(rec.key + ": cached " + rec.value + ", recomputed " + fresh);
    }
    return r;
  }

 private:
  void load() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream fields(line);
      std::string version, hash, key, value;
      if (!std::getline(fields, version, '\t') || !std::getline(fields, hash, '\t') ||
          !std::getline(fields, key, '\t') || !std::getline(fields, value)) {
        continue;
      }
      if (version != version_ || hash != hex64(fnv1a64(key))) continue;
      if (index_.emplace(key, value).second) order_.push_back(key);
    }
  }

  std::string path_;
  std::string version_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> index_;
  std::vector<std::string> order_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace gleamlab
